#include "dgale/basis.hpp"

#include <cmath>
#include <numbers>

namespace dgale {

Quadrature gauss_legendre_01(int n) {
  if (n < 1) throw Error("gauss_legendre_01: need at least one point");
  Quadrature q;
  q.exactness = 2 * n - 1;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      const double dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // recompute derivative at the converged node for the weight
        double q0 = 1.0, q1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double q2 = q1;
          q1 = q0;
          q0 = ((2.0 * j - 1.0) * z * q1 - (j - 1.0) * q2) / j;
        }
        const double d = n * (z * q0 - q1) / (z * z - 1.0);
        w[i] = 2.0 / ((1.0 - z * z) * d * d);
        break;
      }
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    x[i] = z;
  }
  for (int i = n - 1; i >= 0; --i) {
    q.points.emplace_back(0.5 * (1.0 - x[i]), 0.0);
    q.weights.push_back(0.5 * w[i]);
  }
  return q;
}

Quadrature volume_rule(int dim, int degree) {
  if (degree < 0 || degree > 2) throw ConfigError("polynomial degree must be 0, 1 or 2");
  if (dim == 1) return gauss_legendre_01(degree + 2);
  // Collapsed (Duffy) tensor rule: r = a(1-b), s = b, Jacobian (1-b).
  const int n = degree + 2;
  const Quadrature g = gauss_legendre_01(n);
  Quadrature q;
  q.exactness = 2 * n - 2;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = g.points[i][0];
      const double b = g.points[j][0];
      q.points.emplace_back(a * (1.0 - b), b);
      q.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - b));
      total += q.weights.back();
    }
  }
  for (double& w : q.weights) w /= total;
  return q;
}

Quadrature face_rule(int dim, int degree) {
  if (dim == 1) {
    Quadrature q;
    q.points = {Vec2::Zero()};
    q.weights = {1.0};
    q.exactness = 1000;
    return q;
  }
  return gauss_legendre_01(degree + 2);
}

namespace {

int dof_count(int dim, int degree) {
  return dim == 1 ? degree + 1 : (degree + 1) * (degree + 2) / 2;
}

}  // namespace

Basis::Basis(int dim, int degree) : dim_(dim), degree_(degree), n_dof_(dof_count(dim, degree)) {
  if (dim != 1 && dim != 2) throw ConfigError("basis dimension must be 1 or 2");
  if (degree < 0 || degree > 2) throw ConfigError("polynomial degree must be 0, 1 or 2");
  const Quadrature q = volume_rule(dim, 2);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n_dof_, n_dof_);
  for (int i = 0; i < q.size(); ++i) {
    const Eigen::VectorXd m = monomials(q.points[i]);
    gram += q.weights[i] * m * m.transpose();
  }
  const Eigen::MatrixXd L = gram.llt().matrixL();
  to_basis_ = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n_dof_, n_dof_));
}

Eigen::VectorXd Basis::monomials(const Vec2& ref) const {
  Eigen::VectorXd m(n_dof_);
  if (dim_ == 1) {
    const double r = ref[0] - 0.5;
    double p = 1.0;
    for (int i = 0; i < n_dof_; ++i, p *= r) m[i] = p;
    return m;
  }
  const double r = ref[0] - 1.0 / 3.0;
  const double s = ref[1] - 1.0 / 3.0;
  m[0] = 1.0;
  if (degree_ >= 1) {
    m[1] = r;
    m[2] = s;
  }
  if (degree_ >= 2) {
    m[3] = r * r;
    m[4] = r * s;
    m[5] = s * s;
  }
  return m;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> Basis::monomial_gradients(const Vec2& ref) const {
  Eigen::Matrix<double, Eigen::Dynamic, 2> g = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(n_dof_, 2);
  if (dim_ == 1) {
    const double r = ref[0] - 0.5;
    for (int i = 1; i < n_dof_; ++i) g(i, 0) = i * std::pow(r, i - 1);
    return g;
  }
  const double r = ref[0] - 1.0 / 3.0;
  const double s = ref[1] - 1.0 / 3.0;
  if (degree_ >= 1) {
    g(1, 0) = 1.0;
    g(2, 1) = 1.0;
  }
  if (degree_ >= 2) {
    g(3, 0) = 2.0 * r;
    g(4, 0) = s;
    g(4, 1) = r;
    g(5, 1) = 2.0 * s;
  }
  return g;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> Basis::monomial_hessians(const Vec2& ref) const {
  Eigen::Matrix<double, Eigen::Dynamic, 3> h = Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(n_dof_, 3);
  if (dim_ == 1) {
    if (degree_ >= 2) h(2, 0) = 2.0;
    (void)ref;
    return h;
  }
  if (degree_ >= 2) {
    h(3, 0) = 2.0;
    h(4, 1) = 1.0;
    h(5, 2) = 2.0;
  }
  return h;
}

Eigen::VectorXd Basis::values(const Vec2& ref) const { return to_basis_ * monomials(ref); }

Eigen::Matrix<double, Eigen::Dynamic, 2> Basis::ref_gradients(const Vec2& ref) const {
  return to_basis_ * monomial_gradients(ref);
}

Eigen::Matrix<double, Eigen::Dynamic, 3> Basis::ref_hessians(const Vec2& ref) const {
  return to_basis_ * monomial_hessians(ref);
}

Discretization::Discretization(int dim, int degree)
    : basis_(dim, degree), volume_(volume_rule(dim, degree)), face_(face_rule(dim, degree)) {
  const int nq = volume_.size();
  vol_values_.resize(nq, basis_.n_dof());
  for (int q = 0; q < nq; ++q) {
    vol_values_.row(q) = basis_.values(volume_.points[q]).transpose();
    vol_grads_.push_back(basis_.ref_gradients(volume_.points[q]));
    vol_bary_.push_back(reference_barycentric(dim, volume_.points[q]));
  }
  for (int l = 0; l < n_local_faces(); ++l) {
    for (int rev = 0; rev < 2; ++rev) {
      Eigen::MatrixXd& tab = face_values_[l][rev];
      tab.resize(face_.size(), basis_.n_dof());
      for (int q = 0; q < face_.size(); ++q) {
        const double s = face_.points[q][0];
        tab.row(q) = basis_.values(reference_edge_point(dim, l, rev ? 1.0 - s : s)).transpose();
      }
    }
  }
  bary_values_ = basis_.values(dim == 1 ? Vec2(0.5, 0.0) : Vec2(1.0 / 3.0, 1.0 / 3.0));
}

Eigen::MatrixXd mass_matrix(const ElementGeometry& geometry, const Basis& basis,
                            const Quadrature& quadrature) {
  if (!(geometry.area > 0.0)) throw MeshError("mass matrix of a non-positive element");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(basis.n_dof(), basis.n_dof());
  for (int q = 0; q < quadrature.size(); ++q) {
    const Eigen::VectorXd phi = basis.values(quadrature.points[q]);
    M += quadrature.weights[q] * geometry.area * phi * phi.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw MeshError("mass matrix not positive definite");
  return M;
}

double evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Basis& basis,
                const Vec2& ref) {
  return basis.values(ref).dot(coeffs);
}

Vec2 evaluate_gradient(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Basis& basis,
                       const ElementGeometry& geometry, const Vec2& ref) {
  const Vec2 gref = basis.ref_gradients(ref).transpose() * coeffs;
  return geometry.inverse_jacobian.transpose() * gref;
}

Vec2 reference_to_physical(const MovingMesh& mesh, std::span<const Vec2> x, int e,
                           const Vec2& ref) {
  const auto lam = reference_barycentric(mesh.dim, ref);
  Vec2 p = Vec2::Zero();
  const auto verts = mesh.element_vertices(e);
  for (std::size_t i = 0; i < verts.size(); ++i) p += lam[i] * x[verts[i]];
  return p;
}

Eigen::VectorXd l2_project(const std::function<double(const Vec2&)>& f, const MovingMesh& mesh,
                           std::span<const Vec2> x, int element, const Basis& basis,
                           const Quadrature& quadrature) {
  const ElementGeometry g = element_geometry(mesh, x, element);
  const Eigen::MatrixXd M = mass_matrix(g, basis, quadrature);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.n_dof());
  for (int q = 0; q < quadrature.size(); ++q) {
    const Vec2 p = reference_to_physical(mesh, x, element, quadrature.points[q]);
    rhs += quadrature.weights[q] * g.area * f(p) * basis.values(quadrature.points[q]);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success) throw MeshError("singular mass matrix", element);
  return ldlt.solve(rhs);
}

}  // namespace dgale
