#include "dgale/mesh_motion.hpp"

#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <deque>

namespace dgale {

namespace {

template <int D>
constexpr double factorial() {
  return D == 1 ? 1.0 : 2.0;
}

/// Energy of one element and its gradient with respect to the computational
/// edge matrix Ehat (columns xi_i - xi_0).
///   w = |K| sqrt(det M_K),  A = E^{-1} M_K^{-1} E^{-T},  p = 3d/4
///   I_K = w tr(Ehat A Ehat^T)^p + d^p w^{-1/2} |K_c|^{3/2}
template <int D, typename Scalar>
Scalar element_energy(const Eigen::Matrix<Scalar, D, D>& E, const Eigen::Matrix<Scalar, D, D>& Ehat,
                      const Eigen::Matrix<Scalar, D, D>& Minv, const Scalar& sqrt_det_M,
                      Eigen::Matrix<Scalar, D, D>* grad) {
  using std::pow;
  using std::sqrt;
  constexpr double p = 3.0 * D / 4.0;
  const Scalar K = E.determinant() / factorial<D>();
  const Scalar Kc = Ehat.determinant() / factorial<D>();
  if (!(K > 0.0) || !(Kc > 0.0)) return std::numeric_limits<Scalar>::quiet_NaN();
  const Eigen::Matrix<Scalar, D, D> Einv = E.inverse();
  const Eigen::Matrix<Scalar, D, D> A = Einv * Minv * Einv.transpose();
  const Eigen::Matrix<Scalar, D, D> EA = Ehat * A;
  const Scalar tr = (EA * Ehat.transpose()).trace();
  const Scalar w = K * sqrt_det_M;
  const double dp = std::pow(static_cast<double>(D), p);
  const Scalar value = w * pow(tr, p) + dp * pow(w, -0.5) * pow(Kc, 1.5);
  if (grad) {
    *grad = (w * p * pow(tr, p - 1.0) * 2.0) * EA +
            (dp * pow(w, -0.5) * 1.5 * pow(Kc, 1.5)) * Ehat.inverse().transpose();
  }
  return value;
}

struct ElementMetric {
  Mat2 inverse;
  double sqrt_det;
};

std::vector<ElementMetric> element_metrics(const MovingMesh& mesh, const MetricField& metric) {
  std::vector<ElementMetric> out(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Mat2 Mk = metric.element_average(mesh, e);
    if (mesh.dim == 1) {
      out[e].inverse = Mat2::Identity();
      out[e].inverse(0, 0) = 1.0 / Mk(0, 0);
      out[e].sqrt_det = std::sqrt(Mk(0, 0));
    } else {
      out[e].inverse = Mk.inverse();
      out[e].sqrt_det = std::sqrt(Mk.determinant());
    }
  }
  return out;
}

// Returns NaN when any element of either mesh is non-positive.
double energy_impl(const MovingMesh& mesh, std::span<const Vec2> x, std::span<const Vec2> xi,
                   const std::vector<ElementMetric>& em, std::vector<Vec2>* gradient) {
  if (gradient) gradient->assign(mesh.num_vertices(), Vec2::Zero());
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    if (mesh.dim == 1) {
      Eigen::Matrix<double, 1, 1> E, Eh, Mi, g;
      E(0, 0) = x[el[1]][0] - x[el[0]][0];
      Eh(0, 0) = xi[el[1]][0] - xi[el[0]][0];
      Mi(0, 0) = em[e].inverse(0, 0);
      const double v = element_energy<1, double>(E, Eh, Mi, em[e].sqrt_det, gradient ? &g : nullptr);
      if (std::isnan(v)) return v;
      total += v;
      if (gradient) {
        (*gradient)[el[1]][0] += g(0, 0);
        (*gradient)[el[0]][0] -= g(0, 0);
      }
    } else {
      Mat2 E, Eh, g;
      E << x[el[1]] - x[el[0]], x[el[2]] - x[el[0]];
      Eh << xi[el[1]] - xi[el[0]], xi[el[2]] - xi[el[0]];
      const double v = element_energy<2, double>(E, Eh, em[e].inverse, em[e].sqrt_det,
                                                 gradient ? &g : nullptr);
      if (std::isnan(v)) return v;
      total += v;
      if (gradient) {
        (*gradient)[el[1]] += g.col(0);
        (*gradient)[el[2]] += g.col(1);
        (*gradient)[el[0]] -= g.col(0) + g.col(1);
      }
    }
  }
  return total;
}

// Hessian of one element's energy in its xi vertex coordinates, ordered
// (vertex 0, component 0), (vertex 0, component 1), ... by differentiating
// the analytic gradient with forward-mode AD.
template <int D>
Eigen::Matrix<double, D*(D + 1), D*(D + 1)> element_hessian(const Eigen::Matrix<double, D, D>& E,
                                                         const std::array<Vec2, 3>& xi_local,
                                                         const Eigen::Matrix<double, D, D>& Minv,
                                                         double sqrt_det_M) {
  constexpr int N = D * (D + 1);
  using AD = Eigen::AutoDiffScalar<Eigen::Matrix<double, N, 1>>;
  std::array<Eigen::Matrix<AD, D, 1>, D + 1> xi;
  for (int i = 0; i <= D; ++i)
    for (int c = 0; c < D; ++c) xi[i][c] = AD(xi_local[i][c], N, i * D + c);
  Eigen::Matrix<AD, D, D> Eh;
  for (int j = 0; j < D; ++j) Eh.col(j) = xi[j + 1] - xi[0];
  Eigen::Matrix<AD, D, D> g;
  element_energy<D, AD>(E.template cast<AD>(), Eh, Minv.template cast<AD>(), AD(sqrt_det_M), &g);
  Eigen::Matrix<double, N, N> H;
  for (int c = 0; c < D; ++c) {
    Eigen::Matrix<double, N, 1> row0 = Eigen::Matrix<double, N, 1>::Zero();
    for (int j = 0; j < D; ++j) {
      H.row((j + 1) * D + c) = g(c, j).derivatives().transpose();
      row0 -= g(c, j).derivatives();
    }
    H.row(c) = row0.transpose();
  }
  return H;
}

// Global Hessian with two rows per vertex (x, y); 1D meshes leave the y rows empty.
Eigen::SparseMatrix<double> hessian_impl(const MovingMesh& mesh, std::span<const Vec2> x,
                                         std::span<const Vec2> xi,
                                         const std::vector<ElementMetric>& em) {
  const int d = mesh.dim;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.num_elements() * (d + 1) * (d + 1) * d * d);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    const std::array<Vec2, 3> loc{xi[el[0]], xi[el[1]], d == 2 ? xi[el[2]] : Vec2::Zero()};
    auto scatter = [&](const auto& H) {
      for (int a = 0; a < H.rows(); ++a)
        for (int b = 0; b < H.cols(); ++b)
          trip.emplace_back(2 * el[a / d] + a % d, 2 * el[b / d] + b % d, H(a, b));
    };
    if (d == 1) {
      Eigen::Matrix<double, 1, 1> E, Mi;
      E(0, 0) = x[el[1]][0] - x[el[0]][0];
      Mi(0, 0) = em[e].inverse(0, 0);
      scatter(element_hessian<1>(E, loc, Mi, em[e].sqrt_det));
    } else {
      Mat2 E;
      E << x[el[1]] - x[el[0]], x[el[2]] - x[el[0]];
      scatter(element_hessian<2>(E, loc, em[e].inverse, em[e].sqrt_det));
    }
  }
  Eigen::SparseMatrix<double> H(2 * mesh.num_vertices(), 2 * mesh.num_vertices());
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

std::array<double, 3> barycentric_in(const MovingMesh& mesh, std::span<const Vec2> xi, int e,
                                     const Vec2& p) {
  const auto& el = mesh.elements[e];
  if (mesh.dim == 1) {
    const double t = (p[0] - xi[el[0]][0]) / (xi[el[1]][0] - xi[el[0]][0]);
    return {1.0 - t, t, 0.0};
  }
  Mat2 J;
  J << xi[el[1]] - xi[el[0]], xi[el[2]] - xi[el[0]];
  const Vec2 mu = J.inverse() * (p - xi[el[0]]);
  return {1.0 - mu[0] - mu[1], mu[0], mu[1]};
}

double min_coord(const std::array<double, 3>& l, int dim) {
  return dim == 1 ? std::min(l[0], l[1]) : std::min({l[0], l[1], l[2]});
}

}  // namespace

MeshEnergy mesh_energy(const MovingMesh& mesh, std::span<const Vec2> x, std::span<const Vec2> xi,
                       const MetricField& metric) {
  MeshEnergy out;
  const auto em = element_metrics(mesh, metric);
  out.value = energy_impl(mesh, x, xi, em, &out.gradient);
  if (std::isnan(out.value)) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      if (signed_measure(mesh, x, e) <= 0.0) throw MeshError("singular physical element", e);
      if (signed_measure(mesh, xi, e) <= 0.0) throw MeshError("singular computational element", e);
    }
    throw MeshError("mesh energy is not finite");
  }
  return out;
}

Eigen::SparseMatrix<double> mesh_energy_hessian(const MovingMesh& mesh, std::span<const Vec2> x,
                                                std::span<const Vec2> xi,
                                                const MetricField& metric) {
  return hessian_impl(mesh, x, xi, element_metrics(mesh, metric));
}

std::vector<Vec2> interpolate_back(const MovingMesh& mesh, std::span<const Vec2> xi,
                                   std::span<const Vec2> x, std::span<const Vec2> targets) {
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_elements();
  const auto vel = mesh.vertex_elements();
  const int nloc = mesh.dim == 1 ? 2 : 3;
  constexpr double tol = 1e-10;

  std::vector<Vec2> shifts{Vec2::Zero()};
  const Vec2 ext = mesh.domain.extent();
  const bool px = mesh.side_tags[0] == BoundaryTag::periodic;
  const bool py = mesh.dim == 2 && mesh.side_tags[2] == BoundaryTag::periodic;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      if ((i == 0 && j == 0) || (i != 0 && !px) || (j != 0 && !py)) continue;
      shifts.emplace_back(i * ext[0], j * ext[1]);
    }

  std::vector<int> stamp(ne, -1);
  std::vector<Vec2> out(x.begin(), x.end());
  int search_id = 0;
  for (int v = 0; v < nv; ++v) {
    if (mesh.periodic_master[v] != v) continue;
    bool found = false;
    int best_e = -1;
    double best_min = -std::numeric_limits<double>::infinity();
    Vec2 best_shift = Vec2::Zero();
    std::array<double, 3> best_lam{};
    for (const Vec2& shift : shifts) {
      const Vec2 p = targets[v] + shift;
      ++search_id;
      std::deque<int> queue(vel[v].begin(), vel[v].end());
      for (int e : queue) stamp[e] = search_id;
      while (!queue.empty()) {
        const int e = queue.front();
        queue.pop_front();
        const auto lam = barycentric_in(mesh, xi, e, p);
        const double mc = min_coord(lam, mesh.dim);
        if (mc > best_min) {
          best_min = mc;
          best_e = e;
          best_lam = lam;
          best_shift = shift;
        }
        if (mc >= -tol) {
          found = true;
          break;
        }
        for (int l = 0; l < nloc; ++l) {
          const int nb = mesh.neighbor(e, l);
          if (nb >= 0 && stamp[nb] != search_id) {
            stamp[nb] = search_id;
            queue.push_back(nb);
          }
        }
      }
      if (found) break;
    }
    if (!found && best_min < -1e-6)
      throw MeshError("vertex " + std::to_string(v) + " not located in the computational mesh",
                      best_e);
    Vec2 r = Vec2::Zero();
    const auto& el = mesh.elements[best_e];
    for (int i = 0; i < nloc; ++i) r += best_lam[i] * x[el[i]];
    out[v] = r - best_shift;
  }

  // Snap boundary vertices back onto their sides.
  const double btol = 1e-12 * std::max(1.0, ext.norm());
  const int sides = mesh.dim == 1 ? 2 : 4;
  for (int v = 0; v < nv; ++v) {
    if (mesh.periodic_master[v] != v) continue;
    for (int s = 0; s < sides; ++s) {
      if (mesh.side_tags[s] == BoundaryTag::periodic) continue;
      const int axis = s / 2;
      const double wall = (s % 2 == 0) ? mesh.domain.lo[axis] : mesh.domain.hi[axis];
      if (std::abs(targets[v][axis] - wall) <= btol) out[v][axis] = wall;
    }
  }
  mesh.enforce_periodic(out);
  return out;
}

std::vector<Vec2> mmpde_correct(const MovingMesh& mesh, std::span<const Vec2> x_lag,
                                std::span<const Vec2> xi_ref, const MetricField& metric,
                                double dt, const MmpdeOptions& options, MmpdeReport* report) {
  if (!(options.tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(dt > 0.0)) throw Error("mmpde_correct: dt must be positive");
  const int nv = mesh.num_vertices();
  const auto em = element_metrics(mesh, metric);
  std::vector<double> rate(nv);
  for (int v = 0; v < nv; ++v) rate[v] = std::pow(metric.det(v), 0.25) / options.tau;

  std::vector<Vec2> xi(xi_ref.begin(), xi_ref.end());
  std::vector<Vec2> grad;
  double energy = energy_impl(mesh, x_lag, xi, em, &grad);
  if (std::isnan(energy)) {
    for (int e = 0; e < mesh.num_elements(); ++e)
      if (signed_measure(mesh, x_lag, e) <= 0.0)
        throw MeshError("inverted element in the Lagrangian mesh", e);
    throw MeshError("reference computational mesh is singular");
  }
  MmpdeReport rep;
  rep.energy_start = energy;

  // Linearly implicit Euler on the reduced unknowns (one per periodic group,
  // restricted to the admissible directions P of each boundary vertex):
  //   (P R^{-1} P + (I - P) + h P H P) delta = -h P g.
  // Explicit Euler lets the stiffest mode flip sign every substep.
  std::vector<Mat2> P(nv, Mat2::Zero());
  for (int v = 0; v < nv; ++v) {
    if (mesh.periodic_master[v] != v) continue;
    P[v].col(0) = mesh.constrain(v, Vec2::UnitX());
    if (mesh.dim == 2) P[v].col(1) = mesh.constrain(v, Vec2::UnitY());
  }
  auto reduce = [&](const Eigen::SparseMatrix<double>& H) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(H.nonZeros() + 4 * nv);
    for (int k = 0; k < H.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it) {
        const int a = static_cast<int>(it.row()), b = static_cast<int>(it.col());
        trip.emplace_back(2 * mesh.periodic_master[a / 2] + a % 2,
                          2 * mesh.periodic_master[b / 2] + b % 2, it.value());
      }
    Eigen::SparseMatrix<double> Hr(2 * nv, 2 * nv);
    Hr.setFromTriplets(trip.begin(), trip.end());
    // P H P via a block-diagonal projector.
    std::vector<Eigen::Triplet<double>> pt;
    for (int v = 0; v < nv; ++v)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (P[v](i, j) != 0.0) pt.emplace_back(2 * v + i, 2 * v + j, P[v](i, j));
    Eigen::SparseMatrix<double> Pm(2 * nv, 2 * nv);
    Pm.setFromTriplets(pt.begin(), pt.end());
    return Eigen::SparseMatrix<double>(Pm * Hr * Pm);
  };
  Eigen::SparseMatrix<double> base(2 * nv, 2 * nv);
  {
    std::vector<Eigen::Triplet<double>> bt;
    for (int v = 0; v < nv; ++v) {
      const Mat2 Q = Mat2::Identity() - P[v];
      const Mat2 B = P[v] / rate[v] * P[v] + Q;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (B(i, j) != 0.0) bt.emplace_back(2 * v + i, 2 * v + j, B(i, j));
    }
    base.setFromTriplets(bt.begin(), bt.end());
  }

  double t = 0.0;
  double h = dt;
  int consecutive_rejects = 0;
  std::vector<Vec2> trial(nv), trial_grad;
  Eigen::SparseMatrix<double> PHP = reduce(hessian_impl(mesh, x_lag, xi, em));
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  while (t < dt * (1.0 - 1e-12)) {
    if (rep.substeps >= options.max_substeps) {
      rep.reached_end = false;
      break;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nv);
    {
      std::vector<Vec2> gsum(nv, Vec2::Zero());
      for (int v = 0; v < nv; ++v) gsum[mesh.periodic_master[v]] += grad[v];
      for (int v = 0; v < nv; ++v) rhs.segment<2>(2 * v) = P[v] * gsum[v];
    }
    const double step = std::min(h, dt - t);
    solver.compute(Eigen::SparseMatrix<double>(base + step * PHP));
    bool ok = solver.info() == Eigen::Success;
    double e_trial = std::numeric_limits<double>::quiet_NaN();
    if (ok) {
      const Eigen::VectorXd delta = solver.solve(-step * rhs);
      for (int v = 0; v < nv; ++v)
        trial[v] = xi[v] + delta.segment<2>(2 * mesh.periodic_master[v]);
      mesh.enforce_periodic(trial);
      e_trial = energy_impl(mesh, x_lag, trial, em, &trial_grad);
    }
    if (ok && !std::isnan(e_trial) && e_trial <= energy + 1e-13 * std::abs(energy)) {
      xi.swap(trial);
      grad.swap(trial_grad);
      energy = e_trial;
      t += step;
      ++rep.substeps;
      consecutive_rejects = 0;
      h = std::min(2.0 * step, dt);
      if (t < dt * (1.0 - 1e-12)) PHP = reduce(hessian_impl(mesh, x_lag, xi, em));
    } else {
      ++rep.rejected;
      // The accepted mesh is always valid, so a stall ends the integration early.
      if (++consecutive_rejects > 20) {
        rep.reached_end = false;
        break;
      }
      h = 0.5 * step;
    }
  }
  rep.energy_end = energy;
  if (report) *report = rep;
  return interpolate_back(mesh, xi, x_lag, xi_ref);
}

}  // namespace dgale
