#include "dgale/limiter.hpp"

#include <algorithm>
#include <cmath>

namespace dgale {

double tvb_minmod(double a, std::initializer_list<double> others, double bound) {
  if (std::abs(a) <= bound) return a;
  double best = a;
  for (double b : others) {
    if ((b > 0.0) != (a > 0.0) || b == 0.0) return 0.0;
    if (std::abs(b) < std::abs(best)) best = b;
  }
  return best;
}

namespace {

constexpr int kNumPrim = 5;
using Prims = std::array<double, kNumPrim>;
// Neighbor differences in 2D are taken between barycenters, roughly twice the
// barycenter-to-edge distance, so no extra widening factor is applied.
constexpr double kNu2d = 1.0;

Prims to_array(const PrimitiveState& w) { return {w.rho, w.u, w.v, w.p, w.Y}; }

PrimitiveState from_array(const Prims& a) { return {a[0], a[1], a[2], a[3], a[4]}; }

struct ElementView {
  Prims mean;
  std::array<Prims, 3> face_mean;   // per local face
  std::array<Prims, 3> neighbor;    // neighbor (or ghost) cell-average primitives
  std::array<double, kNumPrim> tol;
  double bound = 0.0;
  bool admissible = true;  // face primitives could be evaluated
};

class Analyzer {
 public:
  Analyzer(const SolutionField& field, const MovingMesh& mesh, std::span<const Vec2> x,
           const Discretization& disc, const MixtureEOS& eos, const LimiterConfig& config,
           const BoundaryData& bc)
      : field_(field), mesh_(mesh), x_(x), disc_(disc), eos_(eos), config_(config), bc_(bc) {
    means_.resize(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e)
      means_[e] = to_array(average_primitive(field, e, eos));
  }

  ElementView view(int e) const {
    ElementView v;
    v.mean = means_[e];
    const ElementGeometry g = element_geometry(mesh_, x_, e);
    const double h = g.diameter;
    v.bound = config_.m_tvb * h * h;
    const int nf = disc_.n_local_faces();
    const Quadrature& fq = disc_.face();
    for (int l = 0; l < nf; ++l) {
      Prims acc{};
      try {
        for (int q = 0; q < fq.size(); ++q) {
          const Prims w = to_array(
              primitive_from_values(field_, e, disc_.face_values(l, false).row(q), eos_));
          for (int k = 0; k < kNumPrim; ++k) acc[k] += fq.weights[q] * w[k];
        }
      } catch (const PositivityError&) {
        v.admissible = false;
      }
      v.face_mean[l] = acc;
      const int nb = mesh_.neighbor(e, l);
      if (nb >= 0) {
        v.neighbor[l] = means_[nb];
      } else {
        const Face& f = mesh_.faces[mesh_.element_faces[e][l]];
        v.neighbor[l] =
            to_array(ghost_state(f.tag, from_array(v.mean), g.normal[l], g.barycenter, bc_));
      }
    }
    // Without usable traces the slopes come from the neighbor averages alone.
    if (!v.admissible)
      for (int l = 0; l < nf; ++l) v.face_mean[l] = v.neighbor[l];
    const auto m = mixture_params(v.mean[4], eos_);
    const double c = std::sqrt(std::max(m.gamma * (v.mean[3] + m.B) / v.mean[0], 0.0));
    constexpr double rel = 1e-10;
    v.tol = {rel * std::abs(v.mean[0]), rel * (std::abs(v.mean[1]) + std::abs(v.mean[2]) + c),
             rel * (std::abs(v.mean[1]) + std::abs(v.mean[2]) + c),
             rel * (std::abs(v.mean[3]) + m.B), rel};
    return v;
  }

  int num_vars() const { return config_.limit_species ? kNumPrim : kNumPrim - 1; }

  bool troubled(const ElementView& v) const {
    if (!v.admissible) return true;
    for (int k = 0; k < num_vars(); ++k) {
      if (mesh_.dim == 1) {
        const double dp = v.neighbor[1][k] - v.mean[k];
        const double dm = v.mean[k] - v.neighbor[0][k];
        const double ur = v.face_mean[1][k] - v.mean[k];
        const double ul = v.mean[k] - v.face_mean[0][k];
        if (std::abs(tvb_minmod(ur, {dp, dm}, v.bound) - ur) > v.tol[k]) return true;
        if (std::abs(tvb_minmod(ul, {dp, dm}, v.bound) - ul) > v.tol[k]) return true;
      } else {
        for (int l = 0; l < 3; ++l) {
          const double d = v.face_mean[l][k] - v.mean[k];
          const double D = kNu2d * (v.neighbor[l][k] - v.mean[k]);
          if (std::abs(tvb_minmod(d, {D}, v.bound) - d) > v.tol[k]) return true;
        }
      }
    }
    return false;
  }

 private:
  const SolutionField& field_;
  const MovingMesh& mesh_;
  std::span<const Vec2> x_;
  const Discretization& disc_;
  const MixtureEOS& eos_;
  const LimiterConfig& config_;
  const BoundaryData& bc_;
  std::vector<Prims> means_;
};

}  // namespace

bool element_admissible(const SolutionField& field, int e, const Discretization& disc,
                        const MixtureEOS& eos) {
  try {
    const Eigen::MatrixXd& V = disc.volume_values();
    for (int q = 0; q < V.rows(); ++q) primitive_from_values(field, e, V.row(q), eos);
    for (int l = 0; l < disc.n_local_faces(); ++l) {
      const Eigen::MatrixXd& F = disc.face_values(l, false);
      for (int q = 0; q < F.rows(); ++q) primitive_from_values(field, e, F.row(q), eos);
    }
  } catch (const PositivityError&) {
    return false;
  }
  return true;
}

std::vector<int> detect_troubled(const SolutionField& field, const MovingMesh& mesh,
                                 std::span<const Vec2> x, const Discretization& disc,
                                 const MixtureEOS& eos, const LimiterConfig& config,
                                 const BoundaryData& bc) {
  std::vector<int> out;
  if (!config.enabled || disc.degree() == 0) return out;
  const Analyzer an(field, mesh, x, disc, eos, config, bc);
  for (int e = 0; e < mesh.num_elements(); ++e)
    if (an.troubled(an.view(e))) out.push_back(e);
  return out;
}

void limit(SolutionField& field, const std::vector<int>& troubled, const MovingMesh& mesh,
           std::span<const Vec2> x, const Discretization& disc, const MixtureEOS& eos,
           const LimiterConfig& config, const BoundaryData& bc) {
  if (troubled.empty()) return;
  const int dim = mesh.dim;
  const int nd = disc.n_dof();
  const int nlin = dim + 1;
  const Basis& basis = disc.basis();

  // Sample points that pin down a linear polynomial: interval ends, edge midpoints.
  std::vector<Vec2> samples;
  if (dim == 1)
    samples = {Vec2(0.0, 0.0), Vec2(1.0, 0.0)};
  else
    samples = {Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.5)};
  Eigen::MatrixXd A(nlin, nlin);
  for (int i = 0; i < nlin; ++i) A.row(i) = basis.values(samples[i]).head(nlin).transpose();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

  // The analysis reads the unlimited field; limited blocks are written afterwards.
  const Analyzer an(field, mesh, x, disc, eos, config, bc);
  std::vector<std::pair<int, Eigen::MatrixXd>> updates;
  const Quadrature& vq = disc.volume();
  const Eigen::MatrixXd& V = disc.volume_values();

  // The TVB bound only decides which elements are flagged. Reconstructing with
  // it as well lets round-off in the pressure and velocity slopes of a cell
  // sitting on a contact grow from step to step.
  for (int e : troubled) {
    const ElementView v = an.view(e);
    Eigen::MatrixXd prim = Eigen::MatrixXd::Zero(nd, kNumPrim);  // primitive coefficients
    for (int k = 0; k < kNumPrim; ++k) {
      const bool limited = k < an.num_vars();
      if (!limited) {
        prim.col(k) = field.block(e).col(kSpecies);
        continue;
      }
      Eigen::VectorXd vals(nlin);
      if (dim == 1) {
        const double dp = v.neighbor[1][k] - v.mean[k];
        const double dm = v.mean[k] - v.neighbor[0][k];
        const double half = 0.5 * (v.face_mean[1][k] - v.face_mean[0][k]);
        const double s = tvb_minmod(half, {dp, dm}, 0.0);
        vals << v.mean[k] - s, v.mean[k] + s;
      } else {
        std::array<double, 3> d{};
        for (int l = 0; l < 3; ++l)
          d[l] = tvb_minmod(v.face_mean[l][k] - v.mean[k],
                            {kNu2d * (v.neighbor[l][k] - v.mean[k])}, 0.0);
        const double sum = d[0] + d[1] + d[2];
        if (std::abs(sum) > 0.0) {
          double pos = 0.0, neg = 0.0;
          for (double di : d) {
            pos += std::max(0.0, di);
            neg += std::max(0.0, -di);
          }
          const double tp = pos > 0.0 ? std::min(1.0, neg / pos) : 0.0;
          const double tn = neg > 0.0 ? std::min(1.0, pos / neg) : 0.0;
          for (double& di : d) di = tp * std::max(0.0, di) - tn * std::max(0.0, -di);
        }
        vals << v.mean[k] + d[0], v.mean[k] + d[1], v.mean[k] + d[2];
      }
      prim.col(k).head(nlin) = lu.solve(vals);
    }

    // Rebuild conserved moments from the limited primitive polynomials.
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(nd, kNumComponents);
    bool usable = true;
    try {
      for (int q = 0; q < vq.size(); ++q) {
        const Eigen::RowVectorXd w = V.row(q) * prim;
        const PrimitiveState ws{w[0], w[1], w[2], w[3], w[4]};
        const State4 c = conserved_from_primitive(ws, eos);
        block.leftCols<4>() += vq.weights[q] * V.row(q).transpose() * c.transpose();
      }
    } catch (const PositivityError&) {
      usable = false;  // a 2D linear Y can leave the admissible range between edge midpoints
    }
    block.col(kSpecies) = prim.col(4);
    for (int k = 0; k < kNumComponents; ++k) block(0, k) = field.average(e, k);
    // Projecting the energy of strong material jumps can still leave negative
    // traces; such elements keep only their averages.
    SolutionField one(1, nd);
    one.block(0) = block;
    if (!usable || !element_admissible(one, 0, disc, eos)) block.bottomRows(nd - 1).setZero();
    updates.emplace_back(e, std::move(block));
  }
  for (auto& [e, block] : updates) field.block(e) = block;
}

}  // namespace dgale
