#include "dgale/mesh_motion.hpp"

#include "dgale/nok_flux.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace dgale {

Mat2 MetricField::element_average(const MovingMesh& mesh, int e) const {
  Mat2 m = Mat2::Zero();
  const auto verts = mesh.element_vertices(e);
  for (int v : verts) m += tensors[v];
  return m / static_cast<double>(verts.size());
}

MetricField identity_metric(const MovingMesh& mesh) {
  return {mesh.dim, std::vector<Mat2>(mesh.num_vertices(), Mat2::Identity())};
}

namespace {

// Members of each periodic group, indexed by master.
std::vector<std::vector<int>> group_members(const MovingMesh& mesh) {
  std::vector<std::vector<int>> g(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) g[mesh.periodic_master[v]].push_back(v);
  return g;
}

PrimitiveState face_mean(const SolutionField& field, int e, int local, bool reversed,
                         const Discretization& disc, const MixtureEOS& eos) {
  const Quadrature& fq = disc.face();
  PrimitiveState acc{0.0, 0.0, 0.0, 0.0, 0.0};
  for (int q = 0; q < fq.size(); ++q) {
    const PrimitiveState w =
        primitive_from_values(field, e, disc.face_values(local, reversed).row(q), eos);
    acc.rho += fq.weights[q] * w.rho;
    acc.u += fq.weights[q] * w.u;
    acc.v += fq.weights[q] * w.v;
    acc.p += fq.weights[q] * w.p;
    acc.Y += fq.weights[q] * w.Y;
  }
  return acc;
}

// Neighbor masters of every group master with unfolded displacements.
using Adjacency = std::vector<std::vector<std::pair<int, Vec2>>>;

Adjacency group_adjacency(const MovingMesh& mesh, std::span<const Vec2> x) {
  const auto nb = mesh.vertex_neighbors();
  const auto members = group_members(mesh);
  Adjacency adj(mesh.num_vertices());
  for (int m = 0; m < mesh.num_vertices(); ++m) {
    if (mesh.periodic_master[m] != m) continue;
    for (int c : members[m]) {
      for (int w : nb[c]) {
        const int mw = mesh.periodic_master[w];
        if (mw == m) continue;
        const bool seen = std::any_of(adj[m].begin(), adj[m].end(),
                                      [&](const auto& p) { return p.first == mw; });
        if (!seen) adj[m].emplace_back(mw, x[w] - x[c]);
      }
    }
  }
  return adj;
}

// Vertices within `rings` steps of master m with displacements relative to m.
std::vector<std::pair<int, Vec2>> ring_patch(const Adjacency& adj, int m, int rings) {
  std::unordered_map<int, Vec2> found{{m, Vec2::Zero()}};
  std::vector<std::pair<int, Vec2>> out{{m, Vec2::Zero()}};
  std::vector<std::pair<int, Vec2>> frontier{{m, Vec2::Zero()}};
  for (int r = 0; r < rings; ++r) {
    std::vector<std::pair<int, Vec2>> next;
    for (const auto& [v, d] : frontier) {
      for (const auto& [w, dw] : adj[v]) {
        if (found.count(w)) continue;
        found.emplace(w, d + dw);
        next.emplace_back(w, d + dw);
        out.emplace_back(w, d + dw);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Vec2> lagrangian_velocity(const SolutionField& field, const MovingMesh& mesh,
                                      std::span<const Vec2> x, const Discretization& disc,
                                      const MixtureEOS& eos, bool free_open,
                                      const BoundaryData& bc) {
  const int nv = mesh.num_vertices();
  std::vector<Mat2> A(nv, Mat2::Zero());
  std::vector<Vec2> b(nv, Vec2::Zero());
  std::vector<Vec2> un_sum(nv, Vec2::Zero());  // sum of U* n for the fallback
  std::vector<int> count(nv, 0);
  std::vector<double> edge_speed(nv, 0.0);  // 1D: U* at the node

  for (const Face& f : mesh.faces) {
    const ElementGeometry gl = element_geometry(mesh, x, f.left);
    const Vec2 n = gl.normal[f.left_local];
    const PrimitiveState wl = face_mean(field, f.left, f.left_local, false, disc, eos);
    PrimitiveState wr;
    double alpha;
    if (f.right >= 0) {
      wr = face_mean(field, f.right, f.right_local, true, disc, eos);
      alpha = 0.5 * (field.average(f.left, kRho) + field.average(f.right, kRho));
    } else {
      const Vec2 mid = mesh.dim == 1 ? x[f.vertices[0]]
                                     : Vec2(0.5 * (x[f.vertices[0]] + x[f.vertices[1]]));
      wr = ghost_state(f.tag, wl, n, mid, bc);
      alpha = field.average(f.left, kRho);
    }
    const double ustar =
        riemann_edge_velocity<double>(Vec2(wl.u, wl.v), Vec2(wr.u, wr.v), n,
                                      sound_speed(wl, eos), sound_speed(wr, eos));
    const int nends = mesh.dim == 1 ? 1 : 2;
    for (int i = 0; i < nends; ++i) {
      const int m = mesh.periodic_master[f.vertices[i]];
      A[m] += alpha * n * n.transpose();
      b[m] += alpha * ustar * n;
      un_sum[m] += ustar * n;
      ++count[m];
      edge_speed[m] = ustar;
    }
  }

  std::vector<Vec2> vel(nv, Vec2::Zero());
  for (int m = 0; m < nv; ++m) {
    if (mesh.periodic_master[m] != m || count[m] == 0) continue;
    const VertexBoundary& vb = mesh.vertex_boundary[m];
    const bool free = vb.kind == VertexKind::interior || (free_open && vb.open);
    Vec2 v = Vec2::Zero();
    if (mesh.dim == 1) {
      v = Vec2(edge_speed[m], 0.0);
      if (!free) v = Vec2::Zero();
    } else if (free) {
      const double tr = A[m].trace();
      if (std::abs(A[m].determinant()) > 1e-10 * tr * tr)
        v = A[m].ldlt().solve(b[m]);
      else
        v = un_sum[m] / count[m];
    } else if (vb.kind == VertexKind::side) {
      const Vec2& t = vb.tangent;
      const double den = t.dot(A[m] * t);
      if (den > 1e-12 * A[m].trace()) v = (t.dot(b[m]) / den) * t;
    }
    vel[m] = v;
  }
  for (int w = 0; w < nv; ++w) vel[w] = vel[mesh.periodic_master[w]];
  return vel;
}

std::vector<Vec2> lagrangian_predict(const SolutionField& field, const MovingMesh& mesh,
                                     std::span<const Vec2> x, double dt,
                                     const Discretization& disc, const MixtureEOS& eos,
                                     bool free_open, const BoundaryData& bc) {
  const auto vel = lagrangian_velocity(field, mesh, x, disc, eos, free_open, bc);
  std::vector<Vec2> xl(x.begin(), x.end());
  for (int v = 0; v < mesh.num_vertices(); ++v) xl[v] += dt * vel[v];
  mesh.enforce_periodic(xl);
  return xl;
}

Eigen::VectorXd adaptation_quantity(const SolutionField& field, const MovingMesh& mesh,
                                    std::span<const Vec2> x, const MixtureEOS& eos,
                                    const std::array<double, 3>& beta) {
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_elements();
  const int per = mesh.vertices_per_element();
  std::vector<std::array<double, 3>> cell(ne);
  std::vector<double> vol(ne);
  for (int e = 0; e < ne; ++e) {
    const PrimitiveState w = average_primitive(field, e, eos);
    cell[e] = {w.rho, w.p, w.Y};
    vol[e] = signed_measure(mesh, x, e);
  }
  std::vector<std::array<double, 3>> sum(nv, {0.0, 0.0, 0.0});
  std::vector<double> wsum(nv, 0.0);
  for (int e = 0; e < ne; ++e) {
    const auto verts = mesh.element_vertices(e);
    for (int i = 0; i < per; ++i) {
      const int m = mesh.periodic_master[verts[i]];
      for (int k = 0; k < 3; ++k) sum[m][k] += vol[e] * cell[e][k];
      wsum[m] += vol[e];
    }
  }
  std::array<double, 3> norm{0.0, 0.0, 0.0};
  for (int m = 0; m < nv; ++m) {
    if (wsum[m] <= 0.0) continue;
    for (int k = 0; k < 3; ++k) {
      sum[m][k] /= wsum[m];
      norm[k] = std::max(norm[k], std::abs(sum[m][k]));
    }
  }
  Eigen::VectorXd S = Eigen::VectorXd::Ones(nv);
  for (int v = 0; v < nv; ++v) {
    const int m = mesh.periodic_master[v];
    for (int k = 0; k < 3; ++k) {
      if (norm[k] == 0.0 || beta[k] == 0.0) continue;
      const double r = sum[m][k] / norm[k];
      S[v] += beta[k] * r * r;
    }
  }
  return S;
}

std::vector<Mat2> recover_hessian(const Eigen::VectorXd& nodal, const MovingMesh& mesh,
                                  std::span<const Vec2> x) {
  const int nv = mesh.num_vertices();
  const Adjacency adj = group_adjacency(mesh, x);
  const int ncoef = mesh.dim == 1 ? 3 : 6;
  std::vector<Mat2> H(nv, Mat2::Zero());
  for (int m = 0; m < nv; ++m) {
    if (mesh.periodic_master[m] != m) continue;
    for (int rings = 2; rings <= 4; ++rings) {
      const auto patch = ring_patch(adj, m, rings);
      if (static_cast<int>(patch.size()) < ncoef) continue;
      double h = 0.0;
      for (const auto& [w, d] : patch) h = std::max(h, d.norm());
      if (h <= 0.0) break;
      Eigen::MatrixXd P(patch.size(), ncoef);
      Eigen::VectorXd rhs(patch.size());
      for (std::size_t i = 0; i < patch.size(); ++i) {
        const Vec2 d = patch[i].second / h;
        if (mesh.dim == 1)
          P.row(i) << 1.0, d[0], d[0] * d[0];
        else
          P.row(i) << 1.0, d[0], d[1], d[0] * d[0], d[0] * d[1], d[1] * d[1];
        rhs[i] = nodal[patch[i].first];
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
      qr.setThreshold(1e-10);
      if (qr.rank() < ncoef) continue;
      const Eigen::VectorXd c = qr.solve(rhs);
      const double s = 1.0 / (h * h);
      if (mesh.dim == 1) {
        H[m](0, 0) = 2.0 * c[2] * s;
      } else {
        H[m] << 2.0 * c[3] * s, c[4] * s, c[4] * s, 2.0 * c[5] * s;
      }
      break;
    }
  }
  for (int v = 0; v < nv; ++v) H[v] = H[mesh.periodic_master[v]];
  return H;
}

MetricField build_metric(const std::vector<Mat2>& hessians, const MovingMesh& mesh, int sweeps) {
  const int nv = mesh.num_vertices();
  const int d = mesh.dim;
  MetricField M{d, std::vector<Mat2>(nv, Mat2::Identity())};
  for (int v = 0; v < nv; ++v) {
    if (d == 1) {
      const double a = 1.0 + std::abs(hessians[v](0, 0));
      M.tensors[v](0, 0) = a * std::pow(a, -1.0 / 5.0);
    } else {
      const Mat2 Hs = 0.5 * (hessians[v] + hessians[v].transpose());
      Eigen::SelfAdjointEigenSolver<Mat2> es(Hs);
      const Vec2 lam = es.eigenvalues().cwiseAbs() + Vec2::Ones();
      const Mat2 A = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
      M.tensors[v] = std::pow(lam[0] * lam[1], -1.0 / 6.0) * A;
    }
  }
  if (sweeps > 0) {
    const Adjacency adj = group_adjacency(mesh, mesh.vertices_old);
    for (int s = 0; s < sweeps; ++s) {
      std::vector<Mat2> next(M.tensors);
      for (int m = 0; m < nv; ++m) {
        if (mesh.periodic_master[m] != m) continue;
        Mat2 acc = M.tensors[m];
        for (const auto& [w, dw] : adj[m]) acc += M.tensors[w];
        next[m] = acc / static_cast<double>(adj[m].size() + 1);
      }
      for (int v = 0; v < nv; ++v) next[v] = next[mesh.periodic_master[v]];
      M.tensors = std::move(next);
    }
  }
  return M;
}

}  // namespace dgale
