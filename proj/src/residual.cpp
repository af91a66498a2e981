#include "dgale/residual.hpp"

#include "dgale/nok_flux.hpp"

namespace dgale {

PrimitiveState primitive_from_values(const SolutionField& field, int e,
                                     const Eigen::Ref<const Eigen::RowVectorXd>& phi,
                                     const MixtureEOS& eos) {
  const Eigen::Matrix<double, 1, kNumComponents> w = phi * field.block(e);
  const State4 c = w.head<4>().transpose();
  return primitive_from_conserved(c, w[kSpecies], eos, e);
}

PrimitiveState average_primitive(const SolutionField& field, int e, const MixtureEOS& eos) {
  return primitive_from_conserved(field.conserved_average(e), field.average(e, kSpecies), eos, e);
}

PrimitiveState ghost_state(BoundaryTag tag, const PrimitiveState& inside, const Vec2& normal,
                           const Vec2& x, const BoundaryData& bc) {
  PrimitiveState g = inside;
  switch (tag) {
    case BoundaryTag::reflective: {
      const double un = inside.u * normal[0] + inside.v * normal[1];
      g.u -= 2.0 * un * normal[0];
      g.v -= 2.0 * un * normal[1];
      break;
    }
    case BoundaryTag::inflow:
      if (bc.inflow) g = bc.inflow(x, bc.time);
      break;
    default:
      break;
  }
  return g;
}

namespace {

using GradMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

}  // namespace

Eigen::MatrixXd residual(const SolutionField& field, const MovingMesh& mesh,
                         std::span<const Vec2> x, std::span<const Vec2> xdot,
                         const Discretization& disc, const MixtureEOS& eos,
                         const BoundaryData& bc) {
  const int ne = mesh.num_elements();
  const int nd = disc.n_dof();
  if (field.n_dof != nd || field.num_elements() != ne)
    throw Error("residual: field does not match the discretization");
  Eigen::MatrixXd rate = Eigen::MatrixXd::Zero(ne * nd, kNumComponents);

  std::vector<ElementGeometry> geom(ne);
  Eigen::VectorXd y_bary(ne);
  for (int e = 0; e < ne; ++e) {
    geom[e] = element_geometry(mesh, x, e);
    y_bary[e] = disc.barycenter_values().dot(field.block(e).col(kSpecies));
  }

  // Volume terms: int_K G(W) . grad psi.
  const Quadrature& vq = disc.volume();
  for (int e = 0; e < ne; ++e) {
    const auto verts = mesh.element_vertices(e);
    const ElementGeometry& g = geom[e];
    Eigen::Matrix<double, Eigen::Dynamic, kNumComponents> acc =
        Eigen::Matrix<double, Eigen::Dynamic, kNumComponents>::Zero(nd, kNumComponents);
    for (int q = 0; q < vq.size(); ++q) {
      const PrimitiveState w = primitive_from_values(field, e, disc.volume_values().row(q), eos);
      const auto& lam = disc.volume_barycentric()[q];
      Vec2 xd = Vec2::Zero();
      for (std::size_t i = 0; i < verts.size(); ++i) xd += lam[i] * xdot[verts[i]];
      const auto m = mixture_params(w.Y, eos);
      const double E = m.kappa * w.p + m.chi + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
      const Vec2 U(w.u, w.v);
      const Vec2 rel = U - xd;
      Eigen::Matrix<double, kNumComponents, 2> G;
      G.row(kRho) = w.rho * rel.transpose();
      G.row(kMomX) = w.rho * w.u * rel.transpose();
      G.row(kMomY) = w.rho * w.v * rel.transpose();
      G.row(kEnergy) = (E * rel + w.p * U).transpose();
      G.row(kSpecies) = (w.Y * rel - y_bary[e] * U).transpose();
      G(kMomX, 0) += w.p;
      G(kMomY, 1) += w.p;
      const GradMatrix grads = disc.volume_ref_gradients()[q] * g.inverse_jacobian;
      acc.noalias() += (vq.weights[q] * g.area) * grads * G.transpose();
    }
    rate.middleRows(e * nd, nd) += acc;
  }

  // Face terms.
  const Quadrature& fq = disc.face();
  for (const Face& f : mesh.faces) {
    const int L = f.left;
    const int R = f.right;
    const ElementGeometry& gl = geom[L];
    const Vec2 n = gl.normal[f.left_local];
    const double len = gl.edge_length[f.left_local];
    const Eigen::MatrixXd& phiL = disc.face_values(f.left_local, false);
    for (int q = 0; q < fq.size(); ++q) {
      const double s = fq.points[q][0];
      Vec2 xd, xp;
      if (mesh.dim == 1) {
        xd = xdot[f.vertices[0]];
        xp = x[f.vertices[0]];
      } else {
        xd = (1.0 - s) * xdot[f.vertices[0]] + s * xdot[f.vertices[1]];
        xp = (1.0 - s) * x[f.vertices[0]] + s * x[f.vertices[1]];
      }
      EdgeTrace<double> tr;
      tr.left = primitive_from_values(field, L, phiL.row(q), eos);
      tr.right = R >= 0
                     ? primitive_from_values(field, R, disc.face_values(f.right_local, true).row(q), eos)
                     : ghost_state(f.tag, tr.left, n, xp, bc);
      tr.normal = n;
      tr.grid_velocity = xd;
      const XiFlux<double> xf = xi_flux(tr, eos);
      const State4 H = assemble_H<double>(xf.xi, n, xd);
      const double fy = species_flux(xf.moments, tr.left.Y, tr.right.Y);
      const double un = xf.moments.u1_plus + xf.moments.u1_minus + xd.dot(n);
      const double wl = fq.weights[q] * len;

      Eigen::Matrix<double, 1, kNumComponents> fl;
      fl << H.transpose(), fy - y_bary[L] * un;
      rate.middleRows(L * nd, nd).noalias() -= wl * phiL.row(q).transpose() * fl;
      if (R >= 0) {
        Eigen::Matrix<double, 1, kNumComponents> fr;
        fr << H.transpose(), fy - y_bary[R] * un;
        rate.middleRows(R * nd, nd).noalias() +=
            wl * disc.face_values(f.right_local, true).row(q).transpose() * fr;
      }
    }
  }
  return rate;
}

Eigen::MatrixXd residual_conservative(const SolutionField& field, const MovingMesh& mesh,
                                      std::span<const Vec2> x, std::span<const Vec2> xdot,
                                      const Discretization& disc, const MixtureEOS& eos,
                                      const BoundaryData& bc) {
  return residual(field, mesh, x, xdot, disc, eos, bc).leftCols<4>();
}

Eigen::VectorXd residual_species(const SolutionField& field, const MovingMesh& mesh,
                                 std::span<const Vec2> x, std::span<const Vec2> xdot,
                                 const Discretization& disc, const MixtureEOS& eos,
                                 const BoundaryData& bc) {
  return residual(field, mesh, x, xdot, disc, eos, bc).col(kSpecies);
}

Eigen::VectorXd measure_rates(const MovingMesh& mesh, std::span<const Vec2> x,
                              std::span<const Vec2> xdot, const Discretization& disc) {
  const int ne = mesh.num_elements();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(ne);
  const Quadrature& fq = disc.face();
  for (int e = 0; e < ne; ++e) {
    const ElementGeometry g = element_geometry(mesh, x, e);
    const auto verts = mesh.element_vertices(e);
    for (int l = 0; l < g.num_edges; ++l) {
      for (int q = 0; q < fq.size(); ++q) {
        Vec2 xd;
        if (mesh.dim == 1) {
          xd = xdot[verts[l]];
        } else {
          const double s = fq.points[q][0];
          xd = (1.0 - s) * xdot[verts[l]] + s * xdot[verts[(l + 1) % 3]];
        }
        r[e] += fq.weights[q] * g.edge_length[l] * xd.dot(g.normal[l]);
      }
    }
  }
  return r;
}

}  // namespace dgale
