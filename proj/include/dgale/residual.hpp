#pragma once

#include "dgale/basis.hpp"
#include "dgale/eos.hpp"
#include "dgale/mesh.hpp"

#include <functional>

namespace dgale {

/// Modal coefficients of the four conserved components and the volume
/// fraction. Row e*n_dof + i holds mode i of element e; columns follow Component.
struct SolutionField {
  int n_dof = 0;
  Eigen::MatrixXd coeffs;

  SolutionField() = default;
  SolutionField(int num_elements, int dofs)
      : n_dof(dofs), coeffs(Eigen::MatrixXd::Zero(num_elements * dofs, kNumComponents)) {}

  int num_elements() const { return n_dof ? static_cast<int>(coeffs.rows()) / n_dof : 0; }
  auto block(int e) { return coeffs.middleRows(e * n_dof, n_dof); }
  auto block(int e) const { return coeffs.middleRows(e * n_dof, n_dof); }
  double average(int e, int component) const { return coeffs(e * n_dof, component); }
  State4 conserved_average(int e) const {
    return coeffs.row(e * n_dof).head<4>().transpose();
  }
};

/// Primitive state from a row of basis values applied to an element block.
PrimitiveState primitive_from_values(const SolutionField& field, int e,
                                     const Eigen::Ref<const Eigen::RowVectorXd>& phi,
                                     const MixtureEOS& eos);
/// Primitive state built from the cell averages.
PrimitiveState average_primitive(const SolutionField& field, int e, const MixtureEOS& eos);

/// Far-field data for inflow sides; without it every open side copies the
/// interior trace.
using InflowState = std::function<PrimitiveState(const Vec2& x, double t)>;

struct BoundaryData {
  InflowState inflow;
  double time = 0.0;
};

/// Exterior trace for a boundary face point.
PrimitiveState ghost_state(BoundaryTag tag, const PrimitiveState& inside, const Vec2& normal,
                           const Vec2& x, const BoundaryData& bc);

/// Moment rates d/dt int_K w psi for all five columns on the mesh at
/// positions `x` with nodal grid velocity `xdot`.
Eigen::MatrixXd residual(const SolutionField& field, const MovingMesh& mesh,
                         std::span<const Vec2> x, std::span<const Vec2> xdot,
                         const Discretization& disc, const MixtureEOS& eos,
                         const BoundaryData& bc = {});

/// Rates of the four conserved components only.
Eigen::MatrixXd residual_conservative(const SolutionField& field, const MovingMesh& mesh,
                                      std::span<const Vec2> x, std::span<const Vec2> xdot,
                                      const Discretization& disc, const MixtureEOS& eos,
                                      const BoundaryData& bc = {});

/// Rates of the volume-fraction moments, including the non-conservative
/// barycenter correction.
Eigen::VectorXd residual_species(const SolutionField& field, const MovingMesh& mesh,
                                 std::span<const Vec2> x, std::span<const Vec2> xdot,
                                 const Discretization& disc, const MixtureEOS& eos,
                                 const BoundaryData& bc = {});

/// Rate of change of each element measure, int_{dK} xdot . n, with the
/// face rule.
Eigen::VectorXd measure_rates(const MovingMesh& mesh, std::span<const Vec2> x,
                              std::span<const Vec2> xdot, const Discretization& disc);

}  // namespace dgale
