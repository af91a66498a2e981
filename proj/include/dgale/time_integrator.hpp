#pragma once

#include "dgale/limiter.hpp"

#include <functional>

namespace dgale {

/// Moment rates on the mesh at positions x and time t.
using ResidualFn =
    std::function<Eigen::MatrixXd(const SolutionField&, std::span<const Vec2> x, double t)>;
/// Rate of change of the element measures at positions x.
using MeasureRateFn = std::function<Eigen::VectorXd(std::span<const Vec2> x)>;
/// Post-stage hook (limiting and admissibility checks) on the stage mesh.
using StageHook = std::function<void(SolutionField&, std::span<const Vec2> x, double t)>;

struct Rk3Result {
  SolutionField field;
  std::vector<Vec2> x;
  Eigen::VectorXd measures;
};

/// One SSP-RK3 step that co-evolves vertex coordinates and moments. Moments
/// are m = V c with the modal basis orthonormal on each element, so the mass
/// matrix is V times the identity; V follows the same Runge-Kutta update as
/// the moments (driven by `measure_rate`), which keeps uniform states exact.
Rk3Result rk3_step(const SolutionField& field, std::span<const Vec2> x_n,
                   const Eigen::VectorXd& measures_n, std::span<const Vec2> xdot, double t_n,
                   double dt, const ResidualFn& residual_fn, const MeasureRateFn& measure_rate,
                   const StageHook& hook, const std::function<void(std::span<Vec2>)>& fix_positions = {});

/// Everything the DG stage operator needs.
struct DgOperator {
  const MovingMesh& mesh;
  const Discretization& disc;
  const MixtureEOS& eos;
  LimiterConfig limiter;
  InflowState inflow;
};

struct DgStepResult {
  SolutionField field;
  std::vector<Vec2> x_new;
  int troubled = 0;  // troubled cells summed over the three stages
};

/// RK3 step of the DG-ALE scheme on `op.mesh` from x^n = mesh.vertices_old
/// with the frozen nodal grid velocity `xdot`. Throws NumericalError on loss of
/// admissibility; the inputs are never modified.
DgStepResult dg_rk3_step(const DgOperator& op, const SolutionField& field,
                         std::span<const Vec2> xdot, double t_n, double dt);

/// Checks density and P+B at every volume and face quadrature point.
void check_admissible(const SolutionField& field, const MovingMesh& mesh,
                      const Discretization& disc, const MixtureEOS& eos);

/// dt = cfl min_K r_K / (|U_K - Xdot_K| + c_K) with cell averages and the mean
/// vertex velocity of each element.
double compute_dt(const SolutionField& field, const MovingMesh& mesh, std::span<const Vec2> x,
                  std::span<const Vec2> xdot, const MixtureEOS& eos, double cfl);

}  // namespace dgale
