#pragma once

#include "dgale/config.hpp"
#include "dgale/time_integrator.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dgale {

struct StepLog {
  int step = 0;
  double t = 0.0;   // time at the end of the step
  double dt = 0.0;
  double min_measure = 0.0;  // smallest element area/length after the step
  int troubled = 0;
  int mmpde_substeps = 0;
  int retries = 0;
  double pressure_spread = 0.0;  // max - min of the cell-average pressure
  double velocity_spread = 0.0;  // same for each velocity component, larger one
};

/// State handed to observers after every step (and once at t = 0).
struct RunState {
  const MovingMesh& mesh;
  const Discretization& disc;
  const SolutionField& field;
  const MixtureEOS& eos;
  double t;
  int step;
};

using RunObserver = std::function<void(const RunState&)>;

struct RunResult {
  MovingMesh mesh;  // vertices_old holds the final positions
  SolutionField field;
  double t = 0.0;
  int steps = 0;
  double min_measure = 0.0;  // over all time levels
  std::vector<StepLog> log;
};

/// Runs a configured problem from t = 0 to t_final. Per step: grid velocity
/// (zero, Lagrangian, or Lagrangian plus MMPDE correction), time step, RK3.
/// A failed step is retried with half the step up to ten times before the
/// NumericalError propagates.
RunResult run(const RunConfig& config, const Problem& problem,
              const RunObserver& observer = {});

/// Mesh and L2-projected initial data of a configuration.
MovingMesh make_mesh(const RunConfig& config, const Problem& problem);
SolutionField project_initial(const MovingMesh& mesh, const Discretization& disc,
                              const MixtureEOS& eos, const InitialState& initial);

struct ErrorNorms {
  double l1 = 0.0;  // normalized by the domain measure
  double l2 = 0.0;  // normalized by the domain measure
  double linf = 0.0;
};

/// Density error of the DG polynomials against the exact solution, by the
/// volume rule on the final mesh.
ErrorNorms density_error(const RunResult& result, const Discretization& disc,
                         const ExactSolution& exact);

struct ConvergenceRow {
  int n = 0;
  ErrorNorms error;
  std::optional<ErrorNorms> order;  // against the previous row
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;  // L1 errors decrease along the table
};

/// Runs `config` for each n (n x n cells in 2D) and tabulates density errors
/// and observed orders log(e_coarse/e_fine)/log(n_fine/n_coarse).
ConvergenceTable convergence_study(const RunConfig& config, const Problem& problem,
                                   const std::vector<int>& n_list);

struct ModeReport {
  MeshMode mode = MeshMode::ale_mm;
  bool ok = false;
  std::string failure;
  std::optional<double> l1_density;  // where an exact solution exists
  double pressure_variation = 0.0;   // total variation of the cell-average pressure
  double min_measure = 0.0;
  int steps = 0;
};

/// Runs the same configuration in each mode; failures are recorded and the
/// remaining modes still run.
std::vector<ModeReport> compare_modes(const RunConfig& config, const Problem& problem,
                                      const std::vector<MeshMode>& modes);

/// Sum over interior faces of |P_L - P_R| weighted by face length in 2D.
double pressure_variation(const MovingMesh& mesh, const SolutionField& field,
                          const MixtureEOS& eos);

}  // namespace dgale
