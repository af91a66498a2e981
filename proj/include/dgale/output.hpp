#pragma once

#include "dgale/driver.hpp"

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgale {

/// One row per element: x,y,rho,U,V,P,Y,gamma,B (barycenter and cell averages).
void write_csv(std::ostream& out, const MovingMesh& mesh, const SolutionField& field,
               const MixtureEOS& eos);
/// Legacy VTK with the cell averages as cell data.
void write_vtk(std::ostream& out, const MovingMesh& mesh, const SolutionField& field,
               const MixtureEOS& eos);
/// Per-step log as CSV.
void write_step_log(std::ostream& out, const std::vector<StepLog>& log);

/// Machine-readable record of a failed run.
struct FailureRecord {
  std::string kind;  // "numerical" or "config"
  std::string message;
  int element = -1;
  double t = 0.0;
  int step = 0;
  std::string problem;
  std::string mesh_mode;
};
void write_failure_json(std::ostream& out, const FailureRecord& record);

/// Directory for run artifacts: `directory` resolved against the root given by
/// the DGALE_OUTPUT_ROOT environment variable when it is relative.
std::filesystem::path resolve_output_dir(const std::string& directory);

/// Observer that writes scheduled snapshots (csv/vtk) and, in 1D, appends the
/// vertex positions of every step to trajectories.csv.
class SnapshotWriter {
 public:
  SnapshotWriter(const OutputConfig& config, const std::filesystem::path& dir, double t_final);

  void operator()(const RunState& state);
  /// Writes the final snapshot if the schedule has not already done so.
  void finish(const RunState& state);

  double last_time() const { return last_t_; }
  int last_step() const { return last_step_; }

 private:
  void snapshot(const RunState& state);

  OutputConfig config_;
  std::filesystem::path dir_;
  double t_final_;
  double next_ = 0.0;
  int index_ = 0;
  double last_t_ = 0.0;
  int last_step_ = 0;
  double written_t_ = -1.0;
  bool csv_ = false;
  bool vtk_ = false;
  bool trajectory_ = false;
  std::ofstream trajectories_;
};

}  // namespace dgale
