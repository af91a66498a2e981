#pragma once

#include "dgale/limiter.hpp"
#include "dgale/problems.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgale {

enum class MeshMode { eulerian, lagrangian, ale_mm };

MeshMode parse_mesh_mode(const std::string& name);
std::string to_string(MeshMode mode);

struct OutputConfig {
  std::string directory;              // empty: no files
  double interval = 0.0;              // snapshot spacing in time; 0 writes the final state only
  std::vector<std::string> formats{"csv"};  // csv, vtk, trajectory
};

/// Everything one run needs. Defaults come from the problem; a config file
/// overrides individual fields.
struct RunConfig {
  std::string problem;
  int dim = 1;
  std::array<int, 2> counts{1, 1};
  int degree = 1;
  double cfl = 0.3;
  double t_final = 0.0;
  MeshMode mesh_mode = MeshMode::ale_mm;
  double tau = 0.1;
  std::array<double, 3> beta{1.0, 1.0, 0.0};
  int max_substeps = 400;
  int metric_sweeps = 3;  // low-pass passes over the metric
  int max_steps = 1000000;
  LimiterConfig limiter;
  MixtureEOS eos;
  OutputConfig output;

  void validate() const;
};

/// Defaults for a registered problem at its reference resolution; the CFL
/// number follows the degree (0.3 for P1, 0.15 for P2).
RunConfig default_config(const Problem& problem, int degree = 1);

/// Parses an INI-style config. Sections: [run] problem degree cfl t_final
/// mesh_mode max_steps; [mesh] counts; [motion] tau beta max_substeps
/// metric_sweeps;
/// [limiter] m_tvb limit_species enabled; [eos] gamma1 B1 gamma2 B2;
/// [output] directory interval formats. Unknown keys throw ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace dgale
