#pragma once

#include "dgale/residual.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace dgale {

using InitialState = std::function<PrimitiveState(const Vec2& x)>;
using ExactSolution = std::function<PrimitiveState(const Vec2& x, double t)>;

/// A benchmark: domain, boundary tags, materials, initial data and the
/// defaults its runs use.
struct Problem {
  std::string name;
  std::string summary;
  int dim = 1;
  Box domain;
  SideTags tags{};
  MixtureEOS eos;
  double t_final = 0.0;
  std::array<int, 2> counts{1, 1};  // reference resolution
  InitialState initial;
  InflowState inflow;   // far field for inflow sides, may be empty
  ExactSolution exact;  // may be empty
  double tau = 0.1;
  std::array<double, 3> beta{1.0, 1.0, 0.0};
  double m_tvb = 0.0;
  bool smooth = false;  // accuracy test
};

/// Names of all registered problems.
std::vector<std::string> problem_names();
/// Looks a problem up by name; throws ConfigError for unknown names.
Problem find_problem(const std::string& name);

}  // namespace dgale
