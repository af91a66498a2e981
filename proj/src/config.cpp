#include "dgale/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>

namespace dgale {

MeshMode parse_mesh_mode(const std::string& name) {
  if (name == "eulerian") return MeshMode::eulerian;
  if (name == "lagrangian") return MeshMode::lagrangian;
  if (name == "ale-mm") return MeshMode::ale_mm;
  throw ConfigError("unknown mesh_mode '" + name + "' (eulerian, lagrangian, ale-mm)");
}

std::string to_string(MeshMode mode) {
  switch (mode) {
    case MeshMode::eulerian: return "eulerian";
    case MeshMode::lagrangian: return "lagrangian";
    case MeshMode::ale_mm: return "ale-mm";
  }
  return "?";
}

void RunConfig::validate() const {
  auto finite = [](double v, const char* what) {
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
  };
  if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
  if (degree != 1 && degree != 2) throw ConfigError("degree must be 1 or 2");
  if (counts[0] < 1 || (dim == 2 && counts[1] < 1)) throw ConfigError("counts must be >= 1");
  finite(cfl, "cfl");
  finite(t_final, "t_final");
  finite(tau, "tau");
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("t_final must be >= 0");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  for (double b : beta)
    if (!std::isfinite(b) || b < 0.0) throw ConfigError("beta entries must be finite and >= 0");
  if (max_substeps < 1 || max_steps < 1) throw ConfigError("step limits must be >= 1");
  if (metric_sweeps < 0) throw ConfigError("metric_sweeps must be >= 0");
  if (!std::isfinite(output.interval) || output.interval < 0.0)
    throw ConfigError("output interval must be >= 0");
  for (const auto& f : output.formats)
    if (f != "csv" && f != "vtk" && f != "trajectory") throw ConfigError("unknown format '" + f + "'");
  limiter.validate();
  eos.validate();
}

RunConfig default_config(const Problem& problem, int degree) {
  RunConfig c;
  c.problem = problem.name;
  c.dim = problem.dim;
  c.counts = problem.counts;
  if (problem.dim == 1) c.counts[1] = 1;
  c.degree = degree;
  c.cfl = degree == 1 ? 0.3 : 0.15;
  c.t_final = problem.t_final;
  c.tau = problem.tau;
  c.beta = problem.beta;
  c.limiter.m_tvb = problem.m_tvb;
  c.eos = problem.eos;
  return c;
}

namespace {

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": not an integer: '" + s + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": not a boolean: '" + s + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  std::map<std::string, std::vector<std::string>> values;
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    const std::string key = it.fullname();
    if (values.count(key)) throw ConfigError("duplicate key '" + key + "'");
    values[key] = it.inputs;
  }

  auto take = [&](const std::string& key) -> std::vector<std::string> {
    auto it = values.find(key);
    if (it == values.end()) return {};
    auto v = it->second;
    values.erase(it);
    if (v.empty()) throw ConfigError(key + ": missing value");
    return v;
  };
  auto scalar = [&](const std::string& key) -> std::string {
    auto v = take(key);
    if (v.size() > 1) throw ConfigError(key + ": expected one value");
    return v.empty() ? std::string() : v[0];
  };

  const std::string problem_name = scalar("run.problem");
  if (problem_name.empty()) throw ConfigError("run.problem is required");
  const Problem problem = find_problem(problem_name);
  int degree = 1;
  if (auto s = scalar("run.degree"); !s.empty()) degree = to_int("run.degree", s);
  RunConfig c = default_config(problem, degree);

  if (auto s = scalar("run.cfl"); !s.empty()) c.cfl = to_double("run.cfl", s);
  if (auto s = scalar("run.t_final"); !s.empty()) c.t_final = to_double("run.t_final", s);
  if (auto s = scalar("run.mesh_mode"); !s.empty()) c.mesh_mode = parse_mesh_mode(s);
  if (auto s = scalar("run.max_steps"); !s.empty()) c.max_steps = to_int("run.max_steps", s);
  if (auto v = take("mesh.counts"); !v.empty()) {
    if (static_cast<int>(v.size()) != c.dim)
      throw ConfigError("mesh.counts: expected " + std::to_string(c.dim) + " values");
    for (std::size_t i = 0; i < v.size(); ++i) c.counts[i] = to_int("mesh.counts", v[i]);
  }
  if (auto s = scalar("motion.tau"); !s.empty()) c.tau = to_double("motion.tau", s);
  if (auto v = take("motion.beta"); !v.empty()) {
    if (v.size() != 3) throw ConfigError("motion.beta: expected 3 values");
    for (int i = 0; i < 3; ++i) c.beta[i] = to_double("motion.beta", v[i]);
  }
  if (auto s = scalar("motion.max_substeps"); !s.empty())
    c.max_substeps = to_int("motion.max_substeps", s);
  if (auto s = scalar("motion.metric_sweeps"); !s.empty())
    c.metric_sweeps = to_int("motion.metric_sweeps", s);
  if (auto s = scalar("limiter.m_tvb"); !s.empty()) c.limiter.m_tvb = to_double("limiter.m_tvb", s);
  if (auto s = scalar("limiter.limit_species"); !s.empty())
    c.limiter.limit_species = to_bool("limiter.limit_species", s);
  if (auto s = scalar("limiter.enabled"); !s.empty())
    c.limiter.enabled = to_bool("limiter.enabled", s);
  if (auto s = scalar("eos.gamma1"); !s.empty()) c.eos.gamma1 = to_double("eos.gamma1", s);
  if (auto s = scalar("eos.B1"); !s.empty()) c.eos.B1 = to_double("eos.B1", s);
  if (auto s = scalar("eos.gamma2"); !s.empty()) c.eos.gamma2 = to_double("eos.gamma2", s);
  if (auto s = scalar("eos.B2"); !s.empty()) c.eos.B2 = to_double("eos.B2", s);
  if (auto s = scalar("output.directory"); !s.empty()) c.output.directory = s;
  if (auto s = scalar("output.interval"); !s.empty())
    c.output.interval = to_double("output.interval", s);
  if (auto v = take("output.formats"); !v.empty()) {
    c.output.formats.clear();
    for (const auto& f : v)
      for (const auto& part : CLI::detail::split(f, ','))
        if (!part.empty()) c.output.formats.push_back(CLI::detail::trim_copy(part));
  }

  if (!values.empty()) throw ConfigError("unknown key '" + values.begin()->first + "'");
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace dgale
