// Batch front end: run, convergence and compare subcommands.
//
// Exit codes: 0 success, 2 numerical failure, 3 configuration error, 1 anything
// else (I/O).

#include "dgale/output.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>

namespace {

constexpr int kExitNumerical = 2;
constexpr int kExitConfig = 3;

struct Progress {
  double t = 0.0;
  int step = 0;
};

void report_failure(const dgale::FailureRecord& rec, const std::string& dir) {
  if (!dir.empty()) {
    const auto path = dgale::resolve_output_dir(dir);
    std::filesystem::create_directories(path);
    std::ofstream f(path / "failure.json");
    dgale::write_failure_json(f, rec);
  }
  dgale::write_failure_json(std::cerr, rec);
}

int element_of(const dgale::NumericalError& e) {
  if (auto* p = dynamic_cast<const dgale::PositivityError*>(&e)) return p->element();
  if (auto* m = dynamic_cast<const dgale::MeshError*>(&e)) return m->element();
  return -1;
}

int do_run(const std::string& path) {
  const dgale::RunConfig cfg = dgale::load_config(path);
  const dgale::Problem problem = dgale::find_problem(cfg.problem);
  Progress progress;
  std::unique_ptr<dgale::SnapshotWriter> writer;
  std::filesystem::path dir;
  if (!cfg.output.directory.empty()) {
    dir = dgale::resolve_output_dir(cfg.output.directory);
    writer = std::make_unique<dgale::SnapshotWriter>(cfg.output, dir, cfg.t_final);
  }
  auto observer = [&](const dgale::RunState& s) {
    progress = {s.t, s.step};
    if (writer) (*writer)(s);
  };
  try {
    const dgale::RunResult r = dgale::run(cfg, problem, observer);
    if (writer) {
      const dgale::Discretization disc(cfg.dim, cfg.degree);
      writer->finish({r.mesh, disc, r.field, cfg.eos, r.t, r.steps});
      std::ofstream log(dir / "log.csv");
      dgale::write_step_log(log, r.log);
    }
    std::cout << "problem " << cfg.problem << " mode " << dgale::to_string(cfg.mesh_mode)
              << " P" << cfg.degree << ": t = " << r.t << " in " << r.steps
              << " steps, min measure " << r.min_measure << '\n';
    if (problem.exact) {
      const dgale::Discretization disc(cfg.dim, cfg.degree);
      const auto err = dgale::density_error(r, disc, problem.exact);
      std::cout << "density error L1 " << err.l1 << " L2 " << err.l2 << " Linf " << err.linf
                << '\n';
    }
    return 0;
  } catch (const dgale::NumericalError& e) {
    report_failure({"numerical", e.what(), element_of(e), progress.t, progress.step, cfg.problem,
                    dgale::to_string(cfg.mesh_mode)},
                   cfg.output.directory);
    return kExitNumerical;
  }
}

int do_convergence(const std::string& path, const std::vector<int>& n_list) {
  const dgale::RunConfig cfg = dgale::load_config(path);
  const dgale::Problem problem = dgale::find_problem(cfg.problem);
  if (n_list.size() < 2) throw dgale::ConfigError("--n-list needs at least two sizes");
  const dgale::ConvergenceTable table = dgale::convergence_study(cfg, problem, n_list);
  std::ostringstream csv;
  csv << std::setprecision(6) << "N,L1,L1_order,L2,L2_order,Linf,Linf_order\n";
  for (const auto& row : table.rows) {
    csv << row.n << ',' << row.error.l1 << ',' << (row.order ? std::to_string(row.order->l1) : "")
        << ',' << row.error.l2 << ',' << (row.order ? std::to_string(row.order->l2) : "") << ','
        << row.error.linf << ',' << (row.order ? std::to_string(row.order->linf) : "") << '\n';
  }
  std::cout << csv.str();
  if (!table.monotone) std::cout << "warning: L1 errors do not decrease monotonically\n";
  if (!cfg.output.directory.empty()) {
    const auto dir = dgale::resolve_output_dir(cfg.output.directory);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "convergence.csv") << csv.str();
  }
  return 0;
}

int do_compare(const std::string& path, const std::vector<std::string>& mode_names) {
  const dgale::RunConfig cfg = dgale::load_config(path);
  const dgale::Problem problem = dgale::find_problem(cfg.problem);
  std::vector<dgale::MeshMode> modes;
  for (const auto& m : mode_names) modes.push_back(dgale::parse_mesh_mode(m));
  const auto reports = dgale::compare_modes(cfg, problem, modes);
  std::ostringstream csv;
  csv << std::setprecision(8) << "mode,status,steps,min_measure,l1_density,pressure_tv,failure\n";
  bool any_ok = false;
  for (const auto& r : reports) {
    any_ok |= r.ok;
    csv << dgale::to_string(r.mode) << ',' << (r.ok ? "ok" : "failed") << ',' << r.steps << ','
        << r.min_measure << ',' << (r.l1_density ? std::to_string(*r.l1_density) : "") << ','
        << r.pressure_variation << ",\"" << r.failure << "\"\n";
  }
  std::cout << csv.str();
  if (!cfg.output.directory.empty()) {
    const auto dir = dgale::resolve_output_dir(cfg.output.directory);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "compare.csv") << csv.str();
  }
  return any_ok ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG-ALE solver for two-component compressible flow"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "run one configuration");
  run->add_option("config", config, "config file")->required();

  std::vector<int> n_list;
  auto* conv = app.add_subcommand("convergence", "density errors and orders over mesh sizes");
  conv->add_option("config", config, "config file")->required();
  conv->add_option("--n-list", n_list, "cells per direction, coarse to fine")->required();

  std::vector<std::string> modes{"eulerian", "lagrangian", "ale-mm"};
  auto* cmp = app.add_subcommand("compare", "run the same case in several mesh modes");
  cmp->add_option("config", config, "config file")->required();
  cmp->add_option("--modes", modes, "eulerian, lagrangian, ale-mm");

  auto* list = app.add_subcommand("problems", "list the registered problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return do_run(config);
    if (*conv) return do_convergence(config, n_list);
    if (*cmp) return do_compare(config, modes);
    if (*list) {
      for (const auto& name : dgale::problem_names())
        std::cout << name << ": " << dgale::find_problem(name).summary << '\n';
      return 0;
    }
  } catch (const dgale::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dgale::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
