#include "dgale/driver.hpp"

#include "dgale/mesh_motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dgale {

MovingMesh make_mesh(const RunConfig& config, const Problem& problem) {
  std::array<int, 2> counts = config.counts;
  if (config.dim == 1) counts[1] = 1;
  return build_structured_mesh(problem.domain, counts, config.dim, problem.tags);
}

SolutionField project_initial(const MovingMesh& mesh, const Discretization& disc,
                              const MixtureEOS& eos, const InitialState& initial) {
  SolutionField field(mesh.num_elements(), disc.n_dof());
  const std::span<const Vec2> x = mesh.vertices_old;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int k = 0; k < kNumComponents; ++k) {
      auto f = [&](const Vec2& p) {
        const PrimitiveState w = initial(p);
        if (k == kSpecies) return w.Y;
        return conserved_from_primitive(w, eos)[k];
      };
      field.block(e).col(k) = l2_project(f, mesh, x, e, disc.basis(), disc.volume());
    }
  }
  return field;
}

namespace {

void spreads(const SolutionField& field, const MixtureEOS& eos, StepLog& log) {
  double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
  double umin = pmin, umax = -pmin, vmin = pmin, vmax = -pmin;
  for (int e = 0; e < field.num_elements(); ++e) {
    const PrimitiveState w = average_primitive(field, e, eos);
    pmin = std::min(pmin, w.p);
    pmax = std::max(pmax, w.p);
    umin = std::min(umin, w.u);
    umax = std::max(umax, w.u);
    vmin = std::min(vmin, w.v);
    vmax = std::max(vmax, w.v);
  }
  log.pressure_spread = pmax - pmin;
  log.velocity_spread = std::max(umax - umin, vmax - vmin);
}

std::vector<Vec2> axpy(std::span<const Vec2> x, double a, std::span<const Vec2> v) {
  std::vector<Vec2> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * v[i];
  return out;
}

}  // namespace

RunResult run(const RunConfig& config, const Problem& problem, const RunObserver& observer) {
  config.validate();
  if (config.dim != problem.dim) throw ConfigError("dimension does not match the problem");
  const Discretization disc(config.dim, config.degree);
  const MixtureEOS& eos = config.eos;

  RunResult out;
  out.mesh = make_mesh(config, problem);
  MovingMesh& mesh = out.mesh;
  out.field = project_initial(mesh, disc, eos, problem.initial);
  for (int e = 0; e < mesh.num_elements(); ++e) average_primitive(out.field, e, eos);
  {
    // Projected jumps can overshoot into inadmissible states; only those
    // elements are limited, so smooth data stays untouched.
    std::vector<int> bad;
    for (int e = 0; e < mesh.num_elements(); ++e)
      if (!element_admissible(out.field, e, disc, eos)) bad.push_back(e);
    limit(out.field, bad, mesh, mesh.vertices_old, disc, eos, config.limiter,
          BoundaryData{problem.inflow, 0.0});
    check_admissible(out.field, mesh, disc, eos);
  }
  out.min_measure = min_signed_measure(mesh, mesh.vertices_old);
  if (observer) observer({mesh, disc, out.field, eos, 0.0, 0});

  const std::vector<Vec2> xi_ref = mesh.vertices_old;
  const DgOperator op{mesh, disc, eos, config.limiter, problem.inflow};
  const int nv = mesh.num_vertices();
  const std::vector<Vec2> zero(nv, Vec2::Zero());
  MmpdeOptions mm;
  mm.tau = config.tau;
  mm.max_substeps = config.max_substeps;

  double& t = out.t;
  const double t_end = config.t_final;
  while (t < t_end * (1.0 - 1e-14) && out.steps < config.max_steps) {
    const std::span<const Vec2> x = mesh.vertices_old;
    const BoundaryData bc{problem.inflow, t};

    std::vector<Vec2> v_lag = zero;
    if (config.mesh_mode != MeshMode::eulerian)
      v_lag = lagrangian_velocity(out.field, mesh, x, disc, eos,
                                  config.mesh_mode == MeshMode::lagrangian, bc);

    double dt = std::min(compute_dt(out.field, mesh, x, zero, eos, config.cfl),
                         compute_dt(out.field, mesh, x, v_lag, eos, config.cfl));
    dt = std::min(dt, t_end - t);

    MetricField metric;
    bool have_metric = false;
    StepLog log;
    log.step = out.steps + 1;
    for (int attempt = 0;; ++attempt) {
      try {
        std::vector<Vec2> xdot = zero;
        if (config.mesh_mode != MeshMode::eulerian) {
          const std::vector<Vec2> x_lag = axpy(x, dt, v_lag);
          std::vector<Vec2> x_new = x_lag;
          if (config.mesh_mode == MeshMode::ale_mm) {
            if (!have_metric) {
              const Eigen::VectorXd S = adaptation_quantity(out.field, mesh, x, eos, config.beta);
              metric = build_metric(recover_hessian(S, mesh, x_lag), mesh,
                                    config.metric_sweeps);
              have_metric = true;
            }
            MmpdeReport rep;
            x_new = mmpde_correct(mesh, x_lag, xi_ref, metric, dt, mm, &rep);
            log.mmpde_substeps += rep.substeps;
          }
          xdot = grid_velocity(x, x_new, dt);
          // The corrected velocity may need a smaller step than the estimate.
          const double dt_mesh = compute_dt(out.field, mesh, x, xdot, eos, config.cfl);
          if (dt_mesh < dt * (1.0 - 1e-12) && attempt < 10) {
            dt = dt_mesh;
            continue;
          }
        }
        DgStepResult step = dg_rk3_step(op, out.field, xdot, t, dt);
        mesh.vertices_new = std::move(step.x_new);
        mesh.vertex_velocity = std::move(xdot);
        out.field = std::move(step.field);
        log.troubled = step.troubled;
        break;
      } catch (const NumericalError&) {
        if (attempt >= 10) throw;
        dt *= 0.5;
        ++log.retries;
      }
    }
    // Land exactly on the final time when the remainder is round-off.
    t = (t_end - (t + dt) <= 1e-13 * std::max(1.0, t_end)) ? t_end : t + dt;
    mesh.advance();
    ++out.steps;

    log.t = t;
    log.dt = dt;
    log.min_measure = min_signed_measure(mesh, mesh.vertices_old);
    out.min_measure = std::min(out.min_measure, log.min_measure);
    spreads(out.field, eos, log);
    out.log.push_back(log);
    if (observer) observer({mesh, disc, out.field, eos, t, out.steps});
  }
  if (t < t_end * (1.0 - 1e-14)) throw NumericalError("step limit reached before t_final");
  return out;
}

ErrorNorms density_error(const RunResult& result, const Discretization& disc,
                         const ExactSolution& exact) {
  if (!exact) throw ConfigError("problem has no exact solution");
  const MovingMesh& mesh = result.mesh;
  const std::span<const Vec2> x = mesh.vertices_old;
  const Quadrature& q = disc.volume();
  const Eigen::MatrixXd& V = disc.volume_values();
  ErrorNorms err;
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double area = signed_measure(mesh, x, e);
    total += area;
    const Eigen::VectorXd rho = V * result.field.block(e).col(kRho);
    for (int k = 0; k < q.size(); ++k) {
      const Vec2 p = reference_to_physical(mesh, x, e, q.points[k]);
      const double d = std::abs(rho[k] - exact(p, result.t).rho);
      err.l1 += area * q.weights[k] * d;
      err.l2 += area * q.weights[k] * d * d;
      err.linf = std::max(err.linf, d);
    }
  }
  err.l1 /= total;
  err.l2 = std::sqrt(err.l2 / total);
  return err;
}

ConvergenceTable convergence_study(const RunConfig& config, const Problem& problem,
                                   const std::vector<int>& n_list) {
  if (!problem.exact) throw ConfigError("problem '" + problem.name + "' has no exact solution");
  ConvergenceTable table;
  const Discretization disc(config.dim, config.degree);
  for (int n : n_list) {
    RunConfig c = config;
    c.counts = {n, config.dim == 2 ? n : 1};
    const RunResult r = run(c, problem);
    ConvergenceRow row;
    row.n = n;
    row.error = density_error(r, disc, problem.exact);
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      const double lr = std::log(static_cast<double>(n) / prev.n);
      row.order = ErrorNorms{std::log(prev.error.l1 / row.error.l1) / lr,
                             std::log(prev.error.l2 / row.error.l2) / lr,
                             std::log(prev.error.linf / row.error.linf) / lr};
      if (!(row.error.l1 < prev.error.l1)) table.monotone = false;
    }
    table.rows.push_back(row);
  }
  return table;
}

double pressure_variation(const MovingMesh& mesh, const SolutionField& field,
                          const MixtureEOS& eos) {
  double tv = 0.0;
  for (const Face& f : mesh.faces) {
    if (f.is_boundary()) continue;
    const double jump =
        std::abs(average_primitive(field, f.left, eos).p - average_primitive(field, f.right, eos).p);
    const double w =
        mesh.dim == 1 ? 1.0 : (mesh.vertices_old[f.vertices[1]] - mesh.vertices_old[f.vertices[0]]).norm();
    tv += w * jump;
  }
  return tv;
}

std::vector<ModeReport> compare_modes(const RunConfig& config, const Problem& problem,
                                      const std::vector<MeshMode>& modes) {
  std::vector<ModeReport> reports;
  const Discretization disc(config.dim, config.degree);
  for (MeshMode m : modes) {
    ModeReport rep;
    rep.mode = m;
    RunConfig c = config;
    c.mesh_mode = m;
    try {
      const RunResult r = run(c, problem);
      rep.ok = true;
      rep.steps = r.steps;
      rep.min_measure = r.min_measure;
      rep.pressure_variation = pressure_variation(r.mesh, r.field, c.eos);
      if (problem.exact) rep.l1_density = density_error(r, disc, problem.exact).l1;
    } catch (const Error& e) {
      rep.failure = e.what();
    }
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace dgale
