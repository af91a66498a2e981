#include "dgale/time_integrator.hpp"

#include <cmath>
#include <limits>

namespace dgale {

namespace {

void scale_rows(SolutionField& f, const Eigen::VectorXd& s) {
  for (int e = 0; e < f.num_elements(); ++e) f.block(e) *= s[e];
}

}  // namespace

Rk3Result rk3_step(const SolutionField& field, std::span<const Vec2> x_n,
                   const Eigen::VectorXd& measures_n, std::span<const Vec2> xdot, double t_n,
                   double dt, const ResidualFn& residual_fn, const MeasureRateFn& measure_rate,
                   const StageHook& hook, const std::function<void(std::span<Vec2>)>& fix_positions) {
  const std::size_t nv = x_n.size();
  // The stage combinations of a linear motion reduce to x^n + frac dt xdot;
  // forming them directly keeps a fixed mesh bit-identical.
  auto advance = [&](double frac) {
    std::vector<Vec2> out(nv);
    for (std::size_t i = 0; i < nv; ++i) out[i] = x_n[i] + (frac * dt) * xdot[i];
    if (fix_positions) fix_positions(out);
    return out;
  };

  SolutionField m_n = field;
  scale_rows(m_n, measures_n);

  auto stage = [&](const SolutionField& c_prev, std::span<const Vec2> x_prev, double t_prev,
                   const Eigen::VectorXd& v_prev, const SolutionField& m_prev, double a, double b,
                   std::span<const Vec2> x_stage, double t_stage, SolutionField& c_out,
                   Eigen::VectorXd& v_out, SolutionField& m_out) {
    const Eigen::MatrixXd L = residual_fn(c_prev, x_prev, t_prev);
    const Eigen::VectorXd vr = measure_rate(x_prev);
    m_out = m_prev;
    m_out.coeffs = a * m_n.coeffs + b * (m_prev.coeffs + dt * L);
    v_out = a * measures_n + b * (v_prev + dt * vr);
    for (int e = 0; e < v_out.size(); ++e)
      if (!(v_out[e] > 0.0)) throw MeshError("non-positive stage measure", e);
    c_out = m_out;
    scale_rows(c_out, v_out.cwiseInverse());
    if (hook) hook(c_out, x_stage, t_stage);
    // The hook may have limited the coefficients; the moments follow.
    m_out = c_out;
    scale_rows(m_out, v_out);
  };

  const std::vector<Vec2> x1 = advance(1.0);
  SolutionField c1, m1;
  Eigen::VectorXd v1;
  stage(field, x_n, t_n, measures_n, m_n, 0.0, 1.0, x1, t_n + dt, c1, v1, m1);

  const std::vector<Vec2> x2 = advance(0.5);
  SolutionField c2, m2;
  Eigen::VectorXd v2;
  stage(c1, x1, t_n + dt, v1, m1, 0.75, 0.25, x2, t_n + 0.5 * dt, c2, v2, m2);

  Rk3Result out;
  out.x = advance(1.0);
  SolutionField m3;
  stage(c2, x2, t_n + 0.5 * dt, v2, m2, 1.0 / 3.0, 2.0 / 3.0, out.x, t_n + dt, out.field,
        out.measures, m3);
  return out;
}

void check_admissible(const SolutionField& field, const MovingMesh& mesh,
                      const Discretization& disc, const MixtureEOS& eos) {
  const Eigen::MatrixXd& V = disc.volume_values();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int q = 0; q < V.rows(); ++q) primitive_from_values(field, e, V.row(q), eos);
    for (int l = 0; l < disc.n_local_faces(); ++l) {
      const Eigen::MatrixXd& F = disc.face_values(l, false);
      for (int q = 0; q < F.rows(); ++q) primitive_from_values(field, e, F.row(q), eos);
    }
  }
}

DgStepResult dg_rk3_step(const DgOperator& op, const SolutionField& field,
                         std::span<const Vec2> xdot, double t_n, double dt) {
  const MovingMesh& mesh = op.mesh;
  const std::span<const Vec2> x_n = mesh.vertices_old;
  Eigen::VectorXd v_n(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    v_n[e] = signed_measure(mesh, x_n, e);
    if (!(v_n[e] > 0.0)) throw MeshError("non-positive element", e);
  }
  int troubled = 0;
  BoundaryData bc{op.inflow, t_n};

  auto residual_fn = [&](const SolutionField& c, std::span<const Vec2> x, double t) {
    bc.time = t;
    return residual(c, mesh, x, xdot, op.disc, op.eos, bc);
  };
  auto measure_fn = [&](std::span<const Vec2> x) { return measure_rates(mesh, x, xdot, op.disc); };
  auto hook = [&](SolutionField& c, std::span<const Vec2> x, double t) {
    bc.time = t;
    for (int e = 0; e < mesh.num_elements(); ++e) average_primitive(c, e, op.eos);
    if (op.limiter.enabled) {
      const auto bad = detect_troubled(c, mesh, x, op.disc, op.eos, op.limiter, bc);
      troubled += static_cast<int>(bad.size());
      limit(c, bad, mesh, x, op.disc, op.eos, op.limiter, bc);
    }
    check_admissible(c, mesh, op.disc, op.eos);
  };
  auto fix = [&](std::span<Vec2> x) { mesh.enforce_periodic(x); };

  Rk3Result r = rk3_step(field, x_n, v_n, xdot, t_n, dt, residual_fn, measure_fn, hook, fix);
  if (min_signed_measure(mesh, r.x) <= 0.0) throw MeshError("inverted element after step");
  return {std::move(r.field), std::move(r.x), troubled};
}

double compute_dt(const SolutionField& field, const MovingMesh& mesh, std::span<const Vec2> x,
                  std::span<const Vec2> xdot, const MixtureEOS& eos, double cfl) {
  double dt = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const PrimitiveState w = average_primitive(field, e, eos);
    const ElementGeometry g = element_geometry(mesh, x, e);
    const auto verts = mesh.element_vertices(e);
    Vec2 xd = Vec2::Zero();
    for (int v : verts) xd += xdot[v];
    xd /= static_cast<double>(verts.size());
    const double speed = (Vec2(w.u, w.v) - xd).norm() + sound_speed(w, eos);
    if (!std::isfinite(speed)) throw NumericalError("non-finite wave speed");
    dt = std::min(dt, cfl * g.inradius / speed);
  }
  return dt;
}

}  // namespace dgale
