// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]; no arguments runs all nine.

#include "dgale/driver.hpp"
#include "dgale/mesh_motion.hpp"
#include "dgale/nok_flux.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace dgale;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

ConvergenceTable study(const std::string& name, int degree, const std::vector<int>& ns) {
  const Problem p = find_problem(name);
  RunConfig c = default_config(p, degree);
  c.mesh_mode = MeshMode::ale_mm;
  return convergence_study(c, p, ns);
}

std::string orders(const ConvergenceTable& t) {
  std::string s;
  for (const auto& r : t.rows)
    if (r.order) s += (s.empty() ? "" : " ") + fmt(r.order->l1, 3);
  return s;
}

Outcome convergence(const std::string& name, const std::vector<int>& ns, double p1_min,
                    double p2_min, bool need_monotone) {
  Outcome o{true, ""};
  for (auto [k, bound] : {std::pair{1, p1_min}, std::pair{2, p2_min}}) {
    const ConvergenceTable t = study(name, k, ns);
    const double last = t.rows.back().order->l1;
    const bool ok = last >= bound && (!need_monotone || t.monotone);
    o.pass &= ok;
    o.detail += "P" + std::to_string(k) + " orders [" + orders(t) + "] need >= " + fmt(bound, 3) +
                (need_monotone && !t.monotone ? " (not monotone)" : "") + "; ";
  }
  return o;
}

// 1. Sine wave in 1D.
Outcome criterion1() { return convergence("sine_wave_1d", {40, 80, 160, 320}, 1.90, 2.80, true); }

// 2. Sine wave in 2D.
Outcome criterion2() { return convergence("sine_wave_2d", {4, 8, 16, 32}, 1.85, 2.2, false); }

// 3. Interface in uniform velocity and pressure, every mesh mode and degree.
Outcome criterion3() {
  const Problem p = find_problem("interface_1d");
  Outcome o{true, ""};
  for (int k : {1, 2}) {
    for (MeshMode mode : {MeshMode::eulerian, MeshMode::lagrangian, MeshMode::ale_mm}) {
      RunConfig c = default_config(p, k);
      c.mesh_mode = mode;
      o.detail += "P" + std::to_string(k) + " " + to_string(mode) + " ";
      try {
        const RunResult r = run(c, p);
        const Discretization disc(1, k);
        const Eigen::MatrixXd& V = disc.volume_values();
        double worst = 0.0;
        for (int e = 0; e < r.mesh.num_elements(); ++e)
          for (int q = 0; q < V.rows(); ++q) {
            const PrimitiveState w = primitive_from_values(r.field, e, V.row(q), c.eos);
            worst = std::max({worst, std::abs(w.p - 1.0), std::abs(w.u - 1.0)});
          }
        o.pass &= worst <= 1e-10;
        o.detail += fmt(worst, 2) + "; ";
      } catch (const Error& e) {
        o.pass = false;
        o.detail += std::string("failed: ") + e.what() + "; ";
      }
    }
  }
  o.detail += "max |P-1|, |u-1| at quadrature points, need <= 1e-10 ";
  return o;
}

// 4. Constant 2D state under forced sinusoidal vertex motion.
Outcome criterion4() {
  const MixtureEOS eos{1.4, 1.0, 1.9, 0.0};
  const SideTags periodic{BoundaryTag::periodic, BoundaryTag::periodic, BoundaryTag::periodic,
                          BoundaryTag::periodic};
  double worst = 0.0;
  for (int k : {1, 2}) {
    MovingMesh mesh = build_structured_mesh(Box{}, {8, 8}, 2, periodic);
    const Discretization disc(2, k);
    const PrimitiveState w{1.3, 0.6, -0.4, 2.0, 0.3};
    SolutionField f = project_initial(mesh, disc, eos, [&](const Vec2&) { return w; });
    const SolutionField f0 = f;
    const std::vector<Vec2> x0 = mesh.vertices_old;
    const DgOperator op{mesh, disc, eos, LimiterConfig{}, {}};
    double t = 0.0;
    for (int step = 0; step < 50; ++step) {
      std::vector<Vec2> xdot(mesh.num_vertices());
      for (int v = 0; v < mesh.num_vertices(); ++v) {
        const double s = std::sin(2 * std::numbers::pi * x0[v].x()) *
                         std::sin(2 * std::numbers::pi * x0[v].y());
        xdot[v] = 0.4 * s * std::cos(2 * std::numbers::pi * t) * Vec2(1.0, -0.5);
      }
      mesh.tie_periodic(xdot);
      const double dt = compute_dt(f, mesh, mesh.vertices_old, xdot, eos, 0.15);
      DgStepResult r = dg_rk3_step(op, f, xdot, t, dt);
      f = std::move(r.field);
      mesh.vertices_old = std::move(r.x_new);
      t += dt;
    }
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (int c = 0; c < kNumComponents; ++c)
        worst = std::max(worst, std::abs(f.average(e, c) - f0.average(e, c)));
  }
  return {worst <= 1e-10, "max cell-average drift " + fmt(worst) + " after 50 steps (need <= 1e-10)"};
}

// Half-range moments of sqrt(lam/pi) exp(-lam (u - U)^2) by composite Simpson.
std::pair<long double, long double> half_maxwellian(double U, double lam, bool positive) {
  const long double s = std::sqrt(static_cast<long double>(lam));
  const long double width = 14.0L / s;
  const long double a = positive ? 0.0L : U - width;
  const long double b = positive ? U + width : 0.0L;
  if (b <= a) return {0, 0};
  const int n = 100000;
  const long double h = (b - a) / n;
  long double m0 = 0, m1 = 0;
  for (int i = 0; i <= n; ++i) {
    const long double u = a + i * h;
    const long double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    const long double g =
        s / std::sqrt(std::numbers::pi_v<long double>) * std::exp(-lam * (u - U) * (u - U));
    m0 += w * g;
    m1 += w * u * g;
  }
  return {m0 * h / 3, m1 * h / 3};
}

// 5. Kinetic flux kernel.
Outcome criterion5() {
  const MixtureEOS eos{1.4, 1.0, 1.9, 0.0};
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> rho(0.1, 10.0), vel(-3.0, 3.0), p(0.05, 20.0), y(0.0, 1.0),
      ang(0.0, 2 * std::numbers::pi), g(-2.0, 2.0);
  auto state = [&] { return PrimitiveState{rho(gen), vel(gen), vel(gen), p(gen), y(gen)}; };
  auto unit = [&] {
    const double a = ang(gen);
    return Vec2(std::cos(a), std::sin(a));
  };
  double consistency = 0.0, galilean = 0.0, rotation = 0.0, oracle = 0.0;
  for (int i = 0; i < 10000; ++i) {
    EdgeTrace<double> tr;
    tr.left = tr.right = state();
    tr.normal = unit();
    tr.grid_velocity = Vec2(g(gen), g(gen));
    const State4 H = assemble_H<double>(xi_flux(tr, eos).xi, tr.normal, tr.grid_velocity);
    const State4 exact = exact_moving_flux<double>(tr.left, tr.normal, tr.grid_velocity, eos);
    consistency = std::max(
        consistency, (H - exact).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff()));

    EdgeTrace<double> a;
    a.left = state();
    a.right = state();
    a.normal = unit();
    a.grid_velocity = Vec2(g(gen), g(gen));
    const State4 xa = xi_flux(a, eos).xi;
    const double scale = std::max(1.0, xa.cwiseAbs().maxCoeff());

    EdgeTrace<double> b = a;
    const Vec2 shift(g(gen), g(gen));
    b.left.u += shift.x(), b.left.v += shift.y();
    b.right.u += shift.x(), b.right.v += shift.y();
    b.grid_velocity += shift;
    galilean = std::max(galilean, (xi_flux(b, eos).xi - xa).cwiseAbs().maxCoeff() / scale);

    const Eigen::Rotation2Dd R(ang(gen));
    EdgeTrace<double> c = a;
    const Vec2 ul = R * Vec2(a.left.u, a.left.v), ur = R * Vec2(a.right.u, a.right.v);
    c.left.u = ul.x(), c.left.v = ul.y();
    c.right.u = ur.x(), c.right.v = ur.y();
    c.normal = R * a.normal;
    c.grid_velocity = R * a.grid_velocity;
    rotation = std::max(rotation, (xi_flux(c, eos).xi - xa).cwiseAbs().maxCoeff() / scale);
  }
  std::uniform_real_distribution<double> U(-4.0, 4.0), cs(0.2, 5.0);
  for (int i = 0; i < 40; ++i) {
    const double ul = U(gen), ur = U(gen), cl = cs(gen), cr = cs(gen);
    const auto m = kinetic_moments(ul, ur, cl, cr);
    const auto [p0, p1] = half_maxwellian(ul, m.lambda, true);
    const auto [q0, q1] = half_maxwellian(ur, m.lambda, false);
    oracle = std::max({oracle, std::abs(m.u0_plus - static_cast<double>(p0)),
                       std::abs(m.u1_plus - static_cast<double>(p1)),
                       std::abs(m.u0_minus - static_cast<double>(q0)),
                       std::abs(m.u1_minus - static_cast<double>(q1))});
  }
  const bool pass = consistency <= 1e-12 && oracle <= 1e-10 && galilean <= 1e-12 && rotation <= 1e-12;
  return {pass, "consistency " + fmt(consistency) + ", quadrature " + fmt(oracle) + ", Galilean " +
                    fmt(galilean) + ", rotation " + fmt(rotation)};
}

// 6. Mesh energy gradient against central differences.
Outcome criterion6() {
  MovingMesh mesh = build_structured_mesh(Box{}, {5, 5}, 2);
  std::mt19937 gen(6);
  std::uniform_real_distribution<double> u(-0.04, 0.04), a(0.5, 3.0), r(-0.5, 0.5);
  std::vector<Vec2> x = mesh.vertices_old, xi = mesh.vertices_old;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    x[v] += mesh.constrain(v, Vec2(u(gen), u(gen)));
    xi[v] += mesh.constrain(v, Vec2(u(gen), u(gen)));
  }
  MetricField metric = identity_metric(mesh);
  for (Mat2& M : metric.tensors) {
    Mat2 B;
    B << a(gen), r(gen), r(gen), a(gen);
    M = B * B.transpose() + 0.1 * Mat2::Identity();
  }
  const MeshEnergy E = mesh_energy(mesh, x, xi, metric);
  double worst = 0.0;
  const double h = 1e-6;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    for (int k = 0; k < 2; ++k) {
      std::vector<Vec2> p = xi, m = xi;
      p[v][k] += h;
      m[v][k] -= h;
      const double fd =
          (mesh_energy(mesh, x, p, metric).value - mesh_energy(mesh, x, m, metric).value) / (2 * h);
      worst = std::max(worst, std::abs(fd - E.gradient[v][k]) / std::max(1.0, std::abs(fd)));
    }
  return {worst <= 1e-6, "max relative mismatch " + fmt(worst) + " (need <= 1e-6)"};
}

// 7. Shock/entropy-wave interaction: mesh stays valid and concentrates at the shock.
Outcome criterion7() {
  const Problem p = find_problem("shock_entropy_1d");
  RunConfig c = default_config(p, 1);
  RunResult r;
  try {
    r = run(c, p);
  } catch (const Error& e) {
    return {false, std::string("run failed: ") + e.what()};
  }
  const int ne = r.mesh.num_elements();
  std::vector<double> xc(ne), len(ne), pres(ne);
  for (int e = 0; e < ne; ++e) {
    const auto v = r.mesh.element_vertices(e);
    xc[e] = 0.5 * (r.mesh.vertices_old[v[0]].x() + r.mesh.vertices_old[v[1]].x());
    len[e] = signed_measure(r.mesh, r.mesh.vertices_old, e);
    pres[e] = average_primitive(r.field, e, c.eos).p;
  }
  // The shock is the downstream edge of the compressed region; ahead of it P = 1.
  double xs = xc.front();
  for (int e = 0; e < ne; ++e)
    if (pres[e] > 1.5) xs = std::max(xs, xc[e]);
  double shock_min = 1e300, far_max = 0.0;
  for (int e = 0; e < ne; ++e) {
    if (std::abs(xc[e] - xs) <= 0.25) shock_min = std::min(shock_min, len[e]);
    if (xc[e] >= xs + 0.5) far_max = std::max(far_max, len[e]);
  }
  const bool pass = r.min_measure > 0.0 && far_max > 0.0 && shock_min <= 0.5 * far_max;
  return {pass, "shock at x = " + fmt(xs, 3) + ", min length overall " + fmt(r.min_measure) +
                    ", shock-region min " + fmt(shock_min) + " vs far-field max " + fmt(far_max)};
}

// 8. Water-air shock tube against the Eulerian mesh.
Outcome criterion8() {
  const Problem p = find_problem("water_air_1d");
  RunConfig c = default_config(p, 1);
  c.counts = {500, 1};
  const auto reports = compare_modes(c, p, {MeshMode::eulerian, MeshMode::ale_mm});
  std::string detail;
  bool ok = true;
  for (const ModeReport& m : reports) {
    ok &= m.ok && m.l1_density.has_value();
    detail += to_string(m.mode) + " L1 " + (m.l1_density ? fmt(*m.l1_density) : "n/a") +
              (m.ok ? "" : " failed: " + m.failure) + "; ";
  }
  ok = ok && *reports[1].l1_density <= *reports[0].l1_density;
  return {ok, detail};
}

// 9. Equidistribution under a frozen 1D metric.
Outcome criterion9() {
  const MovingMesh mesh = build_structured_mesh(Box{}, {40, 1}, 1);
  auto M = [](double x) { return 1.0 + 20.0 * std::exp(-100.0 * (x - 0.4) * (x - 0.4)); };
  std::vector<Vec2> x = mesh.vertices_old;
  MmpdeOptions opt;
  opt.tau = 0.01;
  opt.max_substeps = 1000;
  auto ratio = [&](const std::vector<Vec2>& pts) {
    double lo = 1e300, hi = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto v = mesh.element_vertices(e);
      const double mk = 0.5 * (M(pts[v[0]].x()) + M(pts[v[1]].x()));
      const double q = signed_measure(mesh, pts, e) * std::sqrt(mk);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    return hi / lo;
  };
  const double start = ratio(x);
  int iters = 0;
  for (; iters < 200 && ratio(x) > 1.05; ++iters) {
    MetricField metric = identity_metric(mesh);
    for (int v = 0; v < mesh.num_vertices(); ++v) metric.tensors[v](0, 0) = M(x[v].x());
    x = mmpde_correct(mesh, x, mesh.vertices_old, metric, 1.0, opt);
  }
  const double end = ratio(x);
  return {end <= 1.05, "max/min |K| sqrt(M_K) " + fmt(start) + " -> " + fmt(end) + " in " +
                           std::to_string(iters) + " corrector calls (need <= 1.05)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  app.add_option("criteria", selected, "criterion numbers (default: all)")
      ->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::vector<Outcome (*)()> table{criterion1, criterion2, criterion3, criterion4, criterion5,
                                         criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (int id : std::set<int>(selected.begin(), selected.end())) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = table[id - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s[%.1f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    all &= o.pass;
  }
  return all ? 0 : 1;
}
