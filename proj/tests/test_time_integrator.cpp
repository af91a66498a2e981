#include "dgale/driver.hpp"
#include "dgale/time_integrator.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace dgale;
using Catch::Approx;

namespace {

const MixtureEOS kAir{1.4, 0.0, 1.4, 0.0};
const SideTags kPeriodic{BoundaryTag::periodic, BoundaryTag::periodic, BoundaryTag::periodic,
                         BoundaryTag::periodic};

SolutionField scalar_field(double value) {
  SolutionField f(1, 1);
  f.coeffs.setConstant(value);
  return f;
}

const MeasureRateFn kNoVolumeChange = [](std::span<const Vec2>) {
  return Eigen::VectorXd::Zero(1).eval();
};

}  // namespace

TEST_CASE("SSP-RK3 reproduces the third-order stability polynomial", "[rk3]") {
  const std::vector<Vec2> x{Vec2::Zero()};
  const std::vector<Vec2> xdot{Vec2::Zero()};
  Eigen::VectorXd v(1);
  v << 2.5;
  for (double z : {-2.0, -0.5, 0.3, 1.0}) {
    const double lambda = z / 0.1;
    auto L = [&](const SolutionField& c, std::span<const Vec2>, double) {
      return (lambda * v[0] * c.coeffs).eval();
    };
    const Rk3Result r =
        rk3_step(scalar_field(1.0), x, v, xdot, 0.0, 0.1, L, kNoVolumeChange, {});
    const double expected = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
    CHECK(r.field.coeffs(0, 0) == Approx(expected).epsilon(1e-14));
    CHECK(r.measures[0] == 2.5);
  }
}

TEST_CASE("stage times integrate cubic forcing exactly", "[rk3]") {
  const std::vector<Vec2> x{Vec2::Zero()};
  const std::vector<Vec2> xdot{Vec2::Zero()};
  Eigen::VectorXd v(1);
  v << 1.0;
  auto L = [](const SolutionField& c, std::span<const Vec2>, double t) {
    return Eigen::MatrixXd::Constant(c.coeffs.rows(), c.coeffs.cols(), 4.0 * t * t * t).eval();
  };
  const double t0 = 0.7, dt = 0.3;
  const Rk3Result r = rk3_step(scalar_field(0.0), x, v, xdot, t0, dt, L, kNoVolumeChange, {});
  CHECK(r.field.coeffs(0, 0) == Approx(std::pow(t0 + dt, 4) - std::pow(t0, 4)).epsilon(1e-14));
}

TEST_CASE("stage coordinates follow the frozen grid velocity", "[rk3]") {
  const std::vector<Vec2> x{Vec2(0.0, 0.0), Vec2(1.0, 2.0)};
  const std::vector<Vec2> xdot{Vec2(0.5, -1.0), Vec2(2.0, 0.0)};
  Eigen::VectorXd v(1);
  v << 1.0;
  std::vector<std::vector<Vec2>> seen_residual, seen_hook;
  std::vector<double> hook_times;
  auto L = [&](const SolutionField& c, std::span<const Vec2> xs, double) {
    seen_residual.emplace_back(xs.begin(), xs.end());
    return Eigen::MatrixXd::Zero(c.coeffs.rows(), c.coeffs.cols()).eval();
  };
  auto hook = [&](SolutionField&, std::span<const Vec2> xs, double t) {
    seen_hook.emplace_back(xs.begin(), xs.end());
    hook_times.push_back(t);
  };
  const double dt = 0.2;
  const Rk3Result r = rk3_step(scalar_field(1.0), x, v, xdot, 1.0, dt, L, kNoVolumeChange, hook);
  REQUIRE(seen_residual.size() == 3);
  REQUIRE(seen_hook.size() == 3);
  const double frac[3] = {0.0, 1.0, 0.5};
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < 2; ++i)
      CHECK((seen_residual[s][i] - (x[i] + frac[s] * dt * xdot[i])).norm() < 1e-15);
  CHECK(hook_times == std::vector<double>{1.2, 1.1, 1.2});
  for (int i = 0; i < 2; ++i) CHECK((r.x[i] - (x[i] + dt * xdot[i])).norm() < 1e-15);
}

TEST_CASE("stage measures match the moved mesh", "[rk3][property]") {
  // Under a linear motion each area is quadratic in time, which RK3 integrates exactly.
  MovingMesh mesh = build_structured_mesh(Box{}, {4, 4}, 2);
  const Discretization disc(2, 1);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<Vec2> xdot(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) xdot[i] = mesh.constrain(i, Vec2(u(gen), u(gen)));
  Eigen::VectorXd v(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) v[e] = signed_measure(mesh, mesh.vertices_old, e);
  const SolutionField f(mesh.num_elements(), disc.n_dof());
  auto L = [](const SolutionField& c, std::span<const Vec2>, double) {
    return Eigen::MatrixXd::Zero(c.coeffs.rows(), c.coeffs.cols()).eval();
  };
  auto rate = [&](std::span<const Vec2> xs) { return measure_rates(mesh, xs, xdot, disc); };
  const Rk3Result r = rk3_step(f, mesh.vertices_old, v, xdot, 0.0, 0.1, L, rate, {});
  for (int e = 0; e < mesh.num_elements(); ++e)
    CHECK(r.measures[e] == Approx(signed_measure(mesh, r.x, e)).epsilon(1e-13));
}

TEST_CASE("time step from the CFL condition", "[rk3]") {
  // Air at rest with c = 1; the 1D inradius is half the cell width.
  for (auto [n, expected] : {std::pair{10, 0.015}, std::pair{20, 0.0075}}) {
    const MovingMesh mesh = build_structured_mesh(Box{}, {n, 1}, 1);
    const Discretization disc(1, 1);
    const SolutionField f = project_initial(mesh, disc, kAir, [](const Vec2&) {
      return PrimitiveState{1.4, 0.0, 0.0, 1.0, 1.0};
    });
    const std::vector<Vec2> zero(mesh.num_vertices(), Vec2::Zero());
    CHECK(compute_dt(f, mesh, mesh.vertices_old, zero, kAir, 0.3) == Approx(expected).epsilon(1e-14));
  }
  // The relative velocity enters: a mesh moving with the flow sees only c.
  const MovingMesh mesh = build_structured_mesh(Box{}, {10, 1}, 1);
  const Discretization disc(1, 1);
  const SolutionField f = project_initial(mesh, disc, kAir, [](const Vec2&) {
    return PrimitiveState{1.4, 3.0, 0.0, 1.0, 1.0};
  });
  const std::vector<Vec2> zero(mesh.num_vertices(), Vec2::Zero());
  const std::vector<Vec2> along(mesh.num_vertices(), Vec2(3.0, 0.0));
  CHECK(compute_dt(f, mesh, mesh.vertices_old, zero, kAir, 0.3) == Approx(0.00375));
  CHECK(compute_dt(f, mesh, mesh.vertices_old, along, kAir, 0.3) == Approx(0.015));
}

TEST_CASE("DG step preserves a uniform state on a moving periodic mesh", "[rk3][property]") {
  const MixtureEOS eos{1.4, 1.0, 1.9, 0.0};
  for (int dim : {1, 2}) {
    for (int k : {1, 2}) {
      MovingMesh mesh = build_structured_mesh(Box{}, {6, 6}, dim, kPeriodic);
      const Discretization disc(dim, k);
      const PrimitiveState w{1.2, 0.7, dim == 2 ? -0.4 : 0.0, 2.0, 0.4};
      const SolutionField f = project_initial(mesh, disc, eos, [&](const Vec2&) { return w; });
      std::mt19937 gen(17);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::vector<Vec2> xdot(mesh.num_vertices());
      for (Vec2& p : xdot) p = Vec2(u(gen), dim == 2 ? u(gen) : 0.0);
      mesh.tie_periodic(xdot);
      const std::vector<Vec2> x_before = mesh.vertices_old;
      const DgOperator op{mesh, disc, eos, LimiterConfig{}, {}};
      const DgStepResult r = dg_rk3_step(op, f, xdot, 0.0, 0.01);
      CHECK(mesh.vertices_old == x_before);
      for (int e = 0; e < mesh.num_elements(); ++e) {
        CHECK((r.field.block(e) - f.block(e)).cwiseAbs().maxCoeff() < 1e-12);
      }
      CHECK(r.troubled == 0);
    }
  }
}

TEST_CASE("inadmissible fields are reported", "[rk3]") {
  const MovingMesh mesh = build_structured_mesh(Box{}, {3, 1}, 1);
  const Discretization disc(1, 1);
  SolutionField f = project_initial(mesh, disc, kAir, [](const Vec2&) {
    return PrimitiveState{1.0, 0.0, 0.0, 1.0, 1.0};
  });
  CHECK_NOTHROW(check_admissible(f, mesh, disc, kAir));
  f.block(1)(1, kRho) = 5.0;  // slope large enough to turn a face density negative
  CHECK_THROWS_AS(check_admissible(f, mesh, disc, kAir), PositivityError);
}
