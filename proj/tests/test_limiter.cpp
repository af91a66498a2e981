#include "dgale/driver.hpp"
#include "dgale/limiter.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace dgale;
using Catch::Approx;

namespace {

const MixtureEOS kEos{1.4, 1.0, 1.9, 0.0};
const SideTags kPeriodic{BoundaryTag::periodic, BoundaryTag::periodic, BoundaryTag::periodic,
                         BoundaryTag::periodic};

PrimitiveState step(const Vec2& p) {
  const bool left = p.x() < 0.5;
  return {left ? 1.0 : 0.5, 0.0, 0.0, left ? 1.0 : 0.5, left ? 0.7 : 0.3};
}

}  // namespace

TEST_CASE("TVB minmod", "[limiter]") {
  CHECK(tvb_minmod(0.3, {0.5, 0.4}, 0.0) == 0.3);
  CHECK(tvb_minmod(0.6, {0.5, 0.4}, 0.0) == 0.4);
  CHECK(tvb_minmod(-0.6, {-0.5, -0.9}, 0.0) == -0.5);
  CHECK(tvb_minmod(0.6, {-0.5, 0.4}, 0.0) == 0.0);
  CHECK(tvb_minmod(0.6, {0.0}, 0.0) == 0.0);
  // Below the bound the first argument passes untouched.
  CHECK(tvb_minmod(0.6, {-0.5, 0.4}, 0.7) == 0.6);
}

TEST_CASE("constant states are never troubled", "[limiter]") {
  for (int dim : {1, 2}) {
    for (int k : {1, 2}) {
      const MovingMesh mesh = build_structured_mesh(Box{}, {6, 5}, dim, kPeriodic);
      const Discretization disc(dim, k);
      const SolutionField f = project_initial(mesh, disc, kEos, [](const Vec2&) {
        return PrimitiveState{2.0, 0.3, -0.4, 5.0, 0.7};
      });
      CHECK(detect_troubled(f, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{}).empty());
    }
  }
}

TEST_CASE("an isolated spike is flagged without the TVB allowance", "[limiter]") {
  const MovingMesh mesh = build_structured_mesh(Box{}, {10, 1}, 1, kPeriodic);
  const Discretization disc(1, 1);
  // Spike of ten times the background, with a slope so its face deviations are non-zero.
  const SolutionField f = project_initial(mesh, disc, kEos, [](const Vec2& p) {
    const bool in = p.x() > 0.5 && p.x() < 0.6;
    return PrimitiveState{in ? 10.0 + 20.0 * (p.x() - 0.55) : 1.0, 0.0, 0.0, 1.0, 0.5};
  });
  const auto t = detect_troubled(f, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{});
  CHECK(std::find(t.begin(), t.end(), 5) != t.end());

  LimiterConfig off;
  off.enabled = false;
  CHECK(detect_troubled(f, mesh, mesh.vertices_old, disc, kEos, off).empty());
}

TEST_CASE("a large TVB constant leaves smooth data alone", "[limiter]") {
  for (int dim : {1, 2}) {
    for (int k : {1, 2}) {
      const MovingMesh mesh = build_structured_mesh(Box{}, {20, 20}, dim, kPeriodic);
      const Discretization disc(dim, k);
      const SolutionField f = project_initial(mesh, disc, kEos, [](const Vec2& p) {
        return PrimitiveState{1.0 + 0.2 * std::sin(2 * std::numbers::pi * (p.x() + p.y())), 1.0,
                              -0.5, 1.0, 0.5};
      });
      LimiterConfig cfg;
      cfg.m_tvb = 100.0;
      CHECK(detect_troubled(f, mesh, mesh.vertices_old, disc, kEos, cfg).empty());
      // Without the allowance smooth extrema get clipped.
      CHECK_FALSE(detect_troubled(f, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{}).empty());
    }
  }
}

TEST_CASE("limiting keeps averages and leaves untroubled elements bit-identical",
          "[limiter][property]") {
  for (int dim : {1, 2}) {
    for (int k : {1, 2}) {
      const MovingMesh mesh = build_structured_mesh(Box{}, {9, 7}, dim);
      const Discretization disc(dim, k);
      SolutionField f = project_initial(mesh, disc, kEos, [](const Vec2& p) {
        // Oblique step with a smooth velocity.
        return step(Vec2(p.x() + 0.3 * p.y(), 0.0));
      });
      const SolutionField before = f;
      const auto troubled = detect_troubled(f, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{});
      REQUIRE_FALSE(troubled.empty());

      SolutionField untouched = f;
      limit(untouched, {}, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{});
      CHECK(untouched.coeffs == before.coeffs);

      limit(f, troubled, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{});
      for (int e = 0; e < mesh.num_elements(); ++e) {
        const bool hit = std::find(troubled.begin(), troubled.end(), e) != troubled.end();
        for (int c = 0; c < kNumComponents; ++c)
          CHECK(f.average(e, c) == Approx(before.average(e, c)).margin(1e-14));
        if (!hit) {
          CHECK(f.block(e) == before.block(e));
        } else if (k == 2) {
          // Limited density and volume fraction are linear.
          const int high = disc.n_dof() - (dim + 1);
          CHECK(f.block(e).col(kRho).tail(high).cwiseAbs().maxCoeff() < 1e-14);
          CHECK(f.block(e).col(kSpecies).tail(high).cwiseAbs().maxCoeff() < 1e-14);
        }
      }
    }
  }
}

TEST_CASE("limited 1D density stays between neighboring averages", "[limiter][property]") {
  const MovingMesh mesh = build_structured_mesh(Box{}, {40, 1}, 1);
  const Discretization disc(1, 2);
  SolutionField f = project_initial(mesh, disc, kEos, [](const Vec2& p) {
    return PrimitiveState{p.x() < 0.33 ? 3.0 : 1.0 + 0.5 * std::sin(10 * p.x()), 0.0, 0.0, 1.0,
                          0.5};
  });
  std::vector<double> mean(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) mean[e] = f.average(e, kRho);
  const auto troubled = detect_troubled(f, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{});
  REQUIRE_FALSE(troubled.empty());
  limit(f, troubled, mesh, mesh.vertices_old, disc, kEos, LimiterConfig{});
  const Eigen::VectorXd left = disc.basis().values(Vec2(0.0, 0.0));
  const Eigen::VectorXd right = disc.basis().values(Vec2(1.0, 0.0));
  for (int e : troubled) {
    const int lo = std::max(e - 1, 0), hi = std::min(e + 1, mesh.num_elements() - 1);
    const double mn = std::min({mean[lo], mean[e], mean[hi]});
    const double mx = std::max({mean[lo], mean[e], mean[hi]});
    for (const Eigen::VectorXd& phi : {left, right}) {
      const double v = f.block(e).col(kRho).dot(phi);
      CHECK(v >= mn - 1e-12);
      CHECK(v <= mx + 1e-12);
    }
  }
}

TEST_CASE("elements with inadmissible traces are flagged and repaired", "[limiter]") {
  // A projected water-air jump overshoots the volume fraction inside the cut cell.
  const MixtureEOS water_air{4.4, 6e8, 1.4, 0.0};
  const MovingMesh mesh = build_structured_mesh(Box{}, {7, 1}, 1);
  const Discretization disc(1, 1);
  SolutionField f = project_initial(mesh, disc, water_air, [](const Vec2& p) {
    return p.x() < 0.45 ? PrimitiveState{1e3, 0.0, 0.0, 1e9, 1.0}
                        : PrimitiveState{50.0, 0.0, 0.0, 1e5, 0.0};
  });
  std::vector<int> bad;
  for (int e = 0; e < mesh.num_elements(); ++e)
    if (!element_admissible(f, e, disc, water_air)) bad.push_back(e);
  REQUIRE(bad == std::vector<int>{3});
  const auto troubled = detect_troubled(f, mesh, mesh.vertices_old, disc, water_air, LimiterConfig{});
  CHECK(std::find(troubled.begin(), troubled.end(), 3) != troubled.end());
  const SolutionField before = f;
  limit(f, troubled, mesh, mesh.vertices_old, disc, water_air, LimiterConfig{});
  for (int e = 0; e < mesh.num_elements(); ++e) {
    CHECK(element_admissible(f, e, disc, water_air));
    for (int c = 0; c < kNumComponents; ++c)
      CHECK(f.average(e, c) == Approx(before.average(e, c)).epsilon(1e-14));
  }
}
