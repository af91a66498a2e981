#include "dgale/problems.hpp"

#include "dgale/riemann_exact.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace dgale {

namespace {

using T = BoundaryTag;
constexpr double kPi = std::numbers::pi;

PrimitiveState prim(double rho, double u, double v, double p, double Y) {
  return {rho, u, v, p, Y};
}

// Smooth density and volume-fraction wave advected with unit speed.
Problem sine_wave_1d() {
  Problem p;
  p.name = "sine_wave_1d";
  p.summary = "periodic density/volume-fraction wave, unit velocity and pressure";
  p.dim = 1;
  p.domain = {Vec2(0.0, 0.0), Vec2(2.0, 1.0)};
  p.tags = {T::periodic, T::periodic, T::periodic, T::periodic};
  p.eos = {1.4, 1.0, 1.9, 0.0};
  p.t_final = 0.5;
  p.counts = {40, 1};
  p.exact = [](const Vec2& x, double t) {
    const double s = kPi * (x.x() - t);
    return prim(1.0 + 0.2 * std::sin(s), 1.0, 0.0, 1.0, 0.5 + 0.5 * std::sin(s));
  };
  p.initial = [e = p.exact](const Vec2& x) { return e(x, 0.0); };
  p.tau = 0.1;
  p.m_tvb = 50.0;
  p.smooth = true;
  return p;
}

// A single material interface in a uniform stream.
Problem interface_1d() {
  Problem p;
  p.name = "interface_1d";
  p.summary = "material interface moving with constant velocity and pressure";
  p.dim = 1;
  p.domain = {Vec2(-5.0, 0.0), Vec2(5.0, 1.0)};
  p.tags = {T::inflow, T::outflow, T::outflow, T::outflow};
  p.eos = {1.4, 1.0, 1.9, 0.0};
  p.t_final = 2.0;
  p.counts = {100, 1};
  p.exact = [](const Vec2& x, double t) {
    return x.x() - t <= 0.0 ? prim(1.0, 1.0, 0.0, 1.0, 1.0) : prim(0.125, 1.0, 0.0, 1.0, 0.0);
  };
  p.initial = [e = p.exact](const Vec2& x) { return e(x, 0.0); };
  p.inflow = p.exact;
  p.tau = 1e-3;
  p.m_tvb = 10.0;
  return p;
}

// Mach 3 shock running into a sinusoidal density field of a second material.
Problem shock_entropy_1d() {
  Problem p;
  p.name = "shock_entropy_1d";
  p.summary = "shock interacting with a two-material entropy wave";
  p.dim = 1;
  p.domain = {Vec2(-5.0, 0.0), Vec2(5.0, 1.0)};
  p.tags = {T::inflow, T::outflow, T::outflow, T::outflow};
  p.eos = {1.4, 1.0, 1.9, 0.0};
  p.t_final = 1.8;
  p.counts = {150, 1};
  p.initial = [](const Vec2& x) {
    if (x.x() <= -4.0) return prim(3.857143, 2.629369, 0.0, 31.0 / 3.0, 1.0);
    return prim(1.0 + 0.2 * std::sin(5.0 * x.x()), 0.0, 0.0, 1.0, 0.0);
  };
  p.inflow = [init = p.initial](const Vec2& x, double) { return init(x); };
  p.tau = 1e-3;
  p.m_tvb = 10.0;
  return p;
}

// High-pressure water against air.
Problem water_air_1d() {
  Problem p;
  p.name = "water_air_1d";
  p.summary = "gas-liquid shock tube with a 1e4 pressure ratio";
  p.dim = 1;
  p.domain = {Vec2(-0.2, 0.0), Vec2(1.0, 1.0)};
  p.tags = {T::inflow, T::outflow, T::outflow, T::outflow};
  p.eos = {4.4, 6e8, 1.4, 0.0};
  p.t_final = 2e-4;
  p.counts = {2000, 1};
  const RiemannSide water{1e3, 0.0, 1e9, 4.4, 6e8};
  const RiemannSide air{50.0, 0.0, 1e5, 1.4, 0.0};
  p.initial = [](const Vec2& x) {
    return x.x() <= 0.5 ? prim(1e3, 0.0, 0.0, 1e9, 1.0) : prim(50.0, 0.0, 0.0, 1e5, 0.0);
  };
  p.exact = [rs = ExactRiemann(water, air), init = p.initial](const Vec2& x, double t) {
    if (t <= 0.0) return init(x);
    const RiemannSample s = rs.sample((x.x() - 0.5) / t);
    return prim(s.rho, s.u, 0.0, s.p, s.left_material ? 1.0 : 0.0);
  };
  p.inflow = [init = p.initial](const Vec2& x, double) { return init(x); };
  p.tau = 1e-3;
  p.m_tvb = 10.0;
  return p;
}

Problem sine_wave_2d() {
  Problem p;
  p.name = "sine_wave_2d";
  p.summary = "periodic diagonal density/volume-fraction wave";
  p.dim = 2;
  p.domain = {Vec2(0.0, 0.0), Vec2(2.0, 2.0)};
  p.tags = {T::periodic, T::periodic, T::periodic, T::periodic};
  p.eos = {1.4, 1.0, 1.9, 0.0};
  p.t_final = 1.0;
  p.counts = {32, 32};
  p.exact = [](const Vec2& x, double t) {
    const double s = kPi * (x.x() + x.y() - 2.0 * t);
    return prim(1.0 + 0.2 * std::sin(s), 1.0, 1.0, 1.0, 0.5 + 0.5 * std::sin(s));
  };
  p.initial = [e = p.exact](const Vec2& x) { return e(x, 0.0); };
  p.tau = 0.1;
  p.m_tvb = 50.0;
  p.smooth = true;
  return p;
}

// Stiffened-gas bubble carried by a uniform diagonal stream.
Problem bubble_advection_2d() {
  Problem p;
  p.name = "bubble_advection_2d";
  p.summary = "circular interface advected at constant velocity and pressure";
  p.dim = 2;
  p.domain = {Vec2(0.0, 0.0), Vec2(1.0, 1.0)};
  p.tags = {T::inflow, T::outflow, T::nonreflecting, T::nonreflecting};
  p.eos = {4.4, 1.0, 1.4, 0.0};
  p.t_final = 0.3;
  p.counts = {100, 100};
  p.exact = [](const Vec2& x, double t) {
    const Vec2 c(0.2 + t, 0.2 + t);
    return (x - c).squaredNorm() <= 0.01 ? prim(2.0, 1.0, 1.0, 1.0, 1.0)
                                         : prim(1.0, 1.0, 1.0, 1.0, 0.0);
  };
  p.initial = [e = p.exact](const Vec2& x) { return e(x, 0.0); };
  p.inflow = p.exact;
  p.tau = 1e-4;
  p.m_tvb = 10.0;
  return p;
}

// Planar air shock hitting a helium cylinder.
Problem shock_bubble_2d() {
  Problem p;
  p.name = "shock_bubble_2d";
  p.summary = "air shock interacting with a helium bubble";
  p.dim = 2;
  p.domain = {Vec2(-3.0, -3.0), Vec2(4.0, 3.0)};
  p.tags = {T::inflow, T::outflow, T::reflective, T::reflective};
  p.eos = {5.0 / 3.0, 0.0, 1.4, 0.0};
  p.t_final = 4.0;
  p.counts = {70, 60};
  p.initial = [](const Vec2& x) {
    if (x.squaredNorm() <= 1.0) return prim(0.138, 0.0, 0.0, 1.0, 1.0);
    if (x.x() < -1.2) return prim(1.3764, 0.394, 0.0, 1.5698, 0.0);
    return prim(1.0, 0.0, 0.0, 1.0, 0.0);
  };
  p.inflow = [init = p.initial](const Vec2& x, double) { return init(x); };
  p.tau = 1e-4;
  p.beta = {1.0, 1.0, 1.0};
  p.m_tvb = 10.0;
  return p;
}

// Gas bubble at 1e9 Pa under a water surface with air above.
Problem underwater_explosion_2d() {
  Problem p;
  p.name = "underwater_explosion_2d";
  p.summary = "high-pressure gas bubble below a free water surface";
  p.dim = 2;
  p.domain = {Vec2(-2.0, -1.5), Vec2(2.0, 1.0)};
  p.tags = {T::nonreflecting, T::nonreflecting, T::reflective, T::nonreflecting};
  p.eos = {4.4, 6e8, 1.4, 0.0};
  p.t_final = 1.2e-3;
  p.counts = {120, 75};
  p.initial = [](const Vec2& x) {
    if (x.y() > 0.0) return prim(1.225, 0.0, 0.0, 101325.0, 0.0);
    if (x.x() * x.x() + (x.y() + 0.3) * (x.y() + 0.3) <= 0.12 * 0.12)
      return prim(1250.0, 0.0, 0.0, 1e9, 0.0);
    return prim(1000.0, 0.0, 0.0, 101325.0, 1.0);
  };
  p.tau = 1e-4;
  p.beta = {1.0, 1.0, 1.0};
  p.m_tvb = 10.0;
  return p;
}

const std::map<std::string, Problem (*)()>& registry() {
  static const std::map<std::string, Problem (*)()> r{
      {"sine_wave_1d", sine_wave_1d},
      {"interface_1d", interface_1d},
      {"shock_entropy_1d", shock_entropy_1d},
      {"water_air_1d", water_air_1d},
      {"sine_wave_2d", sine_wave_2d},
      {"bubble_advection_2d", bubble_advection_2d},
      {"shock_bubble_2d", shock_bubble_2d},
      {"underwater_explosion_2d", underwater_explosion_2d},
  };
  return r;
}

}  // namespace

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const auto& [name, make] : registry()) names.push_back(name);
  return names;
}

Problem find_problem(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown problem '" + name + "'");
  Problem p = it->second();
  p.eos.validate();
  return p;
}

}  // namespace dgale
