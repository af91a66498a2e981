#include "dgale/riemann_exact.hpp"

#include "dgale/types.hpp"

#include <algorithm>
#include <cmath>

namespace dgale {

namespace {

double sound(const RiemannSide& k) { return std::sqrt(k.gamma * (k.p + k.B) / k.rho); }

}  // namespace

// Pressures are shifted by each side's B, which turns the stiffened gas into an
// ideal gas for that side's wave.
double ExactRiemann::pressure_function(const RiemannSide& k, double p, double* derivative) const {
  const double g = k.gamma;
  const double pk = k.p + k.B;
  const double ps = p + k.B;
  const double ck = sound(k);
  if (ps > pk) {
    const double A = 2.0 / ((g + 1.0) * k.rho);
    const double b = (g - 1.0) / (g + 1.0) * pk;
    const double q = std::sqrt(A / (ps + b));
    *derivative = q * (1.0 - 0.5 * (ps - pk) / (ps + b));
    return (ps - pk) * q;
  }
  const double r = ps / pk;
  *derivative = std::pow(r, -(g + 1.0) / (2.0 * g)) / (k.rho * ck);
  return 2.0 * ck / (g - 1.0) * (std::pow(r, (g - 1.0) / (2.0 * g)) - 1.0);
}

ExactRiemann::ExactRiemann(const RiemannSide& left, const RiemannSide& right)
    : l_(left), r_(right) {
  for (const RiemannSide* k : {&l_, &r_})
    if (!(k->rho > 0.0) || !(k->p + k->B > 0.0) || !(k->gamma > 1.0))
      throw ConfigError("invalid Riemann data");
  const double du = r_.u - l_.u;
  // Vacuum is excluded: the generated pressure must stay above -B on both sides.
  const double pmin = std::max(-l_.B, -r_.B);
  auto F = [&](double p, double* d) {
    double dl, dr;
    const double v = pressure_function(l_, p, &dl) + pressure_function(r_, p, &dr) + du;
    *d = dl + dr;
    return v;
  };
  double lo = pmin + 1e-14 * std::max(1.0, std::abs(pmin));
  double d;
  if (F(lo, &d) > 0.0) throw NumericalError("Riemann problem generates vacuum");
  double hi = std::max({l_.p, r_.p, 1.0});
  while (F(hi, &d) < 0.0) hi = pmin + 2.0 * (hi - pmin);
  double p = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = F(p, &d);
    if (f < 0.0) lo = p; else hi = p;
    double next = p - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - p) <= 1e-15 * std::max(1.0, std::abs(p)) || hi - lo <= 1e-15 * std::abs(hi)) {
      p = next;
      break;
    }
    p = next;
  }
  p_star_ = p;
  double dl, dr;
  u_star_ = 0.5 * (l_.u + r_.u) + 0.5 * (pressure_function(r_, p, &dr) - pressure_function(l_, p, &dl));
}

RiemannSample ExactRiemann::sample(double s) const {
  const bool left = s <= u_star_;
  const RiemannSide& k = left ? l_ : r_;
  const double sign = left ? 1.0 : -1.0;  // mirror the right side onto the left formulas
  const double g = k.gamma;
  const double pk = k.p + k.B;
  const double ps = p_star_ + k.B;
  const double ck = sound(k);
  const double uk = sign * k.u;
  const double us = sign * u_star_;
  const double x = sign * s;
  RiemannSample out{k.rho, k.u, k.p, left};
  if (ps > pk) {
    const double shock = uk - ck * std::sqrt((g + 1.0) / (2.0 * g) * ps / pk + (g - 1.0) / (2.0 * g));
    if (x <= shock) return out;
    const double gr = (g - 1.0) / (g + 1.0);
    out.rho = k.rho * (ps / pk + gr) / (gr * ps / pk + 1.0);
    out.u = u_star_;
    out.p = p_star_;
    return out;
  }
  const double head = uk - ck;
  const double cs = ck * std::pow(ps / pk, (g - 1.0) / (2.0 * g));
  const double tail = us - cs;
  if (x <= head) return out;
  if (x >= tail) {
    out.rho = k.rho * std::pow(ps / pk, 1.0 / g);
    out.u = u_star_;
    out.p = p_star_;
    return out;
  }
  const double base = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * ck) * (uk - x);
  out.rho = k.rho * std::pow(base, 2.0 / (g - 1.0));
  out.u = sign * 2.0 / (g + 1.0) * (ck + 0.5 * (g - 1.0) * uk + x);
  out.p = pk * std::pow(base, 2.0 * g / (g - 1.0)) - k.B;
  return out;
}

}  // namespace dgale
