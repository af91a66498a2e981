#pragma once

#include "dgale/eos.hpp"

#include <cmath>
#include <numbers>

namespace dgale {

/// Half-space moments of a Maxwellian with inverse temperature lambda.
template <typename Scalar>
struct KineticMoments {
  Scalar u0_plus;
  Scalar u0_minus;
  Scalar u1_plus;
  Scalar u1_minus;
  Scalar lambda;
};

template <typename Scalar>
KineticMoments<Scalar> kinetic_moments(const Scalar& Ut_left, const Scalar& Ut_right,
                                       const Scalar& c_left, const Scalar& c_right) {
  using std::erfc;
  using std::exp;
  using std::isfinite;
  using std::sqrt;
  if (!isfinite(Ut_left) || !isfinite(Ut_right) || !isfinite(c_left) || !isfinite(c_right))
    throw NumericalError("kinetic_moments: non-finite input");
  if (!(c_left > 0.0) || !(c_right > 0.0))
    throw PositivityError("kinetic_moments: non-positive sound speed");
  KineticMoments<Scalar> m;
  const Scalar cmax = c_left > c_right ? c_left : c_right;
  m.lambda = 1.0 / (cmax * cmax);
  const Scalar sl = sqrt(m.lambda);
  const Scalar g = 0.5 / sqrt(std::numbers::pi * m.lambda);
  m.u0_plus = 0.5 * erfc(-sl * Ut_left);
  m.u0_minus = 0.5 * erfc(sl * Ut_right);
  m.u1_plus = Ut_left * m.u0_plus + g * exp(-m.lambda * Ut_left * Ut_left);
  m.u1_minus = Ut_right * m.u0_minus - g * exp(-m.lambda * Ut_right * Ut_right);
  return m;
}

/// Traces on both sides of a face point. `normal` points from left to right.
template <typename Scalar>
struct EdgeTrace {
  Primitive<Scalar> left;
  Primitive<Scalar> right;
  Eigen::Matrix<Scalar, 2, 1> normal;
  Eigen::Matrix<Scalar, 2, 1> grid_velocity = Eigen::Matrix<Scalar, 2, 1>::Zero();
};

/// Velocity relative to the grid, split into normal and tangential parts.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> local_frame_velocity(const Primitive<Scalar>& w,
                                                 const Eigen::Matrix<Scalar, 2, 1>& n,
                                                 const Eigen::Matrix<Scalar, 2, 1>& xdot) {
  const Scalar du = w.u - xdot[0];
  const Scalar dv = w.v - xdot[1];
  return {du * n[0] + dv * n[1], -du * n[1] + dv * n[0]};
}

template <typename Scalar>
struct XiFlux {
  Eigen::Matrix<Scalar, 4, 1> xi;
  KineticMoments<Scalar> moments;
};

template <typename Scalar>
XiFlux<Scalar> xi_flux(const EdgeTrace<Scalar>& trace, const MixtureEOS& eos) {
  const auto vl = local_frame_velocity(trace.left, trace.normal, trace.grid_velocity);
  const auto vr = local_frame_velocity(trace.right, trace.normal, trace.grid_velocity);
  const auto ml = mixture_params(trace.left.Y, eos);
  const auto mr = mixture_params(trace.right.Y, eos);
  const Scalar cl = sound_speed(trace.left.rho, trace.left.p, ml.gamma, ml.B);
  const Scalar cr = sound_speed(trace.right.rho, trace.right.p, mr.gamma, mr.B);

  XiFlux<Scalar> out;
  out.moments = kinetic_moments(vl[0], vr[0], cl, cr);
  const auto& k = out.moments;

  auto half = [](const Primitive<Scalar>& w, const MixtureParams<Scalar>& m,
                 const Eigen::Matrix<Scalar, 2, 1>& v, const Scalar& u0, const Scalar& u1) {
    const Scalar Et = m.kappa * w.p + m.chi + 0.5 * w.rho * (v[0] * v[0] + v[1] * v[1]);
    Eigen::Matrix<Scalar, 4, 1> x;
    x << u1 * w.rho, u1 * w.rho * v[0] + w.p * u0, u1 * w.rho * v[1],
        u1 * Et + 0.5 * w.p * u1 + 0.5 * w.p * v[0] * u0;
    return x;
  };
  out.xi = half(trace.left, ml, vl, k.u0_plus, k.u1_plus) +
           half(trace.right, mr, vr, k.u0_minus, k.u1_minus);
  return out;
}

/// Rotates xi back to the global frame and adds the grid-velocity transport.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 1> assemble_H(const Eigen::Matrix<Scalar, 4, 1>& xi,
                                       const Eigen::Matrix<Scalar, 2, 1>& n,
                                       const Eigen::Matrix<Scalar, 2, 1>& xdot) {
  const Scalar ug = xdot[0];
  const Scalar vg = xdot[1];
  Eigen::Matrix<Scalar, 4, 1> H;
  H << xi[0], ug * xi[0] + n[0] * xi[1] - n[1] * xi[2], vg * xi[0] + n[1] * xi[1] + n[0] * xi[2],
      0.5 * (ug * ug + vg * vg) * xi[0] + (ug * n[0] + vg * n[1]) * xi[1] +
          (vg * n[0] - ug * n[1]) * xi[2] + xi[3];
  return H;
}

/// Exact (F(W) - W Xdot) . n for a single state.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 1> exact_moving_flux(const Primitive<Scalar>& w,
                                              const Eigen::Matrix<Scalar, 2, 1>& n,
                                              const Eigen::Matrix<Scalar, 2, 1>& xdot,
                                              const MixtureEOS& eos) {
  const auto c = conserved_from_primitive(w, eos);
  const Scalar un = w.u * n[0] + w.v * n[1];
  const Scalar rel = (w.u - xdot[0]) * n[0] + (w.v - xdot[1]) * n[1];
  Eigen::Matrix<Scalar, 4, 1> H = c * rel;
  H[1] += w.p * n[0];
  H[2] += w.p * n[1];
  H[3] += w.p * un;
  return H;
}

/// Kinetic split of the volume-fraction transport across a face.
template <typename Scalar>
Scalar species_flux(const KineticMoments<Scalar>& m, const Scalar& Y_left, const Scalar& Y_right) {
  return m.u1_plus * Y_left + m.u1_minus * Y_right;
}

/// Normal edge velocity of the Lagrangian predictor (no grid motion).
template <typename Scalar>
Scalar riemann_edge_velocity(const Eigen::Matrix<Scalar, 2, 1>& U_left,
                             const Eigen::Matrix<Scalar, 2, 1>& U_right,
                             const Eigen::Matrix<Scalar, 2, 1>& n, const Scalar& c_left,
                             const Scalar& c_right) {
  const auto m = kinetic_moments<Scalar>(U_left.dot(n), U_right.dot(n), c_left, c_right);
  return m.u1_plus + m.u1_minus;
}

}  // namespace dgale
