#pragma once

#include "dgale/types.hpp"

#include <cmath>

namespace dgale {

/// Two stiffened-gas components; fluid 1 is selected by Y = 1.
struct MixtureEOS {
  double gamma1 = 1.4;
  double B1 = 0.0;
  double gamma2 = 1.4;
  double B2 = 0.0;

  void validate() const {
    if (!(gamma1 > 1.0) || !(gamma2 > 1.0)) throw ConfigError("gamma must exceed 1");
    if (!(B1 >= 0.0) || !(B2 >= 0.0)) throw ConfigError("stiffening constants must be >= 0");
  }
};

/// kappa = 1/(gamma-1) and chi = gamma B/(gamma-1) are affine in Y; gamma and B follow.
template <typename Scalar>
struct MixtureParams {
  Scalar gamma;
  Scalar B;
  Scalar kappa;
  Scalar chi;
};

template <typename Scalar>
MixtureParams<Scalar> mixture_params(const Scalar& Y, const MixtureEOS& eos) {
  const double k1 = 1.0 / (eos.gamma1 - 1.0);
  const double k2 = 1.0 / (eos.gamma2 - 1.0);
  const double c1 = eos.gamma1 * eos.B1 / (eos.gamma1 - 1.0);
  const double c2 = eos.gamma2 * eos.B2 / (eos.gamma2 - 1.0);
  MixtureParams<Scalar> m;
  m.kappa = k2 + (k1 - k2) * Y;
  m.chi = c2 + (c1 - c2) * Y;
  if (!(m.kappa > 0.0)) throw PositivityError("mixture kappa <= 0; volume fraction far outside [0,1]");
  m.gamma = 1.0 + 1.0 / m.kappa;
  m.B = m.chi / (m.kappa * m.gamma);
  return m;
}

/// True when Y leaves the diagnostic band [-0.1, 1.1]; the mixture rule is
/// still applied unclamped.
inline bool species_out_of_band(double Y) { return Y < -0.1 || Y > 1.1; }

template <typename Scalar>
struct Primitive {
  Scalar rho;
  Scalar u;
  Scalar v;
  Scalar p;
  Scalar Y;
};

using PrimitiveState = Primitive<double>;

template <typename Scalar>
Eigen::Matrix<Scalar, 4, 1> conserved_from_primitive(const Primitive<Scalar>& w,
                                                      const MixtureEOS& eos) {
  const auto m = mixture_params(w.Y, eos);
  Eigen::Matrix<Scalar, 4, 1> c;
  c << w.rho, w.rho * w.u, w.rho * w.v,
      m.kappa * w.p + m.chi + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
  return c;
}

template <typename Scalar>
Primitive<Scalar> primitive_from_conserved(const Eigen::Matrix<Scalar, 4, 1>& c, const Scalar& Y,
                                           const MixtureEOS& eos, int element = -1) {
  if (!(c[0] > 0.0) || !std::isfinite(c[0])) throw PositivityError("non-positive density", element);
  const auto m = mixture_params(Y, eos);
  Primitive<Scalar> w;
  w.rho = c[0];
  w.u = c[1] / c[0];
  w.v = c[2] / c[0];
  w.p = (c[3] - 0.5 * w.rho * (w.u * w.u + w.v * w.v) - m.chi) / m.kappa;
  w.Y = Y;
  if (!(w.p + m.B > 0.0) || !std::isfinite(w.p)) throw PositivityError("P + B <= 0", element);
  return w;
}

template <typename Scalar>
Scalar sound_speed(const Primitive<Scalar>& w, const MixtureEOS& eos) {
  const auto m = mixture_params(w.Y, eos);
  const Scalar radicand = m.gamma * (w.p + m.B) / w.rho;
  if (!(radicand > 0.0)) throw PositivityError("negative sound-speed radicand");
  using std::sqrt;
  return sqrt(radicand);
}

template <typename Scalar>
Scalar sound_speed(const Scalar& rho, const Scalar& p, const Scalar& gamma, const Scalar& B) {
  const Scalar radicand = gamma * (p + B) / rho;
  if (!(radicand > 0.0)) throw PositivityError("negative sound-speed radicand");
  using std::sqrt;
  return sqrt(radicand);
}

}  // namespace dgale
