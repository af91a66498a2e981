#pragma once

namespace dgale {

/// One side of a 1D Riemann problem for a stiffened gas.
struct RiemannSide {
  double rho;
  double u;
  double p;
  double gamma;
  double B;
};

struct RiemannSample {
  double rho;
  double u;
  double p;
  bool left_material;  // true on the left side of the contact
};

/// Exact solution of the two-material stiffened-gas Riemann problem.
class ExactRiemann {
 public:
  ExactRiemann(const RiemannSide& left, const RiemannSide& right);

  double p_star() const { return p_star_; }
  double u_star() const { return u_star_; }
  /// State at similarity coordinate s = (x - x0) / t.
  RiemannSample sample(double s) const;

 private:
  double pressure_function(const RiemannSide& k, double p, double* derivative) const;

  RiemannSide l_;
  RiemannSide r_;
  double p_star_ = 0.0;
  double u_star_ = 0.0;
};

}  // namespace dgale
