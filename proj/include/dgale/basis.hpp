#pragma once

#include "dgale/mesh.hpp"

#include <functional>
#include <vector>

namespace dgale {

/// Quadrature with weights normalized to sum to one, so that
/// sum_q w_q f(x_q) * |K| approximates the integral over K.
struct Quadrature {
  std::vector<Vec2> points;  // reference coordinates (volume) or edge parameter in x (face)
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre nodes/weights on [0,1].
Quadrature gauss_legendre_01(int n);
/// Volume rule on the reference interval/triangle; exact to degree >= 2k+2.
Quadrature volume_rule(int dim, int degree);
/// Edge rule (parameter in [0,1]); a single unit-weight point in 1D.
Quadrature face_rule(int dim, int degree);

/// Modal basis on the reference element, orthonormal for the normalized
/// volume rule; the first function is the constant 1, so coefficient 0 is the
/// cell average.
class Basis {
 public:
  Basis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int n_dof() const { return n_dof_; }

  Eigen::VectorXd values(const Vec2& ref) const;
  /// Rows are basis functions, columns d/dr, d/ds.
  Eigen::Matrix<double, Eigen::Dynamic, 2> ref_gradients(const Vec2& ref) const;
  /// Reference second derivatives (r r, r s, s s) per function.
  Eigen::Matrix<double, Eigen::Dynamic, 3> ref_hessians(const Vec2& ref) const;

  /// Coefficients of each basis function in the centered monomials
  /// (1D: (r-1/2)^p; 2D: 1, r', s', r'^2, r's', s'^2 with r' = r-1/3, s' = s-1/3).
  /// Row i holds basis function i.
  const Eigen::MatrixXd& monomial_coefficients() const { return to_basis_; }
  Eigen::VectorXd monomials(const Vec2& ref) const;

 private:
  Eigen::Matrix<double, Eigen::Dynamic, 2> monomial_gradients(const Vec2& ref) const;
  Eigen::Matrix<double, Eigen::Dynamic, 3> monomial_hessians(const Vec2& ref) const;

  int dim_;
  int degree_;
  int n_dof_;
  Eigen::MatrixXd to_basis_;
};

/// Basis values and reference gradients tabulated at the volume and face
/// quadrature points for every local face and both face orientations.
class Discretization {
 public:
  Discretization(int dim, int degree);

  int dim() const { return basis_.dim(); }
  int degree() const { return basis_.degree(); }
  int n_dof() const { return basis_.n_dof(); }
  const Basis& basis() const { return basis_; }
  const Quadrature& volume() const { return volume_; }
  const Quadrature& face() const { return face_; }
  int n_local_faces() const { return dim() == 1 ? 2 : 3; }

  /// n_qp x n_dof.
  const Eigen::MatrixXd& volume_values() const { return vol_values_; }
  const std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>>& volume_ref_gradients() const {
    return vol_grads_;
  }
  const std::vector<std::array<double, 3>>& volume_barycentric() const { return vol_bary_; }
  /// Face-point values on local face `local`; reversed = traversed from the
  /// far end (the orientation seen by the right element).
  const Eigen::MatrixXd& face_values(int local, bool reversed) const {
    return face_values_[local][reversed ? 1 : 0];
  }
  const Eigen::VectorXd& barycenter_values() const { return bary_values_; }

 private:
  Basis basis_;
  Quadrature volume_;
  Quadrature face_;
  Eigen::MatrixXd vol_values_;
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>> vol_grads_;
  std::vector<std::array<double, 3>> vol_bary_;
  std::array<std::array<Eigen::MatrixXd, 2>, 3> face_values_;
  Eigen::VectorXd bary_values_;
};

/// Mass matrix int_K phi_i phi_j by the volume rule.
Eigen::MatrixXd mass_matrix(const ElementGeometry& geometry, const Basis& basis,
                            const Quadrature& quadrature);

/// Polynomial value at a reference point.
double evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Basis& basis,
                const Vec2& ref);
/// Physical gradient at a reference point.
Vec2 evaluate_gradient(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Basis& basis,
                       const ElementGeometry& geometry, const Vec2& ref);

/// Maps a reference point to physical coordinates of element `e` at positions `x`.
Vec2 reference_to_physical(const MovingMesh& mesh, std::span<const Vec2> x, int e,
                           const Vec2& ref);

/// Quadrature-weighted L2 projection of f (physical coordinates) onto the element.
Eigen::VectorXd l2_project(const std::function<double(const Vec2&)>& f, const MovingMesh& mesh,
                           std::span<const Vec2> x, int element, const Basis& basis,
                           const Quadrature& quadrature);

}  // namespace dgale
