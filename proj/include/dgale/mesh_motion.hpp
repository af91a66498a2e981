#pragma once

#include "dgale/residual.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <vector>

namespace dgale {

/// Per-vertex metric tensors. In 1D only the (0,0) entry is used and the
/// rest of the matrix is the identity.
struct MetricField {
  int dim = 2;
  std::vector<Mat2> tensors;

  double det(int v) const { return dim == 1 ? tensors[v](0, 0) : tensors[v].determinant(); }
  /// Arithmetic mean over the vertices of element `e`.
  Mat2 element_average(const MovingMesh& mesh, int e) const;
};

/// Identity metric on every vertex.
MetricField identity_metric(const MovingMesh& mesh);

/// Vertex velocities whose normal projections match the kinetic edge
/// velocities in the weighted least-squares sense. `free_open` lets vertices
/// on open sides move off the domain boundary (pure Lagrangian runs).
std::vector<Vec2> lagrangian_velocity(const SolutionField& field, const MovingMesh& mesh,
                                      std::span<const Vec2> x, const Discretization& disc,
                                      const MixtureEOS& eos, bool free_open,
                                      const BoundaryData& bc = {});

/// x^L = x^n + dt * lagrangian_velocity.
std::vector<Vec2> lagrangian_predict(const SolutionField& field, const MovingMesh& mesh,
                                     std::span<const Vec2> x, double dt,
                                     const Discretization& disc, const MixtureEOS& eos,
                                     bool free_open, const BoundaryData& bc = {});

/// Nodal S = 1 + b1 (rho/|rho|)^2 + b2 (P/|P|)^2 + b3 (Y/|Y|)^2 with nodal values
/// taken as volume-weighted means of the cell averages of the incident elements.
Eigen::VectorXd adaptation_quantity(const SolutionField& field, const MovingMesh& mesh,
                                    std::span<const Vec2> x, const MixtureEOS& eos,
                                    const std::array<double, 3>& beta);

/// Quadratic least-squares Hessian recovery over two vertex rings
/// (extended when the patch is too small). Periodic copies are unfolded.
std::vector<Mat2> recover_hessian(const Eigen::VectorXd& nodal, const MovingMesh& mesh,
                                  std::span<const Vec2> x);

/// M = det(I+|H|)^{-1/(d+4)} (I+|H|) followed by `sweeps` neighbor-averaging passes.
MetricField build_metric(const std::vector<Mat2>& hessians, const MovingMesh& mesh,
                         int sweeps = 3);

struct MeshEnergy {
  double value = 0.0;
  std::vector<Vec2> gradient;  // dI/dxi_j
};

/// Equidistribution/alignment energy of the physical mesh `x` against the
/// computational mesh `xi`, with its analytic gradient in xi.
MeshEnergy mesh_energy(const MovingMesh& mesh, std::span<const Vec2> x,
                       std::span<const Vec2> xi, const MetricField& metric);

/// Second derivatives of the energy in xi, two rows per vertex (x then y).
Eigen::SparseMatrix<double> mesh_energy_hessian(const MovingMesh& mesh, std::span<const Vec2> x,
                                                std::span<const Vec2> xi,
                                                const MetricField& metric);

struct MmpdeOptions {
  double tau = 0.1;
  int max_substeps = 400;
};

struct MmpdeReport {
  int substeps = 0;
  int rejected = 0;
  bool reached_end = true;
  double energy_start = 0.0;
  double energy_end = 0.0;
};

/// Integrates the xi gradient flow over pseudo-time `dt` from the reference
/// mesh `xi_ref`, with the physical mesh frozen at `x_lag`, and returns the
/// new physical positions x_j = Psi(xi_ref_j). Substeps are linearly implicit
/// Euler, accepted only when the energy does not increase.
std::vector<Vec2> mmpde_correct(const MovingMesh& mesh, std::span<const Vec2> x_lag,
                                std::span<const Vec2> xi_ref, const MetricField& metric,
                                double dt, const MmpdeOptions& options,
                                MmpdeReport* report = nullptr);

/// Evaluates the piecewise-linear map xi -> x at the points `targets`
/// (one per vertex), locating each in the xi-mesh.
std::vector<Vec2> interpolate_back(const MovingMesh& mesh, std::span<const Vec2> xi,
                                   std::span<const Vec2> x, std::span<const Vec2> targets);

/// Nodal grid velocity of a step; same as grid_velocity.
inline std::vector<Vec2> grid_velocity_of_step(std::span<const Vec2> x_old,
                                               std::span<const Vec2> x_new, double dt) {
  return grid_velocity(x_old, x_new, dt);
}

}  // namespace dgale
