#pragma once

#include "dgale/types.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dgale {

enum class BoundaryTag { interior, inflow, outflow, nonreflecting, reflective, periodic };

BoundaryTag parse_boundary_tag(const std::string& name);
std::string to_string(BoundaryTag tag);

// Sides are ordered left, right, bottom, top. 1D meshes use only the first two.
using SideTags = std::array<BoundaryTag, 4>;

struct Box {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Ones();
  Vec2 extent() const { return hi - lo; }
};

/// A mesh facet. `vertices` follow the local edge orientation of the left
/// element, whose outward normal defines the face normal. Boundary faces have
/// `right == -1`. Periodic faces are interior faces whose two sides sit on
/// opposite boundaries.
struct Face {
  std::array<int, 2> vertices{-1, -1};
  int left = -1;
  int left_local = -1;
  int right = -1;
  int right_local = -1;
  BoundaryTag tag = BoundaryTag::interior;

  bool is_boundary() const { return right < 0; }
};

enum class VertexKind { interior, side, corner };

struct VertexBoundary {
  VertexKind kind = VertexKind::interior;
  Vec2 tangent = Vec2::Zero();  // unit, only meaningful for `side`
  bool open = false;            // sits on an inflow/outflow/nonreflecting side
};

struct ElementGeometry {
  int num_edges = 3;
  double area = 0.0;  // length in 1D
  std::array<double, 3> edge_length{};
  std::array<Vec2, 3> normal{};
  Mat2 jacobian = Mat2::Identity();  // reference -> physical
  Mat2 inverse_jacobian = Mat2::Identity();
  Vec2 barycenter = Vec2::Zero();
  double diameter = 0.0;  // longest edge (length in 1D)
  double inradius = 0.0;  // half-length in 1D
};

enum class TimeLevel { old_level, new_level };

/// Fixed-connectivity mesh carried between two time levels.
///
/// Elements are counterclockwise triangles in 2D and left-to-right intervals
/// in 1D (third index is -1). Local edge i of a triangle runs from vertex i to
/// vertex i+1; local face 0 of an interval is its left end.
class MovingMesh {
 public:
  int dim = 2;
  Box domain;
  SideTags side_tags{BoundaryTag::outflow, BoundaryTag::outflow, BoundaryTag::outflow,
                     BoundaryTag::outflow};

  std::vector<Vec2> vertices_old;
  std::vector<Vec2> vertices_new;
  std::vector<std::array<int, 3>> elements;
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> element_faces;  // face id per local edge
  std::vector<Vec2> vertex_velocity;

  // Periodic copies: x[v] == x[periodic_master[v]] + periodic_offset[v].
  std::vector<int> periodic_master;
  std::vector<Vec2> periodic_offset;
  std::vector<VertexBoundary> vertex_boundary;

  int num_vertices() const { return static_cast<int>(vertices_old.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int vertices_per_element() const { return dim + 1; }
  bool has_periodic() const;

  /// Moves the new level into the old one and zeroes the grid velocity.
  void advance();

  /// Rewrites periodic copies from their masters.
  void enforce_periodic(std::span<Vec2> x) const;
  /// Replaces each periodic group's vectors by the group mean.
  void tie_periodic(std::span<Vec2> v) const;
  /// Projects a vertex displacement/velocity onto the admissible set of the
  /// vertex's boundary (slide along sides, corners fixed). `free_open` leaves
  /// vertices on open sides unconstrained.
  Vec2 constrain(int vertex, const Vec2& v, bool free_open = false) const;

  /// Vertex indices of element `e` (2 in 1D, 3 in 2D).
  std::span<const int> element_vertices(int e) const {
    return {elements[e].data(), static_cast<std::size_t>(vertices_per_element())};
  }
  /// Neighbor across local edge, or -1 on a physical boundary.
  int neighbor(int e, int local) const;

  /// Vertex adjacency along element edges (no periodic wrap).
  std::vector<std::vector<int>> vertex_neighbors() const;
  /// Elements incident to each vertex.
  std::vector<std::vector<int>> vertex_elements() const;
};

/// Uniform mesh on a box. 2D: each rectangle is split into four triangles about
/// its center, so there are counts[0]*counts[1]*4 elements.
MovingMesh build_structured_mesh(const Box& box, std::array<int, 2> counts, int dim,
                                 const SideTags& tags = {BoundaryTag::outflow, BoundaryTag::outflow,
                                                         BoundaryTag::outflow, BoundaryTag::outflow});

/// Linear blend of the two time levels; t must lie in [t_n, t_{n+1}].
std::vector<Vec2> position_at(const MovingMesh& mesh, double t_n, double t_np1, double t);

/// Difference quotient (x^{n+1} - x^n) / dt per vertex.
std::vector<Vec2> grid_velocity(const MovingMesh& mesh, double dt);
std::vector<Vec2> grid_velocity(std::span<const Vec2> x_old, std::span<const Vec2> x_new, double dt);

ElementGeometry geometry_of(const MovingMesh& mesh, int element, TimeLevel level);
ElementGeometry element_geometry(const MovingMesh& mesh, std::span<const Vec2> x, int element);

/// Signed area (length in 1D) without validity checks.
double signed_measure(const MovingMesh& mesh, std::span<const Vec2> x, int element);
double min_signed_measure(const MovingMesh& mesh, std::span<const Vec2> x);
double total_measure(const MovingMesh& mesh, std::span<const Vec2> x);

/// Position along local edge `local` of the reference element at parameter s in [0,1].
Vec2 reference_edge_point(int dim, int local, double s);
/// Barycentric coordinates of a reference point.
std::array<double, 3> reference_barycentric(int dim, const Vec2& ref);

// Plain-text dump: "dim nv ne", then vertex lines, then element lines.
void write_mesh_text(std::ostream& out, const MovingMesh& mesh, std::span<const Vec2> x);
// Legacy VTK, ASCII, triangle cells (type 5); 1D meshes as lines (type 3).
void write_mesh_vtk(std::ostream& out, const MovingMesh& mesh, std::span<const Vec2> x,
                    const std::vector<std::pair<std::string, std::vector<double>>>& cell_data = {});

}  // namespace dgale
