#include "dgale/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace dgale {

BoundaryTag parse_boundary_tag(const std::string& name) {
  if (name == "inflow") return BoundaryTag::inflow;
  if (name == "outflow") return BoundaryTag::outflow;
  if (name == "nonreflecting") return BoundaryTag::nonreflecting;
  if (name == "reflective") return BoundaryTag::reflective;
  if (name == "periodic") return BoundaryTag::periodic;
  throw ConfigError("unknown boundary tag '" + name + "'");
}

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::interior: return "interior";
    case BoundaryTag::inflow: return "inflow";
    case BoundaryTag::outflow: return "outflow";
    case BoundaryTag::nonreflecting: return "nonreflecting";
    case BoundaryTag::reflective: return "reflective";
    case BoundaryTag::periodic: return "periodic";
  }
  return "?";
}

namespace {

bool is_open(BoundaryTag tag) {
  return tag == BoundaryTag::inflow || tag == BoundaryTag::outflow ||
         tag == BoundaryTag::nonreflecting;
}

void classify_vertices(MovingMesh& mesh) {
  const double tol = 1e-12 * std::max(1.0, mesh.domain.extent().norm());
  mesh.vertex_boundary.assign(mesh.num_vertices(), {});
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2& x = mesh.vertices_old[v];
    int constraining = 0;
    bool open = false;
    Vec2 tangent = Vec2::Zero();
    const int sides = mesh.dim == 1 ? 2 : 4;
    for (int side = 0; side < sides; ++side) {
      const int axis = side / 2;
      const double wall = (side % 2 == 0) ? mesh.domain.lo[axis] : mesh.domain.hi[axis];
      if (std::abs(x[axis] - wall) > tol) continue;
      if (mesh.side_tags[side] == BoundaryTag::periodic) continue;
      ++constraining;
      open = open || is_open(mesh.side_tags[side]);
      tangent = axis == 0 ? Vec2(0.0, 1.0) : Vec2(1.0, 0.0);
    }
    VertexBoundary& vb = mesh.vertex_boundary[v];
    vb.open = open;
    if (constraining == 0) {
      vb.kind = VertexKind::interior;
    } else if (constraining == 1 && mesh.dim == 2) {
      vb.kind = VertexKind::side;
      vb.tangent = tangent;
    } else {
      vb.kind = VertexKind::corner;
    }
  }
}

// Pairs local edges into faces, matching periodic copies through their masters.
void build_faces(MovingMesh& mesh) {
  const int ne = mesh.num_elements();
  const int nloc = mesh.dim == 1 ? 2 : 3;
  mesh.faces.clear();
  mesh.element_faces.assign(ne, {-1, -1, -1});
  std::map<std::pair<int, int>, int> lookup;
  for (int e = 0; e < ne; ++e) {
    for (int l = 0; l < nloc; ++l) {
      std::array<int, 2> verts{};
      std::pair<int, int> key;
      if (mesh.dim == 1) {
        verts = {mesh.elements[e][l], -1};
        key = {mesh.periodic_master[verts[0]], -1};
      } else {
        verts = {mesh.elements[e][l], mesh.elements[e][(l + 1) % 3]};
        int a = mesh.periodic_master[verts[0]];
        int b = mesh.periodic_master[verts[1]];
        key = {std::min(a, b), std::max(a, b)};
      }
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Face f;
        f.vertices = verts;
        f.left = e;
        f.left_local = l;
        lookup.emplace(key, static_cast<int>(mesh.faces.size()));
        mesh.element_faces[e][l] = static_cast<int>(mesh.faces.size());
        mesh.faces.push_back(f);
      } else {
        Face& f = mesh.faces[it->second];
        if (f.right >= 0) throw MeshError("edge shared by more than two elements", e);
        f.right = e;
        f.right_local = l;
        mesh.element_faces[e][l] = it->second;
      }
    }
  }
  // 1D: the face at a vertex must have the element to its left as `left`,
  // so that the face normal is +x.
  if (mesh.dim == 1) {
    for (auto& f : mesh.faces) {
      if (f.right >= 0 && f.left_local == 0) {
        std::swap(f.left, f.right);
        std::swap(f.left_local, f.right_local);
        f.vertices = {mesh.elements[f.left][1], -1};
      }
    }
  }
  const double tol = 1e-12 * std::max(1.0, mesh.domain.extent().norm());
  for (auto& f : mesh.faces) {
    Vec2 mid = mesh.dim == 1 ? mesh.vertices_old[f.vertices[0]]
                             : Vec2(0.5 * (mesh.vertices_old[f.vertices[0]] +
                                           mesh.vertices_old[f.vertices[1]]));
    int side = -1;
    const int sides = mesh.dim == 1 ? 2 : 4;
    for (int s = 0; s < sides; ++s) {
      const int axis = s / 2;
      const double wall = (s % 2 == 0) ? mesh.domain.lo[axis] : mesh.domain.hi[axis];
      if (std::abs(mid[axis] - wall) <= tol) side = s;
    }
    if (f.right >= 0) {
      f.tag = side >= 0 ? BoundaryTag::periodic : BoundaryTag::interior;
    } else {
      if (side < 0) throw MeshError("unmatched interior edge", f.left);
      f.tag = mesh.side_tags[side];
      if (f.tag == BoundaryTag::periodic) throw MeshError("periodic edge without partner", f.left);
    }
  }
}

}  // namespace

bool MovingMesh::has_periodic() const {
  for (int v = 0; v < num_vertices(); ++v)
    if (periodic_master[v] != v) return true;
  return false;
}

void MovingMesh::advance() {
  vertices_old = vertices_new;
  std::fill(vertex_velocity.begin(), vertex_velocity.end(), Vec2::Zero());
}

void MovingMesh::enforce_periodic(std::span<Vec2> x) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (periodic_master[v] != v) x[v] = x[periodic_master[v]] + periodic_offset[v];
}

void MovingMesh::tie_periodic(std::span<Vec2> v) const {
  const int n = num_vertices();
  std::vector<Vec2> sum(n, Vec2::Zero());
  std::vector<int> count(n, 0);
  for (int i = 0; i < n; ++i) {
    sum[periodic_master[i]] += v[i];
    ++count[periodic_master[i]];
  }
  for (int i = 0; i < n; ++i) {
    const int m = periodic_master[i];
    if (count[m] > 1) v[i] = sum[m] / count[m];
  }
}

Vec2 MovingMesh::constrain(int vertex, const Vec2& v, bool free_open) const {
  const VertexBoundary& vb = vertex_boundary[vertex];
  if (vb.kind == VertexKind::interior) return v;
  if (free_open && vb.open) return v;
  if (vb.kind == VertexKind::side) return vb.tangent.dot(v) * vb.tangent;
  return Vec2::Zero();
}

int MovingMesh::neighbor(int e, int local) const {
  const Face& f = faces[element_faces[e][local]];
  if (f.left == e && f.left_local == local) return f.right;
  return f.left;
}

std::vector<std::vector<int>> MovingMesh::vertex_neighbors() const {
  std::vector<std::vector<int>> nbrs(num_vertices());
  const int nv = vertices_per_element();
  for (const auto& el : elements) {
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b)
        if (a != b) nbrs[el[a]].push_back(el[b]);
  }
  for (auto& list : nbrs) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nbrs;
}

std::vector<std::vector<int>> MovingMesh::vertex_elements() const {
  std::vector<std::vector<int>> result(num_vertices());
  for (int e = 0; e < num_elements(); ++e)
    for (int v : element_vertices(e)) result[v].push_back(e);
  return result;
}

MovingMesh build_structured_mesh(const Box& box, std::array<int, 2> counts, int dim,
                                 const SideTags& tags) {
  if (dim != 1 && dim != 2) throw ConfigError("mesh dimension must be 1 or 2");
  if (counts[0] < 1 || (dim == 2 && counts[1] < 1)) throw ConfigError("element counts must be >= 1");
  const Vec2 ext = box.extent();
  if (!(ext[0] > 0.0) || (dim == 2 && !(ext[1] > 0.0)))
    throw ConfigError("degenerate domain box");

  MovingMesh mesh;
  mesh.dim = dim;
  mesh.domain = box;
  mesh.side_tags = tags;
  if ((tags[0] == BoundaryTag::periodic) != (tags[1] == BoundaryTag::periodic) ||
      (dim == 2 && (tags[2] == BoundaryTag::periodic) != (tags[3] == BoundaryTag::periodic)))
    throw ConfigError("periodic sides must come in pairs");
  const bool per_x = tags[0] == BoundaryTag::periodic;
  const bool per_y = dim == 2 && tags[2] == BoundaryTag::periodic;

  const int nx = counts[0];
  if (dim == 1) {
    if (per_x && nx < 2) throw ConfigError("periodic 1D mesh needs at least 2 elements");
    const double h = ext[0] / nx;
    for (int i = 0; i <= nx; ++i) mesh.vertices_old.emplace_back(box.lo[0] + i * h, 0.0);
    mesh.vertices_old.back()[0] = box.hi[0];
    for (int i = 0; i < nx; ++i) mesh.elements.push_back({i, i + 1, -1});
    mesh.periodic_master.resize(nx + 1);
    std::iota(mesh.periodic_master.begin(), mesh.periodic_master.end(), 0);
    mesh.periodic_offset.assign(nx + 1, Vec2::Zero());
    if (per_x) {
      mesh.periodic_master[nx] = 0;
      mesh.periodic_offset[nx] = Vec2(ext[0], 0.0);
    }
  } else {
    const int ny = counts[1];
    if ((per_x && nx < 2) || (per_y && ny < 2))
      throw ConfigError("periodic directions need at least 2 cells");
    const double hx = ext[0] / nx;
    const double hy = ext[1] / ny;
    auto corner = [&](int i, int j) { return j * (nx + 1) + i; };
    auto center = [&](int i, int j) { return (nx + 1) * (ny + 1) + j * nx + i; };
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.vertices_old.emplace_back(i == nx ? box.hi[0] : box.lo[0] + i * hx,
                                       j == ny ? box.hi[1] : box.lo[1] + j * hy);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        mesh.vertices_old.emplace_back(box.lo[0] + (i + 0.5) * hx, box.lo[1] + (j + 0.5) * hy);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int a = corner(i, j), b = corner(i + 1, j), c = corner(i + 1, j + 1),
                  d = corner(i, j + 1), m = center(i, j);
        mesh.elements.push_back({a, b, m});
        mesh.elements.push_back({b, c, m});
        mesh.elements.push_back({c, d, m});
        mesh.elements.push_back({d, a, m});
      }
    }
    const int nv = static_cast<int>(mesh.vertices_old.size());
    mesh.periodic_master.resize(nv);
    std::iota(mesh.periodic_master.begin(), mesh.periodic_master.end(), 0);
    mesh.periodic_offset.assign(nv, Vec2::Zero());
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        int mi = i, mj = j;
        Vec2 off = Vec2::Zero();
        if (per_x && i == nx) { mi = 0; off[0] = ext[0]; }
        if (per_y && j == ny) { mj = 0; off[1] = ext[1]; }
        mesh.periodic_master[corner(i, j)] = corner(mi, mj);
        mesh.periodic_offset[corner(i, j)] = off;
      }
    }
  }
  mesh.vertices_new = mesh.vertices_old;
  mesh.vertex_velocity.assign(mesh.num_vertices(), Vec2::Zero());
  classify_vertices(mesh);
  build_faces(mesh);
  return mesh;
}

std::vector<Vec2> position_at(const MovingMesh& mesh, double t_n, double t_np1, double t) {
  if (!(t_np1 >= t_n)) throw Error("position_at: t_{n+1} < t_n");
  if (t < t_n || t > t_np1) throw Error("position_at: time outside [t_n, t_{n+1}]");
  if (t == t_n || t_np1 == t_n) return mesh.vertices_old;
  if (t == t_np1) return mesh.vertices_new;
  const double dt = t_np1 - t_n;
  const double a = (t - t_n) / dt;
  const double b = (t_np1 - t) / dt;
  std::vector<Vec2> x(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    x[v] = a * mesh.vertices_new[v] + b * mesh.vertices_old[v];
  return x;
}

std::vector<Vec2> grid_velocity(std::span<const Vec2> x_old, std::span<const Vec2> x_new,
                                double dt) {
  if (!(dt > 0.0)) throw Error("grid_velocity: dt must be positive");
  std::vector<Vec2> v(x_old.size());
  for (std::size_t i = 0; i < x_old.size(); ++i) v[i] = (x_new[i] - x_old[i]) / dt;
  return v;
}

std::vector<Vec2> grid_velocity(const MovingMesh& mesh, double dt) {
  return grid_velocity(mesh.vertices_old, mesh.vertices_new, dt);
}

double signed_measure(const MovingMesh& mesh, std::span<const Vec2> x, int element) {
  const auto& el = mesh.elements[element];
  if (mesh.dim == 1) return x[el[1]][0] - x[el[0]][0];
  const Vec2 a = x[el[1]] - x[el[0]];
  const Vec2 b = x[el[2]] - x[el[0]];
  return 0.5 * (a[0] * b[1] - a[1] * b[0]);
}

double min_signed_measure(const MovingMesh& mesh, std::span<const Vec2> x) {
  double m = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_elements(); ++e) m = std::min(m, signed_measure(mesh, x, e));
  return m;
}

double total_measure(const MovingMesh& mesh, std::span<const Vec2> x) {
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) s += signed_measure(mesh, x, e);
  return s;
}

ElementGeometry element_geometry(const MovingMesh& mesh, std::span<const Vec2> x, int element) {
  ElementGeometry g;
  const auto& el = mesh.elements[element];
  if (mesh.dim == 1) {
    const double len = x[el[1]][0] - x[el[0]][0];
    if (!(len > 0.0)) throw MeshError("non-positive element length", element);
    g.num_edges = 2;
    g.area = len;
    g.edge_length = {1.0, 1.0, 0.0};
    g.normal = {Vec2(-1.0, 0.0), Vec2(1.0, 0.0), Vec2::Zero()};
    g.jacobian << len, 0.0, 0.0, 1.0;
    g.inverse_jacobian << 1.0 / len, 0.0, 0.0, 1.0;
    g.barycenter = 0.5 * (x[el[0]] + x[el[1]]);
    g.diameter = len;
    g.inradius = 0.5 * len;
    return g;
  }
  const Vec2& x0 = x[el[0]];
  const Vec2& x1 = x[el[1]];
  const Vec2& x2 = x[el[2]];
  g.jacobian.col(0) = x1 - x0;
  g.jacobian.col(1) = x2 - x0;
  const double det = g.jacobian.determinant();
  if (!(det > 0.0)) throw MeshError("non-positive element area", element);
  g.area = 0.5 * det;
  g.inverse_jacobian = g.jacobian.inverse();
  const std::array<const Vec2*, 3> p{&x0, &x1, &x2};
  double perimeter = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 t = *p[(i + 1) % 3] - *p[i];
    const double len = t.norm();
    g.edge_length[i] = len;
    g.normal[i] = Vec2(t[1], -t[0]) / len;
    perimeter += len;
    g.diameter = std::max(g.diameter, len);
  }
  g.barycenter = (x0 + x1 + x2) / 3.0;
  g.inradius = 2.0 * g.area / perimeter;
  return g;
}

ElementGeometry geometry_of(const MovingMesh& mesh, int element, TimeLevel level) {
  if (element < 0 || element >= mesh.num_elements()) throw Error("geometry_of: bad element id");
  return element_geometry(
      mesh, level == TimeLevel::old_level ? mesh.vertices_old : mesh.vertices_new, element);
}

Vec2 reference_edge_point(int dim, int local, double s) {
  if (dim == 1) return Vec2(local == 0 ? 0.0 : 1.0, 0.0);
  static const std::array<Vec2, 3> ref{Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  return (1.0 - s) * ref[local] + s * ref[(local + 1) % 3];
}

std::array<double, 3> reference_barycentric(int dim, const Vec2& r) {
  if (dim == 1) return {1.0 - r[0], r[0], 0.0};
  return {1.0 - r[0] - r[1], r[0], r[1]};
}

}  // namespace dgale
