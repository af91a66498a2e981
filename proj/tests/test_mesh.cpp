#include "dgale/mesh.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace dgale;
using Catch::Approx;

namespace {

const SideTags kPeriodic{BoundaryTag::periodic, BoundaryTag::periodic, BoundaryTag::periodic,
                         BoundaryTag::periodic};

}  // namespace

TEST_CASE("structured meshes tile the box", "[mesh]") {
  const Box box{Vec2(-1, 0), Vec2(2, 0.5)};
  const MovingMesh m2 = build_structured_mesh(box, {6, 3}, 2);
  CHECK(m2.num_elements() == 6 * 3 * 4);
  CHECK(total_measure(m2, m2.vertices_old) == Approx(1.5).epsilon(1e-14));
  CHECK(min_signed_measure(m2, m2.vertices_old) == Approx(1.5 / 72).epsilon(1e-12));

  const MovingMesh m1 = build_structured_mesh(box, {7, 1}, 1);
  CHECK(m1.num_elements() == 7);
  CHECK(m1.num_vertices() == 8);
  CHECK(total_measure(m1, m1.vertices_old) == Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(build_structured_mesh(box, {0, 3}, 2), ConfigError);
  CHECK_THROWS_AS(build_structured_mesh(box, {2, 2}, 3), ConfigError);
}

TEST_CASE("face normals are outward unit vectors and every interior face is shared",
          "[mesh]") {
  const MovingMesh mesh = build_structured_mesh(Box{}, {3, 2}, 2);
  const auto x = std::span<const Vec2>(mesh.vertices_old);
  int boundary = 0;
  for (const Face& f : mesh.faces) {
    const ElementGeometry gl = element_geometry(mesh, x, f.left);
    const Vec2 n = gl.normal[f.left_local];
    CHECK(n.norm() == Approx(1.0).epsilon(1e-14));
    const Vec2 mid = 0.5 * (x[f.vertices[0]] + x[f.vertices[1]]);
    CHECK(n.dot(mid - gl.barycenter) > 0.0);
    if (f.is_boundary()) {
      ++boundary;
    } else {
      const ElementGeometry gr = element_geometry(mesh, x, f.right);
      CHECK((gr.normal[f.right_local] + n).norm() < 1e-14);
    }
  }
  CHECK(boundary == 2 * (3 + 2));
}

TEST_CASE("closed elements have zero net outward normal", "[mesh][property]") {
  MovingMesh mesh = build_structured_mesh(Box{}, {4, 4}, 2);
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> jitter(-0.03, 0.03);
  for (Vec2& p : mesh.vertices_old)
    if (mesh.vertex_boundary[&p - mesh.vertices_old.data()].kind == VertexKind::interior)
      p += Vec2(jitter(gen), jitter(gen));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, mesh.vertices_old, e);
    Vec2 sum = Vec2::Zero();
    for (int l = 0; l < 3; ++l) sum += g.edge_length[l] * g.normal[l];
    CHECK(sum.norm() < 1e-14);
    CHECK(g.jacobian.determinant() == Approx(2.0 * g.area).epsilon(1e-13));
    CHECK((g.jacobian * g.inverse_jacobian - Mat2::Identity()).norm() < 1e-13);
  }
}

TEST_CASE("1D geometry", "[mesh]") {
  const MovingMesh mesh = build_structured_mesh(Box{Vec2(0, 0), Vec2(2, 1)}, {4, 1}, 1);
  const ElementGeometry g = element_geometry(mesh, mesh.vertices_old, 1);
  CHECK(g.area == Approx(0.5));
  CHECK(g.inradius == Approx(0.25));
  CHECK(g.normal[0].x() == -1.0);
  CHECK(g.normal[1].x() == 1.0);
}

TEST_CASE("grid velocity and intermediate positions", "[mesh]") {
  MovingMesh mesh = build_structured_mesh(Box{}, {2, 2}, 2);
  mesh.vertices_new = mesh.vertices_old;
  for (Vec2& p : mesh.vertices_new) p += Vec2(0.1, -0.05);
  const auto v = grid_velocity(mesh, 0.5);
  for (const Vec2& w : v) CHECK((w - Vec2(0.2, -0.1)).norm() < 1e-14);
  const auto mid = position_at(mesh, 1.0, 1.5, 1.25);
  for (int i = 0; i < mesh.num_vertices(); ++i)
    CHECK((mid[i] - mesh.vertices_old[i] - Vec2(0.05, -0.025)).norm() < 1e-14);
  CHECK_THROWS(grid_velocity(mesh, 0.0));
  CHECK_THROWS(position_at(mesh, 1.0, 1.5, 2.0));

  mesh.vertex_velocity = v;
  mesh.advance();
  CHECK(mesh.vertices_old[0].x() == Approx(0.1));
  for (const Vec2& w : mesh.vertex_velocity) CHECK(w.norm() == 0.0);
}

TEST_CASE("boundary constraints keep vertices on their sides", "[mesh]") {
  const MovingMesh mesh = build_structured_mesh(Box{}, {3, 3}, 2);
  const Vec2 push(0.3, 0.7);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2 c = mesh.constrain(v, push);
    switch (mesh.vertex_boundary[v].kind) {
      case VertexKind::interior:
        CHECK(c == push);
        break;
      case VertexKind::corner:
        CHECK(c.norm() == 0.0);
        break;
      case VertexKind::side: {
        const Vec2 t = mesh.vertex_boundary[v].tangent;
        CHECK(std::abs(c.dot(Vec2(-t.y(), t.x()))) < 1e-15);
        CHECK(c.dot(t) == Approx(push.dot(t)));
        break;
      }
    }
  }
}

TEST_CASE("periodic copies follow their masters", "[mesh]") {
  MovingMesh mesh = build_structured_mesh(Box{}, {3, 3}, 2, kPeriodic);
  CHECK(mesh.has_periodic());
  int copies = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const int m = mesh.periodic_master[v];
    if (m != v) ++copies;
    CHECK((mesh.vertices_old[v] - mesh.vertices_old[m] - mesh.periodic_offset[v]).norm() < 1e-15);
  }
  CHECK(copies == 3 + 3 + 1);  // right column, top row, and the far corner
  for (const Face& f : mesh.faces) CHECK_FALSE(f.is_boundary());

  std::vector<Vec2> x = mesh.vertices_old;
  for (Vec2& p : x) p += Vec2(0.01, 0.02);
  x[0] += Vec2(0.05, 0.0);
  mesh.enforce_periodic(x);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    CHECK((x[v] - x[mesh.periodic_master[v]] - mesh.periodic_offset[v]).norm() < 1e-15);
}

TEST_CASE("mesh text and VTK writers", "[mesh][io]") {
  const MovingMesh mesh = build_structured_mesh(Box{}, {2, 1}, 2);
  std::ostringstream vtk;
  std::vector<double> ids(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) ids[e] = e;
  write_mesh_vtk(vtk, mesh, mesh.vertices_old, {{"id", ids}});
  const std::string s = vtk.str();
  CHECK(s.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(s.find("POINTS " + std::to_string(mesh.num_vertices()) + " double") != std::string::npos);
  CHECK(s.find("CELLS 8 32") != std::string::npos);
  CHECK(s.find("CELL_DATA 8") != std::string::npos);

  std::ostringstream txt;
  write_mesh_text(txt, mesh, mesh.vertices_old);
  std::istringstream in(txt.str());
  int dim = 0, nv = 0, ne = 0;
  in >> dim >> nv >> ne;
  CHECK(dim == 2);
  CHECK(nv == mesh.num_vertices());
  CHECK(ne == mesh.num_elements());
}

TEST_CASE("boundary tag names round-trip", "[mesh]") {
  for (BoundaryTag t : {BoundaryTag::inflow, BoundaryTag::outflow, BoundaryTag::nonreflecting,
                        BoundaryTag::reflective, BoundaryTag::periodic})
    CHECK(parse_boundary_tag(to_string(t)) == t);
  CHECK_THROWS_AS(parse_boundary_tag("slippery"), ConfigError);
}
