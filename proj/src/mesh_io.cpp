#include "dgale/mesh.hpp"

#include <iomanip>
#include <ostream>

namespace dgale {

void write_mesh_text(std::ostream& out, const MovingMesh& mesh, std::span<const Vec2> x) {
  out << std::setprecision(17);
  out << mesh.dim << ' ' << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  for (const Vec2& p : x) {
    if (mesh.dim == 1)
      out << p[0] << '\n';
    else
      out << p[0] << ' ' << p[1] << '\n';
  }
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto verts = mesh.element_vertices(e);
    for (std::size_t i = 0; i < verts.size(); ++i) out << (i ? " " : "") << verts[i];
    out << '\n';
  }
}

void write_mesh_vtk(std::ostream& out, const MovingMesh& mesh, std::span<const Vec2> x,
                    const std::vector<std::pair<std::string, std::vector<double>>>& cell_data) {
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_elements();
  const int per = mesh.vertices_per_element();
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n";
  out << "dgale mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const Vec2& p : x) out << p[0] << ' ' << p[1] << " 0\n";
  out << "CELLS " << ne << ' ' << ne * (per + 1) << '\n';
  for (int e = 0; e < ne; ++e) {
    out << per;
    for (int v : mesh.element_vertices(e)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  const int type = mesh.dim == 1 ? 3 : 5;
  for (int e = 0; e < ne; ++e) out << type << '\n';
  if (!cell_data.empty()) {
    out << "CELL_DATA " << ne << '\n';
    for (const auto& [name, values] : cell_data) {
      out << "SCALARS " << name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (double v : values) out << v << '\n';
    }
  }
}

}  // namespace dgale
