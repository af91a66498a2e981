#include "dgale/output.hpp"

#include <json.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dgale {

namespace {

struct CellRow {
  Vec2 center;
  PrimitiveState w;
  double gamma;
  double B;
};

CellRow cell_row(const MovingMesh& mesh, const SolutionField& field, const MixtureEOS& eos, int e) {
  Vec2 c = Vec2::Zero();
  for (int v : mesh.element_vertices(e)) c += mesh.vertices_old[v];
  c /= static_cast<double>(mesh.vertices_per_element());
  const PrimitiveState w = average_primitive(field, e, eos);
  const auto m = mixture_params(w.Y, eos);
  return {c, w, m.gamma, m.B};
}

}  // namespace

void write_csv(std::ostream& out, const MovingMesh& mesh, const SolutionField& field,
               const MixtureEOS& eos) {
  out << std::setprecision(17);
  out << "x,y,rho,U,V,P,Y,gamma,B\n";
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const CellRow r = cell_row(mesh, field, eos, e);
    const double y = mesh.dim == 1 ? 0.0 : r.center.y();
    out << r.center.x() << ',' << y << ',' << r.w.rho << ',' << r.w.u << ',' << r.w.v << ','
        << r.w.p << ',' << r.w.Y << ',' << r.gamma << ',' << r.B << '\n';
  }
}

void write_vtk(std::ostream& out, const MovingMesh& mesh, const SolutionField& field,
               const MixtureEOS& eos) {
  const int ne = mesh.num_elements();
  std::vector<std::pair<std::string, std::vector<double>>> data{
      {"rho", {}}, {"U", {}}, {"V", {}}, {"P", {}}, {"Y", {}}};
  for (auto& d : data) d.second.reserve(ne);
  for (int e = 0; e < ne; ++e) {
    const PrimitiveState w = average_primitive(field, e, eos);
    data[0].second.push_back(w.rho);
    data[1].second.push_back(w.u);
    data[2].second.push_back(w.v);
    data[3].second.push_back(w.p);
    data[4].second.push_back(w.Y);
  }
  write_mesh_vtk(out, mesh, mesh.vertices_old, data);
}

void write_step_log(std::ostream& out, const std::vector<StepLog>& log) {
  out << std::setprecision(10);
  out << "step,t,dt,min_measure,troubled,mmpde_substeps,retries,pressure_spread,velocity_spread\n";
  for (const StepLog& s : log)
    out << s.step << ',' << s.t << ',' << s.dt << ',' << s.min_measure << ',' << s.troubled << ','
        << s.mmpde_substeps << ',' << s.retries << ',' << s.pressure_spread << ','
        << s.velocity_spread << '\n';
}

void write_failure_json(std::ostream& out, const FailureRecord& record) {
  nlohmann::json j;
  j["status"] = "failed";
  j["kind"] = record.kind;
  j["message"] = record.message;
  j["element"] = record.element;
  j["t"] = record.t;
  j["step"] = record.step;
  j["problem"] = record.problem;
  j["mesh_mode"] = record.mesh_mode;
  out << j.dump(2) << '\n';
}

std::filesystem::path resolve_output_dir(const std::string& directory) {
  std::filesystem::path p(directory);
  if (p.is_relative())
    if (const char* root = std::getenv("DGALE_OUTPUT_ROOT"); root && *root)
      p = std::filesystem::path(root) / p;
  return p;
}

SnapshotWriter::SnapshotWriter(const OutputConfig& config, const std::filesystem::path& dir,
                               double t_final)
    : config_(config), dir_(dir), t_final_(t_final) {
  for (const auto& f : config.formats) {
    csv_ |= f == "csv";
    vtk_ |= f == "vtk";
    trajectory_ |= f == "trajectory";
  }
  std::filesystem::create_directories(dir_);
  next_ = config_.interval > 0.0 ? 0.0 : t_final_;
}

void SnapshotWriter::snapshot(const RunState& s) {
  std::ostringstream name;
  name << "snapshot_" << std::setw(4) << std::setfill('0') << index_++;
  if (csv_) {
    std::ofstream f(dir_ / (name.str() + ".csv"));
    write_csv(f, s.mesh, s.field, s.eos);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / (name.str() + ".csv")).string());
  }
  if (vtk_) {
    std::ofstream f(dir_ / (name.str() + ".vtk"));
    write_vtk(f, s.mesh, s.field, s.eos);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / (name.str() + ".vtk")).string());
  }
  written_t_ = s.t;
}

void SnapshotWriter::operator()(const RunState& s) {
  last_t_ = s.t;
  last_step_ = s.step;
  if (trajectory_ && s.mesh.dim == 1) {
    if (!trajectories_.is_open()) {
      trajectories_.open(dir_ / "trajectories.csv");
      trajectories_ << std::setprecision(17) << "t";
      for (int v = 0; v < s.mesh.num_vertices(); ++v) trajectories_ << ",x" << v;
      trajectories_ << '\n';
    }
    trajectories_ << s.t;
    for (const Vec2& p : s.mesh.vertices_old) trajectories_ << ',' << p.x();
    trajectories_ << '\n';
  }
  if (s.t >= next_ * (1.0 - 1e-12)) {
    snapshot(s);
    if (config_.interval > 0.0)
      while (next_ <= s.t * (1.0 + 1e-12)) next_ += config_.interval;
    if (next_ > t_final_) next_ = t_final_;
  }
}

void SnapshotWriter::finish(const RunState& s) {
  if (written_t_ != s.t) snapshot(s);
  if (trajectories_.is_open()) trajectories_.flush();
}

}  // namespace dgale
