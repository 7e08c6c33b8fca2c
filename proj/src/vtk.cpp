#include "ddbrink/vtk.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace ddbrink {

void write_mesh_vtk(std::ostream& out, const TriangleMesh& mesh) {
    out << "# vtk DataFile Version 3.0\nddbrink\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out.precision(12);
    out << "POINTS " << mesh.vertex_count() << " double\n";
    for (const Point& p : mesh.vertices()) out << p.x << ' ' << p.y << " 0\n";
    const std::size_t nt = mesh.triangle_count();
    out << "CELLS " << nt << ' ' << 4 * nt << '\n';
    for (const auto& tri : mesh.triangles()) out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    out << "CELL_TYPES " << nt << '\n';
    for (std::size_t t = 0; t < nt; ++t) out << "5\n";
}

void write_fields_vtk(std::ostream& out, const Discretization& disc, const SimState& state) {
    const TriangleMesh& mesh = *disc.mesh;
    const std::size_t nv = mesh.vertex_count();
    // vertices come first in every node numbering, so vertex v has node v
    if (state.u_n.size() < static_cast<Eigen::Index>(2 * nv) || state.temp_n.size() < static_cast<Eigen::Index>(nv) ||
        state.conc_n.size() < static_cast<Eigen::Index>(nv) || state.p_n.size() < static_cast<Eigen::Index>(nv)) {
        throw std::invalid_argument("state does not match the discretization");
    }
    write_mesh_vtk(out, mesh);
    out << "POINT_DATA " << nv << "\nVECTORS velocity double\n";
    for (std::size_t v = 0; v < nv; ++v) out << state.u_n[2 * v] << ' ' << state.u_n[2 * v + 1] << " 0\n";
    auto scalar = [&](const char* name, const Vector& c) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (std::size_t v = 0; v < nv; ++v) out << c[v] << '\n';
    };
    scalar("temperature", state.temp_n);
    scalar("concentration", state.conc_n);
    scalar("pressure", state.p_n);
}

std::filesystem::path write_snapshot(const std::filesystem::path& dir, const Discretization& disc,
                                     const SimState& state) {
    std::filesystem::create_directories(dir);
    const auto path = dir / ("fields_" + std::to_string(state.step) + ".vtk");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    write_fields_vtk(out, disc, state);
    return path;
}

}  // namespace ddbrink
