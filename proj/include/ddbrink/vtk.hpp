#pragma once

#include <filesystem>
#include <iosfwd>

#include "ddbrink/timestep.hpp"

namespace ddbrink {

/// Legacy ASCII unstructured grid: POINTS, CELLS, CELL_TYPES (5 = triangle).
void write_mesh_vtk(std::ostream& out, const TriangleMesh& mesh);

/// Mesh plus point data at the vertices: velocity (vector), temperature,
/// concentration and pressure (scalars) of the current level.
void write_fields_vtk(std::ostream& out, const Discretization& disc, const SimState& state);

/// Writes fields_<step>.vtk into dir and returns its path.
std::filesystem::path write_snapshot(const std::filesystem::path& dir, const Discretization& disc,
                                     const SimState& state);

}  // namespace ddbrink
