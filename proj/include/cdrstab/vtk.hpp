#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>

#include "cdrstab/mesh.hpp"

namespace cdrstab {

/// Writes the nodal field `u` as a legacy ASCII VTK unstructured grid
/// (POINTS / CELLS with triangles / POINT_DATA scalar "u").
inline void emit_vtk(const Mesh& mesh, std::span<const double> u, const std::string& path) {
    if (static_cast<int>(u.size()) != mesh.n_total())
        throw std::invalid_argument("emit_vtk: field size must match vertex count");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_vtk: cannot open " + path);

    char buf[96];
    out << "# vtk DataFile Version 3.0\n";
    out << "cdrstab solution\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_total() << " double\n";
    for (const auto& p : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g 0\n", p[0], p[1]);
        out << buf;
    }
    const std::size_t t = mesh.triangles.size();
    out << "CELLS " << t << ' ' << 4 * t << '\n';
    for (const auto& tri : mesh.triangles)
        out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    out << "CELL_TYPES " << t << '\n';
    for (std::size_t i = 0; i < t; ++i) out << "5\n";
    out << "POINT_DATA " << mesh.n_total() << '\n';
    out << "SCALARS u double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : u) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
    if (!out) throw std::runtime_error("emit_vtk: write failed for " + path);
}

} // namespace cdrstab
