#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cdrstab/mesh.hpp"

namespace cdrstab {

struct MeshParseError : std::runtime_error {
    MeshParseError(const std::string& path, int line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

/// Plain-text mesh format: line 1 holds `N M T`, followed by N `x y` vertex
/// lines and T `i j k` triangle lines with 1-based vertex indices.
inline void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_mesh: cannot open " + path);
    out << mesh.n_total() << ' ' << mesh.n_interior << ' ' << mesh.triangles.size() << '\n';
    char buf[64];
    for (const auto& p : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p[0], p[1]);
        out << buf;
    }
    for (const auto& t : mesh.triangles)
        out << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    if (!out) throw std::runtime_error("write_mesh: write failed for " + path);
}

inline Mesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_mesh: cannot open " + path);

    int lineno = 0;
    std::string line;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) throw MeshParseError(path, lineno, "empty file");
    long n = 0, m = 0, t = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> n >> m >> t) || n <= 0 || m < 0 || m >= n || t <= 0)
            throw MeshParseError(path, lineno, "expected header 'N M T' with 0 <= M < N");
    }

    Mesh mesh;
    mesh.n_interior = static_cast<int>(m);
    mesh.vertices.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        if (!next_line()) throw MeshParseError(path, lineno, "unexpected end of file in vertex list");
        std::istringstream ss(line);
        double x = 0.0, y = 0.0;
        if (!(ss >> x >> y)) throw MeshParseError(path, lineno, "expected 'x y'");
        mesh.vertices.push_back({x, y});
    }
    mesh.triangles.reserve(static_cast<std::size_t>(t));
    for (long i = 0; i < t; ++i) {
        if (!next_line()) throw MeshParseError(path, lineno, "unexpected end of file in triangle list");
        std::istringstream ss(line);
        long a = 0, b = 0, c = 0;
        if (!(ss >> a >> b >> c)) throw MeshParseError(path, lineno, "expected 'i j k'");
        for (long idx : {a, b, c})
            if (idx < 1 || idx > n)
                throw MeshParseError(path, lineno,
                                     "vertex index " + std::to_string(idx) + " out of range [1," +
                                         std::to_string(n) + "]");
        mesh.triangles.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1),
                                  static_cast<int>(c - 1)});
    }
    mesh.neighbors = detail::edge_neighbors(mesh.n_total(), mesh.triangles);
    return mesh;
}

} // namespace cdrstab
