#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdrstab {

using Vec2 = std::array<double, 2>;

/// Triangulation family of the unit square. LeftDiag cuts every grid cell
/// along the bottom-left/top-right diagonal, RightDiag along the other one.
/// Shifted moves the interior nodes of every second horizontal mesh line
/// (the even ones when lines are numbered from one at the bottom boundary)
/// to the right by shift_fraction of the horizontal mesh width and
/// triangulates like LeftDiag; for shift_fraction = 0.5 this produces a
/// non-Delaunay triangulation whose sign pattern defeats the plain AFC
/// scheme on the convection benchmark.
struct MeshFamily {
    enum class Kind { LeftDiag, RightDiag, Shifted };
    Kind kind = Kind::LeftDiag;
    double shift_fraction = 0.0; // used only by Shifted

    static MeshFamily left_diag() { return {Kind::LeftDiag, 0.0}; }
    static MeshFamily right_diag() { return {Kind::RightDiag, 0.0}; }
    static MeshFamily shifted(double fraction) { return {Kind::Shifted, fraction}; }
};

/// 2D simplicial triangulation with interior-first vertex numbering:
/// vertices 0..n_interior-1 lie strictly inside the domain, the rest on the
/// boundary. Triangles are counterclockwise. `neighbors[i]` holds the
/// sorted edge-neighbors of vertex i (kept for all vertices; the S_i sets
/// of the DMP machinery are the entries with i < n_interior).
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    int n_interior = 0;
    std::vector<std::vector<int>> neighbors;

    int n_total() const { return static_cast<int>(vertices.size()); }
};

inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

namespace detail {

inline std::vector<std::vector<int>> edge_neighbors(int n_vertices,
                                                    const std::vector<std::array<int, 3>>& tris) {
    std::vector<std::vector<int>> nb(static_cast<std::size_t>(n_vertices));
    auto link = [&nb](int a, int b) {
        nb[static_cast<std::size_t>(a)].push_back(b);
        nb[static_cast<std::size_t>(b)].push_back(a);
    };
    for (const auto& t : tris) {
        link(t[0], t[1]);
        link(t[1], t[2]);
        link(t[2], t[0]);
    }
    for (auto& r : nb) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    return nb;
}

} // namespace detail

/// Generates the (ne+1) x (ne+1) vertex triangulation of the unit square for
/// the given family. Interior vertices are numbered first.
inline Mesh generate_mesh(const MeshFamily& family, int ne) {
    if (ne < 2)
        throw std::invalid_argument("generate_mesh: ne must be >= 2, got " + std::to_string(ne));
    if (family.kind != MeshFamily::Kind::Shifted && family.shift_fraction != 0.0)
        throw std::invalid_argument("generate_mesh: shift_fraction must be 0 for unshifted families");
    if (family.shift_fraction < 0.0 || family.shift_fraction >= 1.0)
        throw std::invalid_argument("generate_mesh: shift_fraction must lie in [0,1)");

    const int np = ne + 1;

    auto is_interior = [ne](int gi, int gj) {
        return gi >= 1 && gi <= ne - 1 && gj >= 1 && gj <= ne - 1;
    };

    // interior-first numbering, row-major within each class
    std::vector<int> id(static_cast<std::size_t>(np) * np, -1);
    int next = 0;
    for (int gj = 0; gj < np; ++gj)
        for (int gi = 0; gi < np; ++gi)
            if (is_interior(gi, gj)) id[static_cast<std::size_t>(gj) * np + gi] = next++;
    const int n_interior = next;
    for (int gj = 0; gj < np; ++gj)
        for (int gi = 0; gi < np; ++gi)
            if (!is_interior(gi, gj)) id[static_cast<std::size_t>(gj) * np + gi] = next++;

    Mesh mesh;
    mesh.n_interior = n_interior;
    mesh.vertices.resize(static_cast<std::size_t>(np) * np);
    for (int gj = 0; gj < np; ++gj)
        for (int gi = 0; gi < np; ++gi) {
            // grid coordinates by division so that boundary nodes land on
            // 0 and 1 exactly; line gj has 1-based number gj + 1
            const bool shift_row = family.kind == MeshFamily::Kind::Shifted &&
                                   is_interior(gi, gj) && (gj + 1) % 2 == 0;
            const double x = (gi + (shift_row ? family.shift_fraction : 0.0)) / ne;
            const double y = static_cast<double>(gj) / ne;
            mesh.vertices[static_cast<std::size_t>(id[static_cast<std::size_t>(gj) * np + gi])] = {x, y};
        }

    const bool left_diag = family.kind != MeshFamily::Kind::RightDiag;
    mesh.triangles.reserve(static_cast<std::size_t>(2) * ne * ne);
    auto v = [&id, np](int gi, int gj) { return id[static_cast<std::size_t>(gj) * np + gi]; };
    for (int cy = 0; cy < ne; ++cy)
        for (int cx = 0; cx < ne; ++cx) {
            if (left_diag) {
                mesh.triangles.push_back({v(cx, cy), v(cx + 1, cy), v(cx + 1, cy + 1)});
                mesh.triangles.push_back({v(cx, cy), v(cx + 1, cy + 1), v(cx, cy + 1)});
            } else {
                mesh.triangles.push_back({v(cx, cy), v(cx + 1, cy), v(cx, cy + 1)});
                mesh.triangles.push_back({v(cx + 1, cy), v(cx + 1, cy + 1), v(cx, cy + 1)});
            }
        }

    for (const auto& t : mesh.triangles) {
        if (triangle_area(mesh.vertices[static_cast<std::size_t>(t[0])],
                          mesh.vertices[static_cast<std::size_t>(t[1])],
                          mesh.vertices[static_cast<std::size_t>(t[2])]) <= 0.0)
            throw std::logic_error("generate_mesh: non-positive triangle area");
    }

    mesh.neighbors = detail::edge_neighbors(mesh.n_total(), mesh.triangles);
    return mesh;
}

/// The neighborhood sets S_i of the interior vertices: j is in S_i iff x_i
/// and x_j are end points of the same edge. Defined for i < n_interior.
inline std::vector<std::vector<int>> neighborhoods(const Mesh& mesh) {
    return {mesh.neighbors.begin(), mesh.neighbors.begin() + mesh.n_interior};
}

} // namespace cdrstab
