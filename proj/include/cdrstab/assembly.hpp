#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdrstab/mesh.hpp"
#include "cdrstab/quadrature.hpp"
#include "cdrstab/sparse.hpp"

namespace cdrstab {

/// Data of one boundary-value problem
///   -epsilon * Laplace(u) + velocity . grad(u) + reaction * u = source,
/// with Dirichlet values `boundary` and a constant lower bound sigma0 of the
/// reaction coefficient (used by the energy norm).
struct ProblemSpec {
    double epsilon = 1.0;
    std::function<Vec2(double, double)> velocity;
    std::function<double(double, double)> reaction;
    std::function<double(double, double)> source;
    std::function<double(double, double)> boundary;
    double sigma0 = 0.0;
};

/// Extended N x N system: A holds the bilinear form for all vertex pairs
/// (Dirichlet rows are not modified here), g the interior right-hand side
/// entries, ub the nodal Dirichlet values of vertices n_interior..n_total-1.
struct AlgebraicSystem {
    CsrMatrix A;
    std::vector<double> g;
    std::vector<double> ub;
    int n_interior = 0;
    int n_total = 0;

    double boundary_value(int i) const { return ub[static_cast<std::size_t>(i - n_interior)]; }

    /// U with interior entries from `x` (or zero) and exact Dirichlet tail.
    std::vector<double> with_boundary(const std::vector<double>& interior = {}) const {
        std::vector<double> u(static_cast<std::size_t>(n_total), 0.0);
        for (std::size_t i = 0; i < interior.size(); ++i) u[i] = interior[i];
        for (int i = n_interior; i < n_total; ++i)
            u[static_cast<std::size_t>(i)] = boundary_value(i);
        return u;
    }
};

namespace detail {

// quadrature degrees: matrix terms are exact for the constant/affine
// coefficients of interest; the source uses a high-order rule so that
// degree-6 manufactured right-hand sides are integrated exactly
inline constexpr int kMatrixQuadDegree = 2;
inline constexpr int kSourceQuadDegree = 7;

} // namespace detail

/// Assembles the P1 system on `mesh`. With `lump_reaction` the reaction
/// term contributes (reaction, phi_i) to the diagonal of every row instead
/// of the consistent mass-type coupling.
inline AlgebraicSystem assemble(const Mesh& mesh, const ProblemSpec& problem,
                                bool lump_reaction = false) {
    if (problem.epsilon <= 0.0)
        throw std::invalid_argument("assemble: epsilon must be positive");
    if (!problem.velocity || !problem.reaction || !problem.source || !problem.boundary)
        throw std::invalid_argument("assemble: all coefficient functions must be set");

    const int n = mesh.n_total();
    const int m = mesh.n_interior;

    AlgebraicSystem sys;
    sys.n_total = n;
    sys.n_interior = m;
    sys.A = CsrMatrix::from_pattern(n, mesh.neighbors);
    sys.g.assign(static_cast<std::size_t>(m), 0.0);
    sys.ub.resize(static_cast<std::size_t>(n - m));

    const TriQuadRule& mat_rule = triangle_rule(detail::kMatrixQuadDegree);
    const TriQuadRule& src_rule = triangle_rule(detail::kSourceQuadDegree);

    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& t = mesh.triangles[ti];
        const Vec2& p0 = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Vec2& p1 = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Vec2& p2 = mesh.vertices[static_cast<std::size_t>(t[2])];
        const double area = triangle_area(p0, p1, p2);
        const double jac = 2.0 * area;

        // constant P1 basis gradients
        const std::array<Vec2, 3> grad = {{
            {(p1[1] - p2[1]) / jac, (p2[0] - p1[0]) / jac},
            {(p2[1] - p0[1]) / jac, (p0[0] - p2[0]) / jac},
            {(p0[1] - p1[1]) / jac, (p1[0] - p0[0]) / jac},
        }};

        std::array<std::array<double, 3>, 3> elem{};
        std::array<double, 3> elem_lumped{};

        // diffusion: gradients constant, exact without quadrature
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                elem[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                    problem.epsilon * area *
                    (grad[static_cast<std::size_t>(a)][0] * grad[static_cast<std::size_t>(b)][0] +
                     grad[static_cast<std::size_t>(a)][1] * grad[static_cast<std::size_t>(b)][1]);

        for (const TriQuadPoint& q : mat_rule) {
            const double x = p0[0] + (p1[0] - p0[0]) * q.x + (p2[0] - p0[0]) * q.y;
            const double y = p0[1] + (p1[1] - p0[1]) * q.x + (p2[1] - p0[1]) * q.y;
            const std::array<double, 3> phi = {1.0 - q.x - q.y, q.x, q.y};
            const Vec2 b = problem.velocity(x, y);
            const double c = problem.reaction(x, y);
            if (!std::isfinite(b[0]) || !std::isfinite(b[1]) || !std::isfinite(c))
                throw std::runtime_error("assemble: non-finite coefficient on triangle " +
                                         std::to_string(ti));
            const double w = q.w * jac;
            for (int a = 0; a < 3; ++a) {
                const double wphi = w * phi[static_cast<std::size_t>(a)];
                for (int bb = 0; bb < 3; ++bb) {
                    const double conv = (b[0] * grad[static_cast<std::size_t>(bb)][0] +
                                         b[1] * grad[static_cast<std::size_t>(bb)][1]);
                    elem[static_cast<std::size_t>(a)][static_cast<std::size_t>(bb)] +=
                        wphi * (conv + (lump_reaction ? 0.0 : c * phi[static_cast<std::size_t>(bb)]));
                }
                if (lump_reaction) elem_lumped[static_cast<std::size_t>(a)] += wphi * c;
            }
        }

        std::array<double, 3> elem_src{};
        for (const TriQuadPoint& q : src_rule) {
            const double x = p0[0] + (p1[0] - p0[0]) * q.x + (p2[0] - p0[0]) * q.y;
            const double y = p0[1] + (p1[1] - p0[1]) * q.x + (p2[1] - p0[1]) * q.y;
            const double gval = problem.source(x, y);
            if (!std::isfinite(gval))
                throw std::runtime_error("assemble: non-finite source on triangle " +
                                         std::to_string(ti));
            const double w = q.w * jac;
            elem_src[0] += w * gval * (1.0 - q.x - q.y);
            elem_src[1] += w * gval * q.x;
            elem_src[2] += w * gval * q.y;
        }

        for (int a = 0; a < 3; ++a) {
            const int gi = t[static_cast<std::size_t>(a)];
            for (int b = 0; b < 3; ++b)
                sys.A.ref(gi, t[static_cast<std::size_t>(b)]) +=
                    elem[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (lump_reaction) sys.A.ref(gi, gi) += elem_lumped[static_cast<std::size_t>(a)];
            if (gi < m) sys.g[static_cast<std::size_t>(gi)] += elem_src[static_cast<std::size_t>(a)];
        }
    }

    for (int i = m; i < n; ++i) {
        const Vec2& p = mesh.vertices[static_cast<std::size_t>(i)];
        const double v = problem.boundary(p[0], p[1]);
        if (!std::isfinite(v))
            throw std::runtime_error("assemble: non-finite boundary value at vertex " +
                                     std::to_string(i));
        sys.ub[static_cast<std::size_t>(i - m)] = v;
    }
    return sys;
}

} // namespace cdrstab
