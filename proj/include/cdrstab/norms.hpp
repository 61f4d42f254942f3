#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cdrstab/assembly.hpp"
#include "cdrstab/mesh.hpp"
#include "cdrstab/quadrature.hpp"
#include "cdrstab/sparse.hpp"
#include "cdrstab/stab.hpp"

namespace cdrstab {

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double hnorm = 0.0;
};

/// L2 and H1-seminorm errors of the P1 function with nodal values `u`
/// against the exact solution, plus the solution-dependent energy norm
///   hnorm^2 = epsilon |u - u_h|_1^2 + sigma0 |u - u_h|_0^2 + e^T B e,
/// where e is the nodal interpolation error (the only part of u - u_h the
/// stabilization form can see) and B the stabilization matrix at the
/// solution. Quadrature is exact to degree 12.
inline ErrorNorms error_norms(const Mesh& mesh,
                              const std::function<double(double, double)>& u_exact,
                              const std::function<Vec2(double, double)>& grad_u_exact,
                              std::span<const double> u, const CsrMatrix& b_at_solution,
                              double epsilon, double sigma0) {
    double l2_sq = 0.0, h1_sq = 0.0;
    const TriQuadRule& rule = triangle_rule(kMaxQuadDegree);
    for (const auto& t : mesh.triangles) {
        const Vec2& p0 = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Vec2& p1 = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Vec2& p2 = mesh.vertices[static_cast<std::size_t>(t[2])];
        const double jac = 2.0 * triangle_area(p0, p1, p2);
        const double u0 = u[static_cast<std::size_t>(t[0])];
        const double u1 = u[static_cast<std::size_t>(t[1])];
        const double u2 = u[static_cast<std::size_t>(t[2])];
        const Vec2 grad_uh = {
            ((p1[1] - p2[1]) * u0 + (p2[1] - p0[1]) * u1 + (p0[1] - p1[1]) * u2) / jac,
            ((p2[0] - p1[0]) * u0 + (p0[0] - p2[0]) * u1 + (p1[0] - p0[0]) * u2) / jac};
        for (const TriQuadPoint& q : rule) {
            const double x = p0[0] + (p1[0] - p0[0]) * q.x + (p2[0] - p0[0]) * q.y;
            const double y = p0[1] + (p1[1] - p0[1]) * q.x + (p2[1] - p0[1]) * q.y;
            const double uh = u0 * (1.0 - q.x - q.y) + u1 * q.x + u2 * q.y;
            const double du = u_exact(x, y) - uh;
            const Vec2 ge = grad_u_exact(x, y);
            const double gx = ge[0] - grad_uh[0];
            const double gy = ge[1] - grad_uh[1];
            const double w = q.w * jac;
            l2_sq += w * du * du;
            h1_sq += w * (gx * gx + gy * gy);
        }
    }

    // stabilization part on the nodal interpolation error
    std::vector<double> e(static_cast<std::size_t>(mesh.n_total()));
    for (int i = 0; i < mesh.n_total(); ++i) {
        const Vec2& p = mesh.vertices[static_cast<std::size_t>(i)];
        e[static_cast<std::size_t>(i)] = u_exact(p[0], p[1]) - u[static_cast<std::size_t>(i)];
    }
    const std::vector<double> be = b_at_solution.multiply(e);
    double b_term = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) b_term += e[i] * be[i];
    b_term = std::max(b_term, 0.0); // nonnegative up to roundoff

    ErrorNorms out;
    out.l2 = std::sqrt(l2_sq);
    out.h1_semi = std::sqrt(h1_sq);
    out.hnorm = std::sqrt(epsilon * h1_sq + sigma0 * l2_sq + b_term);
    return out;
}

struct ErrorTableRow {
    int ne = 0;
    double err_l2 = 0.0;
    double err_h1_semi = 0.0;
    double err_hnorm = 0.0;
    std::optional<double> ord_l2;
    std::optional<double> ord_h1_semi;
    std::optional<double> ord_hnorm;
    int iterations = 0;
    bool converged = false;
};

/// Fills the order columns: order = log2(err_prev / err_curr). Requires ne
/// to double between consecutive rows; the first row has no orders.
inline void convergence_orders(std::vector<ErrorTableRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].ne != 2 * rows[i - 1].ne)
            throw std::invalid_argument("convergence_orders: ne sequence must double");
        rows[i].ord_l2 = std::log2(rows[i - 1].err_l2 / rows[i].err_l2);
        rows[i].ord_h1_semi = std::log2(rows[i - 1].err_h1_semi / rows[i].err_h1_semi);
        rows[i].ord_hnorm = std::log2(rows[i - 1].err_hnorm / rows[i].err_hnorm);
    }
    if (!rows.empty()) {
        rows[0].ord_l2.reset();
        rows[0].ord_h1_semi.reset();
        rows[0].ord_hnorm.reset();
    }
}

/// Max |b_ij(U)| for U the nodal values of c0 + c1 x + c2 y; a value at
/// roundoff level certifies linearity preservation for this function.
inline double linearity_preservation_probe(const Mesh& mesh, const AlgebraicSystem& sys,
                                           StabScheme scheme, double c0, double c1, double c2) {
    std::vector<double> u(static_cast<std::size_t>(mesh.n_total()));
    for (int i = 0; i < mesh.n_total(); ++i) {
        const Vec2& p = mesh.vertices[static_cast<std::size_t>(i)];
        u[static_cast<std::size_t>(i)] = c0 + c1 * p[0] + c2 * p[1];
    }
    const CsrMatrix d = artificial_diffusion_matrix(sys.A);
    const CsrMatrix b = stabilization_matrix(scheme, sys.A, d, u, sys.n_interior);
    double m = 0.0;
    for (double v : b.values()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace cdrstab
