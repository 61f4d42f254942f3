#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cdrstab {

/// One quadrature point on the reference triangle {x,y >= 0, x+y <= 1},
/// weight normalized so that the weights of a rule sum to 1/2.
struct TriQuadPoint {
    double x;
    double y;
    double w;
};

using TriQuadRule = std::vector<TriQuadPoint>;

namespace detail {

/// Gauss-Legendre nodes/weights on [0,1], computed by Newton iteration on
/// the Legendre recurrence. Exact for polynomials of degree <= 2n-1.
inline void gauss_legendre_unit(int n, std::vector<double>& nodes,
                                std::vector<double>& weights) {
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        // Chebyshev initial guess on [-1,1]
        double t = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        nodes[static_cast<std::size_t>(k)] = 0.5 * (1.0 + t);
        weights[static_cast<std::size_t>(k)] =
            1.0 / ((1.0 - t * t) * dp * dp);
    }
}

/// Builds a rule exact for total degree `degree` on the reference triangle
/// via the collapsed-square (Duffy) map x = s, y = t(1-s): a monomial of
/// total degree p maps to degree p+1 in s and p in t, so n Gauss points per
/// axis with 2n-1 >= p+1 suffice.
inline TriQuadRule make_triangle_rule(int degree) {
    const int n = (degree + 3) / 2;
    std::vector<double> gx, gw;
    gauss_legendre_unit(n, gx, gw);
    TriQuadRule rule;
    rule.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double s = gx[static_cast<std::size_t>(a)];
            const double t = gx[static_cast<std::size_t>(b)];
            rule.push_back({s, t * (1.0 - s),
                            gw[static_cast<std::size_t>(a)] *
                                gw[static_cast<std::size_t>(b)] * (1.0 - s)});
        }
    }
    return rule;
}

} // namespace detail

inline constexpr int kMaxQuadDegree = 12;

/// Reference-triangle rule exact for polynomials of total degree `degree`,
/// degree in [1, 12]. Rules are cached.
inline const TriQuadRule& triangle_rule(int degree) {
    if (degree < 1 || degree > kMaxQuadDegree)
        throw std::invalid_argument("triangle_rule: degree must be in [1,12], got " +
                                    std::to_string(degree));
    static const std::vector<TriQuadRule> rules = [] {
        std::vector<TriQuadRule> r;
        r.reserve(kMaxQuadDegree);
        for (int d = 1; d <= kMaxQuadDegree; ++d) r.push_back(detail::make_triangle_rule(d));
        return r;
    }();
    return rules[static_cast<std::size_t>(degree - 1)];
}

/// Integrates f(x,y) over the triangle with vertices p0,p1,p2, exactly for
/// polynomials of total degree <= `degree`.
template <class F>
double quadrature_integrate(const std::array<double, 2>& p0,
                            const std::array<double, 2>& p1,
                            const std::array<double, 2>& p2, F&& f, int degree) {
    const TriQuadRule& rule = triangle_rule(degree);
    const double jx1 = p1[0] - p0[0], jy1 = p1[1] - p0[1];
    const double jx2 = p2[0] - p0[0], jy2 = p2[1] - p0[1];
    const double jac = std::abs(jx1 * jy2 - jx2 * jy1); // = 2*area
    double sum = 0.0;
    for (const TriQuadPoint& q : rule) {
        const double x = p0[0] + jx1 * q.x + jx2 * q.y;
        const double y = p0[1] + jy1 * q.x + jy2 * q.y;
        sum += q.w * f(x, y);
    }
    return sum * jac;
}

} // namespace cdrstab
