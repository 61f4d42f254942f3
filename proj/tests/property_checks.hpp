// Shared helpers for the randomized stabilization-matrix properties. Used
// by both the unit tests and the acceptance suite.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cdrstab/sparse.hpp"
#include "cdrstab/stab.hpp"

namespace testsupport {

using cdrstab::CsrMatrix;

struct RandomSystem {
    CsrMatrix a;
    int n = 0;
    int m = 0; // interior rows
};

/// Builds a CSR matrix from off-diagonal triplets (the pattern is
/// symmetrized, missing mirror values stay 0; diagonals from `diag`).
inline CsrMatrix make_csr(int n, const std::vector<std::tuple<int, int, double>>& entries,
                          const std::vector<double>& diag = {}) {
    std::vector<std::vector<int>> pattern(static_cast<std::size_t>(n));
    for (const auto& [i, j, v] : entries) {
        (void)v;
        pattern[static_cast<std::size_t>(i)].push_back(j);
    }
    CsrMatrix a = CsrMatrix::from_pattern(n, pattern);
    for (const auto& [i, j, v] : entries) a.ref(i, j) = v;
    for (int i = 0; i < n && i < static_cast<int>(diag.size()); ++i)
        a.ref(i, i) = diag[static_cast<std::size_t>(i)];
    return a;
}

/// Random structurally symmetric matrix with mixed-sign off-diagonals and a
/// dominant positive diagonal, plus a random interior/boundary split.
inline RandomSystem random_system(std::mt19937& rng, int max_n = 50) {
    std::uniform_int_distribution<int> nd(4, max_n);
    std::uniform_real_distribution<double> vd(-2.0, 2.0);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    RandomSystem sys;
    sys.n = nd(rng);
    std::uniform_int_distribution<int> md(1, sys.n - 1);
    sys.m = md(rng);

    std::vector<std::tuple<int, int, double>> entries;
    for (int i = 0; i < sys.n; ++i)
        for (int j = i + 1; j < sys.n; ++j) {
            if (prob(rng) > 0.25) continue;
            if (prob(rng) < 0.85) entries.emplace_back(i, j, vd(rng));
            if (prob(rng) < 0.85) entries.emplace_back(j, i, vd(rng));
        }
    // a ring keeps every row populated
    for (int i = 0; i < sys.n; ++i) entries.emplace_back(i, (i + 1) % sys.n, vd(rng));

    std::vector<double> diag(static_cast<std::size_t>(sys.n));
    for (double& d : diag) d = 3.0 + prob(rng);
    sys.a = make_csr(sys.n, entries, diag);
    return sys;
}

inline std::vector<double> random_vector(std::mt19937& rng, int n, double lo = -5.0,
                                         double hi = 5.0) {
    std::uniform_real_distribution<double> vd(lo, hi);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (double& v : u) v = vd(rng);
    return u;
}

/// Neighborhood per the extended sparsity rule: j with a_ij != 0 or a_ji > 0.
inline bool in_neighborhood(const CsrMatrix& a, int i, int j) {
    return a.get(i, j) != 0.0 || a.get(j, i) > 0.0;
}

/// Verifies symmetry, nonpositive off-diagonals, zero row sums, sparsity
/// within the neighborhoods, the positive-semidefiniteness identity and the
/// crude bound |b_ij| <= max{|a_ij|, |a_ji|}. Returns an empty string on
/// success and a diagnostic otherwise.
inline std::string check_b_axioms(const CsrMatrix& a, const CsrMatrix& b, int m,
                                  std::mt19937& rng) {
    const int n = a.rows();
    double scale = 1.0;
    for (double v : b.values()) scale = std::max(scale, std::abs(v));

    for (int i = 0; i < n; ++i) {
        for (int k = b.row_begin(i); k < b.row_end(i); ++k) {
            const int j = b.col(k);
            if (j == i) continue;
            const double bij = b.value(k);
            const double bji = b.value(b.mirror(k));
            if (std::abs(bij - bji) > 1e-14 * scale) return "symmetry violated";
            if (bij > 0.0) return "positive off-diagonal";
            if (std::abs(bij) >
                std::max(std::abs(a.value(k)), std::abs(a.value(a.mirror(k)))) + 1e-14 * scale)
                return "crude bound violated";
            if (i < m && bij != 0.0 && !in_neighborhood(a, i, j))
                return "entry outside the neighborhood";
        }
        if (std::abs(b.row_sum(i)) > 1e-12 * scale) return "row sum nonzero";
    }

    // both routes of the positive-semidefiniteness identity
    const std::vector<double> v = random_vector(rng, n);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = b.row_begin(i); k < b.row_end(i); ++k) {
            const int j = b.col(k);
            const double dv = v[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(i)];
            lhs += v[static_cast<std::size_t>(i)] * b.value(k) * dv;
            rhs += -0.5 * b.value(k) * dv * dv;
        }
    const double ref = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (std::abs(lhs - rhs) > 1e-12 * ref) return "semidefiniteness identity mismatch";
    if (rhs < -1e-12 * ref) return "negative quadratic form";
    return {};
}

/// Checks beta range, scale invariance and the strict-local-extremum
/// inequality a_ij + b_ij <= 0 for the MUAS limiters.
inline std::string check_muas_limiter(const CsrMatrix& a, int m, const std::vector<double>& u,
                                      bool dq_variant) {
    const std::vector<double> beta = cdrstab::muas_limiter(a, u, m, dq_variant);
    for (double bv : beta)
        if (!(bv >= 0.0 && bv <= 1.0)) return "beta outside [0,1]";

    for (double factor : {-3.0, 0.5, 7.0}) {
        std::vector<double> su(u);
        for (double& v : su) v *= factor;
        const std::vector<double> sbeta = cdrstab::muas_limiter(a, su, m, dq_variant);
        for (std::size_t k = 0; k < beta.size(); ++k)
            if (std::abs(beta[k] - sbeta[k]) > 1e-12) return "beta not scale invariant";
    }

    const CsrMatrix b = cdrstab::muas_matrix(a, beta);
    for (int i = 0; i < m; ++i) {
        bool strict_max = true, strict_min = true, any = false;
        for (int j = 0; j < a.rows(); ++j) {
            if (j == i || !in_neighborhood(a, i, j)) continue;
            any = true;
            strict_max = strict_max && u[static_cast<std::size_t>(i)] > u[static_cast<std::size_t>(j)];
            strict_min = strict_min && u[static_cast<std::size_t>(i)] < u[static_cast<std::size_t>(j)];
        }
        if (!any || (!strict_max && !strict_min)) continue;
        for (int k = a.row_begin(i); k < a.row_end(i); ++k) {
            const int j = a.col(k);
            if (j == i) continue;
            if (a.value(k) + b.value(k) > 1e-13 * (1.0 + std::abs(a.value(k))))
                return "extremum row has positive a_ij + b_ij";
        }
    }
    return {};
}

} // namespace testsupport
