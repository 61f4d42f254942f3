#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cdrstab/sparse.hpp"

namespace cdrstab {

/// Stabilization of the algebraic problem. Galerkin adds nothing, UpwindD
/// adds the full linear upwind matrix D, AfcKuzmin the flux-corrected
/// matrix (1 - alpha) D with the Kuzmin limiter, Muas the monotone
/// upwind-type matrix -max{beta_ij a_ij, 0, beta_ji a_ji}. MuasDq is Muas
/// with q_ij replaced by |d_ij| in the Q sums.
enum class StabScheme { Galerkin, UpwindD, AfcKuzmin, Muas, MuasDq };

inline bool is_linear_scheme(StabScheme s) {
    return s == StabScheme::Galerkin || s == StabScheme::UpwindD;
}

/// Counters for situations the schemes leave formally underdetermined.
struct LimiterDiag {
    // Kuzmin pairs with a_ij == a_ji but d_ij != 0: the symmetrized limiter
    // is ambiguous there; the row-min orientation is used.
    int ambiguous_ties = 0;
};

/// Linear artificial diffusion: d_ij = d_ji = -max{a_ij, 0, a_ji} off the
/// diagonal and zero row sums. Symmetric positive semidefinite.
inline CsrMatrix artificial_diffusion_matrix(const CsrMatrix& a) {
    CsrMatrix d = a.clone_pattern();
    const int n = a.rows();
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int k = a.row_begin(i); k < a.row_end(i); ++k) {
            const int j = a.col(k);
            if (j == i) continue;
            const double dij = -std::max({a.value(k), 0.0, a.value(a.mirror(k))});
            d.value(k) = dij;
            diag -= dij;
        }
        d.ref(i, i) = diag;
    }
    return d;
}

namespace detail {

struct RowBounds {
    double r_plus = 1.0;
    double r_minus = 1.0;
};

inline double ratio_bound(double q, double p) {
    // R = min{1, Q/P}, with R = 1 when P vanishes
    return p == 0.0 ? 1.0 : std::min(1.0, q / p);
}

} // namespace detail

/// Kuzmin limiter of the AFC scheme. Returns a matrix on the pattern of
/// `a` whose off-diagonal values are the symmetrized limiter factors
/// alpha_ij in [0,1] (diagonal entries are set to 1 and never used).
///
/// For every interior row, the fluxes f_ij = d_ij (u_j - u_i) accumulate
///   P_i^+/- over the neighbors with a_ji <= a_ij,
///   Q_i^+ = -sum_j f_ij^-,  Q_i^- = -sum_j f_ij^+,
/// and R_i^+/- = min{1, Q/P} (1 where P vanishes; 1 on boundary rows).
/// The factor of a pair is taken from the row that wins a_ji <= a_ij; an
/// exact tie with d_ij != 0 is resolved toward the smaller row index and
/// counted in `diag`, since the scheme is not uniquely defined there.
inline CsrMatrix kuzmin_limiter(const CsrMatrix& a, const CsrMatrix& d,
                                std::span<const double> u, int n_interior,
                                LimiterDiag* diag = nullptr) {
    const int n = a.rows();
    std::vector<detail::RowBounds> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n_interior; ++i) {
        double p_plus = 0.0, p_minus = 0.0, q_plus = 0.0, q_minus = 0.0;
        for (int k = a.row_begin(i); k < a.row_end(i); ++k) {
            const int j = a.col(k);
            if (j == i) continue;
            const double f = d.value(k) * (u[static_cast<std::size_t>(j)] -
                                           u[static_cast<std::size_t>(i)]);
            const double f_plus = std::max(0.0, f);
            const double f_minus = std::min(0.0, f);
            if (a.value(a.mirror(k)) <= a.value(k)) {
                p_plus += f_plus;
                p_minus += f_minus;
            }
            q_plus -= f_minus;
            q_minus -= f_plus;
        }
        r[static_cast<std::size_t>(i)] = {detail::ratio_bound(q_plus, p_plus),
                                          detail::ratio_bound(q_minus, p_minus)};
    }

    CsrMatrix alpha = a.clone_pattern();
    for (int i = 0; i < n; ++i) {
        for (int k = a.row_begin(i); k < a.row_end(i); ++k) {
            const int j = a.col(k);
            if (j == i) {
                alpha.value(k) = 1.0;
                continue;
            }
            if (j < i) continue; // handle each pair once, from the lower row
            const double aij = a.value(k);
            const double aji = a.value(a.mirror(k));
            int up_row = i;
            int up_entry = k;
            if (aij < aji) {
                up_row = j;
                up_entry = a.mirror(k);
            } else if (aij == aji) {
                if (diag && d.value(k) != 0.0) ++diag->ambiguous_ties;
            }
            const double f = d.value(up_entry) *
                             (u[static_cast<std::size_t>(a.col(up_entry))] -
                              u[static_cast<std::size_t>(up_row)]);
            double av = 1.0;
            if (f > 0.0)
                av = r[static_cast<std::size_t>(up_row)].r_plus;
            else if (f < 0.0)
                av = r[static_cast<std::size_t>(up_row)].r_minus;
            alpha.value(k) = av;
            alpha.value(a.mirror(k)) = av;
        }
    }
    return alpha;
}

/// AFC matrix b_ij = (1 - alpha_ij) d_ij, diagonal from zero row sums.
inline CsrMatrix afc_matrix(const CsrMatrix& d, const CsrMatrix& alpha) {
    CsrMatrix b = d.clone_pattern();
    const int n = d.rows();
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int k = d.row_begin(i); k < d.row_end(i); ++k) {
            if (d.col(k) == i) continue;
            const double bij = (1.0 - alpha.value(k)) * d.value(k);
            b.value(k) = bij;
            diag -= bij;
        }
        b.ref(i, i) = diag;
    }
    return b;
}

/// MUAS limiter factors beta_ij, stored per nonzero of `a` (row-oriented,
/// diagonal slots 0). With `dq_variant` the Q sums use |d_ij| instead of
/// q_ij = max{|a_ij|, a_ji}.
///
/// For interior rows,
///   P_i^+/- = sum_{a_ij > 0} a_ij (u_i - u_j)^+/-,
///   Q_i^+/- = sum_j q_ij (u_j - u_i)^+/-,
///   R_i^+/- = min{1, Q/P} (1 where P vanishes; 1 on boundary rows),
/// and beta_ij = 1 - R_i^+ if u_i > u_j, 0 if u_i = u_j, 1 - R_i^- else.
/// beta depends only on differences of u, so it is invariant under
/// u -> scale * u for any nonzero scale.
inline std::vector<double> muas_limiter(const CsrMatrix& a, std::span<const double> u,
                                        int n_interior, bool dq_variant = false) {
    const int n = a.rows();
    std::vector<detail::RowBounds> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n_interior; ++i) {
        double p_plus = 0.0, p_minus = 0.0, q_plus = 0.0, q_minus = 0.0;
        for (int k = a.row_begin(i); k < a.row_end(i); ++k) {
            const int j = a.col(k);
            if (j == i) continue;
            const double aij = a.value(k);
            const double aji = a.value(a.mirror(k));
            const double diff = u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)];
            if (aij > 0.0) {
                p_plus += aij * std::max(0.0, diff);
                p_minus += aij * std::min(0.0, diff);
            }
            const double q = dq_variant ? std::max({aij, 0.0, aji})
                                        : std::max(std::abs(aij), aji);
            q_plus += q * std::max(0.0, -diff);
            q_minus += q * std::min(0.0, -diff);
        }
        r[static_cast<std::size_t>(i)] = {detail::ratio_bound(q_plus, p_plus),
                                          detail::ratio_bound(q_minus, p_minus)};
    }

    std::vector<double> beta(static_cast<std::size_t>(a.nnz()), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = a.row_begin(i); k < a.row_end(i); ++k) {
            const int j = a.col(k);
            if (j == i) continue;
            const double ui = u[static_cast<std::size_t>(i)];
            const double uj = u[static_cast<std::size_t>(j)];
            if (ui > uj)
                beta[static_cast<std::size_t>(k)] = 1.0 - r[static_cast<std::size_t>(i)].r_plus;
            else if (ui < uj)
                beta[static_cast<std::size_t>(k)] = 1.0 - r[static_cast<std::size_t>(i)].r_minus;
        }
    }
    return beta;
}

/// MUAS matrix b_ij = -max{beta_ij a_ij, 0, beta_ji a_ji}; symmetric even
/// for a nonsymmetric limiter, diagonal from zero row sums.
inline CsrMatrix muas_matrix(const CsrMatrix& a, std::span<const double> beta) {
    if (static_cast<int>(beta.size()) != a.nnz())
        throw std::invalid_argument("muas_matrix: beta size must match nnz");
    CsrMatrix b = a.clone_pattern();
    const int n = a.rows();
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int k = a.row_begin(i); k < a.row_end(i); ++k) {
            if (a.col(k) == i) continue;
            const int km = a.mirror(k);
            const double bij = -std::max({beta[static_cast<std::size_t>(k)] * a.value(k), 0.0,
                                          beta[static_cast<std::size_t>(km)] * a.value(km)});
            b.value(k) = bij;
            diag -= bij;
        }
        b.ref(i, i) = diag;
    }
    return b;
}

/// B(U) of the requested scheme. `d` must be artificial_diffusion_matrix(a)
/// (ignored by the MUAS variants).
inline CsrMatrix stabilization_matrix(StabScheme scheme, const CsrMatrix& a,
                                      const CsrMatrix& d, std::span<const double> u,
                                      int n_interior, LimiterDiag* diag = nullptr) {
    switch (scheme) {
    case StabScheme::Galerkin:
        return a.clone_pattern();
    case StabScheme::UpwindD:
        return d;
    case StabScheme::AfcKuzmin:
        return afc_matrix(d, kuzmin_limiter(a, d, u, n_interior, diag));
    case StabScheme::Muas:
        return muas_matrix(a, muas_limiter(a, u, n_interior, false));
    case StabScheme::MuasDq:
        return muas_matrix(a, muas_limiter(a, u, n_interior, true));
    }
    throw std::logic_error("stabilization_matrix: unknown scheme");
}

} // namespace cdrstab
