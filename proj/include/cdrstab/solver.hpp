#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "cdrstab/assembly.hpp"
#include "cdrstab/sparse.hpp"
#include "cdrstab/stab.hpp"

namespace cdrstab {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    double tol = 1e-10;          // relative nonlinear residual tolerance
    int max_iter = 10000;        // fixed-point iteration cap
    double damping = 1.0;        // initial omega in (0,1]
    double damping_floor = 1.0 / 64.0;
    double linear_tol = 1e-13;   // relative linear-solve residual
};

struct SolveResult {
    std::vector<double> U;
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    std::vector<double> damping_history;
};

/// Infinity norm of the interior residual g_i - sum_j (a_ij + b_ij) u_j.
inline double nonlinear_residual_inf(const AlgebraicSystem& sys, const CsrMatrix& b,
                                     std::span<const double> u) {
    double r = 0.0;
    for (int i = 0; i < sys.n_interior; ++i) {
        double s = sys.g[static_cast<std::size_t>(i)];
        for (int k = sys.A.row_begin(i); k < sys.A.row_end(i); ++k)
            s -= (sys.A.value(k) + b.value(k)) * u[static_cast<std::size_t>(sys.A.col(k))];
        r = std::max(r, std::abs(s));
    }
    return r;
}

namespace detail {

inline void check_residual_or_refine(
    const Eigen::SparseMatrix<double>& mat,
    const Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>& lu,
    const Eigen::VectorXd& rhs, Eigen::VectorXd& x, double linear_tol) {
    // normwise backward-error scale |K|_inf |x|_inf + |rhs|_inf
    double mat_norm = 0.0;
    for (int j = 0; j < mat.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(mat, j); it; ++it)
            mat_norm = std::max(mat_norm, std::abs(it.value()));
    const double scale = std::max(
        mat_norm * x.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff(), 1e-300);
    double rel = 0.0;
    for (int pass = 0; pass < 3; ++pass) {
        const Eigen::VectorXd res = rhs - mat * x;
        rel = res.cwiseAbs().maxCoeff() / scale;
        if (rel <= linear_tol) return;
        if (pass == 2) break;
        x += lu.solve(res);
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "relative residual %.3g exceeds tolerance %.3g", rel,
                  linear_tol);
    throw SolverError(std::string("linear solve: ") + buf);
}

} // namespace detail

/// Direct sparse solve of K x = rhs (square, nonsingular), relative residual
/// checked against linear_tol with iterative refinement as back-up.
inline std::vector<double> linear_solve(const CsrMatrix& k, std::span<const double> rhs,
                                        double linear_tol = 1e-13) {
    const int n = k.rows();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("linear_solve: rhs size mismatch");
    Eigen::SparseMatrix<double> mat(n, n);
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(k.nnz()));
        for (int i = 0; i < n; ++i)
            for (int e = k.row_begin(i); e < k.row_end(i); ++e)
                trips.emplace_back(i, k.col(e), k.value(e));
        mat.setFromTriplets(trips.begin(), trips.end());
    }
    mat.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(mat);
    lu.factorize(mat);
    if (lu.info() != Eigen::Success)
        throw SolverError("linear_solve: factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw SolverError("linear_solve: back substitution failed");
    detail::check_residual_or_refine(mat, lu, b, x, linear_tol);
    return {x.data(), x.data() + n};
}

/// Solver for (A + B) U = g with Dirichlet rows replaced by the identity and
/// boundary columns moved to the right-hand side. The sparsity pattern is
/// fixed by A, so the symbolic factorization is reused across calls.
class DirichletSolver {
public:
    explicit DirichletSolver(const AlgebraicSystem& sys)
        : n_(sys.n_total), m_(sys.n_interior) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(sys.A.nnz()) + static_cast<std::size_t>(n_ - m_));
        for (int i = 0; i < m_; ++i)
            for (int k = sys.A.row_begin(i); k < sys.A.row_end(i); ++k)
                if (sys.A.col(k) < m_) trips.emplace_back(i, sys.A.col(k), 0.0);
        for (int i = m_; i < n_; ++i) trips.emplace_back(i, i, 1.0);
        mat_.resize(n_, n_);
        mat_.setFromTriplets(trips.begin(), trips.end());
        mat_.makeCompressed();

        slot_.assign(static_cast<std::size_t>(sys.A.nnz()), -1);
        const int* outer = mat_.outerIndexPtr();
        const int* inner = mat_.innerIndexPtr();
        for (int i = 0; i < m_; ++i)
            for (int k = sys.A.row_begin(i); k < sys.A.row_end(i); ++k) {
                const int j = sys.A.col(k);
                if (j >= m_) continue;
                const int lo = outer[j], hi = outer[j + 1];
                const int* it = std::lower_bound(inner + lo, inner + hi, i);
                slot_[static_cast<std::size_t>(k)] = static_cast<int>(it - inner);
            }
    }

    /// Solves (A + B) u = g with the stored elimination; boundary entries of
    /// the result equal ub exactly.
    std::vector<double> solve(const AlgebraicSystem& sys, const CsrMatrix& b,
                              double linear_tol = 1e-13) {
        double* vals = mat_.valuePtr();
        Eigen::VectorXd rhs(n_);
        for (int i = 0; i < m_; ++i) {
            double r = sys.g[static_cast<std::size_t>(i)];
            for (int k = sys.A.row_begin(i); k < sys.A.row_end(i); ++k) {
                const int j = sys.A.col(k);
                const double kij = sys.A.value(k) + b.value(k);
                if (j < m_)
                    vals[slot_[static_cast<std::size_t>(k)]] = kij;
                else
                    r -= kij * sys.ub[static_cast<std::size_t>(j - m_)];
            }
            rhs[i] = r;
        }
        for (int i = m_; i < n_; ++i) rhs[i] = sys.ub[static_cast<std::size_t>(i - m_)];

        if (!analyzed_) {
            lu_.analyzePattern(mat_);
            analyzed_ = true;
        }
        lu_.factorize(mat_);
        if (lu_.info() != Eigen::Success)
            throw SolverError("DirichletSolver: factorization failed: " + lu_.lastErrorMessage());
        Eigen::VectorXd x = lu_.solve(rhs);
        if (lu_.info() != Eigen::Success)
            throw SolverError("DirichletSolver: back substitution failed");
        detail::check_residual_or_refine(mat_, lu_, rhs, x, linear_tol);
        std::vector<double> u(x.data(), x.data() + n_);
        for (int i = m_; i < n_; ++i)
            u[static_cast<std::size_t>(i)] = sys.ub[static_cast<std::size_t>(i - m_)];
        return u;
    }

private:
    int n_, m_;
    Eigen::SparseMatrix<double> mat_;
    std::vector<int> slot_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
};

/// One damped fixed-point step: solve (A + B(U_k)) u_hat = g with Dirichlet
/// elimination, return U_k + omega (u_hat - U_k). Dirichlet entries of U_k
/// must be exact and are preserved.
inline std::vector<double> fixed_point_step(const AlgebraicSystem& sys, StabScheme scheme,
                                            std::span<const double> u_k, double omega,
                                            double linear_tol = 1e-13) {
    const CsrMatrix d = artificial_diffusion_matrix(sys.A);
    const CsrMatrix b = stabilization_matrix(scheme, sys.A, d, u_k, sys.n_interior);
    DirichletSolver lin(sys);
    std::vector<double> u_hat = lin.solve(sys, b, linear_tol);
    for (int i = 0; i < sys.n_total; ++i)
        u_hat[static_cast<std::size_t>(i)] =
            u_k[static_cast<std::size_t>(i)] +
            omega * (u_hat[static_cast<std::size_t>(i)] - u_k[static_cast<std::size_t>(i)]);
    return u_hat;
}

/// Solves the stabilized problem. Linear schemes take one solve; the
/// nonlinear ones run a damped fixed-point iteration started from the
/// solution of the linear upwind problem. Convergence is measured by the
/// infinity norm of the residual of the original nonlinear system relative
/// to max(1, |g|_inf). Exceeding max_iter yields converged = false rather
/// than an error.
inline SolveResult solve(const AlgebraicSystem& sys, StabScheme scheme,
                         const SolverOptions& opts = {}) {
    if (!(opts.tol > 0.0 && opts.tol < 1.0))
        throw std::invalid_argument("solve: tol must lie in (0,1)");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw std::invalid_argument("solve: damping must lie in (0,1]");

    double gscale = 1.0;
    for (double v : sys.g) gscale = std::max(gscale, std::abs(v));

    const CsrMatrix d = artificial_diffusion_matrix(sys.A);
    DirichletSolver lin(sys);
    SolveResult res;

    if (is_linear_scheme(scheme)) {
        const CsrMatrix b = scheme == StabScheme::Galerkin ? sys.A.clone_pattern() : d;
        res.U = lin.solve(sys, b, opts.linear_tol);
        res.iterations = 1;
        res.final_residual = nonlinear_residual_inf(sys, b, res.U);
        res.converged = res.final_residual <= opts.tol * gscale;
        return res;
    }

    std::vector<double> u = lin.solve(sys, d, opts.linear_tol);
    CsrMatrix b = stabilization_matrix(scheme, sys.A, d, u, sys.n_interior);
    double r = nonlinear_residual_inf(sys, b, u);
    double omega = opts.damping;
    int decrease_streak = 0;
    int it = 0;
    while (r > opts.tol * gscale && it < opts.max_iter) {
        const std::vector<double> u_hat = lin.solve(sys, b, opts.linear_tol);
        for (int i = 0; i < sys.n_total; ++i)
            u[static_cast<std::size_t>(i)] += omega * (u_hat[static_cast<std::size_t>(i)] -
                                                       u[static_cast<std::size_t>(i)]);
        ++it;
        res.damping_history.push_back(omega);
        b = stabilization_matrix(scheme, sys.A, d, u, sys.n_interior);
        const double r_new = nonlinear_residual_inf(sys, b, u);
        if (r_new > r) {
            omega = std::max(0.5 * omega, opts.damping_floor);
            decrease_streak = 0;
        } else if (++decrease_streak >= 3) {
            omega = std::min(2.0 * omega, 1.0);
            decrease_streak = 0;
        }
        r = r_new;
    }

    res.U = std::move(u);
    res.iterations = it;
    res.final_residual = r;
    res.converged = r <= opts.tol * gscale;
    return res;
}

} // namespace cdrstab
