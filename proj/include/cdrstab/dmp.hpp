#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "cdrstab/assembly.hpp"

namespace cdrstab {

enum class DmpForm { LocalWeak, LocalStrong, General, GlobalWeak, GlobalStrong };

struct DmpViolation {
    int index;
    double value;
    double bound;
};

/// Result of a discrete-maximum-principle check. `applicable` is false when
/// the preconditions of the checked statement do not hold (empty Q set, or
/// a strong form requested while the row sums do not vanish); such reports
/// carry no violations.
struct DmpReport {
    DmpForm kind;
    bool satisfied = true;
    bool applicable = true;
    double tolerance = 0.0;
    std::vector<DmpViolation> violations;
};

namespace detail {

/// Scale used to decide whether interior row sums vanish.
inline double row_sum_scale(const AlgebraicSystem& sys) {
    double s = 0.0;
    for (int i = 0; i < sys.n_interior; ++i) {
        double abs_sum = 0.0;
        for (int k = sys.A.row_begin(i); k < sys.A.row_end(i); ++k)
            abs_sum += std::abs(sys.A.value(k));
        s = std::max(s, abs_sum);
    }
    return std::max(s, 1.0);
}

inline bool row_sums_vanish(const AlgebraicSystem& sys, std::span<const int> rows) {
    const double tol = 1e-10 * row_sum_scale(sys);
    for (int i : rows)
        if (std::abs(sys.A.row_sum(i)) > tol) return false;
    return true;
}

} // namespace detail

/// Local DMP: for every interior i with g_i <= 0, u_i must not exceed the
/// neighborhood maximum (capped at zero in the weak form); symmetrically,
/// g_i >= 0 bounds u_i from below by the neighborhood minimum. The strong
/// form (uncapped) is meaningful when the interior row sums vanish.
inline DmpReport check_local_dmp(const AlgebraicSystem& sys, std::span<const double> u,
                                 const std::vector<std::vector<int>>& s, bool strong,
                                 double tol = 1e-10) {
    DmpReport rep{strong ? DmpForm::LocalStrong : DmpForm::LocalWeak};
    rep.tolerance = tol;
    for (int i = 0; i < sys.n_interior; ++i) {
        const auto& nb = s[static_cast<std::size_t>(i)];
        if (nb.empty()) continue;
        double nb_max = u[static_cast<std::size_t>(nb[0])];
        double nb_min = nb_max;
        for (int j : nb) {
            nb_max = std::max(nb_max, u[static_cast<std::size_t>(j)]);
            nb_min = std::min(nb_min, u[static_cast<std::size_t>(j)]);
        }
        const double gi = sys.g[static_cast<std::size_t>(i)];
        const double ui = u[static_cast<std::size_t>(i)];
        if (gi <= 0.0) {
            const double bound = strong ? nb_max : std::max(nb_max, 0.0);
            if (ui > bound + tol) rep.violations.push_back({i, ui, bound});
        }
        if (gi >= 0.0) {
            const double bound = strong ? nb_min : std::min(nb_min, 0.0);
            if (ui < bound - tol) rep.violations.push_back({i, ui, bound});
        }
    }
    rep.satisfied = rep.violations.empty();
    return rep;
}

/// General DMP over a nonempty interior index set R: with P = R united with
/// the neighborhoods of R and Q = P \ R, a one-signed g on R bounds the
/// extrema over P by the extrema over Q (capped in the weak form). The
/// strong equalities are checked only when the row sums vanish on R. An
/// empty Q makes the statement inapplicable.
inline DmpReport check_general_dmp(const AlgebraicSystem& sys, std::span<const double> u,
                                   const std::vector<std::vector<int>>& s,
                                   const std::vector<int>& r, double tol = 1e-10) {
    DmpReport rep{DmpForm::General};
    rep.tolerance = tol;
    if (r.empty()) throw std::invalid_argument("check_general_dmp: R must be nonempty");
    for (int i : r)
        if (i < 0 || i >= sys.n_interior)
            throw std::invalid_argument("check_general_dmp: R must contain interior indices");

    std::set<int> p_set(r.begin(), r.end());
    for (int i : r)
        p_set.insert(s[static_cast<std::size_t>(i)].begin(), s[static_cast<std::size_t>(i)].end());
    std::set<int> r_set(r.begin(), r.end());
    std::vector<int> q;
    for (int i : p_set)
        if (!r_set.count(i)) q.push_back(i);
    if (q.empty()) {
        rep.applicable = false;
        return rep;
    }

    bool all_nonpos = true, all_nonneg = true;
    for (int i : r) {
        const double gi = sys.g[static_cast<std::size_t>(i)];
        all_nonpos = all_nonpos && gi <= 0.0;
        all_nonneg = all_nonneg && gi >= 0.0;
    }
    const bool strong = detail::row_sums_vanish(sys, r);

    int argmax_p = *p_set.begin(), argmin_p = argmax_p;
    for (int i : p_set) {
        if (u[static_cast<std::size_t>(i)] > u[static_cast<std::size_t>(argmax_p)]) argmax_p = i;
        if (u[static_cast<std::size_t>(i)] < u[static_cast<std::size_t>(argmin_p)]) argmin_p = i;
    }
    double max_q = u[static_cast<std::size_t>(q[0])], min_q = max_q;
    for (int i : q) {
        max_q = std::max(max_q, u[static_cast<std::size_t>(i)]);
        min_q = std::min(min_q, u[static_cast<std::size_t>(i)]);
    }

    if (all_nonpos) {
        const double bound = strong ? max_q : std::max(max_q, 0.0);
        if (u[static_cast<std::size_t>(argmax_p)] > bound + tol)
            rep.violations.push_back({argmax_p, u[static_cast<std::size_t>(argmax_p)], bound});
    }
    if (all_nonneg) {
        const double bound = strong ? min_q : std::min(min_q, 0.0);
        if (u[static_cast<std::size_t>(argmin_p)] < bound - tol)
            rep.violations.push_back({argmin_p, u[static_cast<std::size_t>(argmin_p)], bound});
    }
    rep.satisfied = rep.violations.empty();
    return rep;
}

/// Global DMP: the interior extrema are bounded by the boundary extrema,
/// capped at zero in the weak form. The strong form applies only when all
/// interior row sums vanish.
inline DmpReport check_global_dmp(const AlgebraicSystem& sys, std::span<const double> u,
                                  bool strong, double tol = 1e-10) {
    DmpReport rep{strong ? DmpForm::GlobalStrong : DmpForm::GlobalWeak};
    rep.tolerance = tol;
    if (strong) {
        std::vector<int> all(static_cast<std::size_t>(sys.n_interior));
        for (int i = 0; i < sys.n_interior; ++i) all[static_cast<std::size_t>(i)] = i;
        if (!detail::row_sums_vanish(sys, all)) {
            rep.applicable = false;
            return rep;
        }
    }

    bool all_nonpos = true, all_nonneg = true;
    for (double gi : sys.g) {
        all_nonpos = all_nonpos && gi <= 0.0;
        all_nonneg = all_nonneg && gi >= 0.0;
    }
    double bnd_max = u[static_cast<std::size_t>(sys.n_interior)], bnd_min = bnd_max;
    for (int i = sys.n_interior; i < sys.n_total; ++i) {
        bnd_max = std::max(bnd_max, u[static_cast<std::size_t>(i)]);
        bnd_min = std::min(bnd_min, u[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < sys.n_interior; ++i) {
        const double ui = u[static_cast<std::size_t>(i)];
        if (all_nonpos) {
            const double bound = strong ? bnd_max : std::max(bnd_max, 0.0);
            if (ui > bound + tol) rep.violations.push_back({i, ui, bound});
        }
        if (all_nonneg) {
            const double bound = strong ? bnd_min : std::min(bnd_min, 0.0);
            if (ui < bound - tol) rep.violations.push_back({i, ui, bound});
        }
    }
    rep.satisfied = rep.violations.empty();
    return rep;
}

} // namespace cdrstab
