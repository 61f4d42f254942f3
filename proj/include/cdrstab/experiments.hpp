#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdrstab/assembly.hpp"
#include "cdrstab/dmp.hpp"
#include "cdrstab/mesh.hpp"
#include "cdrstab/norms.hpp"
#include "cdrstab/solver.hpp"
#include "cdrstab/stab.hpp"

namespace cdrstab {

/// The three benchmark problems on the unit square.
///
/// Reaction:   eps = 1e-8, b = (0.004, 0.012), c = g = 1, u_b = 0; the
///             solution is close to 1 away from the boundary layers.
/// Convection: eps = 1e-2, b = (cos(-pi/3), sin(-pi/3)), c = g = 0,
///             u_b = 0 on {x=1} and {y=0}, 1 elsewhere (imposed nodally).
/// Smooth:     eps = 10, b = (3, 2), c = 1, u_b = 0, with the source chosen
///             so that u = 100 x^2 (1-x)^2 y (1-y) (1-2y) solves the problem.
enum class ExampleProblem { Reaction, Convection, Smooth };

namespace smooth_solution {

inline double u(double x, double y) {
    return 100.0 * x * x * (1.0 - x) * (1.0 - x) * y * (1.0 - y) * (1.0 - 2.0 * y);
}

inline Vec2 grad_u(double x, double y) {
    const double gx =
        200.0 * x * (1.0 - x) * (1.0 - 2.0 * x) * y * (1.0 - y) * (1.0 - 2.0 * y);
    const double gy = 100.0 * x * x * (1.0 - x) * (1.0 - x) * (6.0 * y * y - 6.0 * y + 1.0);
    return {gx, gy};
}

inline double laplace_u(double x, double y) {
    const double uxx = 200.0 * (6.0 * x * x - 6.0 * x + 1.0) * y * (1.0 - y) * (1.0 - 2.0 * y);
    const double uyy = 100.0 * x * x * (1.0 - x) * (1.0 - x) * (12.0 * y - 6.0);
    return uxx + uyy;
}

inline double source(double x, double y) {
    const Vec2 g = grad_u(x, y);
    return -10.0 * laplace_u(x, y) + 3.0 * g[0] + 2.0 * g[1] + u(x, y);
}

} // namespace smooth_solution

inline ProblemSpec problem_spec(ExampleProblem example) {
    ProblemSpec p;
    switch (example) {
    case ExampleProblem::Reaction:
        p.epsilon = 1e-8;
        p.velocity = [](double, double) -> Vec2 { return {0.004, 0.012}; };
        p.reaction = [](double, double) { return 1.0; };
        p.source = [](double, double) { return 1.0; };
        p.boundary = [](double, double) { return 0.0; };
        p.sigma0 = 1.0;
        return p;
    case ExampleProblem::Convection:
        p.epsilon = 1e-2;
        p.velocity = [](double, double) -> Vec2 {
            return {std::cos(-M_PI / 3.0), std::sin(-M_PI / 3.0)};
        };
        p.reaction = [](double, double) { return 0.0; };
        p.source = [](double, double) { return 0.0; };
        p.boundary = [](double x, double y) {
            return (std::abs(x - 1.0) < 1e-12 || std::abs(y) < 1e-12) ? 0.0 : 1.0;
        };
        p.sigma0 = 0.0;
        return p;
    case ExampleProblem::Smooth:
        p.epsilon = 10.0;
        p.velocity = [](double, double) -> Vec2 { return {3.0, 2.0}; };
        p.reaction = [](double, double) { return 1.0; };
        p.source = smooth_solution::source;
        p.boundary = [](double, double) { return 0.0; };
        p.sigma0 = 1.0;
        return p;
    }
    throw std::logic_error("problem_spec: unknown example");
}

struct ExperimentSpec {
    ExampleProblem example = ExampleProblem::Smooth;
    MeshFamily family = MeshFamily::shifted(0.5);
    std::vector<int> ne_list = {20};
    StabScheme scheme = StabScheme::Muas;
    bool lump_reaction = false;
    SolverOptions solver;
    std::string csv_path;
    std::string vtk_path;
    std::string json_path;
};

// name mappings shared by the CLI and the report writers

inline std::string to_string(StabScheme s) {
    switch (s) {
    case StabScheme::Galerkin: return "galerkin";
    case StabScheme::UpwindD: return "upwind";
    case StabScheme::AfcKuzmin: return "afc-kuzmin";
    case StabScheme::Muas: return "muas";
    case StabScheme::MuasDq: return "muas-dq";
    }
    return "?";
}

inline StabScheme parse_scheme(const std::string& s) {
    if (s == "galerkin") return StabScheme::Galerkin;
    if (s == "upwind") return StabScheme::UpwindD;
    if (s == "afc-kuzmin") return StabScheme::AfcKuzmin;
    if (s == "muas") return StabScheme::Muas;
    if (s == "muas-dq") return StabScheme::MuasDq;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

inline std::string to_string(ExampleProblem e) {
    switch (e) {
    case ExampleProblem::Reaction: return "reaction";
    case ExampleProblem::Convection: return "convection";
    case ExampleProblem::Smooth: return "smooth";
    }
    return "?";
}

inline ExampleProblem parse_example(const std::string& s) {
    if (s == "reaction") return ExampleProblem::Reaction;
    if (s == "convection") return ExampleProblem::Convection;
    if (s == "smooth") return ExampleProblem::Smooth;
    throw std::invalid_argument("unknown example '" + s + "'");
}

inline std::string to_string(const MeshFamily& f) {
    switch (f.kind) {
    case MeshFamily::Kind::LeftDiag: return "left";
    case MeshFamily::Kind::RightDiag: return "right";
    case MeshFamily::Kind::Shifted: return "shifted";
    }
    return "?";
}

inline MeshFamily parse_mesh_family(const std::string& s, double shift) {
    if (s == "left") return MeshFamily::left_diag();
    if (s == "right") return MeshFamily::right_diag();
    if (s == "shifted") return MeshFamily::shifted(shift);
    throw std::invalid_argument("unknown mesh family '" + s + "'");
}

/// Everything a single solve produces: the iterate, the field extrema and
/// the four DMP verdicts with the edge-neighborhood sets.
struct SolveReport {
    int ne = 0;
    SolveResult result;
    double min_u = 0.0;
    double max_u = 0.0;
    DmpReport local_weak, local_strong, global_weak, global_strong;
};

inline SolveReport run_solve_on_mesh(const Mesh& mesh, const ExperimentSpec& spec, int ne) {
    const ProblemSpec problem = problem_spec(spec.example);
    const AlgebraicSystem sys = assemble(mesh, problem, spec.lump_reaction);
    SolveReport rep;
    rep.ne = ne;
    rep.result = solve(sys, spec.scheme, spec.solver);
    rep.min_u = rep.max_u = rep.result.U[0];
    for (double v : rep.result.U) {
        rep.min_u = std::min(rep.min_u, v);
        rep.max_u = std::max(rep.max_u, v);
    }
    const std::vector<std::vector<int>> s = neighborhoods(mesh);
    rep.local_weak = check_local_dmp(sys, rep.result.U, s, false);
    rep.local_strong = check_local_dmp(sys, rep.result.U, s, true);
    rep.global_weak = check_global_dmp(sys, rep.result.U, false);
    rep.global_strong = check_global_dmp(sys, rep.result.U, true);
    return rep;
}

namespace detail {

inline std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

inline std::string format_order(const std::optional<double>& o) {
    if (!o) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *o);
    return buf;
}

} // namespace detail

inline std::string format_csv(const std::vector<ErrorTableRow>& rows) {
    std::ostringstream out;
    out << "ne,err_l2,ord_l2,err_h1,ord_h1,err_h,ord_h,iters,converged\n";
    for (const auto& r : rows) {
        out << r.ne << ',' << detail::format_sci(r.err_l2) << ',' << detail::format_order(r.ord_l2)
            << ',' << detail::format_sci(r.err_h1_semi) << ',' << detail::format_order(r.ord_h1_semi)
            << ',' << detail::format_sci(r.err_hnorm) << ',' << detail::format_order(r.ord_hnorm)
            << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
    }
    return out.str();
}

struct ConvergenceStudy {
    std::vector<ErrorTableRow> rows;
    bool completed = false; // false when a solve failed to converge
};

/// Runs the convergence sweep of the manufactured-solution problem over the
/// given (doubling) ne list. A non-converged solve truncates the sweep; the
/// partial table still carries that row with converged = 0.
inline ConvergenceStudy run_convergence(const ExperimentSpec& spec) {
    if (spec.example != ExampleProblem::Smooth)
        throw std::invalid_argument("run_convergence: only the smooth example has an exact solution");
    const ProblemSpec problem = problem_spec(spec.example);

    ConvergenceStudy study;
    study.completed = true;
    for (int ne : spec.ne_list) {
        const Mesh mesh = generate_mesh(spec.family, ne);
        const AlgebraicSystem sys = assemble(mesh, problem, spec.lump_reaction);
        const SolveResult sol = solve(sys, spec.scheme, spec.solver);

        ErrorTableRow row;
        row.ne = ne;
        row.iterations = sol.iterations;
        row.converged = sol.converged;
        if (sol.converged) {
            const CsrMatrix d = artificial_diffusion_matrix(sys.A);
            const CsrMatrix b =
                stabilization_matrix(spec.scheme, sys.A, d, sol.U, sys.n_interior);
            const ErrorNorms err =
                error_norms(mesh, smooth_solution::u, smooth_solution::grad_u, sol.U, b,
                            problem.epsilon, problem.sigma0);
            row.err_l2 = err.l2;
            row.err_h1_semi = err.h1_semi;
            row.err_hnorm = err.hnorm;
        }
        study.rows.push_back(row);
        if (!sol.converged) {
            study.completed = false;
            break;
        }
    }

    std::vector<ErrorTableRow> converged_rows;
    for (const auto& r : study.rows)
        if (r.converged) converged_rows.push_back(r);
    convergence_orders(converged_rows);
    for (std::size_t i = 0; i < converged_rows.size(); ++i) study.rows[i] = converged_rows[i];

    if (!spec.csv_path.empty()) {
        std::ofstream out(spec.csv_path);
        if (!out) throw std::runtime_error("run_convergence: cannot open " + spec.csv_path);
        out << format_csv(study.rows);
    }
    return study;
}

} // namespace cdrstab
