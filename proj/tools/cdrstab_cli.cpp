// Command-line driver: solves one configuration of the benchmark problems
// or runs a convergence sweep against the manufactured solution.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdrstab/experiments.hpp"
#include "cdrstab/vtk.hpp"

namespace {

using nlohmann::ordered_json;

ordered_json dmp_to_json(const cdrstab::DmpReport& rep) {
    ordered_json j;
    j["applicable"] = rep.applicable;
    j["satisfied"] = rep.satisfied;
    j["tolerance"] = rep.tolerance;
    j["violation_count"] = rep.violations.size();
    ordered_json v = ordered_json::array();
    std::size_t shown = 0;
    for (const auto& viol : rep.violations) {
        if (shown++ >= 50) break;
        v.push_back({{"index", viol.index}, {"value", viol.value}, {"bound", viol.bound}});
    }
    j["violations"] = v;
    return j;
}

int run_solve_command(const cdrstab::ExperimentSpec& spec, int ne) {
    const cdrstab::Mesh mesh = cdrstab::generate_mesh(spec.family, ne);
    const cdrstab::SolveReport rep = cdrstab::run_solve_on_mesh(mesh, spec, ne);

    std::printf("example=%s scheme=%s mesh=%s ne=%d\n", cdrstab::to_string(spec.example).c_str(),
                cdrstab::to_string(spec.scheme).c_str(), cdrstab::to_string(spec.family).c_str(),
                ne);
    std::printf("converged=%d iterations=%d residual=%.3e\n", rep.result.converged ? 1 : 0,
                rep.result.iterations, rep.result.final_residual);
    std::printf("min=%.12g max=%.12g\n", rep.min_u, rep.max_u);
    auto verdict = [](const cdrstab::DmpReport& r) {
        return !r.applicable ? "n/a" : (r.satisfied ? "satisfied" : "violated");
    };
    std::printf("dmp: local_weak=%s local_strong=%s global_weak=%s global_strong=%s\n",
                verdict(rep.local_weak), verdict(rep.local_strong), verdict(rep.global_weak),
                verdict(rep.global_strong));

    if (!spec.vtk_path.empty()) cdrstab::emit_vtk(mesh, rep.result.U, spec.vtk_path);
    if (!spec.json_path.empty()) {
        ordered_json j;
        j["example"] = cdrstab::to_string(spec.example);
        j["scheme"] = cdrstab::to_string(spec.scheme);
        j["mesh"] = cdrstab::to_string(spec.family);
        j["shift"] = spec.family.shift_fraction;
        j["ne"] = ne;
        j["lump_reaction"] = spec.lump_reaction;
        j["converged"] = rep.result.converged;
        j["iterations"] = rep.result.iterations;
        j["final_residual"] = rep.result.final_residual;
        j["min"] = rep.min_u;
        j["max"] = rep.max_u;
        j["dmp"]["local_weak"] = dmp_to_json(rep.local_weak);
        j["dmp"]["local_strong"] = dmp_to_json(rep.local_strong);
        j["dmp"]["global_weak"] = dmp_to_json(rep.global_weak);
        j["dmp"]["global_strong"] = dmp_to_json(rep.global_strong);
        std::ofstream out(spec.json_path);
        if (!out) throw std::runtime_error("cannot open " + spec.json_path);
        out << j.dump(2) << '\n';
    }
    return rep.result.converged ? 0 : 2;
}

int run_converge_command(const cdrstab::ExperimentSpec& spec) {
    const cdrstab::ConvergenceStudy study = cdrstab::run_convergence(spec);
    std::fputs(cdrstab::format_csv(study.rows).c_str(), stdout);
    return study.completed ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"P1 finite-element solver for convection-diffusion-reaction problems "
                 "with algebraic stabilization and DMP verification"};
    app.require_subcommand(1);

    std::string example = "smooth", mesh_kind = "shifted", scheme = "muas";
    double shift = 0.5;
    int ne = 20;
    std::vector<int> ne_list;
    bool lump = false;
    cdrstab::SolverOptions sopts;
    std::string csv_path, vtk_path, json_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--example", example, "Problem: reaction|convection|smooth")
            ->check(CLI::IsMember({"reaction", "convection", "smooth"}));
        cmd->add_option("--mesh", mesh_kind, "Mesh family: left|right|shifted")
            ->check(CLI::IsMember({"left", "right", "shifted"}));
        cmd->add_option("--shift", shift, "Shift fraction for the shifted family");
        cmd->add_option("--scheme", scheme, "galerkin|upwind|afc-kuzmin|muas|muas-dq")
            ->check(CLI::IsMember({"galerkin", "upwind", "afc-kuzmin", "muas", "muas-dq"}));
        cmd->add_flag("--lump-reaction", lump, "Lump the reaction term");
        cmd->add_option("--tol", sopts.tol, "Relative nonlinear residual tolerance");
        cmd->add_option("--max-iter", sopts.max_iter, "Fixed-point iteration cap");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one configuration");
    add_common(solve_cmd);
    solve_cmd->add_option("--ne", ne, "Edges per horizontal mesh line")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--vtk", vtk_path, "Write the solution as legacy VTK");
    solve_cmd->add_option("--json", json_path, "Write the solve/DMP report as JSON");

    CLI::App* conv_cmd = app.add_subcommand("converge", "Run a convergence sweep");
    add_common(conv_cmd);
    conv_cmd->add_option("--ne-list", ne_list, "Doubling ne values, e.g. 16,32,64")
        ->delimiter(',');
    conv_cmd->add_option("--csv", csv_path, "Write the error table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cdrstab::ExperimentSpec spec;
        spec.example = cdrstab::parse_example(example);
        spec.family = cdrstab::parse_mesh_family(mesh_kind, mesh_kind == "shifted" ? shift : 0.0);
        spec.scheme = cdrstab::parse_scheme(scheme);
        spec.lump_reaction = lump;
        spec.solver = sopts;
        spec.csv_path = csv_path;
        spec.vtk_path = vtk_path;
        spec.json_path = json_path;

        if (solve_cmd->parsed()) return run_solve_command(spec, ne);
        spec.ne_list = ne_list.empty() ? std::vector<int>{16, 32, 64, 128, 256} : ne_list;
        return run_converge_command(spec);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
