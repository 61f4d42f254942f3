#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cdrstab/assembly.hpp"
#include "cdrstab/dmp.hpp"
#include "cdrstab/mesh.hpp"
#include "property_checks.hpp"

using namespace cdrstab;

namespace {

AlgebraicSystem assemble_plain(const Mesh& mesh, double reaction, double source) {
    ProblemSpec p;
    p.epsilon = 1.0;
    p.velocity = [](double, double) -> Vec2 { return {0.4, -0.3}; };
    p.reaction = [reaction](double, double) { return reaction; };
    p.source = [source](double, double) { return source; };
    p.boundary = [](double, double) { return 0.0; };
    p.sigma0 = std::max(0.0, reaction);
    return assemble(mesh, p);
}

// literal transcription of the local DMP statements, used as an oracle
bool local_ok_direct(const AlgebraicSystem& sys, const std::vector<double>& u,
                     const std::vector<std::vector<int>>& s, int i, bool strong) {
    double mx = -1e300, mn = 1e300;
    for (int j : s[i]) {
        mx = std::max(mx, u[j]);
        mn = std::min(mn, u[j]);
    }
    bool ok = true;
    if (sys.g[i] <= 0.0) ok = ok && u[i] <= (strong ? mx : std::max(mx, 0.0)) + 1e-10;
    if (sys.g[i] >= 0.0) ok = ok && u[i] >= (strong ? mn : std::min(mn, 0.0)) - 1e-10;
    return ok;
}

} // namespace

TEST_CASE("local checker agrees with the direct scan on small meshes") {
    std::mt19937 rng(5);
    for (int ne : {2, 3, 4}) {
        for (double source : {-1.0, 0.0, 1.0}) {
            const Mesh mesh = generate_mesh(MeshFamily::left_diag(), ne);
            const AlgebraicSystem sys = assemble_plain(mesh, 0.0, source);
            const auto s = neighborhoods(mesh);
            for (int trial = 0; trial < 20; ++trial) {
                const std::vector<double> u = testsupport::random_vector(rng, sys.n_total);
                for (bool strong : {false, true}) {
                    bool all_ok = true;
                    for (int i = 0; i < sys.n_interior; ++i)
                        all_ok = all_ok && local_ok_direct(sys, u, s, i, strong);
                    const DmpReport rep = check_local_dmp(sys, u, s, strong);
                    REQUIRE(rep.satisfied == all_ok);
                    REQUIRE(rep.satisfied == rep.violations.empty());
                }
            }
        }
    }
}

TEST_CASE("constant fields satisfy the local DMP when g vanishes") {
    const Mesh mesh = generate_mesh(MeshFamily::left_diag(), 4);
    const AlgebraicSystem sys = assemble_plain(mesh, 0.0, 0.0);
    const auto s = neighborhoods(mesh);
    const std::vector<double> u(sys.n_total, 3.14);
    CHECK(check_local_dmp(sys, u, s, false).satisfied);
    CHECK(check_local_dmp(sys, u, s, true).satisfied);
}

TEST_CASE("an interior spike under nonpositive g is reported") {
    const Mesh mesh = generate_mesh(MeshFamily::left_diag(), 4);
    const AlgebraicSystem sys = assemble_plain(mesh, 0.0, -1.0);
    const auto s = neighborhoods(mesh);
    std::vector<double> u(sys.n_total, 0.0);
    u[4] = 1.0; // strict interior maximum
    const DmpReport rep = check_local_dmp(sys, u, s, false);
    CHECK_FALSE(rep.satisfied);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].index == 4);
    CHECK(rep.violations[0].value == 1.0);
    CHECK(rep.violations[0].bound == 0.0);
}

TEST_CASE("local strong verdicts do not imply the global strong one") {
    // interior plateau at 1 with zero boundary: every interior vertex sees a
    // neighbor at its own value, but the boundary maximum is smaller
    const Mesh mesh = generate_mesh(MeshFamily::left_diag(), 3);
    REQUIRE(mesh.n_interior == 4);
    REQUIRE(mesh.n_total() == 16);
    const AlgebraicSystem sys = assemble_plain(mesh, 0.0, 0.0);
    const auto s = neighborhoods(mesh);
    std::vector<double> u(sys.n_total, 0.0);
    for (int i = 0; i < 4; ++i) u[i] = 1.0;

    CHECK(check_local_dmp(sys, u, s, true).satisfied);
    const DmpReport global_strong = check_global_dmp(sys, u, true);
    REQUIRE(global_strong.applicable);
    CHECK_FALSE(global_strong.satisfied);
    // the weak form caps at zero and is also violated here
    CHECK_FALSE(check_global_dmp(sys, u, false).satisfied);
}

TEST_CASE("general checker reduces to the local one on singletons") {
    std::mt19937 rng(17);
    const Mesh mesh = generate_mesh(MeshFamily::shifted(0.5), 4);
    const AlgebraicSystem sys = assemble_plain(mesh, 0.0, -2.0);
    const auto s = neighborhoods(mesh);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> u = testsupport::random_vector(rng, sys.n_total);
        for (int i = 0; i < sys.n_interior; ++i) {
            const DmpReport gen = check_general_dmp(sys, u, s, {i});
            const DmpReport loc = check_local_dmp(sys, u, s, true);
            bool local_ok_at_i = true;
            for (const auto& v : loc.violations) local_ok_at_i = local_ok_at_i && v.index != i;
            REQUIRE(gen.applicable);
            CHECK(gen.satisfied == local_ok_at_i);
        }
    }
}

TEST_CASE("general checker over all interior indices matches the global one") {
    std::mt19937 rng(23);
    const Mesh mesh = generate_mesh(MeshFamily::left_diag(), 4);
    const AlgebraicSystem sys = assemble_plain(mesh, 0.0, -1.0);
    const auto s = neighborhoods(mesh);
    std::vector<int> all_interior(sys.n_interior);
    for (int i = 0; i < sys.n_interior; ++i) all_interior[i] = i;
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> u = testsupport::random_vector(rng, sys.n_total);
        const DmpReport gen = check_general_dmp(sys, u, s, all_interior);
        const DmpReport glob = check_global_dmp(sys, u, true);
        REQUIRE(gen.applicable);
        REQUIRE(glob.applicable);
        CHECK(gen.satisfied == glob.satisfied);
    }
}

TEST_CASE("empty Q flags the general DMP as inapplicable") {
    AlgebraicSystem sys;
    sys.n_total = 3;
    sys.n_interior = 2;
    sys.A = testsupport::make_csr(3, {{0, 1, -1.0}, {1, 0, -1.0}}, {2.0, 2.0, 1.0});
    sys.g = {-1.0, -1.0};
    sys.ub = {0.0};
    const std::vector<std::vector<int>> s = {{1}, {0}};
    const std::vector<double> u = {5.0, 4.0, 0.0};
    const DmpReport rep = check_general_dmp(sys, u, s, {0, 1});
    CHECK_FALSE(rep.applicable);
    CHECK(rep.violations.empty());
}

TEST_CASE("strong global checks require vanishing row sums") {
    const Mesh mesh = generate_mesh(MeshFamily::left_diag(), 4);
    const AlgebraicSystem sys = assemble_plain(mesh, 1.0, 1.0); // reaction > 0
    const std::vector<double> u(sys.n_total, 0.0);
    const DmpReport rep = check_global_dmp(sys, u, true);
    CHECK_FALSE(rep.applicable);
}

TEST_CASE("zero data give the all-zero solution and a satisfied global DMP") {
    const Mesh mesh = generate_mesh(MeshFamily::left_diag(), 4);
    const AlgebraicSystem sys = assemble_plain(mesh, 0.0, 0.0);
    const std::vector<double> u(sys.n_total, 0.0);
    CHECK(check_global_dmp(sys, u, false).satisfied);
    CHECK(check_global_dmp(sys, u, true).satisfied);
}
