#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "cdrstab/quadrature.hpp"

using cdrstab::quadrature_integrate;
using cdrstab::triangle_rule;

namespace {

const std::array<double, 2> kRef0 = {0.0, 0.0};
const std::array<double, 2> kRef1 = {1.0, 0.0};
const std::array<double, 2> kRef2 = {0.0, 1.0};

// exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!
double monomial_exact(int a, int b) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

} // namespace

TEST_CASE("reference values on the unit right triangle") {
    auto one = [](double, double) { return 1.0; };
    auto x = [](double x_, double) { return x_; };
    auto x4y2 = [](double x_, double y_) { return x_ * x_ * x_ * x_ * y_ * y_; };

    CHECK(quadrature_integrate(kRef0, kRef1, kRef2, one, 1) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(quadrature_integrate(kRef0, kRef1, kRef2, x, 1) ==
          Catch::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(quadrature_integrate(kRef0, kRef1, kRef2, x4y2, 6) ==
          Catch::Approx(1.0 / 840.0).epsilon(1e-13));
}

TEST_CASE("rules are exact for all monomials of their degree") {
    for (int degree = 1; degree <= 12; ++degree) {
        for (int a = 0; a <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                const double got = quadrature_integrate(
                    kRef0, kRef1, kRef2,
                    [a, b](double x, double y) { return std::pow(x, a) * std::pow(y, b); },
                    degree);
                REQUIRE_THAT(got, Catch::Matchers::WithinAbs(monomial_exact(a, b), 1e-14));
            }
        }
    }
}

TEST_CASE("exactness transfers to mapped triangles") {
    // integrate p(F^{-1}(x)) over F(ref) and compare with |det J| * exact
    const std::array<double, 2> q0 = {0.3, -0.2};
    const std::array<double, 2> q1 = {1.7, 0.4};
    const std::array<double, 2> q2 = {0.1, 1.9};
    const double jx1 = q1[0] - q0[0], jy1 = q1[1] - q0[1];
    const double jx2 = q2[0] - q0[0], jy2 = q2[1] - q0[1];
    const double det = jx1 * jy2 - jx2 * jy1;
    auto inv = [&](double x, double y) -> std::array<double, 2> {
        const double rx = x - q0[0], ry = y - q0[1];
        return {(jy2 * rx - jx2 * ry) / det, (-jy1 * rx + jx1 * ry) / det};
    };
    for (int degree : {2, 5, 9, 12}) {
        for (int a = 0; a <= degree; a += 2) {
            const int b = degree - a;
            auto f = [&](double x, double y) {
                const auto uv = inv(x, y);
                return std::pow(uv[0], a) * std::pow(uv[1], b);
            };
            const double got = quadrature_integrate(q0, q1, q2, f, degree);
            REQUIRE_THAT(got, Catch::Matchers::WithinRel(std::abs(det) * monomial_exact(a, b),
                                                         1e-12));
        }
    }
}

TEST_CASE("unsupported degrees are rejected") {
    CHECK_THROWS_AS(triangle_rule(0), std::invalid_argument);
    CHECK_THROWS_AS(triangle_rule(13), std::invalid_argument);
    CHECK_THROWS_AS(triangle_rule(-2), std::invalid_argument);
}
