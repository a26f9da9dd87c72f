#include "freefront/model.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace freefront;
using Catch::Matchers::WithinAbs;

namespace {

ModelParams base(double lambda = 1.5) { return ModelParams{lambda, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}; }

/// Random parameters with 0 < m lambda - b < b mu / c.
ModelParams drawCoexist(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.2, 3.0), frac(0.05, 0.95);
    ModelParams p;
    p.mu = U(rng);
    p.b = U(rng);
    p.c = U(rng);
    p.d = U(rng);
    p.m = U(rng);
    p.rho = U(rng);
    const double excess = frac(rng) * p.b * p.mu / p.c;
    p.lambda = (p.b + excess) / p.m;
    return p;
}

}  // namespace

TEST_CASE("response function", "[model]") {
    CHECK(response(0, 0, 1) == 0.0);
    CHECK_THAT(response(1, 1, 1), WithinAbs(0.5, 1e-15));
    CHECK(response(2.5, 0, 0.7) == 0.0);
    CHECK_THROWS_AS(response(-1e-3, 1, 1), DomainError);
    CHECK_THROWS_AS(response(1, -1, 1), DomainError);
    CHECK(detail::responseKernel(-1e-18, 0.0, 1.0) == 0.0);
}

TEST_CASE("parameter validation names the field", "[model]") {
    auto p = base();
    p.rho = 0.0;
    CHECK_THROWS_WITH(p.validate(), "rho must be positive");
    p = base();
    p.b = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK_NOTHROW(p.validate(true));
    p.d = -1;
    CHECK_THROWS_WITH(p.validate(true), "d must be positive");
}

TEST_CASE("regime predicates follow the fields", "[model]") {
    auto p = base(2.0);
    CHECK(p.preySurvives());
    CHECK_FALSE(p.coexistRegime());  // m lambda - b == b mu / c
    p.lambda = 1.5;
    CHECK(p.coexistRegime());
    p.lambda = 0.9;
    CHECK_FALSE(p.preySurvives());
    p.lambda = 5.0;
    p.d = 0.5;
    CHECK(p.preyFaster());  // 0.5 * 2 <= 4
    p.d = 3.0;
    CHECK_FALSE(p.preyFaster());
}

TEST_CASE("closed-form equilibrium", "[model]") {
    const auto eq = equilibriumClosedForm(base(1.5));
    CHECK_THAT(eq.A, WithinAbs(1.5, 1e-14));
    CHECK_THAT(eq.delta1, WithinAbs(4.25, 1e-14));
    CHECK_THAT(eq.uStar, WithinAbs(0.8903882, 1e-7));
    CHECK_THAT(eq.vStar, WithinAbs(1.390388, 1e-6));
    // substitute back into the kinetic system
    const double u = eq.uStar, v = eq.vStar;
    CHECK(std::abs(1.5 - u - v / (u + v)) < 1e-9);
    CHECK(std::abs(1.0 - v + u / (u + v)) < 1e-9);
    CHECK(eq.residual1 <= 1e-10);
    CHECK(eq.residual2 <= 1e-10);

    CHECK_THROWS_AS(equilibriumClosedForm(base(2.0)), OutOfRegime);
    try {
        equilibriumClosedForm(base(2.0));
    } catch (const OutOfRegime& e) {
        CHECK(std::string(e.what()).find("0 < m*lambda - b < b*mu/c") != std::string::npos);
    }
}

TEST_CASE("phi and psi return the positive roots", "[model]") {
    const auto p = base(1.5);
    CHECK(phiMap(0.0, p) == p.lambda);
    CHECK(psiMap(0.0, p) == p.mu);
    CHECK_THAT(psiMap(1.5, p), WithinAbs((1.0 + std::sqrt(7.0)) / 2.0, 1e-12));
    const double s = 1.8228757;
    const double u = phiMap(s, p);
    CHECK_THAT(u, WithinAbs(0.806800, 1e-5));
    CHECK(std::abs(u * u - (p.lambda - p.m * s) * u - (p.m * p.lambda - p.b) * s) < 1e-9);

    for (int i = 0; i <= 200; ++i) {
        const double x = 10.0 * p.lambda * i / 200.0;
        const double uu = phiMap(x, p);
        const double vv = psiMap(x, p);
        CHECK(uu > 0.0);
        CHECK(std::abs(uu * uu - (p.lambda - p.m * x) * uu - (p.m * p.lambda - p.b) * x) <=
              1e-10 * std::max(1.0, uu * uu));
        CHECK(std::abs(p.m * vv * vv - (p.m * p.mu + (p.c - 1.0) * x) * vv - x * p.mu) <=
              1e-10 * std::max(1.0, vv * vv));
    }
    CHECK_THROWS_AS(phiMap(-1.0, p), DomainError);
    CHECK_THROWS_AS(psiMap(-1.0, p), DomainError);
}

TEST_CASE("predator nullcline solves the equilibrium predator equation", "[model]") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const auto p = drawCoexist(rng);
        CHECK_THAT(predatorNullcline(0.0, p), WithinAbs(p.mu, 1e-14));
        for (int i = 0; i <= 50; ++i) {
            const double s = 10.0 * p.lambda * i / 50.0;
            const double v = predatorNullcline(s, p);
            CHECK(v > 0.0);
            if (s > 0.0) CHECK(std::abs(p.mu - v + p.c * s / (s + p.m * v)) <= 1e-12 * std::max(1.0, v));
        }
        const auto eq = equilibriumClosedForm(p);
        CHECK(std::abs(predatorNullcline(eq.uStar, p) - eq.vStar) <= 1e-10);
        CHECK(std::abs(phiMap(eq.vStar, p) - eq.uStar) <= 1e-10);
    }
}

TEST_CASE("psi is non-decreasing (finite differences)", "[model]") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const auto p = drawCoexist(rng);
        double prev = psiMap(0.0, p);
        for (int i = 1; i <= 400; ++i) {
            const double s = 10.0 * p.lambda * i / 400.0;
            const double cur = psiMap(s, p);
            CHECK(cur >= prev - 1e-14 * cur);
            prev = cur;
        }
    }
}

TEST_CASE("monotone iteration squeezes onto the equilibrium", "[model]") {
    const auto p = base(1.5);
    const auto tr = iterateEquilibrium(p);
    REQUIRE(tr.iterations >= 1);
    CHECK(tr.uUpper[0] == 1.5);
    // predator nullcline at u = 1.5: v^2 + 0.5 v - 3 = 0, v = 1.5; then u^2 = 0.75
    CHECK_THAT(tr.vUpper[0], WithinAbs(1.5, 1e-14));
    CHECK_THAT(tr.uLower[0], WithinAbs(std::sqrt(0.75), 1e-14));
    CHECK(tr.converged);
    CHECK(tr.monotone);
    const auto eq = equilibriumClosedForm(p);
    CHECK(std::abs(tr.uUpper.back() - eq.uStar) <= 1e-9);
    CHECK(std::abs(tr.vLower.back() - eq.vStar) <= 1e-9);
    for (std::size_t i = 0; i + 1 < tr.uUpper.size(); ++i) {
        CHECK(tr.uUpper[i + 1] <= tr.uUpper[i] + 1e-14);
        CHECK(tr.uLower[i + 1] >= tr.uLower[i] - 1e-14);
        CHECK(tr.uLower[i] <= tr.uUpper[i] + 1e-14);
        CHECK(tr.vLower[i] <= tr.vUpper[i] + 1e-14);
    }
    const auto capped = iterateEquilibrium(p, 1e-10, 2);
    CHECK_FALSE(capped.converged);
    CHECK(capped.iterations == 2);
}

TEST_CASE("fixed point agrees with closed form over random draws", "[model]") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 60; ++k) {
        const auto p = drawCoexist(rng);
        const auto eq = equilibriumClosedForm(p);
        const auto tr = iterateEquilibrium(p, 1e-10);
        CHECK(eq.uStar > 0.0);
        CHECK(eq.vStar > 0.0);
        CHECK(eq.residual1 <= 1e-10);
        CHECK(eq.residual2 <= 1e-10);
        CHECK(tr.converged);
        CHECK(tr.monotone);
        CHECK(std::abs(tr.uUpper.back() - eq.uStar) <= 1e-9);
        CHECK(std::abs(tr.vUpper.back() - eq.vStar) <= 1e-9);
    }
}

TEST_CASE("principal eigenvalue and barrier", "[model]") {
    auto p = base(2.0);
    const auto th = spreadingBarrier(p);
    CHECK_THAT(th.Lambda, WithinAbs(std::numbers::pi / 2.0, 1e-15));
    CHECK_THAT(th.hStarLower, WithinAbs(1.1107207345, 1e-9));
    CHECK(std::abs(th.sigma1(th.Lambda)) < 1e-12);
    CHECK(std::abs(principalEigenvalue(std::numbers::pi / 2, p)) < 1e-12);
    CHECK_THAT(principalEigenvalue(1e8, p), WithinAbs(-1.0, 1e-12));
    CHECK_THROWS_AS(principalEigenvalue(0.0, p), DomainError);
    double prev = principalEigenvalue(0.1, p);
    for (int i = 1; i < 100; ++i) {
        const double s = principalEigenvalue(0.1 + 0.1 * i, p);
        CHECK(s < prev);
        prev = s;
    }
    p.lambda = 0.5;
    CHECK_THROWS_AS(spreadingBarrier(p), OutOfRegime);
}

TEST_CASE("speed constants", "[model]") {
    const auto p = base(2.0);
    const auto sc = speedConstants(p, 2.0);
    CHECK_THAT(sc.c1, WithinAbs(2.0, 1e-15));
    CHECK_THAT(sc.c2, WithinAbs(2.0 * std::sqrt(2.0), 1e-15));
    CHECK_THAT(sc.c3, WithinAbs(2.0, 1e-15));
    CHECK_THAT(sc.c4, WithinAbs(2.0 * std::sqrt(2.0), 1e-15));
    CHECK_THAT(sc.s, WithinAbs(4.0, 1e-15));
    REQUIRE(sc.c5.has_value());
    CHECK_THAT(*sc.c5, WithinAbs(2.0 * std::sqrt(1.2), 1e-14));
    CHECK(sc.c5AboveC1);
    CHECK(sc.c3 < sc.c4);
    CHECK_THROWS_AS(speedConstants(p, 0.0), DomainError);

    // b s / (1 + m s) < b / m, so under m lambda > b the c5 radicand stays
    // positive and c5 lands above c1.
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        const auto q = drawCoexist(rng);
        const auto sq = speedConstants(q, 0.5 + k);
        REQUIRE(sq.c5.has_value());
        CHECK(*sq.c5 > sq.c1);
        CHECK(*sq.c5 < sq.c2);
    }
}
