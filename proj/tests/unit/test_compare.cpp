#include "freefront/compare.hpp"

#include "../support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace freefront;

namespace {

ModelParams params(double rho) { return ModelParams{2.0, 1.0, 1.0, 1.0, 1.0, 1.0, rho}; }

SolverConfig config(int n, double tMax) {
    SolverConfig c;
    c.nGrid = n;
    c.tMax = tMax;
    c.snapshotInterval = tMax / 20;
    return c;
}

}  // namespace

TEST_CASE("upper solution constants", "[compare]") {
    const auto p = params(1e-3);
    const auto init = initialCosineProfile(0.5, 0.1, 0.1);
    const auto up = buildExplicitUpper(p, init);
    const double k0 = std::pow(std::numbers::pi / (2 * 0.5), 2);
    CHECK(std::abs(up.alpha - 0.5 * (k0 - 2.0)) <= 1e-12);
    CHECK(up.gamma == up.alpha);
    // delta: first-eigenvalue of the stretched interval equals lambda + alpha
    const double delta = oracle::bisect(
        [&](double x) { return std::pow(std::numbers::pi / (2 * 0.5 * (1 + x)), 2) - 2.0 - up.alpha; },
        0.0, 10.0);
    CHECK(std::abs(up.delta - delta) <= 1e-12);
    // cosine data: ratio cos(pi x/(2 h0)) / cos(pi x/(2 h0 (1 + delta/2))) peaks at x = 0
    CHECK(std::abs(up.C - 0.1) <= 1e-12);
    CHECK(std::abs(up.rho0 - up.delta * up.gamma * 0.25 / (0.1 * std::numbers::pi)) <= 1e-12);
    CHECK(up.sigma(0.0) == Catch::Approx(0.5 * (1 + 0.5 * up.delta)));
    CHECK(up.frontLimit() == Catch::Approx(0.5 * (1 + up.delta)));
    CHECK(up.w(0.0, 0.0) == Catch::Approx(0.1));
    CHECK(up.w(1.0, 10.0) == 0.0);

    const auto doubled = buildExplicitUpper(p, initialCosineProfile(0.5, 0.2, 0.1));
    CHECK(std::abs(doubled.rho0 - 0.5 * up.rho0) <= 1e-12 * up.rho0);

    CHECK_THROWS_AS(buildExplicitUpper(p, initialCosineProfile(1.2, 0.1, 0.1)), PremiseViolated);
}

TEST_CASE("small-front run stays under the upper solution", "[compare]") {
    const auto p = params(1e-3);
    const auto init = initialCosineProfile(0.5, 0.1, 0.1);
    const auto up = buildExplicitUpper(p, init);
    REQUIRE(p.rho <= up.rho0);
    const auto tr = simulate(p, init, config(200, 20.0));
    const auto rep = verifyUpperOrdering(tr, up);
    CHECK(rep.pass());
    CHECK(rep.density.worstMargin <= 1e-3);
    CHECK(rep.front.worstMargin < 0.0);
    CHECK(tr.finalFront() < up.frontLimit());

    const auto fast = simulate(params(10.0), init, config(64, 1.0));
    CHECK_THROWS_AS(verifyUpperOrdering(fast, up), PremiseViolated);
}

TEST_CASE("ordering report bookkeeping", "[compare]") {
    OrderingReport r{"x"};
    r.offer(-0.5, 1.0, 2.0);
    r.offer(-0.7, 3.0, 4.0);
    r.finish();
    CHECK(r.pass);
    CHECK(r.worstMargin == -0.5);
    CHECK(r.t == 1.0);
    CHECK(r.violation() == 0.0);
    r.offer(0.01, 5.0, 6.0);
    r.finish();
    CHECK_FALSE(r.pass);
    CHECK(r.violation() == 0.01);
    CHECK_THROWS_AS(enforce(r), PropertyViolation);
}

TEST_CASE("coupled run is sandwiched by the logistic problems", "[compare]") {
    const ModelParams p{1.5, 1.0, 1.0, 1.0, 1.0, 1.0, 5.0};
    const auto init = initialCosineProfile(1.0, 0.5, 0.5);
    const auto rep = verifyLogisticSandwich(p, init, config(200, 10.0), 1e-3, false);
    REQUIRE(rep.checks.size() == 6);
    for (const auto& c : rep.checks) {
        INFO(c.check << " margin " << c.worstMargin);
        CHECK(c.pass);
    }
    CHECK(rep.pass());
    CHECK(rep.uLower.finalFront() <= rep.coupled.finalFront());
    CHECK(rep.coupled.finalFront() <= rep.uUpper.finalFront());

    ModelParams dying = p;
    dying.lambda = 0.5;
    CHECK_THROWS_AS(verifyLogisticSandwich(dying, init, config(64, 1.0)), OutOfRegime);
}
