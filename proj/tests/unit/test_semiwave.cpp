#include "freefront/semiwave.hpp"

#include "../support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace freefront;

TEST_CASE("speed agrees with the RK4 manifold oracle", "[semiwave]") {
    struct Case { double a, b, d, rho; };
    for (const auto& k : {Case{1, 1, 1, 1}, Case{2, 1, 1, 10}, Case{0.5, 2, 0.3, 0.2}, Case{1.5, 1, 2, 5}}) {
        const SemiWaveProblem prob{k.a, k.b, k.d, k.rho};
        const auto sol = solveSemiWave(prob);
        const double ref = oracle::semiWaveSpeed(k.a, k.b, k.d, k.rho);
        CHECK(sol.converged);
        CHECK(std::abs(sol.c - ref) <= 1e-6 * prob.kppSpeed());
        CHECK(sol.c > 0.0);
        CHECK(sol.c < prob.kppSpeed());
    }
}

TEST_CASE("profile satisfies the wave ODE and the boundary conditions", "[semiwave]") {
    const SemiWaveProblem prob{1.0, 1.0, 1.0, 1.0};
    const auto sol = solveSemiWave(prob);
    REQUIRE(sol.yGrid.size() > 100);
    CHECK(sol.q.front() == 0.0);
    CHECK(std::abs(prob.rho * sol.qPrime.front() - sol.c) <= 1e-6);
    CHECK(semiWaveResidual(sol, prob) <= 1e-6);
    CHECK(sol.tailGap <= 1e-6);
    for (std::size_t i = 1; i < sol.q.size(); ++i) {
        CHECK(sol.q[i] >= sol.q[i - 1]);
        CHECK(sol.q[i] <= prob.plateau() * (1.0 + 1e-12));
    }
    CHECK(std::abs(sol.c - 0.36437) <= 1e-5);
}

TEST_CASE("speed is increasing in rho and a", "[semiwave]") {
    const std::vector<double> rhos{0.1, 0.5, 1.0, 5.0, 20.0};
    const std::vector<double> as{0.3, 0.7, 1.0, 2.0, 4.0};
    const auto rep = monotoneInRhoAndA({1.0, 1.0, 1.0, 1.0}, rhos, as);
    CHECK(rep.increasingInRho);
    CHECK(rep.increasingInA);
    CHECK(rep.belowKpp);
    for (std::size_t i = 1; i < rhos.size(); ++i) {
        for (std::size_t j = 1; j < as.size(); ++j) {
            CHECK(rep.speeds[i][j] > rep.speeds[i - 1][j]);
            CHECK(rep.speeds[i][j] > rep.speeds[i][j - 1]);
        }
    }
}

TEST_CASE("asymptotic regimes", "[semiwave]") {
    const SemiWaveProblem small{1.0, 1.0, 1.0, 1e-3};
    const auto s = semiWaveAsymptotics(small, solveSemiWave(small).c);
    CHECK(std::abs(s.smallRhoRatio - 1.0 / std::sqrt(3.0)) <= 0.01);

    double prev = 0.0;
    for (double rho : {10.0, 100.0, 1e3, 1e4, 1e6}) {
        const SemiWaveProblem big{1.0, 1.0, 1.0, rho};
        const auto r = semiWaveAsymptotics(big, solveSemiWave(big).c);
        CHECK(r.cOver2SqrtAd > prev);
        CHECK(r.cOver2SqrtAd < 1.0);
        prev = r.cOver2SqrtAd;
    }
    CHECK(prev >= 0.95);  // only reached for very large rho
}

TEST_CASE("speed bracket from the logistic bounds", "[semiwave]") {
    const ModelParams p{1.5, 1.0, 1.0, 1.0, 1.0, 1.0, 100.0};
    const auto br = speedBracket(p);
    CHECK(br.cLower < br.cUpper);
    CHECK(std::abs(br.cLower - oracle::semiWaveSpeed(0.5, 1, 1, 100)) <= 1e-6);
    CHECK(std::abs(br.cUpper - oracle::semiWaveSpeed(1.5, 1, 1, 100)) <= 1e-6);
    ModelParams dead = p;
    dead.lambda = 0.8;
    CHECK_THROWS_AS(speedBracket(dead), OutOfRegime);
    CHECK_THROWS_AS(solveSemiWave({0.0, 1.0, 1.0, 1.0}), ValidationError);
}
