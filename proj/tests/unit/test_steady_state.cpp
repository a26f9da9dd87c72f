#include "freefront/steady_state.hpp"

#include "../support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace freefront;

TEST_CASE("existence threshold", "[steady]") {
    const double lStar = 0.5 * std::numbers::pi * std::sqrt(0.25 / 1.0);
    CHECK_FALSE(logisticProfileExists(0.25, 1.0, lStar * 0.999));
    CHECK(logisticProfileExists(0.25, 1.0, lStar * 1.001));
    const auto zero = solveLogisticBVP(0.25, 1.0, 0.7, 128);
    CHECK_FALSE(zero.positive);
    for (double v : zero.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(solveLogisticBVP(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(solveLogisticBVP(1.0, 1.0, 1.0, 2), DomainError);
}

TEST_CASE("profile shape and oracle peak", "[steady]") {
    for (double l : {2.0, 5.0, 20.0}) {
        const double d = 1.0, rate = 1.3;
        const auto prof = solveLogisticBVP(d, rate, l, 1024);
        REQUIRE(prof.positive);
        CHECK(prof.residual <= 1e-10);
        CHECK(residualLogistic(prof, d, rate) <= 1e-10);
        CHECK(dirichletGap(prof) == 0.0);
        for (std::size_t j = 0; j + 1 < prof.values.size(); ++j) {
            CHECK(prof.values[j] > 0.0);
            CHECK(prof.values[j] < rate);
            CHECK(prof.values[j + 1] < prof.values[j]);
        }
        const double peak = oracle::logisticPeak(d, rate, l);
        CHECK(std::abs(prof.values.front() - peak) <= 1e-5 * rate);
    }
}

TEST_CASE("second-order mesh convergence", "[steady]") {
    auto peak = [](int n) { return solveLogisticBVP(0.5, 1.0, 3.0, n, 1e-13).values.front(); };
    const double a = peak(31), b = peak(63), c = peak(127);
    const double order = std::log2((a - b) / (b - c));
    CHECK(order > 1.9);
    CHECK(order < 2.1);
}

TEST_CASE("every positive limit from a random start is the same profile", "[steady]") {
    const double d = 1.0, rate = 2.0, l = 4.0;
    const auto ref = solveLogisticBVP(d, rate, l, 256);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amp(0.2, 3.0), wiggle(-0.3, 0.3);
    int positive = 0;
    for (int k = 0; k < 10; ++k) {
        const double A = amp(rng), w = wiggle(rng);
        std::vector<double> guess(ref.values.size());
        for (std::size_t j = 0; j < guess.size(); ++j) {
            const double x = static_cast<double>(j) / static_cast<double>(guess.size() - 1);
            guess[j] = A * std::cos(0.5 * std::numbers::pi * x) * (1.0 + w * std::sin(3.0 * x));
        }
        try {
            const auto prof = solveLogisticBVP(d, rate, l, guess);
            REQUIRE(prof.positive);
            double diff = 0.0;
            for (std::size_t j = 0; j < guess.size(); ++j) {
                diff = std::max(diff, std::abs(prof.values[j] - ref.values[j]));
            }
            CHECK(diff <= 1e-6);
            ++positive;
        } catch (const SolverFailure&) {
            // small starts can fall onto V = 0, which is rejected
            CHECK(A < 1.2);
        }
    }
    CHECK(positive >= 5);
}

TEST_CASE("residual of a wrong profile is visible", "[steady]") {
    SteadyProfile flat;
    flat.l = 1.0;
    flat.values.assign(33, 0.5);
    // interior nodes: 0.5 (1 - 0.5); the node next to the boundary also feels V = 0.5 there
    CHECK(residualLogistic(flat, 1.0, 1.0) >= 0.25);
    CHECK(dirichletGap(flat) == 0.5);
}
