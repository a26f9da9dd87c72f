#include "freefront/classify.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace freefront;

namespace {

ModelParams params(double rho) { return ModelParams{2.0, 1.0, 1.0, 1.0, 1.0, 1.0, rho}; }

SolverConfig config(double tMax = 100.0) {
    SolverConfig c;
    c.nGrid = 200;
    c.tMax = tMax;
    c.snapshotInterval = tMax / 10;
    return c;
}

Trajectory synthetic(std::vector<double> t, std::vector<double> h) {
    Trajectory tr;
    tr.params = params(1.0);
    tr.times = std::move(t);
    tr.fronts = std::move(h);
    return tr;
}

}  // namespace

TEST_CASE("verdict labels", "[classify]") {
    CHECK(std::string(toString(Verdict::Spreading)) == "spreading");
    CHECK(std::string(toString(Verdict::Vanishing)) == "vanishing");
    CHECK(std::string(toString(Verdict::Undetermined)) == "undetermined");
}

TEST_CASE("tracker rules", "[classify]") {
    const auto p = params(1.0);
    const double Lambda = std::numbers::pi / 2;
    VerdictTracker early(p, 10.0);
    CHECK(early.observe(0.0, Lambda, 1.0, 1.0) == Verdict::Spreading);
    CHECK(early.firedAt() == 0.0);

    VerdictTracker margin(p, 10.0);
    CHECK(margin.observe(1.0, Lambda * 1.01, 1.0, 1.0) == Verdict::Undetermined);
    CHECK(margin.observe(2.0, Lambda * 1.06, 1.0, 1.0) == Verdict::Spreading);

    VerdictTracker quiet(p, 10.0);  // window 0.5
    CHECK(quiet.observe(1.0, 1.0, 0.0, 0.0) == Verdict::Undetermined);
    CHECK(quiet.observe(1.3, 1.0, 0.0, 0.0) == Verdict::Undetermined);
    CHECK(quiet.observe(1.4, 1.0, 1.0, 0.0) == Verdict::Undetermined);  // resets
    CHECK(quiet.observe(1.5, 1.0, 0.0, 0.0) == Verdict::Undetermined);
    CHECK(quiet.observe(2.0, 1.0, 0.0, 0.0) == Verdict::Vanishing);
}

TEST_CASE("spreading and vanishing runs", "[classify]") {
    const double Lambda = std::numbers::pi / 2;
    SECTION("start above Lambda") {
        const auto p = params(1.0);
        const auto tr = simulateUntilVerdict(p, initialCosineProfile(1.05 * Lambda, 0.1, 0.1), config());
        const auto out = classifyRun(tr, p);
        CHECK(out.verdict == Verdict::Spreading);
        CHECK(out.evidenceTime == 0.0);
    }
    SECTION("small rho vanishes") {
        const auto p = params(1e-3);
        const auto tr = simulateUntilVerdict(p, initialCosineProfile(0.5, 0.1, 0.1), config());
        const auto out = classifyRun(tr, p);
        REQUIRE(out.verdict == Verdict::Vanishing);
        REQUIRE(out.hInfEstimate.has_value());
        CHECK(*out.hInfEstimate <= Lambda * (1 + 0.02));
        CHECK(*out.hInfEstimate > 0.5);
        CHECK(tr.stoppedEarly);
    }
    SECTION("large rho spreads") {
        const auto p = params(1e3);
        const auto tr = simulateUntilVerdict(p, initialCosineProfile(0.5, 0.1, 0.1), config());
        CHECK(classifyRun(tr, p).verdict == Verdict::Spreading);
    }
    SECTION("too short to decide") {
        const auto p = params(1e-3);
        const auto tr = simulate(p, initialCosineProfile(0.5, 0.1, 0.1), config(0.5));
        const auto out = classifyRun(tr, p);
        CHECK(out.verdict == Verdict::Undetermined);
        CHECK(out.rule.rfind("closest", 0) == 0);
        CHECK_FALSE(out.evidence.empty());
    }
}

TEST_CASE("equilibrium error is reported for coexisting spreads", "[classify]") {
    const ModelParams p{1.5, 1.0, 1.0, 1.0, 1.0, 1.0, 100.0};
    auto cfg = config(40.0);
    cfg.nGrid = 400;
    const auto tr = simulate(p, initialCosineProfile(1.0, 0.5, 0.5), cfg);
    const auto out = classifyRun(tr, p);
    REQUIRE(out.verdict == Verdict::Spreading);
    REQUIRE(out.equilibriumError.has_value());
    CHECK(*out.equilibriumError < 1e-3);
    REQUIRE(out.speedEstimate.has_value());
    CHECK(*out.speedEstimate > 0.0);
}

TEST_CASE("speed estimate", "[classify]") {
    std::vector<double> t, h;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i);
        h.push_back(10.0 + 1.25 * i);
    }
    CHECK(std::abs(estimateSpeed(synthetic(t, h)) - 1.25) < 1e-12);
    CHECK_THROWS_AS(estimateSpeed(synthetic({0, 1}, {10, 11})), EstimateUnavailable);
}

TEST_CASE("moving frame sampling", "[classify]") {
    const ModelParams p{1.5, 1.0, 1.0, 1.0, 1.0, 1.0, 100.0};
    auto cfg = config(20.0);
    const auto tr = simulate(p, initialCosineProfile(1.0, 0.5, 0.5), cfg);
    const auto origin = movingFrameSample(tr, 0.0);
    REQUIRE(origin.size() == tr.snapshots.size());
    CHECK(origin.back().u == tr.snapshots.back().U.front());
    const auto fast = movingFrameSample(tr, 10.0);
    for (std::size_t i = 1; i < fast.size(); ++i) {
        CHECK(fast[i].u == 0.0);
        CHECK(fast[i].v == 0.0);
    }
    CHECK_THROWS_AS(movingFrameSample(tr, -1.0), DomainError);
}

TEST_CASE("critical rho bracket", "[classify]") {
    const auto p = params(1.0);
    const auto init = initialCosineProfile(0.5, 0.1, 0.1);
    const auto est = findRhoCritical(p, init, config(), 1e-3, 1e3, 6);
    CHECK(est.lower < est.upper);
    CHECK(est.levels == 6);
    CHECK_FALSE(est.stalled);
    CHECK(est.runs == 8);
    for (const auto& pr : est.probes) {
        if (pr.value <= est.lower) CHECK(pr.verdict == Verdict::Vanishing);
        if (pr.value >= est.upper) CHECK(pr.verdict == Verdict::Spreading);
    }
    // starting above the barrier spreads at every rho
    const auto above = initialCosineProfile(1.6, 0.1, 0.1);
    CHECK_THROWS_AS(findRhoCritical(p, above, config(), 1e-3, 1e3, 2), BracketError);
    CHECK_THROWS_AS(findRhoCritical(p, init, config(), 1e3, 1e-3, 2), BracketError);
}

TEST_CASE("inverted verdicts are reported", "[classify]") {
    // spreading on [1.2, 2) and from 4 on, vanishing elsewhere
    auto evaluate = [](double x) {
        const bool spreads = (x >= 1.2 && x < 2.0) || x >= 4.0;
        return ProbeResult{spreads ? Verdict::Spreading : Verdict::Vanishing, nullptr};
    };
    try {
        bracketThreshold(evaluate, 1.0, 10.0, 4, Verdict::Vanishing, 5);
        FAIL("expected NonMonotoneVerdicts");
    } catch (const NonMonotoneVerdicts& e) {
        CHECK(e.highAt < e.lowAt);
        CHECK(e.family() == ErrorFamily::Property);
    }
    // single probe per level cannot see it but still returns a valid bracket
    const auto est = bracketThreshold(evaluate, 1.0, 10.0, 4, Verdict::Vanishing, 1);
    CHECK(est.lower < est.upper);

    auto undecided = [](double x) {
        return ProbeResult{x < 2.0 ? Verdict::Vanishing : x > 4.0 ? Verdict::Spreading : Verdict::Undetermined, nullptr};
    };
    const auto stalled = bracketThreshold(undecided, 1.0, 10.0, 5, Verdict::Vanishing);
    CHECK(stalled.stalled);
    CHECK(stalled.lower == 1.0);
    CHECK(stalled.upper == 10.0);
}
