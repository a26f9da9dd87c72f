#pragma once

// Verdicts on trajectories.
//
// Spreading: the front crosses the barrier Lambda (with a margin); a front
// beyond Lambda never stops. Vanishing: the front has stalled and the prey
// has collapsed, both sustained over a window. Anything else is left
// undetermined rather than guessed.

#include "freefront/errors.hpp"
#include "freefront/model.hpp"
#include "freefront/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace freefront {

enum class Verdict { Spreading, Vanishing, Undetermined };

inline const char* toString(Verdict v) {
    switch (v) {
        case Verdict::Spreading: return "spreading";
        case Verdict::Vanishing: return "vanishing";
        default: return "undetermined";
    }
}

struct ClassifyRules {
    double marginLambda = 0.05;  ///< spreading once h > Lambda (1 + marginLambda)
    double tolH = -1.0;          ///< front-speed floor; <= 0 means 1e-6 Lambda / tMax
    double tolU = -1.0;          ///< prey floor; <= 0 means 1e-4 lambda
    double windowFraction = 0.05;  ///< vanishing window, fraction of tMax
    double gridTol = 0.02;       ///< relative slack on length thresholds

    double resolvedTolH(double Lambda, double tMax) const {
        return tolH > 0.0 ? tolH : 1e-6 * Lambda / tMax;
    }
    double resolvedTolU(double lambda) const { return tolU > 0.0 ? tolU : 1e-4 * lambda; }
};

struct Outcome {
    Verdict verdict = Verdict::Undetermined;
    std::optional<double> hInfEstimate;      ///< Vanishing only
    std::optional<double> equilibriumError;  ///< Spreading in the coexist regime
    std::optional<double> speedEstimate;     ///< Spreading with enough data
    std::string rule;      ///< which rule fired, or the closest one
    double evidenceTime = 0.0;
    std::string evidence;
};

/// Incremental form of the verdict rules, usable as a simulate stop predicate.
class VerdictTracker {
public:
    VerdictTracker(const ModelParams& p, double tMax, const ClassifyRules& rules = {})
        : Lambda_(spreadingBarrier(p).Lambda),
          tolH_(rules.resolvedTolH(Lambda_, tMax)),
          tolU_(rules.resolvedTolU(p.lambda)),
          window_(rules.windowFraction * tMax),
          margin_(rules.marginLambda) {}

    /// Feeds one recorded state; returns the verdict once a rule has fired.
    Verdict observe(double t, double h, double hPrime, double supU) {
        if (verdict_ != Verdict::Undetermined) {
            return verdict_;
        }
        maxH_ = std::max(maxH_, h);
        if (h >= Lambda_ * (1.0 + margin_) || (t == 0.0 && h >= Lambda_)) {
            verdict_ = Verdict::Spreading;
            firedAt_ = t;
            return verdict_;
        }
        if (hPrime < tolH_ && supU < tolU_) {
            if (!quietSince_) quietSince_ = t;
            if (t - *quietSince_ >= window_) {
                verdict_ = Verdict::Vanishing;
                firedAt_ = t;
            }
        } else {
            quietSince_.reset();
        }
        return verdict_;
    }

    StopPredicate stopPredicate() {
        return [this](const SimulationState& s) {
            return observe(s.t, s.h, s.hPrime, detail::supOf(s.U)) != Verdict::Undetermined;
        };
    }

    Verdict verdict() const { return verdict_; }
    double firedAt() const { return firedAt_; }
    double Lambda() const { return Lambda_; }
    double tolH() const { return tolH_; }
    double tolU() const { return tolU_; }
    double window() const { return window_; }
    double maxFront() const { return maxH_; }
    std::optional<double> quietSince() const { return quietSince_; }

private:
    double Lambda_, tolH_, tolU_, window_, margin_;
    Verdict verdict_ = Verdict::Undetermined;
    double firedAt_ = 0.0;
    double maxH_ = 0.0;
    std::optional<double> quietSince_;
};

/// Least-squares slope of h(t) over the last `windowFraction` of the run.
inline double estimateSpeed(const Trajectory& traj, double windowFraction = 0.25) {
    if (traj.size() < 3) {
        throw EstimateUnavailable("trajectory too short for a speed estimate");
    }
    const double Lambda = spreadingBarrier(traj.params).Lambda;
    if (!(traj.finalFront() > 3.0 * Lambda)) {
        std::ostringstream os;
        os << "final front " << traj.finalFront() << " has not passed 3 Lambda = " << 3.0 * Lambda;
        throw EstimateUnavailable(os.str());
    }
    const double tEnd = traj.finalTime();
    const double tStart = tEnd - windowFraction * tEnd;
    double n = 0.0, st = 0.0, sh = 0.0, stt = 0.0, sth = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] < tStart) continue;
        const double t = traj.times[k] - tStart;
        const double h = traj.fronts[k];
        n += 1.0;
        st += t;
        sh += h;
        stt += t * t;
        sth += t * h;
    }
    const double denom = n * stt - st * st;
    if (n < 3.0 || !(denom > 0.0)) {
        throw EstimateUnavailable("too few samples in the speed window");
    }
    return (n * sth - st * sh) / denom;
}

struct FramePoint {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
};

/// Densities seen by an observer at x = k t, one value per snapshot;
/// zero once the observer is past the front.
inline std::vector<FramePoint> movingFrameSample(const Trajectory& traj, double k) {
    if (k < 0.0) {
        throw DomainError("movingFrameSample: k must be non-negative");
    }
    std::vector<FramePoint> out;
    out.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots) {
        FramePoint fp{snap.t, 0.0, 0.0};
        const double x = k * snap.t;
        if (x < snap.h && !snap.U.empty()) {
            const double pos = x / snap.h * static_cast<double>(snap.U.size() - 1);
            const auto j = std::min(static_cast<std::size_t>(pos), snap.U.size() - 2);
            const double w = pos - static_cast<double>(j);
            fp.u = (1.0 - w) * snap.U[j] + w * snap.U[j + 1];
            if (!snap.V.empty()) {
                fp.v = (1.0 - w) * snap.V[j] + w * snap.V[j + 1];
            }
        }
        out.push_back(fp);
    }
    return out;
}

/// Applies the verdict rules to a finished (or early-stopped) trajectory.
inline Outcome classifyRun(const Trajectory& traj, const ModelParams& p,
                           const ClassifyRules& rules = {}) {
    VerdictTracker tracker(p, traj.config.tMax, rules);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (tracker.observe(traj.times[k], traj.fronts[k], traj.frontSpeeds[k], traj.supU[k]) !=
            Verdict::Undetermined) {
            break;
        }
    }
    Outcome out;
    out.verdict = tracker.verdict();
    out.evidenceTime = tracker.firedAt();
    std::ostringstream ev;
    if (out.verdict == Verdict::Spreading) {
        out.rule = "front crossed Lambda";
        ev << "h = " << tracker.maxFront() << " >= Lambda = " << tracker.Lambda()
           << (out.evidenceTime == 0.0 ? " at t = 0" : " with margin") << " (t = " << out.evidenceTime
           << ")";
        try {
            out.speedEstimate = estimateSpeed(traj);
        } catch (const EstimateUnavailable&) {
        }
        if (p.coexistRegime() && !traj.snapshots.empty() && !traj.snapshots.back().V.empty()) {
            const auto eq = equilibriumClosedForm(p);
            const auto& last = traj.snapshots.back();
            out.equilibriumError =
                std::max(std::abs(last.U.front() - eq.uStar), std::abs(last.V.front() - eq.vStar));
        }
    } else if (out.verdict == Verdict::Vanishing) {
        out.rule = "front stalled and prey collapsed";
        out.hInfEstimate = traj.finalFront();
        ev << "h' < " << tracker.tolH() << " and sup u < " << tracker.tolU() << " from t = "
           << *tracker.quietSince() << " to t = " << out.evidenceTime;
    } else {
        const double ratio = tracker.maxFront() / tracker.Lambda();
        const double lastSpeed = traj.frontSpeeds.empty() ? 0.0 : traj.frontSpeeds.back();
        const double lastSup = traj.supU.empty() ? 0.0 : traj.supU.back();
        out.evidenceTime = traj.finalTime();
        if (lastSpeed < tracker.tolH() && lastSup < tracker.tolU()) {
            out.rule = "closest: vanishing (window not yet complete)";
        } else if (ratio >= 1.0) {
            out.rule = "closest: spreading (inside the Lambda margin)";
        } else {
            out.rule = "closest: " + std::string(ratio > 0.5 ? "spreading" : "vanishing");
        }
        ev << "max h / Lambda = " << ratio << ", final h' = " << lastSpeed
           << ", final sup u = " << lastSup;
    }
    out.evidence = ev.str();
    return out;
}

/// Simulates with the verdict rules installed as an early-stop callback.
inline Trajectory simulateUntilVerdict(const ModelParams& p, const InitialData& init,
                                       const SolverConfig& cfg, const ClassifyRules& rules = {}) {
    VerdictTracker tracker(p, cfg.tMax, rules);
    return simulate(p, init, cfg, tracker.stopPredicate());
}

// ---------------------------------------------------------------------------
// Threshold search

struct ThresholdProbe {
    double value = 0.0;
    Verdict verdict = Verdict::Undetermined;
    double finalFront = 0.0;
};

struct ThresholdEstimate {
    enum class Kind { RhoCritical, H0Band };
    Kind kind = Kind::RhoCritical;
    double lower = 0.0;  ///< last value with the low-side verdict
    double upper = 0.0;  ///< first value with the high-side verdict
    int runs = 0;
    int levels = 0;
    bool stalled = false;  ///< an undetermined probe stopped the refinement
    std::vector<ThresholdProbe> probes;  ///< every evaluation, in evaluation order
    std::vector<std::shared_ptr<const Trajectory>> trajectoriesKept;  ///< endpoint runs
};

/// A high-side verdict was observed below a low-side one.
struct NonMonotoneVerdicts : Error {
    NonMonotoneVerdicts(const std::string& what, double highAt, double lowAt,
                        std::shared_ptr<const Trajectory> highRun,
                        std::shared_ptr<const Trajectory> lowRun)
        : Error(ErrorFamily::Property, what),
          highAt(highAt),
          lowAt(lowAt),
          highRun(std::move(highRun)),
          lowRun(std::move(lowRun)) {}
    double highAt, lowAt;
    std::shared_ptr<const Trajectory> highRun, lowRun;
};

struct ProbeResult {
    Verdict verdict = Verdict::Undetermined;
    std::shared_ptr<const Trajectory> trajectory;
};

/// Generic geometric bracket refinement on a positive axis. `evaluate(x)`
/// must give `lowVerdict` at lo and the other decisive verdict at hi. Each
/// level places `probesPerLevel` geometrically spaced points inside the
/// bracket and keeps the sub-interval where the verdict changes. With more
/// than one probe per level, an inverted pair is detected and thrown.
inline ThresholdEstimate bracketThreshold(const std::function<ProbeResult(double)>& evaluate,
                                          double lo, double hi, int levels, Verdict lowVerdict,
                                          int probesPerLevel = 1, int threads = 1) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw BracketError("threshold bracket needs 0 < lo < hi");
    }
    if (lowVerdict == Verdict::Undetermined) {
        throw BracketError("low-side verdict must be decisive");
    }
    const Verdict highVerdict =
        lowVerdict == Verdict::Vanishing ? Verdict::Spreading : Verdict::Vanishing;
    ThresholdEstimate est;

    auto runBatch = [&](const std::vector<double>& xs) {
        std::vector<ProbeResult> results(xs.size());
        if (threads > 1 && xs.size() > 1) {
            std::vector<std::future<ProbeResult>> futures;
            futures.reserve(xs.size());
            for (double x : xs) futures.push_back(std::async(std::launch::async, evaluate, x));
            for (std::size_t i = 0; i < xs.size(); ++i) results[i] = futures[i].get();
        } else {
            for (std::size_t i = 0; i < xs.size(); ++i) results[i] = evaluate(xs[i]);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            est.probes.push_back({xs[i], results[i].verdict,
                                  results[i].trajectory ? results[i].trajectory->finalFront() : 0.0});
            ++est.runs;
        }
        return results;
    };

    const auto ends = runBatch({lo, hi});
    if (ends[0].verdict != lowVerdict || ends[1].verdict != highVerdict) {
        std::ostringstream os;
        os << "bracket endpoints give " << toString(ends[0].verdict) << " at " << lo << " and "
           << toString(ends[1].verdict) << " at " << hi << "; expected " << toString(lowVerdict)
           << " then " << toString(highVerdict);
        throw BracketError(os.str());
    }
    std::shared_ptr<const Trajectory> loRun = ends[0].trajectory, hiRun = ends[1].trajectory;

    for (int level = 0; level < levels; ++level) {
        std::vector<double> xs(static_cast<std::size_t>(probesPerLevel));
        const double ratio = std::log(hi / lo);
        for (int i = 0; i < probesPerLevel; ++i) {
            xs[i] = lo * std::exp(ratio * (i + 1) / (probesPerLevel + 1));
        }
        const auto res = runBatch(xs);
        for (std::size_t i = 0; i < res.size(); ++i) {
            if (res[i].verdict == Verdict::Undetermined) {
                est.stalled = true;
            }
        }
        for (std::size_t i = 0; i < res.size(); ++i) {
            for (std::size_t j = i + 1; j < res.size(); ++j) {
                if (res[i].verdict == highVerdict && res[j].verdict == lowVerdict) {
                    std::ostringstream os;
                    os << toString(highVerdict) << " at " << xs[i] << " lies below "
                       << toString(lowVerdict) << " at " << xs[j];
                    throw NonMonotoneVerdicts(os.str(), xs[i], xs[j], res[i].trajectory,
                                              res[j].trajectory);
                }
            }
        }
        if (est.stalled) break;
        // Narrow to the change point: last low-side probe .. first high-side probe.
        for (std::size_t i = 0; i < res.size(); ++i) {
            if (res[i].verdict == lowVerdict) {
                lo = xs[i];
                loRun = res[i].trajectory;
            }
        }
        for (std::size_t i = res.size(); i-- > 0;) {
            if (res[i].verdict == highVerdict && xs[i] > lo) {
                hi = xs[i];
                hiRun = res[i].trajectory;
            }
        }
        est.levels = level + 1;
    }
    est.lower = lo;
    est.upper = hi;
    est.trajectoriesKept = {loRun, hiRun};
    return est;
}

/// Critical Stefan coefficient for fixed data: Vanishing at rhoLo, Spreading at rhoHi.
inline ThresholdEstimate findRhoCritical(const ModelParams& p, const InitialData& init,
                                         const SolverConfig& cfg, double rhoLo, double rhoHi,
                                         int nBisect, const ClassifyRules& rules = {},
                                         int probesPerLevel = 1, int threads = 1) {
    auto evaluate = [&](double rho) {
        ModelParams q = p;
        q.rho = rho;
        auto traj = std::make_shared<const Trajectory>(simulateUntilVerdict(q, init, cfg, rules));
        return ProbeResult{classifyRun(*traj, q, rules).verdict, traj};
    };
    auto est = bracketThreshold(evaluate, rhoLo, rhoHi, nBisect, Verdict::Vanishing,
                                probesPerLevel, threads);
    est.kind = ThresholdEstimate::Kind::RhoCritical;
    return est;
}

}  // namespace freefront
