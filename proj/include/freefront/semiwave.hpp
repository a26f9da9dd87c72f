#pragma once

// Semi-wave problem
//
//   d q'' - c q' + q (a - b q) = 0,   q(0) = 0,  q'(0) = c / rho,  q(inf) = a / b,
//
// with 0 < c < 2 sqrt(a d) and q' > 0. Its speed c is the asymptotic front
// speed of the logistic free-boundary problem with the same coefficients.
//
// Shooting in c: a trial orbit that overshoots a/b means c is too large,
// one whose slope dies before reaching a/b means c is too small. The two
// outcomes are separated by a single c, found by bisection.

#include "freefront/errors.hpp"
#include "freefront/model.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace freefront {

struct SemiWaveProblem {
    double a = 1.0;
    double bcoef = 1.0;
    double d = 1.0;
    double rho = 1.0;

    void validate() const {
        if (!(a > 0.0) || !(bcoef > 0.0) || !(d > 0.0) || !(rho > 0.0)) {
            throw ValidationError("semi-wave coefficients a, b, d, rho must be positive");
        }
    }
    double kppSpeed() const { return 2.0 * std::sqrt(a * d); }
    double plateau() const { return a / bcoef; }
    double defaultYMax() const { return 50.0 * std::sqrt(d / a); }
};

struct SemiWaveSolution {
    double c = 0.0;
    std::vector<double> yGrid, q, qPrime;
    bool converged = false;
    double tailGap = 0.0;     ///< |q(yMax) - a/b|
    double yMax = 0.0;
    double cutPoint = 0.0;    ///< beyond this the profile is the linearised decay into a/b
    int bisections = 0;
};

enum class ShotOutcome { Overshoot, Undershoot };

namespace detail {

using WaveState = std::array<double, 2>;

inline auto semiWaveRhs(const SemiWaveProblem& prob, double c) {
    return [&prob, c](const WaveState& s, WaveState& ds, double /*y*/) {
        ds[0] = s[1];
        ds[1] = (c * s[1] - s[0] * (prob.a - prob.bcoef * s[0])) / prob.d;
    };
}

inline auto makeWaveStepper() {
    namespace ode = boost::numeric::odeint;
    return ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<WaveState>());
}

struct ShotResult {
    ShotOutcome outcome = ShotOutcome::Undershoot;
    bool decided = false;
    double yEvent = 0.0;
};

/// Integrates one trial orbit until it over/undershoots or passes yMax.
/// If `sampleStep` > 0 the orbit is sampled on y = k*sampleStep before the event.
inline ShotResult shoot(const SemiWaveProblem& prob, double c, double yMax, double sampleStep = 0.0,
                        std::vector<double>* ys = nullptr, std::vector<double>* qs = nullptr,
                        std::vector<double>* dqs = nullptr) {
    const double plateau = prob.plateau();
    const double overshootLevel = plateau * (1.0 + 1e-6);
    auto rhs = semiWaveRhs(prob, c);
    auto stepper = makeWaveStepper();
    stepper.initialize(WaveState{0.0, c / prob.rho}, 0.0, 1e-3 * std::sqrt(prob.d / prob.a));

    ShotResult res;
    std::size_t nextSample = 0;
    WaveState probe{};
    while (stepper.current_time() < yMax) {
        stepper.do_step(rhs);
        const auto& st = stepper.current_state();
        const double yNow = stepper.current_time();
        if (st[0] > overshootLevel) {
            res = {ShotOutcome::Overshoot, true, yNow};
        } else if (st[1] <= 0.0) {
            res = {ShotOutcome::Undershoot, true, yNow};
        }
        if (sampleStep > 0.0 && ys != nullptr) {
            for (;;) {
                const double ySample = static_cast<double>(nextSample) * sampleStep;
                if (ySample > yNow || ySample > yMax) break;
                stepper.calc_state(ySample, probe);
                if (res.decided && probe[1] <= 0.0) break;
                ys->push_back(ySample);
                qs->push_back(probe[0]);
                dqs->push_back(probe[1]);
                ++nextSample;
            }
        }
        if (res.decided) {
            return res;
        }
    }
    // Neither event by yMax: the orbit is still on the plateau's stable manifold
    // to integration accuracy; classify by which side of the plateau it ended.
    const auto& st = stepper.current_state();
    res.outcome = st[0] > plateau ? ShotOutcome::Overshoot : ShotOutcome::Undershoot;
    res.decided = false;
    res.yEvent = stepper.current_time();
    return res;
}


/// Profile on y = k*dy, k = 0.. up to yMax, traced backwards in y along the
/// stable manifold of the plateau (a/b, 0), which is stable in that
/// direction. Starts a distance `eps` below the plateau on the linear
/// eigen-direction; the far tail is that exact linear decay.
inline void sampleManifoldProfile(const SemiWaveProblem& prob, double c, double yMax, double dy,
                                  SemiWaveSolution& sol) {
    const double plateau = prob.plateau();
    const double eps = 1e-10 * plateau;
    const double decay = (c - std::sqrt(c * c + 4.0 * prob.a * prob.d)) / (2.0 * prob.d);
    // s = -y (shifted); state (q, q_y); d/ds = -d/dy.
    auto rhs = [&prob, c](const WaveState& st, WaveState& ds, double /*s*/) {
        ds[0] = -st[1];
        ds[1] = -(c * st[1] - st[0] * (prob.a - prob.bcoef * st[0])) / prob.d;
    };
    const WaveState start{plateau - eps, -decay * eps};

    // Pass 1: locate s* where q reaches 0.
    auto stepper = makeWaveStepper();
    stepper.initialize(start, 0.0, 1e-3 * std::sqrt(prob.d / prob.a));
    WaveState probe{};
    const double sLimit = 100.0 * yMax;
    while (stepper.current_state()[0] > 0.0) {
        if (stepper.current_time() > sLimit) {
            throw BracketFailure("semi-wave manifold never reaches q = 0");
        }
        stepper.do_step(rhs);
    }
    double sLo = stepper.previous_time();
    double sHi = stepper.current_time();
    for (int i = 0; i < 200 && sHi - sLo > 1e-15 * sHi; ++i) {
        const double mid = 0.5 * (sLo + sHi);
        stepper.calc_state(mid, probe);
        (probe[0] > 0.0 ? sLo : sHi) = mid;
    }
    const double sStar = 0.5 * (sLo + sHi);

    // Pass 2: sample at y_k = k dy, i.e. s = sStar - y_k, in increasing s.
    const auto samples = static_cast<std::size_t>(std::floor(yMax / dy + 1e-9)) + 1;
    sol.yGrid.assign(samples, 0.0);
    sol.q.assign(samples, 0.0);
    sol.qPrime.assign(samples, 0.0);
    for (std::size_t k = 0; k < samples; ++k) {
        const double y = static_cast<double>(k) * dy;
        sol.yGrid[k] = y;
        if (y >= sStar) {
            const double e = eps * std::exp(decay * (y - sStar));
            sol.q[k] = plateau - e;
            sol.qPrime[k] = -decay * e;
        }
    }
    auto pass2 = makeWaveStepper();
    pass2.initialize(start, 0.0, 1e-3 * std::sqrt(prob.d / prob.a));
    std::ptrdiff_t k = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(samples) - 1,
                                                static_cast<std::ptrdiff_t>(std::floor(sStar / dy)));
    while (k >= 0) {
        const double s = sStar - static_cast<double>(k) * dy;
        while (pass2.current_time() < s) {
            pass2.do_step(rhs);
        }
        pass2.calc_state(s, probe);
        sol.q[static_cast<std::size_t>(k)] = probe[0];
        sol.qPrime[static_cast<std::size_t>(k)] = probe[1];
        --k;
    }
    sol.q[0] = 0.0;
    sol.cutPoint = sStar;
    sol.tailGap = std::abs(plateau - sol.q.back());
}

}  // namespace detail

/// Shooting classification for one trial speed.
inline ShotOutcome classifyShot(const SemiWaveProblem& prob, double c, double yMax) {
    return detail::shoot(prob, c, yMax).outcome;
}

/// Bisection on c in (0, 2 sqrt(a d)), driven to `tol` and then on to
/// round-off. A forward orbit cannot track the plateau for long (the
/// unstable direction amplifies round-off), so the returned profile is
/// traced back from the plateau along its stable manifold at the final c.
inline SemiWaveSolution solveSemiWave(const SemiWaveProblem& prob, double yMax = 0.0,
                                      double tol = 1e-8) {
    prob.validate();
    if (yMax <= 0.0) {
        yMax = prob.defaultYMax();
    }
    const double cMax = prob.kppSpeed();

    SemiWaveSolution sol;
    for (int attempt = 0; attempt <= 3; ++attempt, yMax *= 2.0) {
        double lo = 1e-12 * cMax;
        double hi = cMax;
        const auto outLo = classifyShot(prob, lo, yMax);
        const auto outHi = classifyShot(prob, hi, yMax);
        if (outLo == outHi || outLo != ShotOutcome::Undershoot) {
            if (attempt == 3) {
                std::ostringstream os;
                os << "semi-wave bracket endpoints classify identically (a=" << prob.a
                   << ", rho=" << prob.rho << ", yMax=" << yMax << ")";
                throw BracketFailure(os.str());
            }
            continue;
        }
        int iterations = 0;
        while (iterations < 200) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (classifyShot(prob, mid, yMax) == ShotOutcome::Overshoot) {
                hi = mid;
            } else {
                lo = mid;
            }
            ++iterations;
        }
        sol.c = 0.5 * (lo + hi);
        sol.converged = (hi - lo) <= tol;
        sol.bisections = iterations;
        sol.yMax = yMax;

        const double dy = 0.02 * std::sqrt(prob.d / prob.a);
        detail::sampleManifoldProfile(prob, sol.c, yMax, dy, sol);
        return sol;
    }
    throw BracketFailure("semi-wave solver exhausted yMax doublings");
}

/// Residual d q'' - c q' + q(a - b q) along a sampled profile, with q''
/// from a 4th-order central difference of the sampled q'.
inline double semiWaveResidual(const SemiWaveSolution& sol, const SemiWaveProblem& prob) {
    double worst = 0.0;
    const auto& y = sol.yGrid;
    for (std::size_t i = 2; i + 2 < y.size(); ++i) {
        const double h = y[i + 1] - y[i];
        const double qpp = (-sol.qPrime[i + 2] + 8.0 * sol.qPrime[i + 1] - 8.0 * sol.qPrime[i - 1] +
                            sol.qPrime[i - 2]) /
                           (12.0 * h);
        const double r =
            prob.d * qpp - sol.c * sol.qPrime[i] + sol.q[i] * (prob.a - prob.bcoef * sol.q[i]);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

struct SpeedBracket {
    double cLower = 0.0;  ///< semi-wave speed with a = lambda - b/m
    double cUpper = 0.0;  ///< semi-wave speed with a = lambda
};

inline SpeedBracket speedBracket(const ModelParams& p, double tol = 1e-8) {
    detail::requirePreySurvives(p);
    SpeedBracket br;
    br.cLower = solveSemiWave({p.lambda - p.b / p.m, 1.0, 1.0, p.rho}, 0.0, tol).c;
    br.cUpper = solveSemiWave({p.lambda, 1.0, 1.0, p.rho}, 0.0, tol).c;
    return br;
}

struct MonotonicityReport {
    std::vector<double> rhos, as;
    std::vector<std::vector<double>> speeds;  ///< speeds[i][j] at (rhos[i], as[j])
    bool increasingInRho = true;
    bool increasingInA = true;
    bool belowKpp = true;
};

/// Semi-wave speed on a (rho, a) grid; strict growth along both axes is
/// required up to 2*tol, otherwise PropertyViolation.
inline MonotonicityReport monotoneInRhoAndA(const SemiWaveProblem& base,
                                            const std::vector<double>& rhos,
                                            const std::vector<double>& as, double tol = 1e-8) {
    MonotonicityReport rep;
    rep.rhos = rhos;
    rep.as = as;
    rep.speeds.assign(rhos.size(), std::vector<double>(as.size(), 0.0));
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        for (std::size_t j = 0; j < as.size(); ++j) {
            SemiWaveProblem prob = base;
            prob.rho = rhos[i];
            prob.a = as[j];
            const double c = solveSemiWave(prob, 0.0, tol).c;
            rep.speeds[i][j] = c;
            rep.belowKpp = rep.belowKpp && c < prob.kppSpeed();
            if (i > 0 && !(c > rep.speeds[i - 1][j] - 2.0 * tol)) rep.increasingInRho = false;
            if (j > 0 && !(c > rep.speeds[i][j - 1] - 2.0 * tol)) rep.increasingInA = false;
        }
    }
    if (!rep.increasingInRho || !rep.increasingInA || !rep.belowKpp) {
        throw PropertyViolation("semi-wave speed is not monotone in (rho, a) on the grid", 0.0, 0.0,
                                0.0);
    }
    return rep;
}

struct SemiWaveAsymptotics {
    double rho = 0.0, a = 0.0, b = 0.0, d = 0.0, c = 0.0;
    double cOver2SqrtAd = 0.0;  ///< -> 1 as a rho / (b d) -> infinity
    double smallRhoRatio = 0.0; ///< (c / sqrt(a d)) (b d / (a rho)) -> 1/sqrt(3) as a rho/(b d) -> 0
};

inline SemiWaveAsymptotics semiWaveAsymptotics(const SemiWaveProblem& prob, double c) {
    SemiWaveAsymptotics r;
    r.rho = prob.rho;
    r.a = prob.a;
    r.b = prob.bcoef;
    r.d = prob.d;
    r.c = c;
    r.cOver2SqrtAd = c / prob.kppSpeed();
    r.smallRhoRatio = c / std::sqrt(prob.a * prob.d) * (prob.bcoef * prob.d / (prob.a * prob.rho));
    return r;
}

}  // namespace freefront
