#pragma once

// Front-fixing IMEX solver for the free-boundary system.
//
// With xi = x / h(t) the moving habitat [0, h(t)] becomes [0, 1] and
//
//   U_t = D U_xixi / h^2 + xi (h'/h) U_xi + R(U, V),   h' = -rho U_xi(t, 1) / h.
//
// One step: evaluate h' from the old profile (one-sided 3-point gradient),
// advance h by forward Euler, then for each species solve
//
//   (I - dt D/h_new^2 delta^2) U^{n+1} = U^n + dt [ xi (h'/h_old) delta_0 U^n + R(U^n, V^n) ]
//
// with a ghost node for U_xi(0) = 0 and U(1) = 0. Both species share the
// prey's front; the predator is extended by zero beyond it.

#include "freefront/errors.hpp"
#include "freefront/model.hpp"
#include "freefront/tridiagonal.hpp"

// pchip.hpp in Boost 1.74 uses isnan without including its declaration.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace freefront {

struct InitialData {
    enum class Family { Cosine, Samples };

    double h0 = 1.0;
    Family family = Family::Cosine;
    double ampU = 0.0;  ///< Cosine family only
    double ampV = 0.0;
    /// Samples on a uniform grid over [0, h0], first at x = 0, last at x = h0.
    std::vector<double> u0, v0;

    /// Checks h0 > 0, positivity on [0, h0) and zero at h0.
    void validate() const {
        if (!(h0 > 0.0) || !std::isfinite(h0)) {
            throw ValidationError("h0 must be positive");
        }
        if (family == Family::Cosine) {
            if (!(ampU > 0.0)) throw ValidationError("initial prey amplitude must be positive");
            if (!(ampV > 0.0)) throw ValidationError("initial predator amplitude must be positive");
            return;
        }
        checkSamples(u0, "u0");
        checkSamples(v0, "v0");
    }

    double supU() const { return family == Family::Cosine ? ampU : *std::max_element(u0.begin(), u0.end()); }
    double supV() const { return family == Family::Cosine ? ampV : *std::max_element(v0.begin(), v0.end()); }

    /// Profiles on xi_j = j/(nGrid+1), j = 0..nGrid+1; exact boundary value at xi = 1.
    std::vector<double> sampleU(int nGrid) const { return resample(u0, ampU, nGrid); }
    std::vector<double> sampleV(int nGrid) const { return resample(v0, ampV, nGrid); }

    /// Prey initial value at physical x in [0, h0].
    double uAt(double x) const {
        if (family == Family::Cosine) {
            return x >= h0 ? 0.0 : ampU * std::cos(0.5 * std::numbers::pi * x / h0);
        }
        const double step = h0 / static_cast<double>(u0.size() - 1);
        const double pos = std::clamp(x / step, 0.0, static_cast<double>(u0.size() - 1));
        const auto i = std::min(static_cast<std::size_t>(pos), u0.size() - 2);
        const double w = pos - static_cast<double>(i);
        return (1.0 - w) * u0[i] + w * u0[i + 1];
    }

private:
    static void checkSamples(const std::vector<double>& s, const char* name) {
        if (s.size() < 4) {
            throw ValidationError(std::string(name) + " needs at least 4 samples");
        }
        const double scale = *std::max_element(s.begin(), s.end());
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            if (!(s[i] > 0.0) || !std::isfinite(s[i])) {
                throw ValidationError(std::string(name) + " must be positive on [0, h0)");
            }
        }
        if (std::abs(s.back()) > 1e-12 * scale) {
            throw ValidationError(std::string(name) + " must vanish at x = h0");
        }
    }

    std::vector<double> resample(const std::vector<double>& samples, double amp, int nGrid) const {
        const int nodes = nGrid + 2;
        const double dxi = 1.0 / static_cast<double>(nGrid + 1);
        std::vector<double> out(static_cast<std::size_t>(nodes));
        if (family == Family::Cosine) {
            for (int j = 0; j < nodes; ++j) {
                out[j] = amp * std::cos(0.5 * std::numbers::pi * j * dxi);
            }
        } else {
            std::vector<double> xs(samples.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                xs[i] = static_cast<double>(i) / static_cast<double>(xs.size() - 1);
            }
            std::vector<double> ys = samples;
            const double first = ys.front();
            boost::math::interpolators::pchip<std::vector<double>> spline(std::move(xs), std::move(ys));
            for (int j = 0; j < nodes; ++j) {
                out[j] = std::max(0.0, spline(j * dxi));
            }
            out.front() = first;
        }
        out.back() = 0.0;
        return out;
    }
};

/// A*cos(pi x / (2 h0)) for both species: compatible with u'(0) = u(h0) = 0.
inline InitialData initialCosineProfile(double h0, double ampU, double ampV, int nGrid = 64) {
    InitialData init;
    init.h0 = h0;
    init.family = InitialData::Family::Cosine;
    init.ampU = ampU;
    init.ampV = ampV;
    init.validate();
    init.u0 = init.sampleU(nGrid);
    init.v0 = init.sampleV(nGrid);
    return init;
}

inline InitialData initialFromSamples(double h0, std::vector<double> u0, std::vector<double> v0) {
    InitialData init;
    init.h0 = h0;
    init.family = InitialData::Family::Samples;
    init.u0 = std::move(u0);
    init.v0 = std::move(v0);
    init.validate();
    init.u0.back() = 0.0;
    init.v0.back() = 0.0;
    return init;
}

struct SolverConfig {
    int nGrid = 400;        ///< interior nodes on xi in (0, 1)
    double dt = 1e-2;       ///< fixed step, or the step cap when adaptive
    bool adaptive = true;   ///< limit dt so the front crosses at most `cfl` cells per step
    double cfl = 0.4;
    double tMax = 10.0;
    double snapshotInterval = 1.0;  ///< time between stored profiles; <= 0 keeps only endpoints
    bool clampNegatives = true;
    double maxClampFraction = 1e-3;  ///< of node-steps, before the run is failed

    void validate() const {
        if (nGrid < 16) throw ValidationError("nGrid must be at least 16");
        if (!(dt > 0.0)) throw ValidationError("dt must be positive");
        if (!(tMax > 0.0)) throw ValidationError("tMax must be positive");
        if (adaptive && !(cfl > 0.0)) throw ValidationError("cfl must be positive");
    }

    double dxi() const { return 1.0 / static_cast<double>(nGrid + 1); }
};

struct SimulationState {
    double t = 0.0;
    double h = 1.0;
    double hPrime = 0.0;
    std::vector<double> U, V;  ///< nGrid + 2 nodes; U.back() == V.back() == 0
};

struct Snapshot {
    double t = 0.0;
    double h = 0.0;
    std::vector<double> U, V;
};

struct Trajectory {
    ModelParams params;
    SolverConfig config;
    std::vector<double> times, fronts, frontSpeeds, frontGradients, supU, supV;
    std::vector<double> stepSizes;  ///< stepSizes[k] took times[k] to times[k+1]
    std::vector<Snapshot> snapshots;
    bool stoppedEarly = false;
    std::size_t clampedNodes = 0;
    double minValue = 0.0;  ///< most negative value seen before clamping
    double densityBound = 0.0;  ///< max(sup u0, sup v0, lambda, mu + c)

    std::size_t size() const { return times.size(); }
    double finalTime() const { return times.empty() ? 0.0 : times.back(); }
    double finalFront() const { return fronts.empty() ? 0.0 : fronts.back(); }
};

using StopPredicate = std::function<bool(const SimulationState&)>;

/// u_x(t, h(t)) from the one-sided 3-point difference; U.back() is the front node.
inline double frontGradient(std::span<const double> U, double h) {
    const std::size_t n = U.size();
    const double dxi = 1.0 / static_cast<double>(n - 1);
    return (3.0 * U[n - 1] - 4.0 * U[n - 2] + U[n - 3]) / (2.0 * dxi * h);
}

inline double frontGradient(const SimulationState& s) { return frontGradient(s.U, s.h); }

inline double logisticRate(double rate, double u) { return rate * u - u * u; }

namespace detail {

/// Densities this small have underflowed; a vanishing gradient is then not a sign error.
inline constexpr double kUnderflowFloor = 1e-280;

struct Workspace {
    std::vector<double> lower, diag, upper, rhs, scratch, reactionU, reactionV;
    void resize(std::size_t nodes) {
        for (auto* v : {&lower, &diag, &upper, &rhs, &scratch, &reactionU, &reactionV}) {
            v->assign(nodes, 0.0);
        }
    }
};

/// IMEX update of one species in place; U has nodes 0..N+1 with U[N+1] = 0.
inline void imexSpecies(std::span<double> U, std::span<const double> reaction, double diffusivity,
                        double hOld, double hNew, double hPrime, double dt, Workspace& ws) {
    const std::size_t nodes = U.size();
    const std::size_t unknowns = nodes - 1;
    const double dxi = 1.0 / static_cast<double>(nodes - 1);
    const double r = diffusivity * dt / (hNew * hNew * dxi * dxi);
    const double drift = hPrime / hOld / (2.0 * dxi);

    ws.rhs[0] = U[0] + dt * reaction[0];
    ws.lower[0] = 0.0;
    ws.diag[0] = 1.0 + 2.0 * r;
    ws.upper[0] = -2.0 * r;
    for (std::size_t j = 1; j < unknowns; ++j) {
        const double xi = static_cast<double>(j) * dxi;
        ws.rhs[j] = U[j] + dt * (xi * drift * (U[j + 1] - U[j - 1]) + reaction[j]);
        ws.lower[j] = -r;
        ws.diag[j] = 1.0 + 2.0 * r;
        ws.upper[j] = -r;
    }
    solveTridiagonal(std::span<const double>(ws.lower.data(), unknowns),
                     std::span<const double>(ws.diag.data(), unknowns),
                     std::span<const double>(ws.upper.data(), unknowns),
                     std::span<double>(ws.rhs.data(), unknowns),
                     std::span<double>(ws.scratch.data(), unknowns));
    std::copy_n(ws.rhs.begin(), unknowns, U.begin());
    U[nodes - 1] = 0.0;
}

/// Finite check, negative tracking and optional clamping. Returns clamped count.
inline std::size_t sanitise(std::span<double> U, double t, bool clamp, double& minValue) {
    std::size_t clamped = 0;
    for (std::size_t j = 0; j < U.size(); ++j) {
        if (!std::isfinite(U[j])) {
            std::ostringstream os;
            os << "non-finite density at t = " << t << ", node " << j;
            throw NumericalBlowup(os.str(), t, static_cast<int>(j));
        }
        if (U[j] < 0.0) {
            minValue = std::min(minValue, U[j]);
            if (clamp) {
                U[j] = 0.0;
                ++clamped;
            }
        }
    }
    return clamped;
}

inline double supOf(std::span<const double> U) {
    return U.empty() ? 0.0 : *std::max_element(U.begin(), U.end());
}

/// Front speed from the current prey profile; throws if it is not positive.
inline double stefanSpeed(std::span<const double> U, double h, double rho, double t) {
    const double grad = frontGradient(U, h);
    if (!std::isfinite(grad)) {
        throw NumericalBlowup("non-finite front gradient", t, static_cast<int>(U.size()) - 1);
    }
    const double hPrime = -rho * grad;
    if (hPrime < 0.0 || (hPrime == 0.0 && supOf(U) > kUnderflowFloor)) {
        std::ostringstream os;
        os << "front speed " << hPrime << " is not positive at t = " << t;
        throw StefanViolation(os.str(), t, hPrime);
    }
    return hPrime;
}

inline double chooseStep(const SolverConfig& cfg, double h, double hPrime) {
    double dt = cfg.dt;
    if (cfg.adaptive && hPrime > 0.0) {
        dt = std::min(dt, cfg.cfl * h * cfg.dxi() / hPrime);
    }
    return dt;
}

/// Fixed-horizon schedule: steps are clipped so snapshot times and tMax are hit exactly.
class Schedule {
public:
    explicit Schedule(const SolverConfig& cfg) : cfg_(cfg) {}

    double nextTarget(double t) const {
        double target = cfg_.tMax;
        if (cfg_.snapshotInterval > 0.0) {
            const double k = std::floor(t / cfg_.snapshotInterval + 1e-9) + 1.0;
            target = std::min(target, k * cfg_.snapshotInterval);
        }
        return target;
    }

    /// Clips a proposed step; returns (dt, landsOnTarget).
    std::pair<double, bool> clip(double t, double proposed) const {
        const double target = nextTarget(t);
        const double remaining = target - t;
        if (proposed >= remaining * (1.0 - 1e-9)) {
            return {remaining, true};
        }
        return {proposed, false};
    }

    bool done(double t) const { return t >= cfg_.tMax * (1.0 - 1e-12); }

private:
    const SolverConfig& cfg_;
};

inline void recordSeries(Trajectory& tr, const SimulationState& s, double gradient) {
    tr.times.push_back(s.t);
    tr.fronts.push_back(s.h);
    tr.frontSpeeds.push_back(s.hPrime);
    tr.frontGradients.push_back(gradient);
    tr.supU.push_back(supOf(s.U));
    tr.supV.push_back(supOf(s.V));
}

inline void recordSnapshot(Trajectory& tr, const SimulationState& s) {
    if (!tr.snapshots.empty() && tr.snapshots.back().t == s.t) {
        return;
    }
    tr.snapshots.push_back(Snapshot{s.t, s.h, s.U, s.V});
}

/// `nodes` counts all species nodes updated per step.
inline void checkClampBudget(const Trajectory& tr, std::size_t steps, std::size_t nodes, double t) {
    const double budget = tr.config.maxClampFraction * static_cast<double>(steps * nodes);
    if (steps >= 100 && static_cast<double>(tr.clampedNodes) > budget) {
        std::ostringstream os;
        os << "negative values clamped at " << tr.clampedNodes << " node-steps (budget "
           << budget << ") by t = " << t;
        throw NumericalBlowup(os.str(), t, -1);
    }
}

inline void checkBound(double sup, double bound, double t, const char* what) {
    if (sup > bound + 1e-6) {
        std::ostringstream os;
        os << what << " sup " << sup << " exceeds a-priori bound " << bound << " at t = " << t;
        throw NumericalBlowup(os.str(), t, -1);
    }
}

/// Advances a coupled state by dt in place; hPrime must hold the current front speed.
inline std::size_t advanceCoupled(SimulationState& s, const ModelParams& p, double dt,
                                  bool clamp, double& minValue, Workspace& ws) {
    const std::size_t nodes = s.U.size();
    for (std::size_t j = 0; j < nodes; ++j) {
        const double flux = responseKernel(s.U[j], s.V[j], p.m);
        ws.reactionU[j] = logisticRate(p.lambda, s.U[j]) - p.b * flux;
        ws.reactionV[j] = logisticRate(p.mu, s.V[j]) + p.c * flux;
    }
    const double hOld = s.h;
    const double hNew = hOld + dt * s.hPrime;
    imexSpecies(s.U, ws.reactionU, 1.0, hOld, hNew, s.hPrime, dt, ws);
    imexSpecies(s.V, ws.reactionV, p.d, hOld, hNew, s.hPrime, dt, ws);
    s.h = hNew;
    s.t += dt;
    return sanitise(s.U, s.t, clamp, minValue) + sanitise(s.V, s.t, clamp, minValue);
}

}  // namespace detail

/// Initial state on the xi-grid; rejects invalid data. b = c = 0 is
/// accepted (two decoupled logistic species).
inline SimulationState makeInitialState(const ModelParams& p, const InitialData& init,
                                        const SolverConfig& cfg) {
    p.validate(true);
    init.validate();
    cfg.validate();
    SimulationState s;
    s.t = 0.0;
    s.h = init.h0;
    s.U = init.sampleU(cfg.nGrid);
    s.V = init.sampleV(cfg.nGrid);
    s.hPrime = detail::stefanSpeed(s.U, s.h, p.rho, 0.0);
    return s;
}

/// One step of size cfg.dt.
inline SimulationState step(const SimulationState& state, const ModelParams& p,
                            const SolverConfig& cfg) {
    SimulationState next = state;
    detail::Workspace ws;
    ws.resize(next.U.size());
    double minValue = 0.0;
    next.hPrime = detail::stefanSpeed(next.U, next.h, p.rho, next.t);
    detail::advanceCoupled(next, p, cfg.dt, cfg.clampNegatives, minValue, ws);
    next.hPrime = detail::stefanSpeed(next.U, next.h, p.rho, next.t);
    return next;
}

/// Integrates the coupled system to cfg.tMax, or until `stop` returns true.
/// On a step error the partial trajectory is written to `partial` (if given)
/// and the error is rethrown.
inline Trajectory simulate(const ModelParams& p, const InitialData& init, const SolverConfig& cfg,
                           const StopPredicate& stop = {}, Trajectory* partial = nullptr) {
    SimulationState s = makeInitialState(p, init, cfg);
    Trajectory tr;
    tr.params = p;
    tr.config = cfg;
    tr.densityBound = std::max({init.supU(), init.supV(), p.lambda, p.mu + p.c});

    detail::Workspace ws;
    ws.resize(s.U.size());
    const detail::Schedule schedule(cfg);
    std::size_t steps = 0;
    try {
        detail::recordSeries(tr, s, frontGradient(s));
        detail::recordSnapshot(tr, s);
        if (stop && stop(s)) {
            tr.stoppedEarly = true;
            return tr;
        }
        while (!schedule.done(s.t)) {
            const auto [dt, onTarget] = schedule.clip(s.t, detail::chooseStep(cfg, s.h, s.hPrime));
            const double target = schedule.nextTarget(s.t);
            tr.clampedNodes += detail::advanceCoupled(s, p, dt, cfg.clampNegatives, tr.minValue, ws);
            if (onTarget) {
                s.t = target;
            }
            ++steps;
            detail::checkClampBudget(tr, steps, 2 * s.U.size(), s.t);
            const double grad = frontGradient(s);
            s.hPrime = detail::stefanSpeed(s.U, s.h, p.rho, s.t);
            tr.stepSizes.push_back(dt);
            detail::recordSeries(tr, s, grad);
            detail::checkBound(tr.supU.back(), tr.densityBound, s.t, "prey");
            detail::checkBound(tr.supV.back(), tr.densityBound, s.t, "predator");
            if (onTarget) {
                detail::recordSnapshot(tr, s);
            }
            if (stop && stop(s)) {
                tr.stoppedEarly = true;
                break;
            }
        }
        detail::recordSnapshot(tr, s);
    } catch (...) {
        if (partial != nullptr) {
            detail::recordSnapshot(tr, s);
            *partial = tr;
        }
        throw;
    }
    return tr;
}

/// Single-species logistic free-boundary problem
///   w_t = D w_xx + rate w - w^2,  s'(t) = -rho w_x(t, s(t)),
/// on the same grid and step policy as the coupled solver. The profile is
/// stored in U; V stays empty.
inline Trajectory simulateLogistic(double rate, double rho, double h0, std::vector<double> w0,
                                   const SolverConfig& cfg, double diffusivity = 1.0,
                                   const StopPredicate& stop = {}) {
    cfg.validate();
    if (static_cast<int>(w0.size()) != cfg.nGrid + 2) {
        throw ValidationError("logistic initial profile must live on the solver grid");
    }
    SimulationState s;
    s.h = h0;
    s.U = std::move(w0);
    s.hPrime = detail::stefanSpeed(s.U, s.h, rho, 0.0);

    Trajectory tr;
    tr.params.lambda = rate;
    tr.params.rho = rho;
    tr.params.b = 0.0;
    tr.params.c = 0.0;
    tr.config = cfg;
    tr.densityBound = std::max(detail::supOf(s.U), rate);

    detail::Workspace ws;
    ws.resize(s.U.size());
    const detail::Schedule schedule(cfg);
    std::size_t steps = 0;
    detail::recordSeries(tr, s, frontGradient(s));
    detail::recordSnapshot(tr, s);
    while (!schedule.done(s.t)) {
        const auto [dt, onTarget] = schedule.clip(s.t, detail::chooseStep(cfg, s.h, s.hPrime));
        const double target = schedule.nextTarget(s.t);
        for (std::size_t j = 0; j < s.U.size(); ++j) {
            ws.reactionU[j] = logisticRate(rate, s.U[j]);
        }
        const double hOld = s.h;
        const double hNew = hOld + dt * s.hPrime;
        detail::imexSpecies(s.U, ws.reactionU, diffusivity, hOld, hNew, s.hPrime, dt, ws);
        s.h = hNew;
        s.t += dt;
        tr.clampedNodes += detail::sanitise(s.U, s.t, cfg.clampNegatives, tr.minValue);
        if (onTarget) {
            s.t = target;
        }
        ++steps;
        detail::checkClampBudget(tr, steps, s.U.size(), s.t);
        const double grad = frontGradient(s);
        s.hPrime = detail::stefanSpeed(s.U, s.h, rho, s.t);
        tr.stepSizes.push_back(dt);
        detail::recordSeries(tr, s, grad);
        detail::checkBound(tr.supU.back(), tr.densityBound, s.t, "logistic");
        if (onTarget) {
            detail::recordSnapshot(tr, s);
        }
        if (stop && stop(s)) {
            tr.stoppedEarly = true;
            break;
        }
    }
    detail::recordSnapshot(tr, s);
    return tr;
}

/// Logistic species w_t = D w_xx + rate w - w^2 on the moving domain of a
/// reference run, with w = 0 at the reference front. Reuses the reference
/// step sequence so the domains coincide exactly; snapshots are taken at
/// the reference snapshot times. The profile is stored in U.
inline Trajectory simulatePrescribed(const Trajectory& reference, double rate, double diffusivity,
                                     std::vector<double> w0, bool clampNegatives = true) {
    if (w0.size() != static_cast<std::size_t>(reference.config.nGrid + 2)) {
        throw ValidationError("prescribed-boundary profile must live on the reference grid");
    }
    Trajectory tr;
    tr.params.lambda = rate;
    tr.params.d = diffusivity;
    tr.config = reference.config;
    tr.densityBound = std::max(detail::supOf(w0), rate);

    SimulationState s;
    s.h = reference.fronts.front();
    s.U = std::move(w0);
    detail::Workspace ws;
    ws.resize(s.U.size());

    std::size_t nextSnap = 0;
    auto maybeSnapshot = [&]() {
        while (nextSnap < reference.snapshots.size() && reference.snapshots[nextSnap].t < s.t) {
            ++nextSnap;
        }
        if (nextSnap < reference.snapshots.size() && reference.snapshots[nextSnap].t == s.t) {
            detail::recordSnapshot(tr, s);
        }
    };
    auto record = [&]() {
        tr.times.push_back(s.t);
        tr.fronts.push_back(s.h);
        tr.supU.push_back(detail::supOf(s.U));
    };
    record();
    maybeSnapshot();
    for (std::size_t k = 0; k + 1 < reference.times.size(); ++k) {
        const double dt = reference.stepSizes[k];
        const double hPrime = reference.frontSpeeds[k];
        for (std::size_t j = 0; j < s.U.size(); ++j) {
            ws.reactionU[j] = logisticRate(rate, s.U[j]);
        }
        detail::imexSpecies(s.U, ws.reactionU, diffusivity, reference.fronts[k],
                            reference.fronts[k + 1], hPrime, dt, ws);
        s.h = reference.fronts[k + 1];
        s.t = reference.times[k + 1];
        tr.clampedNodes += detail::sanitise(s.U, s.t, clampNegatives, tr.minValue);
        tr.stepSizes.push_back(dt);
        record();
        maybeSnapshot();
    }
    return tr;
}

}  // namespace freefront
