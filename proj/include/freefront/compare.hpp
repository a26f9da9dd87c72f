#pragma once

// Comparison-principle checks against numerical runs.
//
// - An explicit upper solution for small fronts,
//     sigma(t) = h0 (1 + delta - (delta/2) e^{-gamma t}),
//     w(t, x)  = C e^{-alpha t} cos(pi x / (2 sigma(t))),
//   valid when lambda < (pi/2)^2 / h0^2 and rho <= rho0.
// - Logistic sandwiches: the prey lies between the logistic free-boundary
//   problems with rates lambda - b/m and lambda; the predator between the
//   logistic problems with rates mu and mu + c on the coupled domain.

#include "freefront/errors.hpp"
#include "freefront/model.hpp"
#include "freefront/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace freefront {

struct ExplicitUpperSolution {
    double h0 = 0.0;
    double lambda = 0.0;
    double C = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double rho0 = 0.0;

    double sigma(double t) const { return h0 * (1.0 + delta - 0.5 * delta * std::exp(-gamma * t)); }
    double w(double t, double x) const {
        const double s = sigma(t);
        if (x >= s) return 0.0;
        return C * std::exp(-alpha * t) * std::cos(0.5 * std::numbers::pi * x / s);
    }
    double frontLimit() const { return h0 * (1.0 + delta); }
};

/// Builds the upper solution for prey data `init` (its h0 is used).
/// C is the grid maximum of u0(x) / cos(pi x / (2 h0 (1 + delta/2))) on [0, h0).
inline ExplicitUpperSolution buildExplicitUpper(const ModelParams& p, const InitialData& init,
                                                int samples = 4096) {
    const double h0 = init.h0;
    const double k0 = std::pow(0.5 * std::numbers::pi / h0, 2);
    if (!(p.lambda < k0)) {
        std::ostringstream os;
        os << "upper solution requires h0 < (pi/2) lambda^{-1/2} = "
           << 0.5 * std::numbers::pi / std::sqrt(p.lambda) << " (got h0 = " << h0 << ")";
        throw PremiseViolated(os.str());
    }
    ExplicitUpperSolution up;
    up.h0 = h0;
    up.lambda = p.lambda;
    up.alpha = 0.5 * (k0 - p.lambda);
    up.gamma = up.alpha;
    up.delta = std::sqrt(k0 / (p.lambda + up.alpha)) - 1.0;
    const double stretched = h0 * (1.0 + 0.5 * up.delta);
    for (int i = 0; i < samples; ++i) {
        const double x = h0 * static_cast<double>(i) / static_cast<double>(samples);
        const double ratio = init.uAt(x) / std::cos(0.5 * std::numbers::pi * x / stretched);
        up.C = std::max(up.C, ratio);
    }
    up.rho0 = up.delta * up.gamma * h0 * h0 / (up.C * std::numbers::pi);
    return up;
}

/// Outcome of one ordering check. worstMargin is relative; the check passes
/// when worstMargin <= tol. violation() clips it at zero.
struct OrderingReport {
    std::string check;
    double worstMargin = -std::numeric_limits<double>::infinity();
    double t = 0.0;
    double x = 0.0;
    bool pass = true;
    double tol = 1e-3;

    double violation() const { return std::max(0.0, worstMargin); }
    void offer(double margin, double atT, double atX) {
        if (margin > worstMargin) {
            worstMargin = margin;
            t = atT;
            x = atX;
        }
    }
    void finish() { pass = worstMargin <= tol; }
};

inline void enforce(const OrderingReport& rep) {
    if (!rep.pass) {
        std::ostringstream os;
        os << rep.check << " ordering violated: relative margin " << rep.worstMargin << " > "
           << rep.tol << " at t = " << rep.t << ", x = " << rep.x;
        throw PropertyViolation(os.str(), rep.t, rep.x, rep.worstMargin);
    }
}

struct UpperOrderingReport {
    OrderingReport density;  ///< u <= w (1 + tol), margin (u - w) / w
    OrderingReport front;    ///< h <= sigma (1 + tol), margin (h - sigma) / sigma
    bool pass() const { return density.pass && front.pass; }
    double violation() const { return std::max(density.violation(), front.violation()); }
};

/// Checks u <= w on every snapshot and h <= sigma at every recorded step.
/// Throws PropertyViolation on failure unless `throwOnViolation` is false.
inline UpperOrderingReport verifyUpperOrdering(const Trajectory& traj,
                                               const ExplicitUpperSolution& up, double tol = 1e-3,
                                               bool throwOnViolation = true) {
    if (traj.params.rho > up.rho0) {
        std::ostringstream os;
        os << "upper solution needs rho <= rho0 = " << up.rho0 << " (got " << traj.params.rho << ")";
        throw PremiseViolated(os.str());
    }
    UpperOrderingReport rep;
    rep.density.check = "u <= w";
    rep.front.check = "h <= sigma";
    rep.density.tol = rep.front.tol = tol;
    for (const auto& snap : traj.snapshots) {
        const double dxi = 1.0 / static_cast<double>(snap.U.size() - 1);
        for (std::size_t j = 0; j + 1 < snap.U.size(); ++j) {
            const double x = static_cast<double>(j) * dxi * snap.h;
            const double w = up.w(snap.t, x);
            const double u = snap.U[j];
            if (w > 0.0) {
                rep.density.offer((u - w) / w, snap.t, x);
            } else if (u > 0.0) {
                rep.density.offer(std::numeric_limits<double>::infinity(), snap.t, x);
            }
        }
    }
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double s = up.sigma(traj.times[k]);
        rep.front.offer((traj.fronts[k] - s) / s, traj.times[k], traj.fronts[k]);
    }
    rep.density.finish();
    rep.front.finish();
    if (throwOnViolation) {
        enforce(rep.density);
        enforce(rep.front);
    }
    return rep;
}

namespace detail {

/// Profile value at physical x from a snapshot on its own domain [0, h].
inline double profileAt(const std::vector<double>& W, double h, double x) {
    if (x >= h) return 0.0;
    const double pos = x / h * static_cast<double>(W.size() - 1);
    const auto j = std::min(static_cast<std::size_t>(pos), W.size() - 2);
    const double w = pos - static_cast<double>(j);
    return (1.0 - w) * W[j] + w * W[j + 1];
}

inline const Snapshot* snapshotAt(const Trajectory& tr, double t) {
    for (const auto& s : tr.snapshots) {
        if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, t)) return &s;
    }
    return nullptr;
}

/// Orders W (at the nodes of `on`) against the bound B interpolated in
/// physical x; the margin is normalised by sup B.
inline void compareProfiles(OrderingReport& rep, const Snapshot& on, const std::vector<double>& W,
                            const Snapshot& bound, const std::vector<double>& B, bool boundIsUpper) {
    const double scale = std::max(supOf(B), std::numeric_limits<double>::min());
    const double dxi = 1.0 / static_cast<double>(W.size() - 1);
    for (std::size_t j = 0; j < W.size(); ++j) {
        const double x = static_cast<double>(j) * dxi * on.h;
        const double b = profileAt(B, bound.h, x);
        const double margin = boundIsUpper ? (W[j] - b) / scale : (b - W[j]) / scale;
        rep.offer(margin, on.t, x);
    }
}

}  // namespace detail

struct SandwichReport {
    std::vector<OrderingReport> checks;
    Trajectory coupled, uLower, uUpper, vLower, vUpper;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
    double violation() const {
        double v = 0.0;
        for (const auto& c : checks) v = std::max(v, c.violation());
        return v;
    }
};

/// Runs the coupled system, the two prey logistic bounds (own free
/// boundaries, same rho and data) and the two predator logistic bounds (on
/// the coupled run's domain), then checks every ordering at the shared
/// snapshot times. Front ordering is checked at those times as well.
inline SandwichReport verifyLogisticSandwich(const ModelParams& p, const InitialData& init,
                                             const SolverConfig& cfg, double tol = 1e-3,
                                             bool throwOnViolation = true, int threads = 1) {
    detail::requirePreySurvives(p);
    const auto u0 = init.sampleU(cfg.nGrid);
    const auto v0 = init.sampleV(cfg.nGrid);
    const double lowRate = p.lambda - p.b / p.m;

    SandwichReport rep;
    auto coupled = [&] { return simulate(p, init, cfg); };
    auto lower = [&] { return simulateLogistic(lowRate, p.rho, init.h0, u0, cfg); };
    auto upper = [&] { return simulateLogistic(p.lambda, p.rho, init.h0, u0, cfg); };
    if (threads > 1) {
        auto fc = std::async(std::launch::async, coupled);
        auto fl = std::async(std::launch::async, lower);
        rep.uUpper = upper();
        rep.uLower = fl.get();
        rep.coupled = fc.get();
    } else {
        rep.coupled = coupled();
        rep.uLower = lower();
        rep.uUpper = upper();
    }
    rep.vLower = simulatePrescribed(rep.coupled, p.mu, p.d, v0);
    rep.vUpper = simulatePrescribed(rep.coupled, p.mu + p.c, p.d, v0);

    OrderingReport uLo{"u >= logistic(lambda - b/m)"}, uUp{"u <= logistic(lambda)"};
    OrderingReport hLo{"h >= front(lambda - b/m)"}, hUp{"h <= front(lambda)"};
    OrderingReport vLo{"v >= logistic(mu)"}, vUp{"v <= logistic(mu + c)"};
    for (auto* r : {&uLo, &uUp, &hLo, &hUp, &vLo, &vUp}) r->tol = tol;

    for (const auto& snap : rep.coupled.snapshots) {
        const auto* sl = detail::snapshotAt(rep.uLower, snap.t);
        const auto* su = detail::snapshotAt(rep.uUpper, snap.t);
        const auto* vl = detail::snapshotAt(rep.vLower, snap.t);
        const auto* vu = detail::snapshotAt(rep.vUpper, snap.t);
        if (sl != nullptr) {
            detail::compareProfiles(uLo, snap, snap.U, *sl, sl->U, false);
            hLo.offer((sl->h - snap.h) / sl->h, snap.t, snap.h);
        }
        if (su != nullptr) {
            detail::compareProfiles(uUp, snap, snap.U, *su, su->U, true);
            hUp.offer((snap.h - su->h) / su->h, snap.t, snap.h);
        }
        if (vl != nullptr) detail::compareProfiles(vLo, snap, snap.V, *vl, vl->U, false);
        if (vu != nullptr) detail::compareProfiles(vUp, snap, snap.V, *vu, vu->U, true);
    }
    for (auto* r : {&uLo, &uUp, &hLo, &hUp, &vLo, &vUp}) {
        r->finish();
        rep.checks.push_back(*r);
    }
    if (throwOnViolation) {
        for (const auto& c : rep.checks) enforce(c);
    }
    return rep;
}

}  // namespace freefront
