#pragma once

// Stationary logistic profile
//
//   -d V'' = V (rate - V)  on (0, l),   V'(0) = 0,  V(l) = 0.
//
// A positive solution exists (and is unique) iff l > (pi/2) sqrt(d / rate);
// otherwise only V = 0. Solved by damped Newton on the central-difference
// discretisation with a ghost node at x = 0, warm-started by a monotone
// iteration from above.

#include "freefront/errors.hpp"
#include "freefront/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace freefront {

struct SteadyProfile {
    double l = 0.0;
    std::vector<double> grid;    ///< x_j = j l / (nGrid + 1), j = 0..nGrid+1
    std::vector<double> values;  ///< V at grid points; values.back() == 0
    bool positive = false;       ///< false: only the zero solution exists
    double residual = 0.0;
    int iterations = 0;
};

/// True iff l > (pi/2) sqrt(d / rate), compared as l^2 against (pi/2)^2 d / rate.
inline bool logisticProfileExists(double d, double rate, double l) {
    const double half = 0.5 * std::numbers::pi;
    return l * l > half * half * d / rate;
}

namespace detail {

inline void checkBVPInputs(double d, double rate, double l, int nGrid) {
    if (!(d > 0.0) || !(rate > 0.0) || !(l > 0.0)) {
        throw DomainError("logistic BVP needs d, rate, l > 0");
    }
    if (nGrid < 4) {
        throw DomainError("logistic BVP needs at least 4 interior nodes");
    }
}

/// F_j = d (V_{j-1} - 2V_j + V_{j+1}) / dx^2 + V_j (rate - V_j), ghost V_{-1} = V_1.
inline double logisticResidual(const std::vector<double>& V, double d, double rate, double dx,
                               std::vector<double>* out) {
    const std::size_t unknowns = V.size() - 1;
    const double k = d / (dx * dx);
    double worst = 0.0;
    for (std::size_t j = 0; j < unknowns; ++j) {
        const double left = j == 0 ? V[1] : V[j - 1];
        const double f = k * (left - 2.0 * V[j] + V[j + 1]) + V[j] * (rate - V[j]);
        if (out != nullptr) (*out)[j] = f;
        worst = std::max(worst, std::abs(f));
    }
    return worst;
}

}  // namespace detail

/// Newton from a caller-supplied guess on the same grid (values.back() is forced to 0).
/// Stops once the residual is below tol, or below the round-off floor of the
/// discrete operator when that is larger.
inline SteadyProfile solveLogisticBVP(double d, double rate, double l, std::vector<double> guess,
                                      double tol = 1e-10) {
    const int nGrid = static_cast<int>(guess.size()) - 2;
    detail::checkBVPInputs(d, rate, l, nGrid);
    SteadyProfile prof;
    prof.l = l;
    const auto nodes = guess.size();
    const double dx = l / static_cast<double>(nodes - 1);
    prof.grid.resize(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        prof.grid[j] = static_cast<double>(j) * dx;
    }
    if (!logisticProfileExists(d, rate, l)) {
        prof.values.assign(nodes, 0.0);
        return prof;
    }

    std::vector<double> V = std::move(guess);
    V.back() = 0.0;
    const std::size_t unknowns = nodes - 1;
    std::vector<double> F(unknowns), lower(unknowns), diag(unknowns), upper(unknowns),
        scratch(unknowns), trial(nodes);
    const double k = d / (dx * dx);
    double res = detail::logisticResidual(V, d, rate, dx, &F);

    constexpr int kMaxIterations = 200;
    constexpr int kMaxHalvings = 20;
    // On fine grids d/dx^2 amplifies round-off past any fixed tol; floor it.
    auto target = [&] {
        double sup = 0.0;
        for (double v : V) sup = std::max(sup, std::abs(v));
        return std::max(tol, 32.0 * std::numeric_limits<double>::epsilon() * (4.0 * k + rate) * sup);
    };
    while (res > target()) {
        if (prof.iterations++ >= kMaxIterations) {
            throw SolverFailure("logistic BVP Newton hit its iteration cap", res);
        }
        for (std::size_t j = 0; j < unknowns; ++j) {
            lower[j] = k;
            diag[j] = -2.0 * k + rate - 2.0 * V[j];
            upper[j] = k;
            F[j] = -F[j];
        }
        upper[0] = 2.0 * k;
        solveTridiagonal(lower, diag, upper, F, scratch);

        double step = 1.0;
        double trialRes = 0.0;
        int halvings = 0;
        for (;; step *= 0.5, ++halvings) {
            if (halvings > kMaxHalvings) {
                std::ostringstream os;
                os << "logistic BVP Newton stagnated at residual " << res;
                throw SolverFailure(os.str(), res);
            }
            for (std::size_t j = 0; j < unknowns; ++j) {
                trial[j] = V[j] + step * F[j];
            }
            trial.back() = 0.0;
            trialRes = detail::logisticResidual(trial, d, rate, dx, nullptr);
            if (trialRes < res) break;
        }
        V.swap(trial);
        res = detail::logisticResidual(V, d, rate, dx, &F);
    }
    for (std::size_t j = 0; j < unknowns; ++j) {
        if (!(V[j] > 0.0)) {
            std::ostringstream os;
            os << "logistic BVP Newton converged to a non-positive solution (V = " << V[j]
               << " at x = " << prof.grid[j] << ")";
            throw SolverFailure(os.str(), res);
        }
    }
    prof.values = std::move(V);
    prof.positive = true;
    prof.residual = res;
    return prof;
}

namespace detail {

/// Monotone iteration from the supersolution V = rate:
///   (-d D^2 + rate) W = V (2 rate - V),
/// which decreases toward the positive solution. Used as a Newton warm start.
inline std::vector<double> monotoneWarmStart(double d, double rate, double l, int nGrid,
                                             int maxIterations = 5000) {
    const std::size_t nodes = static_cast<std::size_t>(nGrid) + 2;
    const std::size_t unknowns = nodes - 1;
    const double dx = l / static_cast<double>(nodes - 1);
    const double k = d / (dx * dx);
    std::vector<double> V(nodes, rate), lower(unknowns, -k), diag(unknowns, 2.0 * k + rate),
        upper(unknowns, -k), rhs(unknowns), scratch(unknowns);
    upper[0] = -2.0 * k;
    V.back() = 0.0;
    for (int it = 0; it < maxIterations; ++it) {
        for (std::size_t j = 0; j < unknowns; ++j) rhs[j] = V[j] * (2.0 * rate - V[j]);
        solveTridiagonal(lower, diag, upper, rhs, scratch);
        double change = 0.0;
        for (std::size_t j = 0; j < unknowns; ++j) {
            change = std::max(change, std::abs(rhs[j] - V[j]));
            V[j] = rhs[j];
        }
        if (change <= 1e-6 * rate) break;
    }
    return V;
}

}  // namespace detail

/// Positive profile (monotone warm start, then Newton), or the zero profile
/// below the existence threshold.
inline SteadyProfile solveLogisticBVP(double d, double rate, double l, int nGrid = 512,
                                      double tol = 1e-10) {
    detail::checkBVPInputs(d, rate, l, nGrid);
    auto guess = logisticProfileExists(d, rate, l)
                     ? detail::monotoneWarmStart(d, rate, l, nGrid)
                     : std::vector<double>(static_cast<std::size_t>(nGrid) + 2, 0.0);
    return solveLogisticBVP(d, rate, l, std::move(guess), tol);
}

/// max_j |d V''_h + V (rate - V)| over nodes 0..n-2 (ghost reflection at 0).
/// The Dirichlet value at x = l is not part of it; see dirichletGap.
inline double residualLogistic(const SteadyProfile& prof, double d, double rate) {
    if (prof.values.size() < 3) {
        return 0.0;
    }
    const double dx = prof.l / static_cast<double>(prof.values.size() - 1);
    return detail::logisticResidual(prof.values, d, rate, dx, nullptr);
}

inline double dirichletGap(const SteadyProfile& prof) {
    return prof.values.empty() ? 0.0 : std::abs(prof.values.back());
}

}  // namespace freefront
