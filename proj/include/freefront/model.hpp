#pragma once

// Parameter algebra of the ratio-dependent predator-prey system with a
// prey-driven free boundary:
//
//   u_t - u_xx   = lambda u - u^2 - b u v / (u + m v)
//   v_t - d v_xx = mu v - v^2 + c u v / (u + m v)
//   h'(t) = -rho u_x(t, h(t))
//
// Closed-form equilibria, the monotone iteration that squeezes onto them,
// the principal eigenvalue of the linearised prey operator and the
// asymptotic speed constants. No PDE solving happens here.

#include "freefront/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace freefront {

struct ModelParams {
    double lambda = 1.0;  ///< prey growth rate
    double mu = 1.0;      ///< predator growth rate
    double b = 1.0;       ///< predation coefficient
    double c = 1.0;       ///< conversion coefficient
    double d = 1.0;       ///< predator diffusivity
    double m = 1.0;       ///< ratio-dependence saturation
    double rho = 1.0;     ///< Stefan coefficient

    /// m lambda > b: the prey can outgrow predation at low density.
    bool preySurvives() const { return m * lambda > b; }

    /// 0 < m lambda - b < b mu / c: a positive interior equilibrium exists.
    bool coexistRegime() const {
        const double excess = m * lambda - b;
        return excess > 0.0 && excess < b * mu / c;
    }

    /// d (mu + c) <= lambda - b/m: predators cannot outrun the slowest prey front.
    bool preyFaster() const { return d * (mu + c) <= lambda - b / m; }

    /// Throws ValidationError naming the first non-positive field. With
    /// `allowDecoupled` the interaction coefficients b, c may also be zero.
    void validate(bool allowDecoupled = false) const {
        const std::pair<const char*, double> fields[] = {
            {"lambda", lambda}, {"mu", mu}, {"b", b}, {"c", c},
            {"d", d},           {"m", m},   {"rho", rho}};
        for (const auto& [name, value] : fields) {
            const bool coupling = name == std::string_view("b") || name == std::string_view("c");
            if (allowDecoupled && coupling && value == 0.0) {
                continue;
            }
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw ValidationError(std::string(name) + " must be positive");
            }
        }
    }
};

namespace detail {

inline void requirePreySurvives(const ModelParams& p) {
    if (!p.preySurvives()) {
        std::ostringstream os;
        os << "prey persistence requires m*lambda > b (got m*lambda = " << p.m * p.lambda
           << ", b = " << p.b << ")";
        throw OutOfRegime(os.str());
    }
}

inline void requireCoexist(const ModelParams& p) {
    const double excess = p.m * p.lambda - p.b;
    if (!(excess > 0.0)) {
        requirePreySurvives(p);
    }
    if (!(excess < p.b * p.mu / p.c)) {
        std::ostringstream os;
        os << "coexist regime requires 0 < m*lambda - b < b*mu/c (got m*lambda - b = " << excess
           << ", b*mu/c = " << p.b * p.mu / p.c << ")";
        throw OutOfRegime(os.str());
    }
}

/// Interaction kernel used inside solvers; slightly negative inputs from
/// round-off are treated as zero density.
inline double responseKernel(double u, double v, double m) noexcept {
    const double denom = u + m * v;
    return denom > 0.0 ? u * v / denom : 0.0;
}

}  // namespace detail

/// Interaction flux u v / (u + m v); zero at the origin.
inline double response(double u, double v, double m) {
    if (u < 0.0 || v < 0.0) {
        throw DomainError("response: densities must be non-negative");
    }
    if (!(m > 0.0)) {
        throw DomainError("response: m must be positive");
    }
    if (u == 0.0 && v == 0.0) {
        return 0.0;
    }
    return u * v / (u + m * v);
}

struct EquilibriumResult {
    double uStar = 0.0;
    double vStar = 0.0;
    double A = 0.0;
    double delta1 = 0.0;
    double residual1 = 0.0;  ///< |lambda - u - b v/(u+mv)|
    double residual2 = 0.0;  ///< |mu - v + c u/(u+mv)|
};

/// Residuals of the two kinetic equations at (u, v).
inline std::pair<double, double> equilibriumResiduals(const ModelParams& p, double u, double v) {
    const double denom = u + p.m * v;
    return {std::abs(p.lambda - u - p.b * v / denom), std::abs(p.mu - v + p.c * u / denom)};
}

inline EquilibriumResult equilibriumClosedForm(const ModelParams& p) {
    detail::requireCoexist(p);
    const double m2 = p.m * p.m;
    EquilibriumResult r;
    r.A = p.lambda * (2.0 * p.c * m2 + p.b) - p.m * p.b * (p.mu + 2.0 * p.c);
    const double lead = p.b + p.c * m2;
    r.delta1 = r.A * r.A +
               4.0 * lead * (p.b * (p.mu + p.c) - p.m * p.c * p.lambda) * (p.m * p.lambda - p.b);
    r.uStar = (r.A + std::sqrt(r.delta1)) / (2.0 * lead);
    const double gap = p.lambda - r.uStar;
    r.vStar = r.uStar * gap / (p.b - p.m * gap);
    std::tie(r.residual1, r.residual2) = equilibriumResiduals(p, r.uStar, r.vStar);
    return r;
}

/// Positive root of u^2 - (lambda - m s) u - (m lambda - b) s = 0:
/// the prey level sustainable under predator pressure s.
inline double phiMap(double s, const ModelParams& p) {
    if (s < 0.0) {
        throw DomainError("phiMap: s must be non-negative");
    }
    detail::requirePreySurvives(p);
    const double lin = p.lambda - p.m * s;
    return 0.5 * (lin + std::sqrt(lin * lin + 4.0 * (p.m * p.lambda - p.b) * s));
}

/// Positive root of m v^2 - (m mu + (c-1) s) v - s mu = 0:
/// the predator level sustainable on prey level s.
inline double psiMap(double s, const ModelParams& p) {
    if (s < 0.0) {
        throw DomainError("psiMap: s must be non-negative");
    }
    const double lin = p.m * p.mu + (p.c - 1.0) * s;
    return (lin + std::sqrt(lin * lin + 4.0 * p.m * p.mu * s)) / (2.0 * p.m);
}

/// Positive root of m v^2 - (m mu - s) v - (mu + c) s = 0, i.e. the v
/// solving mu - v + c s/(s + m v) = 0. This is the predator map whose fixed
/// point with phiMap is the equilibrium; psiMap's quadratic carries an extra
/// factor v in the interaction term and settles elsewhere.
inline double predatorNullcline(double s, const ModelParams& p) {
    if (s < 0.0) {
        throw DomainError("predatorNullcline: s must be non-negative");
    }
    const double lin = p.m * p.mu - s;
    return (lin + std::sqrt(lin * lin + 4.0 * p.m * (p.mu + p.c) * s)) / (2.0 * p.m);
}

struct IterationTrace {
    std::vector<double> uUpper, vUpper, uLower, vLower;
    int iterations = 0;
    bool converged = false;
    /// Every step kept lower_i <= lower_{i+1} <= upper_{i+1} <= upper_i (up to round-off).
    bool monotone = true;
};

/// Upper/lower squeeze seeded with uUpper_1 = lambda:
///   vUpper_i = N(uUpper_i), uLower_i = phi(vUpper_i),
///   vLower_i = N(uLower_i), uUpper_{i+1} = phi(vLower_i),
/// with N = predatorNullcline.
/// Exhausting maxIter is reported through `converged`, not thrown.
inline IterationTrace iterateEquilibrium(const ModelParams& p, double tol = 1e-10,
                                         int maxIter = 10000) {
    detail::requireCoexist(p);
    IterationTrace tr;
    auto noWorse = [](double lo, double hi) {
        return lo <= hi + 1e-13 * std::max(1.0, std::abs(hi));
    };

    double uUp = p.lambda;
    for (int i = 0; i < maxIter; ++i) {
        const double vUp = predatorNullcline(uUp, p);
        const double uLo = phiMap(vUp, p);
        const double vLo = predatorNullcline(uLo, p);
        if (!tr.uUpper.empty()) {
            const auto k = tr.uUpper.size() - 1;
            tr.monotone = tr.monotone && noWorse(uUp, tr.uUpper[k]) && noWorse(vUp, tr.vUpper[k]) &&
                          noWorse(tr.uLower[k], uLo) && noWorse(tr.vLower[k], vLo);
        }
        tr.monotone = tr.monotone && noWorse(uLo, uUp) && noWorse(vLo, vUp);
        tr.uUpper.push_back(uUp);
        tr.vUpper.push_back(vUp);
        tr.uLower.push_back(uLo);
        tr.vLower.push_back(vLo);
        tr.iterations = i + 1;
        if (std::abs(uUp - uLo) <= tol && std::abs(vUp - vLo) <= tol) {
            tr.converged = true;
            break;
        }
        uUp = phiMap(vLo, p);
    }
    return tr;
}

/// Principal eigenvalue of -phi'' - (lambda - b/m) phi on (0, l) with
/// phi'(0) = phi(l) = 0.
inline double principalEigenvalue(double l, const ModelParams& p) {
    if (!(l > 0.0)) {
        throw DomainError("principalEigenvalue: l must be positive");
    }
    const double k = std::numbers::pi / (2.0 * l);
    return -(p.lambda - p.b / p.m) + k * k;
}

struct ThresholdReport {
    ModelParams params;
    double Lambda = 0.0;      ///< spreading barrier
    double hStarLower = 0.0;  ///< (pi/2) lambda^{-1/2}

    double sigma1(double l) const { return principalEigenvalue(l, params); }
};

inline ThresholdReport spreadingBarrier(const ModelParams& p) {
    detail::requirePreySurvives(p);
    ThresholdReport r;
    r.params = p;
    r.Lambda = 0.5 * std::numbers::pi * std::sqrt(p.m / (p.m * p.lambda - p.b));
    r.hStarLower = 0.5 * std::numbers::pi / std::sqrt(p.lambda);
    return r;
}

struct SpeedConstants {
    double c1 = 0.0;  ///< 2 sqrt(lambda - b/m)
    double c2 = 0.0;  ///< 2 sqrt(lambda)
    double c3 = 0.0;  ///< 2 sqrt(d mu)
    double c4 = 0.0;  ///< 2 sqrt(d (mu + c))
    std::optional<double> c5;  ///< 2 sqrt(lambda - b s/(1 + m s)); empty if the radicand is <= 0
    double s = 0.0;            ///< 2K / (lambda - b/m)
    double K = 0.0;
    /// c5 lies above c1 whenever it exists (s/(1+ms) < 1/m); kept as a report flag.
    bool c5AboveC1 = false;
};

/// K is the caller's sup-bound on the densities (typically observed sup v
/// plus headroom); it is not derivable in closed form.
inline SpeedConstants speedConstants(const ModelParams& p, double K) {
    detail::requirePreySurvives(p);
    if (!(K > 0.0)) {
        throw DomainError("speedConstants: K must be positive");
    }
    SpeedConstants sc;
    const double a1 = p.lambda - p.b / p.m;
    sc.c1 = 2.0 * std::sqrt(a1);
    sc.c2 = 2.0 * std::sqrt(p.lambda);
    sc.c3 = 2.0 * std::sqrt(p.d * p.mu);
    sc.c4 = 2.0 * std::sqrt(p.d * (p.mu + p.c));
    sc.K = K;
    sc.s = 2.0 * K / a1;
    const double radicand = p.lambda - p.b * sc.s / (1.0 + p.m * sc.s);
    if (radicand > 0.0) {
        sc.c5 = 2.0 * std::sqrt(radicand);
        sc.c5AboveC1 = *sc.c5 > sc.c1;
    }
    return sc;
}

}  // namespace freefront
