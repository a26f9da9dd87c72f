#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace freefront {

/// Thomas algorithm for  lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored. Assumes diagonal dominance (no pivoting).
/// `rhs` is overwritten with the solution; `scratch` must hold n entries.
inline void solveTridiagonal(std::span<const double> lower, std::span<const double> diag,
                             std::span<const double> upper, std::span<double> rhs,
                             std::span<double> scratch) {
    const std::size_t n = diag.size();
    if (n == 0) {
        return;
    }
    double pivot = diag[0];
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i] * scratch[i];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
}

/// Convenience overload that allocates its own scratch.
inline std::vector<double> solveTridiagonal(std::span<const double> lower,
                                            std::span<const double> diag,
                                            std::span<const double> upper,
                                            std::vector<double> rhs) {
    std::vector<double> scratch(diag.size());
    solveTridiagonal(lower, diag, upper, rhs, scratch);
    return rhs;
}

}  // namespace freefront
