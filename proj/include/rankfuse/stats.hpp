#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rankfuse {

/// Median of a sample (mean of the two central order statistics for
/// even sizes).
template <typename T>
double median(std::vector<T> xs) {
    if (xs.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n % 2 == 1) return static_cast<double>(xs[n / 2]);
    return (static_cast<double>(xs[n / 2 - 1]) + static_cast<double>(xs[n / 2])) / 2.0;
}

/// Percentile by linear interpolation between order statistics,
/// q in [0, 1].
template <typename T>
double percentile(std::vector<T> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("percentile of empty sample");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return static_cast<double>(xs[lo]) * (1.0 - frac) + static_cast<double>(xs[hi]) * frac;
}

}  // namespace rankfuse
