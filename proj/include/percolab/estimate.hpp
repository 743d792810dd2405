#pragma once

// Point estimates with uncertainty. Proportions use the Wilson score
// interval, which stays inside [0,1] and keeps a nonzero width at 0/1
// counts; the reported stderr is the half-width of the z=1 Wilson interval.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace percolab {

struct Estimate {
    double value = 0.0;
    double se = 0.0;
    double lo = 0.0;   // z=1 interval, clamped to the feasible range
    double hi = 0.0;
    std::size_t replicas = 0;
    std::string method;  // "wilson" or "normal"
};

inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n,
                                                 double z = 1.0) {
    if (n == 0) return {0.0, 1.0};
    const double phat = static_cast<double>(successes) / static_cast<double>(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / static_cast<double>(n);
    const double center = (phat + z2 / (2.0 * static_cast<double>(n))) / denom;
    const double hw =
        z * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n) +
                      z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n))) /
        denom;
    return {std::max(0.0, center - hw), std::min(1.0, center + hw)};
}

inline Estimate proportion_estimate(std::uint64_t successes, std::uint64_t n) {
    Estimate e;
    e.value = n ? static_cast<double>(successes) / static_cast<double>(n) : 0.0;
    auto [lo, hi] = wilson_interval(successes, n);
    e.lo = lo;
    e.hi = hi;
    e.se = (hi - lo) / 2.0;
    e.replicas = n;
    e.method = "wilson";
    return e;
}

// mean with the z=1 normal interval, clamped to the observable's
// feasible range
inline Estimate mean_estimate(const std::vector<double>& xs,
                              double feasible_lo = -std::numeric_limits<double>::infinity(),
                              double feasible_hi = std::numeric_limits<double>::infinity()) {
    Estimate e;
    e.replicas = xs.size();
    e.method = "normal";
    if (xs.empty()) return e;
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
    e.value = mean;
    e.se = std::sqrt(var / static_cast<double>(xs.size()));
    e.lo = std::max(feasible_lo, mean - e.se);
    e.hi = std::min(feasible_hi, mean + e.se);
    return e;
}

} // namespace percolab
