#pragma once

// Product space {0,1}^E: configurations, increasing events, single-element
// flips and pivotality. Everything here is immutable after construction and
// safe to share across threads; event predicates are required to be
// re-entrant.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "rng.hpp"

namespace percolab {

// A configuration assigns open (1) / closed (0) to each ground-set element.
using Configuration = Bitset;

struct GroundSet {
    std::size_t size = 0;
    std::vector<std::string> labels;  // optional; when present, labels[i] names element i

    GroundSet() = default;
    explicit GroundSet(std::size_t n) : size(n) {
        if (n < 1) throw std::invalid_argument("ground set must have at least one element");
    }
    GroundSet(std::size_t n, std::vector<std::string> lab) : size(n), labels(std::move(lab)) {
        if (n < 1) throw std::invalid_argument("ground set must have at least one element");
        if (!labels.empty() && labels.size() != size)
            throw std::invalid_argument("label count does not match ground set size");
    }
};

// Event over configurations. `declared_increasing` is a contract, not a
// proof; check_increasing polices it.
struct MonotoneEvent {
    std::string name;
    std::function<bool(const Configuration&)> predicate;
    bool declared_increasing = true;

    bool operator()(const Configuration& w) const { return predicate(w); }
};

namespace detail {
inline void require_element(const Configuration& w, std::size_t e) {
    if (e >= w.size()) throw std::domain_error("element index out of range");
}
} // namespace detail

inline Configuration flip_up(const Configuration& w, std::size_t e) {
    detail::require_element(w, e);
    Configuration r = w;
    r.set(e, true);
    return r;
}

inline Configuration flip_down(const Configuration& w, std::size_t e) {
    detail::require_element(w, e);
    Configuration r = w;
    r.set(e, false);
    return r;
}

// e is pivotal when the event holds with e open and fails with e closed.
// For increasing events this is exactly "the occurrence depends on e".
inline bool is_pivotal(const MonotoneEvent& a, const Configuration& w, std::size_t e) {
    detail::require_element(w, e);
    return a(flip_up(w, e)) && !a(flip_down(w, e));
}

struct IncreasingCheck {
    bool passed = true;
    bool exhaustive = false;
    // violating pair (lower, upper) with lower <= upper, in A \ A respectively
    std::optional<std::pair<Configuration, Configuration>> counterexample;
};

// Single-flip monotonicity test. Exhaustive when 2^n fits the budget,
// otherwise seeded random probes. A predicate is increasing iff it has no
// single-flip violation.
inline IncreasingCheck check_increasing(const MonotoneEvent& a, std::size_t n,
                                        std::uint64_t budget, std::uint64_t seed = 0) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    IncreasingCheck res;
    auto violation = [&](const Configuration& w, std::size_t e) {
        Configuration lo = flip_down(w, e);
        Configuration hi = flip_up(w, e);
        if (a(lo) && !a(hi)) {
            res.passed = false;
            res.counterexample = std::make_pair(std::move(lo), std::move(hi));
            return true;
        }
        return false;
    };

    if (n < 64 && (std::uint64_t{1} << n) <= budget) {
        res.exhaustive = true;
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
            Configuration w = Configuration::from_index(n, idx);
            for (std::size_t e = 0; e < n; ++e)
                if (violation(w, e)) return res;
        }
        return res;
    }

    CounterRng rng(seed);
    for (std::uint64_t t = 0; t < budget; ++t) {
        Configuration w(n);
        for (std::size_t i = 0; i < n; ++i)
            w.set(i, rng.uniform(t, i, /*salt=*/1) < 0.5);
        auto e = static_cast<std::size_t>(rng.word(t, 0, 2) % n);
        if (violation(w, e)) return res;
    }
    return res;
}

} // namespace percolab
