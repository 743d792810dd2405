#pragma once

// Named events on small ground sets: dictators, majorities, parity,
// up-closures of generator configurations, and seeded random increasing
// events (union of up-sets of random generators).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cube.hpp"
#include "rng.hpp"

namespace percolab {

inline MonotoneEvent dictator_event(std::size_t e) {
    return {"dictator(" + std::to_string(e) + ")",
            [e](const Configuration& w) { return w.get(e); }, true};
}

inline MonotoneEvent full_event() {
    return {"full", [](const Configuration&) { return true; }, true};
}

inline MonotoneEvent empty_event() {
    return {"empty", [](const Configuration&) { return false; }, true};
}

// at least k of the n elements open
inline MonotoneEvent threshold_event(std::size_t k) {
    return {"atleast(" + std::to_string(k) + ")",
            [k](const Configuration& w) { return w.count() >= k; }, true};
}

inline MonotoneEvent majority3_event() {
    MonotoneEvent e = threshold_event(2);
    e.name = "majority3";
    return e;
}

// odd number of open elements; not increasing (contract-test fodder)
inline MonotoneEvent parity_event() {
    return {"parity", [](const Configuration& w) { return w.count() % 2 == 1; }, false};
}

// union of up-sets of the generators: w in A iff w >= g for some generator g
inline MonotoneEvent up_closure_event(std::vector<Configuration> generators,
                                      std::string name = "upclosure") {
    return {std::move(name),
            [gens = std::move(generators)](const Configuration& w) {
                for (const auto& g : gens)
                    if (g.leq(w)) return true;
                return false;
            },
            true};
}

// Random increasing event: up-closure of up to max_gens random
// configurations. Increasing by construction.
inline MonotoneEvent random_increasing_event(std::size_t n, std::size_t max_gens,
                                             std::uint64_t seed) {
    CounterRng rng(seed);
    std::size_t gens = 1 + rng.word(0, 0, 3) % max_gens;
    std::vector<Configuration> g;
    g.reserve(gens);
    for (std::size_t i = 0; i < gens; ++i) {
        Configuration c(n);
        for (std::size_t j = 0; j < n; ++j)
            c.set(j, rng.uniform(i + 1, j, 4) < 0.5);
        g.push_back(std::move(c));
    }
    return up_closure_event(std::move(g), "random_upset(" + std::to_string(seed) + ")");
}

} // namespace percolab
