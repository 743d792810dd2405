#pragma once

// Counter-based random streams. The uniform for (seed, replica, key, salt)
// is a pure function, so replicas can run in any order on any number of
// threads and coupled sweeps over p reuse the same uniforms. Keys for
// lattice carriers are packed from geometry (coordinates + orientation), so
// the same physical edge draws the same uniform in nested boxes.

#include <cstdint>

namespace percolab {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::uint64_t word(std::uint64_t replica, std::uint64_t key, std::uint64_t salt = 0) const {
        std::uint64_t h = mix(seed_ ^ 0x6A09E667F3BCC909ull);
        h = mix(h ^ replica * 0xC2B2AE3D27D4EB4Full);
        h = mix(h ^ key * 0x9E3779B97F4A7C15ull);
        h = mix(h ^ salt * 0x165667B19E3779F9ull);
        return h;
    }

    // uniform in [0, 1)
    double uniform(std::uint64_t replica, std::uint64_t key, std::uint64_t salt = 0) const {
        return static_cast<double>(word(replica, key, salt) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
};

// Sequential stream for Markov chains: one (seed, replica) pair, an
// incrementing counter.
class SequentialRng {
public:
    SequentialRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t salt = 0)
        : rng_(seed), replica_(replica), salt_(salt) {}

    double next() { return rng_.uniform(replica_, counter_++, salt_); }
    std::uint64_t counter() const { return counter_; }

private:
    CounterRng rng_;
    std::uint64_t replica_;
    std::uint64_t salt_;
    std::uint64_t counter_ = 0;
};

} // namespace percolab
