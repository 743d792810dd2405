#pragma once

// Single-site heat-bath dynamics for the two-dimensional ferromagnetic
// Ising model on an L x L box, with +/-/free boundary frames. Chains are
// seeded and reproducible; the per-site update draws one uniform from an
// injectable stream (the tests exploit this to couple mirrored chains
// exactly).

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "estimate.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "union_find.hpp"

namespace percolab {

enum class SpinBoundary { Plus, Minus, Free };

inline const char* boundary_name(SpinBoundary b) {
    switch (b) {
        case SpinBoundary::Plus: return "plus";
        case SpinBoundary::Minus: return "minus";
        case SpinBoundary::Free: return "free";
    }
    return "?";
}

inline SpinBoundary boundary_from_name(const std::string& s) {
    if (s == "plus" || s == "+") return SpinBoundary::Plus;
    if (s == "minus" || s == "-") return SpinBoundary::Minus;
    if (s == "free") return SpinBoundary::Free;
    throw std::invalid_argument("unknown boundary condition: " + s);
}

struct SpinConfig {
    int L = 0;
    std::vector<std::int8_t> spins;  // row-major L x L interior
    SpinBoundary bc = SpinBoundary::Free;
    double T = 0, h = 0;

    std::int8_t at(int x, int y) const { return spins[static_cast<std::size_t>(y) * L + x]; }
    double magnetization() const {
        long sum = 0;
        for (auto s : spins) sum += s;
        return static_cast<double>(sum) / static_cast<double>(spins.size());
    }
};

// P(spin -> +1 | local field) for the heat-bath rule
inline double heat_bath_plus_probability(double beta, double local_field) {
    return 1.0 / (1.0 + std::exp(-2.0 * beta * local_field));
}

class GlauberChain {
public:
    using Stream = std::function<double()>;

    GlauberChain(int L, double T, double h, SpinBoundary bc, Stream stream)
        : L_(L), T_(T), h_(h), bc_(bc), beta_(1.0 / T), stream_(std::move(stream)),
          grid_(static_cast<std::size_t>(L + 2) * (L + 2), 0) {
        if (L < 2) throw std::invalid_argument("Ising box needs L >= 2");
        if (!(T > 0)) throw std::invalid_argument("temperature must be positive");
        const std::int8_t frame =
            bc == SpinBoundary::Plus ? 1 : (bc == SpinBoundary::Minus ? -1 : 0);
        for (int i = 0; i < L + 2; ++i) {
            cell(i, 0) = frame;
            cell(i, L + 1) = frame;
            cell(0, i) = frame;
            cell(L + 1, i) = frame;
        }
        // frame-aligned start, random for free boundaries
        for (int y = 1; y <= L; ++y)
            for (int x = 1; x <= L; ++x)
                cell(x, y) = bc == SpinBoundary::Free ? (stream_() < 0.5 ? 1 : -1)
                                                      : frame;
    }

    // one row-major pass of single-site heat-bath updates
    void sweep() {
        for (int y = 1; y <= L_; ++y)
            for (int x = 1; x <= L_; ++x) {
                const double field = h_ + cell(x - 1, y) + cell(x + 1, y) + cell(x, y - 1) +
                                     cell(x, y + 1);
                cell(x, y) = stream_() < heat_bath_plus_probability(beta_, field) ? 1 : -1;
            }
    }

    void sweeps(int count) {
        for (int i = 0; i < count; ++i) sweep();
    }

    double magnetization() const {
        long sum = 0;
        for (int y = 1; y <= L_; ++y)
            for (int x = 1; x <= L_; ++x) sum += cell(x, y);
        return static_cast<double>(sum) / (static_cast<double>(L_) * L_);
    }

    // does the cluster of `sign` spins join the left and right columns?
    bool sign_spans_lr(int sign) const {
        const auto n = static_cast<std::uint32_t>(L_) * static_cast<std::uint32_t>(L_);
        UnionFind uf(n + 2);
        const std::uint32_t SRC = n, DST = n + 1;
        auto id = [&](int x, int y) {
            return static_cast<std::uint32_t>((y - 1) * L_ + (x - 1));
        };
        for (int y = 1; y <= L_; ++y)
            for (int x = 1; x <= L_; ++x) {
                if (cell(x, y) != sign) continue;
                if (x == 1) uf.unite(SRC, id(x, y));
                if (x == L_) uf.unite(DST, id(x, y));
                if (x > 1 && cell(x - 1, y) == sign) uf.unite(id(x, y), id(x - 1, y));
                if (y > 1 && cell(x, y - 1) == sign) uf.unite(id(x, y), id(x, y - 1));
            }
        return uf.same(SRC, DST);
    }

    SpinConfig config() const {
        SpinConfig c;
        c.L = L_;
        c.bc = bc_;
        c.T = T_;
        c.h = h_;
        c.spins.reserve(static_cast<std::size_t>(L_) * L_);
        for (int y = 1; y <= L_; ++y)
            for (int x = 1; x <= L_; ++x) c.spins.push_back(cell(x, y));
        return c;
    }

private:
    std::int8_t& cell(int x, int y) { return grid_[static_cast<std::size_t>(y) * (L_ + 2) + x]; }
    std::int8_t cell(int x, int y) const {
        return grid_[static_cast<std::size_t>(y) * (L_ + 2) + x];
    }

    int L_;
    double T_, h_;
    SpinBoundary bc_;
    double beta_;
    Stream stream_;
    std::vector<std::int8_t> grid_;
};

inline GlauberChain::Stream counter_stream(std::uint64_t seed, std::uint64_t replica) {
    auto rng = std::make_shared<SequentialRng>(seed, replica, /*salt=*/0x15ull);
    return [rng]() { return rng->next(); };
}

inline SpinConfig glauber_sample(int L, double T, double h, SpinBoundary bc, int sweeps,
                                 std::uint64_t seed, std::uint64_t replica = 0) {
    GlauberChain chain(L, T, h, bc, counter_stream(seed, replica));
    chain.sweeps(sweeps);
    return chain.config();
}

struct SpinScanRow {
    double T = 0;
    Estimate plus_spans;
    Estimate minus_spans;
    Estimate neither_spans;
    double mean_magnetization = 0;
};

struct SpinScanSpec {
    std::uint64_t master_seed = 0;
    std::size_t chains = 8;
    int samples_per_chain = 25;
    int burnin_sweeps = 1000;
    int stride_sweeps = 10;
};

// Per temperature: frequency that the +1 (resp. -1) site cluster crosses
// the box left to right, over all retained samples of all chains.
// Within-chain samples are correlated; the counts are qualitative gates,
// not independent trials.
inline std::vector<SpinScanRow> spin_percolation_scan(int L, const std::vector<double>& Ts,
                                                      double h, SpinBoundary bc,
                                                      const SpinScanSpec& spec) {
    if (spec.chains < 1 || spec.samples_per_chain < 1)
        throw std::invalid_argument("scan needs at least one chain and one sample");
    std::vector<SpinScanRow> rows;
    for (std::size_t ti = 0; ti < Ts.size(); ++ti) {
        const double T = Ts[ti];
        struct ChainStats {
            std::uint32_t plus = 0, minus = 0, neither = 0;
            double mag = 0;
        };
        auto stats = replica_map<ChainStats>(spec.chains, [&](std::size_t r) {
            GlauberChain chain(L, T, h, bc,
                               counter_stream(spec.master_seed + 7919 * ti, r));
            chain.sweeps(spec.burnin_sweeps);
            ChainStats st;
            for (int s = 0; s < spec.samples_per_chain; ++s) {
                chain.sweeps(spec.stride_sweeps);
                const bool plus = chain.sign_spans_lr(+1);
                const bool minus = chain.sign_spans_lr(-1);
                st.plus += plus ? 1 : 0;
                st.minus += minus ? 1 : 0;
                st.neither += (!plus && !minus) ? 1 : 0;
                st.mag += chain.magnetization();
            }
            return st;
        });
        std::uint64_t plus = 0, minus = 0, neither = 0;
        double mag = 0;
        for (const auto& st : stats) {
            plus += st.plus;
            minus += st.minus;
            neither += st.neither;
            mag += st.mag;
        }
        const std::uint64_t total =
            static_cast<std::uint64_t>(spec.chains) * static_cast<std::uint64_t>(spec.samples_per_chain);
        SpinScanRow row;
        row.T = T;
        row.plus_spans = proportion_estimate(plus, total);
        row.minus_spans = proportion_estimate(minus, total);
        row.neither_spans = proportion_estimate(neither, total);
        row.mean_magnetization = mag / static_cast<double>(total);
        rows.push_back(row);
    }
    return rows;
}

} // namespace percolab
