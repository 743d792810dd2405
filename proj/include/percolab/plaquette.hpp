#pragma once

// Dual plaquette model of bond percolation on Z^3.
//
// Each primal edge e meets one unit square (plaquette) of the shifted
// lattice; the plaquette is occupied exactly when e is closed. The
// boundary of a plaquette set F is the set of dual edges lying in an odd
// number of members of F (a linear map over symmetric difference), and a
// loop gamma is spanned when gamma equals the boundary of some subset of
// occupied plaquettes, i.e. lies in their GF(2) span.
//
// Dual vertices are stored by integer triples u, standing for the point
// u + (1/2,1/2,1/2). All spanning decisions are made inside a declared
// finite region of primal edges; enlarging the region can only turn a
// negative answer positive, so region-truncated probabilities are lower
// bounds.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "bitset.hpp"
#include "estimate.hpp"
#include "gf2.hpp"
#include "lattice.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace percolab {

struct Edge3 {
    Vec3 base;
    int axis = 0;  // 0/1/2
    friend bool operator==(const Edge3&, const Edge3&) = default;
};

struct DualEdge {
    Vec3 u;        // dual vertex integer coordinates
    int axis = 0;
    friend bool operator==(const DualEdge&, const DualEdge&) = default;
};

// the four dual edges bounding the plaquette transverse to a primal edge
inline std::array<DualEdge, 4> plaquette_boundary_edges(const Edge3& e) {
    if (e.axis < 0 || e.axis > 2) throw std::domain_error("bad edge axis");
    const int a = e.axis, b = (a + 1) % 3, c = (a + 2) % 3;
    auto comp = [](const Vec3& v, int ax) { return ax == 0 ? v.x : (ax == 1 ? v.y : v.z); };
    auto make = [&](int db, int dc, int axis) {
        int coords[3];
        coords[a] = comp(e.base, a);
        coords[b] = comp(e.base, b) + db;
        coords[c] = comp(e.base, c) + dc;
        return DualEdge{{coords[0], coords[1], coords[2]}, axis};
    };
    // two edges along b (at the low/high c corners), two along c
    return {make(-1, -1, b), make(-1, 0, b), make(-1, -1, c), make(0, -1, c)};
}

// a plaquette is the unit dual square transverse to one primal edge;
// normal_axis is the primal edge's direction
struct Plaquette {
    Vec3 base;
    int normal_axis = 0;
    friend bool operator==(const Plaquette&, const Plaquette&) = default;
};

inline Plaquette dual_plaquette(const Edge3& e) {
    if (e.axis < 0 || e.axis > 2) throw std::domain_error("bad edge axis");
    return {e.base, e.axis};
}

inline Edge3 primal_edge_of(const Plaquette& pi) { return {pi.base, pi.normal_axis}; }

namespace detail {
inline std::uint64_t pack_dual_edge(const DualEdge& d) {
    return pack_geometry_key(d.u, d.axis) ^ 0xD0A1ull;
}
} // namespace detail

class PlaquetteRegion {
public:
    // all primal edges with both endpoints in [lo, hi]
    static PlaquetteRegion box(const Vec3& lo, const Vec3& hi) {
        std::vector<Edge3> edges;
        for (int z = lo.z; z <= hi.z; ++z)
            for (int y = lo.y; y <= hi.y; ++y)
                for (int x = lo.x; x <= hi.x; ++x) {
                    if (x + 1 <= hi.x) edges.push_back({{x, y, z}, 0});
                    if (y + 1 <= hi.y) edges.push_back({{x, y, z}, 1});
                    if (z + 1 <= hi.z) edges.push_back({{x, y, z}, 2});
                }
        return PlaquetteRegion(std::move(edges));
    }

    explicit PlaquetteRegion(std::vector<Edge3> primal_edges)
        : primal_(std::move(primal_edges)) {
        if (primal_.empty()) throw std::invalid_argument("empty plaquette region");
        if (primal_.size() > 100000) throw std::length_error("plaquette region too large");
        plaq_dual_.reserve(primal_.size());
        for (const auto& e : primal_) {
            std::array<std::uint32_t, 4> ids{};
            const auto bd = plaquette_boundary_edges(e);
            for (int k = 0; k < 4; ++k) ids[static_cast<std::size_t>(k)] = intern(bd[static_cast<std::size_t>(k)]);
            plaq_dual_.push_back(ids);
        }
    }

    std::size_t plaquette_count() const { return primal_.size(); }
    std::size_t dual_edge_count() const { return dual_edges_.size(); }
    const Edge3& primal_edge(std::size_t i) const { return primal_[i]; }
    const DualEdge& dual_edge(std::size_t i) const { return dual_edges_[i]; }
    const std::array<std::uint32_t, 4>& plaquette_dual_ids(std::size_t i) const {
        return plaq_dual_[i];
    }

    std::int32_t find_plaquette(const Edge3& e) const {
        for (std::size_t i = 0; i < primal_.size(); ++i)
            if (primal_[i] == e) return static_cast<std::int32_t>(i);
        return -1;
    }

    std::int32_t find_dual_edge(const DualEdge& d) const {
        const auto it = dual_index_.find(detail::pack_dual_edge(d));
        return it == dual_index_.end() ? -1 : static_cast<std::int32_t>(it->second);
    }

    // GF(2) boundary of a plaquette chain, as a dual-edge indicator
    Bitset boundary(const Bitset& chain) const {
        if (chain.size() != primal_.size())
            throw std::invalid_argument("chain does not match region plaquettes");
        Bitset out(dual_edges_.size());
        for (std::size_t i = 0; i < primal_.size(); ++i) {
            if (!chain.get(i)) continue;
            for (const auto id : plaq_dual_[i]) out.set(id, !out.get(id));
        }
        return out;
    }

    std::uint64_t sampling_key(std::size_t i) const {
        const auto& e = primal_[i];
        return pack_geometry_key(e.base, e.axis);
    }

private:
    std::uint32_t intern(const DualEdge& d) {
        const std::uint64_t key = detail::pack_dual_edge(d);
        const auto it = dual_index_.find(key);
        if (it != dual_index_.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(dual_edges_.size());
        dual_index_.emplace(key, id);
        dual_edges_.push_back(d);
        return id;
    }

    std::vector<Edge3> primal_;
    std::vector<DualEdge> dual_edges_;
    std::unordered_map<std::uint64_t, std::uint32_t> dual_index_;
    std::vector<std::array<std::uint32_t, 4>> plaq_dual_;
};

// m x n rectangle loop in an x/y dual plane; corner is the dual vertex at
// the rectangle's lower-left, z fixed
struct LoopGamma {
    Vec3 corner;
    int m = 1, n = 1;

    int area() const { return m * n; }
    int perimeter() const { return 2 * (m + n); }
};

inline std::vector<DualEdge> loop_dual_edges(const LoopGamma& g) {
    if (g.m < 1 || g.n < 1) throw std::domain_error("loop sides must be >= 1");
    std::vector<DualEdge> out;
    out.reserve(static_cast<std::size_t>(g.perimeter()));
    for (int i = 0; i < g.m; ++i) {
        out.push_back({{g.corner.x + i, g.corner.y, g.corner.z}, 0});
        out.push_back({{g.corner.x + i, g.corner.y + g.n, g.corner.z}, 0});
    }
    for (int j = 0; j < g.n; ++j) {
        out.push_back({{g.corner.x, g.corner.y + j, g.corner.z}, 1});
        out.push_back({{g.corner.x + g.m, g.corner.y + j, g.corner.z}, 1});
    }
    return out;
}

// dual-edge indicator of a loop within a region; domain error when the
// loop leaves the region
inline Bitset loop_indicator(const PlaquetteRegion& r, const LoopGamma& g) {
    Bitset out(r.dual_edge_count());
    for (const auto& d : loop_dual_edges(g)) {
        const std::int32_t id = r.find_dual_edge(d);
        if (id < 0) throw std::domain_error("loop is not contained in the region");
        out.set(static_cast<std::size_t>(id), true);
    }
    return out;
}

// every dual vertex must meet an even number of chain edges
inline bool chain_is_closed(const PlaquetteRegion& r, const Bitset& chain) {
    std::unordered_map<std::uint64_t, int> deg;
    for (std::size_t i = 0; i < r.dual_edge_count(); ++i) {
        if (!chain.get(i)) continue;
        const DualEdge& d = r.dual_edge(i);
        Vec3 other = d.u;
        (d.axis == 0 ? other.x : d.axis == 1 ? other.y : other.z) += 1;
        ++deg[pack_geometry_key(d.u, -1)];
        ++deg[pack_geometry_key(other, -1)];
    }
    for (const auto& [k, v] : deg)
        if (v % 2) return false;
    return true;
}

// is the chain in the GF(2) span of the occupied plaquettes' boundaries?
inline bool spans_chain(const PlaquetteRegion& r, const Bitset& occupied, const Bitset& target) {
    if (occupied.size() != r.plaquette_count())
        throw std::invalid_argument("occupancy does not match region plaquettes");
    if (!chain_is_closed(r, target)) throw std::domain_error("target chain is not closed");
    Gf2Basis basis(r.dual_edge_count());
    Bitset row(r.dual_edge_count());
    for (std::size_t i = 0; i < r.plaquette_count(); ++i) {
        if (!occupied.get(i)) continue;
        for (std::size_t k = 0; k < row.word_count(); ++k) row.words()[k] = 0;
        for (const auto id : r.plaquette_dual_ids(i)) row.set(id, !row.get(id));
        basis.insert(row);
    }
    return basis.in_span(target);
}

inline bool spans(const PlaquetteRegion& r, const Bitset& occupied, const LoopGamma& gamma) {
    return spans_chain(r, occupied, loop_indicator(r, gamma));
}

// region enclosing the flat disc of gamma, dilated by margin
inline PlaquetteRegion gamma_region(const LoopGamma& g, int margin) {
    if (margin < 0) throw std::invalid_argument("margin must be >= 0");
    const Vec3 lo{g.corner.x + 1 - margin, g.corner.y + 1 - margin, g.corner.z - margin};
    const Vec3 hi{g.corner.x + g.m + margin, g.corner.y + g.n + margin, g.corner.z + 1 + margin};
    return PlaquetteRegion::box(lo, hi);
}

// occupancy sample: plaquette occupied iff its primal edge is closed
inline Bitset sample_occupied(const PlaquetteRegion& r, std::uint64_t seed,
                              std::uint64_t replica, double p) {
    CounterRng rng(seed);
    Bitset occ(r.plaquette_count());
    for (std::size_t i = 0; i < r.plaquette_count(); ++i)
        occ.set(i, !(rng.uniform(replica, r.sampling_key(i)) < p));
    return occ;
}

struct WgammaEstimate {
    LoopGamma gamma;
    double p = 0;
    int margin = 0;
    std::size_t region_plaquettes = 0;
    Estimate prob;           // region-truncated, a lower bound on the full event
    bool below_resolution = false;  // no replica spanned
};

inline WgammaEstimate wgamma_probability(const LoopGamma& gamma, double p, int margin,
                                         const SamplerSpec& spec) {
    const PlaquetteRegion region = gamma_region(gamma, margin);
    const Bitset target = loop_indicator(region, gamma);
    auto hits = replica_map<char>(spec.replicas, [&](std::size_t rep) {
        const Bitset occ = sample_occupied(region, spec.master_seed, rep, p);
        return static_cast<char>(spans_chain(region, occ, target) ? 1 : 0);
    });
    std::uint64_t k = 0;
    for (char h : hits) k += static_cast<std::uint64_t>(h);
    WgammaEstimate est;
    est.gamma = gamma;
    est.p = p;
    est.margin = margin;
    est.region_plaquettes = region.plaquette_count();
    est.prob = proportion_estimate(k, spec.replicas);
    est.below_resolution = (k == 0);
    return est;
}

struct WgammaProbeRow {
    int m = 0, n = 0;
    int area = 0, perimeter = 0;
    double p = 0;
    double minus_log = 0;  // -log of the estimate (0 hits reported as below resolution)
    double se_of_log = 0;  // delta-method se
    bool below_resolution = false;
    int margin = 0;
};

// area-vs-perimeter probe: -log P(W_gamma) against mn and 2(m+n) for a
// ladder of loops at one density
inline std::vector<WgammaProbeRow> wgamma_probe(const std::vector<std::pair<int, int>>& shapes,
                                                double p, int margin, const SamplerSpec& spec) {
    std::vector<WgammaProbeRow> rows;
    for (const auto& [m, n] : shapes) {
        const LoopGamma gamma{{0, 0, 0}, m, n};
        const WgammaEstimate est = wgamma_probability(gamma, p, margin, spec);
        WgammaProbeRow row;
        row.m = m;
        row.n = n;
        row.area = gamma.area();
        row.perimeter = gamma.perimeter();
        row.p = p;
        row.margin = margin;
        row.below_resolution = est.below_resolution;
        row.minus_log = est.below_resolution ? 0.0 : -std::log(est.prob.value);
        row.se_of_log = est.below_resolution || est.prob.value <= 0.0
                            ? 0.0
                            : est.prob.se / est.prob.value;
        rows.push_back(row);
    }
    return rows;
}

// which of area or perimeter explains -log P better (least-squares through
// the origin); qualitative only
inline const char* fit_regime(const std::vector<WgammaProbeRow>& rows) {
    double sa2 = 0, say = 0, sp2 = 0, spy = 0;
    std::size_t used = 0;
    for (const auto& r : rows) {
        if (r.below_resolution) continue;
        sa2 += static_cast<double>(r.area) * r.area;
        say += static_cast<double>(r.area) * r.minus_log;
        sp2 += static_cast<double>(r.perimeter) * r.perimeter;
        spy += static_cast<double>(r.perimeter) * r.minus_log;
        ++used;
    }
    if (used < 2) return "insufficient";
    double ra = 0, rp = 0;
    const double ka = sa2 > 0 ? say / sa2 : 0.0;
    const double kp = sp2 > 0 ? spy / sp2 : 0.0;
    for (const auto& r : rows) {
        if (r.below_resolution) continue;
        ra += (r.minus_log - ka * r.area) * (r.minus_log - ka * r.area);
        rp += (r.minus_log - kp * r.perimeter) * (r.minus_log - kp * r.perimeter);
    }
    return ra <= rp ? "area" : "perimeter";
}

// ---------------------------------------------------------------------------
// coexistence of open and closed spanning clusters on the site model

struct CoexistenceReport {
    double p = 0;
    int L = 0;
    std::size_t replicas = 0;
    Estimate open_span;    // open cluster joining the x = 0 and x = L faces
    Estimate closed_span;  // same for the complementary (closed) sites
    Estimate both_span;
};

inline CoexistenceReport coexistence_check(double p, int L, const SamplerSpec& spec) {
    if (L < 2) throw std::invalid_argument("coexistence box needs L >= 2");
    const LatticeGraph g = build_box(Model::SiteZ3, {L, L, L});
    SamplerSpec s = spec;
    s.p = p;
    struct Row {
        char open = 0, closed = 0;
    };
    auto rows = replica_map<Row>(s.replicas, [&](std::size_t r) {
        Configuration w = sample(g, s, r);
        Row row;
        row.open = lr_crossing(g, w) ? 1 : 0;
        Configuration flipped(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) flipped.set(i, !w.get(i));
        row.closed = lr_crossing(g, flipped) ? 1 : 0;
        return row;
    });
    std::uint64_t o = 0, c = 0, b = 0;
    for (const auto& row : rows) {
        o += static_cast<std::uint64_t>(row.open);
        c += static_cast<std::uint64_t>(row.closed);
        b += static_cast<std::uint64_t>(row.open && row.closed);
    }
    CoexistenceReport rep;
    rep.p = p;
    rep.L = L;
    rep.replicas = s.replicas;
    rep.open_span = proportion_estimate(o, s.replicas);
    rep.closed_span = proportion_estimate(c, s.replicas);
    rep.both_span = proportion_estimate(b, s.replicas);
    return rep;
}

} // namespace percolab
