#pragma once

// Seeded sampling and cluster observables on finite lattice graphs.
//
// Sampling draws one uniform per carrier element from a counter-based
// stream keyed on (seed, replica, element geometry); the configuration at
// density p is {u < p}. Because the uniforms do not depend on p, sweeps
// over p are monotone-coupled pathwise, and nested boxes share the state
// of their common elements.
//
// Finite-volume proxies (documented bias directions):
//   * theta: origin connected to the box boundary; decreases toward the
//     infinite-volume theta as the box grows (upper-bounding proxy).
//   * uniqueness diagnostics: "infinite" cluster means size >= L.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "cube.hpp"
#include "estimate.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "union_find.hpp"

namespace percolab {

struct SamplerSpec {
    double p = 0.5;
    std::uint64_t master_seed = 0;
    std::size_t replicas = 1000;
};

inline std::vector<double> carrier_uniforms(const LatticeGraph& g, std::uint64_t seed,
                                            std::uint64_t replica) {
    CounterRng rng(seed);
    std::vector<double> u(g.carrier_size());
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = rng.uniform(replica, g.carrier_key(static_cast<std::uint32_t>(i)));
    return u;
}

inline Configuration configuration_at(const std::vector<double>& uniforms, double p) {
    Configuration w(uniforms.size());
    for (std::size_t i = 0; i < uniforms.size(); ++i) w.set(i, uniforms[i] < p);
    return w;
}

inline Configuration sample_at(const LatticeGraph& g, std::uint64_t seed, std::uint64_t replica,
                               double p) {
    CounterRng rng(seed);
    Configuration w(g.carrier_size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w.set(i, rng.uniform(replica, g.carrier_key(static_cast<std::uint32_t>(i))) < p);
    return w;
}

inline Configuration sample(const LatticeGraph& g, const SamplerSpec& spec,
                            std::uint64_t replica) {
    if (replica >= spec.replicas) throw std::domain_error("replica index out of range");
    return sample_at(g, spec.master_seed, replica, spec.p);
}

// ---------------------------------------------------------------------------
// clustering

struct ClusterLabeling {
    std::vector<std::int32_t> cluster_of;  // per vertex; -1 for closed sites
    std::vector<std::uint32_t> sizes;      // vertices per cluster id
    std::size_t count() const { return sizes.size(); }
};

namespace detail {
inline void require_replicas(std::size_t replicas) {
    if (replicas < 1) throw std::invalid_argument("replica count must be >= 1");
}

inline void require_carrier(const LatticeGraph& g, const Configuration& w) {
    if (w.size() != g.carrier_size())
        throw std::invalid_argument("configuration does not match the graph carrier");
}
} // namespace detail

inline ClusterLabeling clusters(const LatticeGraph& g, const Configuration& w) {
    detail::require_carrier(g, w);
    const auto nv = static_cast<std::uint32_t>(g.vertex_count());
    UnionFind uf(nv);
    const auto& edges = g.edges();
    if (g.is_bond()) {
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (w.get(i)) uf.unite(edges[i][0], edges[i][1]);
    } else {
        for (const auto& e : edges)
            if (w.get(e[0]) && w.get(e[1])) uf.unite(e[0], e[1]);
    }
    ClusterLabeling lab;
    lab.cluster_of.assign(nv, -1);
    std::vector<std::int32_t> root_label(nv, -1);
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (!g.is_bond() && !w.get(v)) continue;
        const std::uint32_t r = uf.find(v);
        if (root_label[r] < 0) {
            root_label[r] = static_cast<std::int32_t>(lab.sizes.size());
            lab.sizes.push_back(0);
        }
        lab.cluster_of[v] = root_label[r];
        ++lab.sizes[static_cast<std::size_t>(root_label[r])];
    }
    return lab;
}

// ---------------------------------------------------------------------------
// crossing and annulus events

// open path from a Left-role vertex to a Right-role vertex
inline bool lr_crossing(const LatticeGraph& g, const Configuration& w) {
    detail::require_carrier(g, w);
    const auto nv = static_cast<std::uint32_t>(g.vertex_count());
    bool has_left = false, has_right = false;
    for (std::uint32_t v = 0; v < nv && !(has_left && has_right); ++v) {
        has_left = has_left || (g.vertex_role(v) & role::Left);
        has_right = has_right || (g.vertex_role(v) & role::Right);
    }
    if (!has_left || !has_right)
        throw std::domain_error("graph has no left/right boundary roles");

    UnionFind uf(nv + 2);
    const std::uint32_t L = nv, R = nv + 1;
    const bool bond = g.is_bond();
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (!bond && !w.get(v)) continue;
        if (g.vertex_role(v) & role::Left) uf.unite(L, v);
        if (g.vertex_role(v) & role::Right) uf.unite(R, v);
    }
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const bool open = bond ? w.get(i) : (w.get(edges[i][0]) && w.get(edges[i][1]));
        if (open) uf.unite(edges[i][0], edges[i][1]);
    }
    return uf.same(L, R);
}

// MonotoneEvent view of the crossing; the graph must outlive the event
inline MonotoneEvent crossing_event(const LatticeGraph& g) {
    return {std::string("lr_crossing(") + model_name(g.model()) + ")",
            [&g](const Configuration& w) { return lr_crossing(g, w); }, true};
}

// Does the annulus contain an open cycle surrounding the origin?
//
// Decided by the dual blocking test: faces of the plane are walked with
// 4-adjacency, crossing a primal edge only if that edge is closed or not
// part of the annulus graph. The cycle exists iff no such walk escapes
// from the hole to the outside. Validated against an independent
// winding-parity search in the tests.
inline bool annulus_cycle(const LatticeGraph& g, const Configuration& w) {
    detail::require_carrier(g, w);
    const int n = g.annulus_n();
    if (n < 1 || g.model() != Model::BondZ2)
        throw std::domain_error("annulus_cycle needs a bond-z2 annulus graph");

    // per-vertex edge lookup by base and axis
    const auto nv = g.vertex_count();
    std::vector<std::int32_t> xedge(nv, -1), yedge(nv, -1);
    for (std::uint32_t i = 0; i < g.edges().size(); ++i) {
        const CarrierInfo ci = g.carrier_info(i);
        const std::int32_t v = g.vertex_at(ci.base);
        (ci.axis == 0 ? xedge : yedge)[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(i);
    }
    // crossing the segment a->b is allowed iff the primal edge there is
    // absent or closed
    auto passable = [&](const Vec3& base, int axis) {
        const std::int32_t v = g.vertex_at(base);
        if (v < 0) return true;
        const std::int32_t e = (axis == 0 ? xedge : yedge)[static_cast<std::size_t>(v)];
        if (e < 0) return true;
        return !w.get(static_cast<std::size_t>(e));
    };

    // faces indexed by lower-left corner in [-3n-1, 3n]^2
    const int flo = -3 * n - 1, fhi = 3 * n;
    const int fw = fhi - flo + 1;
    auto fid = [&](int i, int j) { return (j - flo) * fw + (i - flo); };
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(fw) * fw, 0);
    std::deque<std::pair<int, int>> queue;
    for (int i = -n; i < n; ++i)
        for (int j = -n; j < n; ++j) {
            seen[static_cast<std::size_t>(fid(i, j))] = 1;
            queue.emplace_back(i, j);
        }
    while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        if (i == flo || i == fhi || j == flo || j == fhi) return false;  // escaped
        const struct { int di, dj; Vec3 base; int axis; } moves[4] = {
            {+1, 0, {i + 1, j, 0}, 1},  // east: cross vertical edge at x = i+1
            {-1, 0, {i, j, 0}, 1},      // west
            {0, +1, {i, j + 1, 0}, 0},  // north: cross horizontal edge at y = j+1
            {0, -1, {i, j, 0}, 0},      // south
        };
        for (const auto& mv : moves) {
            const int ni = i + mv.di, nj = j + mv.dj;
            if (ni < flo || ni > fhi || nj < flo || nj > fhi) continue;
            auto& mark = seen[static_cast<std::size_t>(fid(ni, nj))];
            if (mark) continue;
            if (!passable(mv.base, mv.axis)) continue;
            mark = 1;
            queue.emplace_back(ni, nj);
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// replica-parallel estimation

template <class F>
Estimate estimate_event(const LatticeGraph& g, const SamplerSpec& spec, F&& happens) {
    detail::require_replicas(spec.replicas);
    auto hits = replica_map<char>(spec.replicas, [&](std::size_t r) {
        const Configuration w = sample(g, spec, r);
        return static_cast<char>(happens(g, w) ? 1 : 0);
    });
    std::uint64_t k = 0;
    for (char h : hits) k += static_cast<std::uint64_t>(h);
    return proportion_estimate(k, spec.replicas);
}

inline std::uint32_t center_vertex(const LatticeGraph& g) {
    const Vec3 lo = g.box_lo(), hi = g.box_hi();
    const std::int32_t c = g.vertex_at({(lo.x + hi.x) / 2, (lo.y + hi.y) / 2, (lo.z + hi.z) / 2});
    if (c < 0) throw std::domain_error("region has no center vertex");
    return static_cast<std::uint32_t>(c);
}

inline LatticeGraph theta_box(Model model, int L) {
    // origin-centered box of radius L, realized as [0,2L]^d
    if (L < 1) throw std::invalid_argument("box radius must be >= 1");
    return model_is_3d(model) ? build_box(model, {2 * L, 2 * L, 2 * L})
                              : build_box(model, {L, L});
}

// P(origin connected to the box boundary), the finite-volume stand-in for
// the percolation probability; nonincreasing in L under the shared-key
// coupling.
inline Estimate estimate_theta(Model model, double p, int L, const SamplerSpec& spec) {
    const LatticeGraph g = theta_box(model, L);
    const std::uint32_t origin = center_vertex(g);
    SamplerSpec s = spec;
    s.p = p;
    return estimate_event(g, s, [origin](const LatticeGraph& gg, const Configuration& w) {
        const auto nv = static_cast<std::uint32_t>(gg.vertex_count());
        const bool bond = gg.is_bond();
        if (!bond && !w.get(origin)) return false;
        UnionFind uf(nv + 1);
        const std::uint32_t B = nv;
        for (std::uint32_t v = 0; v < nv; ++v) {
            if (!bond && !w.get(v)) continue;
            if (gg.vertex_role(v)) uf.unite(B, v);
        }
        const auto& edges = gg.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const bool open = bond ? w.get(i) : (w.get(edges[i][0]) && w.get(edges[i][1]));
            if (open) uf.unite(edges[i][0], edges[i][1]);
        }
        return uf.same(B, origin);
    });
}

// mean size of the origin's open cluster in the box (site models: 0 when
// the origin is closed); nondecreasing in p pathwise
inline Estimate estimate_chi(Model model, double p, int L, const SamplerSpec& spec) {
    const LatticeGraph g = theta_box(model, L);
    const std::uint32_t origin = center_vertex(g);
    SamplerSpec s = spec;
    s.p = p;
    auto sizes = replica_map<double>(s.replicas, [&](std::size_t r) {
        const Configuration w = sample(g, s, r);
        if (!g.is_bond() && !w.get(origin)) return 0.0;
        UnionFind uf(static_cast<std::uint32_t>(g.vertex_count()));
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const bool open = g.is_bond() ? w.get(i) : (w.get(edges[i][0]) && w.get(edges[i][1]));
            if (open) uf.unite(edges[i][0], edges[i][1]);
        }
        if (g.is_bond()) return static_cast<double>(uf.component_size(origin));
        // count open vertices in the origin's component
        const std::uint32_t r0 = uf.find(origin);
        std::uint32_t c = 0;
        for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
            if (w.get(v) && uf.find(v) == r0) ++c;
        return static_cast<double>(c);
    });
    return mean_estimate(sizes, 0.0);
}

// ---------------------------------------------------------------------------
// uniqueness diagnostics

struct UniquenessReport {
    Model model = Model::BondZ2;
    double p = 0;
    int L = 0;
    std::size_t replicas = 0;
    Estimate multi_large_freq;  // boxes containing >= 2 disjoint large clusters
    Estimate adj2_density;      // vertices adjacent to >= 2 distinct large clusters
    Estimate adj3_density;      // vertices adjacent to >= 3 distinct large clusters
};

// "Large" means cluster size >= L, the desk-scale stand-in for infinite.
// Uniqueness of the infinite cluster forces both adjacency densities to
// vanish as L grows.
inline UniquenessReport uniqueness_diagnostics(Model model, double p, int L,
                                               const SamplerSpec& spec) {
    if (L < 8) throw std::invalid_argument("uniqueness diagnostics need L >= 8");
    const LatticeGraph g = theta_box(model, L);
    SamplerSpec s = spec;
    s.p = p;
    struct Row {
        char multi = 0;
        double d2 = 0, d3 = 0;
    };
    auto rows = replica_map<Row>(s.replicas, [&](std::size_t r) {
        const Configuration w = sample(g, s, r);
        const ClusterLabeling lab = clusters(g, w);
        const auto threshold = static_cast<std::uint32_t>(L);
        std::size_t large = 0;
        for (auto sz : lab.sizes)
            if (sz >= threshold) ++large;
        Row row;
        row.multi = large >= 2 ? 1 : 0;
        if (large == 0) return row;
        std::size_t n2 = 0, n3 = 0;
        std::int32_t distinct[12];
        for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
            int k = 0;
            auto add = [&](std::int32_t c) {
                if (c < 0 || lab.sizes[static_cast<std::size_t>(c)] < threshold) return;
                for (int i = 0; i < k; ++i)
                    if (distinct[i] == c) return;
                distinct[k++] = c;
            };
            add(lab.cluster_of[v]);
            for (auto it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
                add(lab.cluster_of[*it]);
            if (k >= 2) ++n2;
            if (k >= 3) ++n3;
        }
        row.d2 = static_cast<double>(n2) / static_cast<double>(g.vertex_count());
        row.d3 = static_cast<double>(n3) / static_cast<double>(g.vertex_count());
        return row;
    });
    UniquenessReport rep;
    rep.model = model;
    rep.p = p;
    rep.L = L;
    rep.replicas = s.replicas;
    std::uint64_t multi = 0;
    std::vector<double> d2s, d3s;
    d2s.reserve(rows.size());
    d3s.reserve(rows.size());
    for (const auto& row : rows) {
        multi += static_cast<std::uint64_t>(row.multi);
        d2s.push_back(row.d2);
        d3s.push_back(row.d3);
    }
    rep.multi_large_freq = proportion_estimate(multi, rows.size());
    rep.adj2_density = mean_estimate(d2s, 0.0, 1.0);
    rep.adj3_density = mean_estimate(d3s, 0.0, 1.0);
    return rep;
}

} // namespace percolab
