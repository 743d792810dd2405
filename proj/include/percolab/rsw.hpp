#pragma once

// Box-crossing inequalities, critical-point estimation, influence
// estimation, threshold windows, and the influence-sum lower-bound ratio.
//
// All estimated curves p -> P(A) use the monotone coupling from
// montecarlo.hpp, so each replica has a single crossing threshold in p;
// curve queries, bisection and window quantiles are read off the coupled
// ensemble of thresholds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cube.hpp"
#include "estimate.hpp"
#include "lattice.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"

namespace percolab {

// (1 - sqrt(1 - tau))^3, the rectangle-crossing lower bound from the
// square-crossing probability tau
inline double rsw_bound(double tau) {
    if (tau < 0.0 || tau > 1.0) throw std::domain_error("tau must lie in [0,1]");
    const double r = 1.0 - std::sqrt(1.0 - tau);
    return r * r * r;
}

namespace detail {
// derive an independent sub-seed so different observables in one run do
// not share carrier uniforms
inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t tag) {
    return CounterRng(seed).word(~tag, 0x5eedULL, tag);
}
} // namespace detail

struct RswReport {
    int n = 0;
    double p = 0;
    std::size_t replicas = 0;
    Estimate tau;   // P_p(LR(n,n)) on B(n,n)
    Estimate lhs;   // P_p(LR(3n/2, n)) on B(3n/2, n)
    double bound = 0;
    double bound_se = 0;  // tau's z=1 interval pushed through the bound
    double margin = 0;    // lhs - bound
    double pooled_se = 0;
    bool pass = false;  // margin >= -4 pooled stderr
};

inline RswReport rsw_check(int n, double p, const SamplerSpec& spec) {
    if (n < 2 || n % 2 != 0) throw std::domain_error("rsw_check needs an even n >= 2");
    RswReport rep;
    rep.n = n;
    rep.p = p;
    rep.replicas = spec.replicas;

    const LatticeGraph square = build_box(Model::BondZ2, {n, n});
    const LatticeGraph rect = build_box(Model::BondZ2, {3 * n / 2, n});
    SamplerSpec s = spec;
    s.p = p;
    s.master_seed = detail::subseed(spec.master_seed, 1);
    rep.tau = estimate_event(square, s, lr_crossing);
    s.master_seed = detail::subseed(spec.master_seed, 2);
    rep.lhs = estimate_event(rect, s, lr_crossing);

    rep.bound = rsw_bound(rep.tau.value);
    rep.bound_se = (rsw_bound(rep.tau.hi) - rsw_bound(rep.tau.lo)) / 2.0;
    rep.margin = rep.lhs.value - rep.bound;
    rep.pooled_se = std::sqrt(rep.lhs.se * rep.lhs.se + rep.bound_se * rep.bound_se);
    rep.pass = rep.margin >= -4.0 * rep.pooled_se;
    return rep;
}

struct AnnulusScanRow {
    int n = 0;
    Estimate prob;
};

struct AnnulusScan {
    double p = 0;
    bool in_hypothesis = false;  // the lower bound is only claimed for p >= 1/2
    std::vector<AnnulusScanRow> rows;
    bool positive = false;   // min (estimate - 4 se) > 0
    bool no_decay = false;   // sequence converging, not sliding to zero
    bool pass = false;
};

// The circuit probability converges (from above, with strong small-n
// lattice effects) to a small positive constant, so the estimates do
// decrease along the scan. A genuine decay to zero keeps its per-step
// decay factor bounded away from 1; a convergent sequence's factor falls
// toward 1. The trend gate therefore demands a decelerating factor when
// the sequence decreases at all.
inline AnnulusScan annulus_bound_scan(double p, const std::vector<int>& ns,
                                      const SamplerSpec& spec) {
    if (ns.empty()) throw std::invalid_argument("annulus scan needs at least one size");
    AnnulusScan scan;
    scan.p = p;
    scan.in_hypothesis = p >= 0.5;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const LatticeGraph g = build_annulus({ns[i]}, Model::BondZ2);
        SamplerSpec s = spec;
        s.p = p;
        s.master_seed = detail::subseed(spec.master_seed, 100 + i);
        scan.rows.push_back({ns[i], estimate_event(g, s, annulus_cycle)});
    }
    scan.positive = true;
    for (const auto& row : scan.rows)
        scan.positive = scan.positive && (row.prob.value - 4.0 * row.prob.se > 0.0);
    bool strictly_down = scan.rows.size() >= 2;
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        strictly_down = strictly_down && scan.rows[i].prob.value < scan.rows[i - 1].prob.value;
    if (!strictly_down || scan.rows.size() < 3) {
        scan.no_decay = true;  // flat or non-monotone sequences are not decaying
    } else {
        const double first_factor = scan.rows[0].prob.value / scan.rows[1].prob.value;
        const double last_factor =
            scan.rows[scan.rows.size() - 2].prob.value / scan.rows.back().prob.value;
        scan.no_decay = last_factor < first_factor;
    }
    scan.pass = !scan.in_hypothesis || (scan.positive && scan.no_decay);
    return scan;
}

// ---------------------------------------------------------------------------
// coupled crossing thresholds

// Smallest p (within 2^-20) at which the replica's coupled configuration
// has a left-right crossing. Monotone coupling makes the indicator a step
// function of p, so bisection brackets the unique jump.
inline double crossing_threshold(const LatticeGraph& g, std::uint64_t seed,
                                 std::uint64_t replica) {
    const std::vector<double> u = carrier_uniforms(g, seed, replica);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 20; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (lr_crossing(g, configuration_at(u, mid))) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> crossing_thresholds(const LatticeGraph& g, std::uint64_t seed,
                                               std::size_t replicas) {
    detail::require_replicas(replicas);
    return replica_map<double>(replicas, [&](std::size_t r) {
        return crossing_threshold(g, seed, r);
    });
}

// fraction of coupled replicas whose threshold is <= p
inline double coupled_curve(const std::vector<double>& thresholds, double p) {
    std::size_t k = 0;
    for (double t : thresholds) k += (t <= p) ? 1 : 0;
    return static_cast<double>(k) / static_cast<double>(thresholds.size());
}

struct PcResult {
    Model model = Model::BondZ2;
    std::size_t replicas = 0;
    std::vector<std::pair<int, double>> per_n;  // (n, median crossing point)
    double value = 0;                           // largest-n estimate
};

// Bisect the coupled crossing curve of B(n,n) to its median for each n;
// the largest n is reported as the critical-point estimate.
inline PcResult estimate_pc(Model model, const std::vector<int>& ns, const SamplerSpec& spec) {
    if (ns.empty()) throw std::invalid_argument("estimate_pc needs at least one size");
    PcResult res;
    res.model = model;
    res.replicas = spec.replicas;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const LatticeGraph g = build_box(model, {ns[i], ns[i]});
        const auto thresholds =
            crossing_thresholds(g, detail::subseed(spec.master_seed, 200 + i), spec.replicas);
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 20; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (coupled_curve(thresholds, mid) >= 0.5) hi = mid;
            else lo = mid;
        }
        res.per_n.emplace_back(ns[i], 0.5 * (lo + hi));
    }
    res.value = res.per_n.back().second;
    return res;
}

// ---------------------------------------------------------------------------
// influence estimation

struct InfluenceProfile {
    double p = 0;
    std::size_t replicas = 0;
    std::vector<double> influence;  // per carrier element
    double max_influence = 0;
    double total = 0;
    double total_se = 0;  // from the per-replica pivotal-count spread
};

namespace detail {
inline InfluenceProfile profile_from_counts(double p, std::size_t replicas,
                                            const std::vector<std::uint64_t>& counts,
                                            const std::vector<std::uint32_t>& per_replica_total) {
    InfluenceProfile prof;
    prof.p = p;
    prof.replicas = replicas;
    prof.influence.resize(counts.size());
    for (std::size_t e = 0; e < counts.size(); ++e) {
        prof.influence[e] =
            static_cast<double>(counts[e]) / static_cast<double>(replicas);
        prof.max_influence = std::max(prof.max_influence, prof.influence[e]);
        prof.total += prof.influence[e];
    }
    std::vector<double> totals(per_replica_total.begin(), per_replica_total.end());
    prof.total_se = mean_estimate(totals).se;
    return prof;
}
} // namespace detail

// Generic pivotality sampler for an increasing event on an abstract ground
// set: one event evaluation per (sample, element) using the monotone
// shortcut. The increasing contract is spot-checked first.
inline InfluenceProfile influence_mc(const MonotoneEvent& a, std::size_t n, double p,
                                     const SamplerSpec& spec) {
    detail::require_replicas(spec.replicas);
    const std::uint64_t budget = n < 20 ? (std::uint64_t{1} << n) : (std::uint64_t{1} << 20);
    const auto contract = check_increasing(a, n, std::min<std::uint64_t>(budget, 1 << 12),
                                           detail::subseed(spec.master_seed, 7));
    if (!contract.passed)
        throw std::invalid_argument("influence_mc requires an increasing event");

    CounterRng rng(detail::subseed(spec.master_seed, 8));
    std::vector<std::uint64_t> counts(n, 0);
    std::vector<std::uint32_t> per_replica(spec.replicas, 0);
    const std::size_t chunks = std::min(thread_count(), spec.replicas ? spec.replicas : 1);
    std::vector<std::vector<std::uint64_t>> chunk_counts(chunks,
                                                         std::vector<std::uint64_t>(n, 0));
    const std::size_t chunk_size = (spec.replicas + chunks - 1) / chunks;
    parallel_for(chunks, [&](std::size_t ci) {
        Configuration w(n);
        auto& local = chunk_counts[ci];
        const std::size_t lo = ci * chunk_size;
        const std::size_t hi = std::min(spec.replicas, lo + chunk_size);
        for (std::size_t r = lo; r < hi; ++r) {
            for (std::size_t i = 0; i < n; ++i) w.set(i, rng.uniform(r, i) < p);
            const bool in_a = a(w);
            std::uint32_t total = 0;
            for (std::size_t e = 0; e < n; ++e) {
                const bool was = w.get(e);
                bool pivotal;
                if (in_a) {
                    w.set(e, false);
                    pivotal = !a(w);
                } else {
                    w.set(e, true);
                    pivotal = a(w);
                }
                w.set(e, was);
                if (pivotal) {
                    ++local[e];
                    ++total;
                }
            }
            per_replica[r] = total;
        }
    });
    for (const auto& local : chunk_counts)
        for (std::size_t e = 0; e < n; ++e) counts[e] += local[e];
    return detail::profile_from_counts(p, spec.replicas, counts, per_replica);
}

// Exact pivotal-edge set of the left-right crossing on a bond graph:
// when the crossing is present these are the open bridges separating the
// left from the right boundary (read off the bridge tree of the open
// subgraph); when absent, the closed edges joining a left-touching
// cluster to a right-touching one.
inline std::vector<char> pivotal_edges_crossing(const LatticeGraph& g, const Configuration& w) {
    if (!g.is_bond()) throw std::domain_error("pivotal edge scan is for bond models");
    detail::require_carrier(g, w);
    const auto nv = static_cast<std::uint32_t>(g.vertex_count());
    const auto& edges = g.edges();
    std::vector<char> pivotal(edges.size(), 0);

    UnionFind uf(nv);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (w.get(i)) uf.unite(edges[i][0], edges[i][1]);

    std::vector<char> root_left(nv, 0), root_right(nv, 0);
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (g.vertex_role(v) & role::Left) root_left[uf.find(v)] = 1;
        if (g.vertex_role(v) & role::Right) root_right[uf.find(v)] = 1;
    }
    std::uint32_t crossing_root = nv;
    std::size_t crossing_clusters = 0;
    for (std::uint32_t v = 0; v < nv; ++v)
        if (uf.find(v) == v && root_left[v] && root_right[v]) {
            ++crossing_clusters;
            crossing_root = v;
        }

    if (crossing_clusters == 0) {
        // adding a closed edge is pivotal iff it merges left reach with right reach
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (w.get(i)) continue;
            const std::uint32_t ra = uf.find(edges[i][0]);
            const std::uint32_t rb = uf.find(edges[i][1]);
            const bool has_l = root_left[ra] || root_left[rb];
            const bool has_r = root_right[ra] || root_right[rb];
            if (has_l && has_r) pivotal[i] = 1;
        }
        return pivotal;
    }
    if (crossing_clusters > 1) return pivotal;  // no single edge can break them all

    // bridges of the open subgraph (iterative lowlink DFS)
    std::vector<std::uint32_t> deg(nv, 0);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (w.get(i)) {
            ++deg[edges[i][0]];
            ++deg[edges[i][1]];
        }
    std::vector<std::uint32_t> off(nv + 1, 0);
    for (std::uint32_t v = 0; v < nv; ++v) off[v + 1] = off[v] + deg[v];
    std::vector<std::uint32_t> nb(off.back()), eid(off.back());
    {
        std::vector<std::uint32_t> cur(off.begin(), off.end() - 1);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!w.get(i)) continue;
            const auto a = edges[i][0], b = edges[i][1];
            nb[cur[a]] = b;
            eid[cur[a]++] = static_cast<std::uint32_t>(i);
            nb[cur[b]] = a;
            eid[cur[b]++] = static_cast<std::uint32_t>(i);
        }
    }
    constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
    std::vector<std::uint32_t> disc(nv, kUnset), low(nv, 0), parent_edge(nv, kUnset),
        cursor(off.begin(), off.end() - 1);
    std::vector<char> is_bridge(edges.size(), 0);
    std::vector<std::uint32_t> stack;
    std::uint32_t timer = 0;
    for (std::uint32_t start = 0; start < nv; ++start) {
        if (disc[start] != kUnset) continue;
        disc[start] = low[start] = timer++;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            if (cursor[v] < off[v + 1]) {
                const std::uint32_t idx = cursor[v]++;
                const std::uint32_t u = nb[idx], e = eid[idx];
                if (e == parent_edge[v]) continue;
                if (disc[u] == kUnset) {
                    disc[u] = low[u] = timer++;
                    parent_edge[u] = e;
                    stack.push_back(u);
                } else {
                    low[v] = std::min(low[v], disc[u]);
                }
            } else {
                stack.pop_back();
                if (!stack.empty()) {
                    const std::uint32_t pv = stack.back();
                    low[pv] = std::min(low[pv], low[v]);
                    if (low[v] > disc[pv]) is_bridge[parent_edge[v]] = 1;
                }
            }
        }
    }

    // condense 2-edge-connected components, then count boundary vertices
    // per component within the crossing cluster
    UnionFind comp(nv);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (w.get(i) && !is_bridge[i]) comp.unite(edges[i][0], edges[i][1]);
    std::vector<std::uint32_t> cnt_l(nv, 0), cnt_r(nv, 0);
    std::uint32_t total_l = 0, total_r = 0;
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (uf.find(v) != crossing_root) continue;
        const std::uint32_t c = comp.find(v);
        if (g.vertex_role(v) & role::Left) {
            ++cnt_l[c];
            ++total_l;
        }
        if (g.vertex_role(v) & role::Right) {
            ++cnt_r[c];
            ++total_r;
        }
    }

    // bridge tree of the crossing cluster: nodes are components, edges are
    // bridges; subtree counts decide which bridges separate all left from
    // all right attachments
    std::vector<std::uint32_t> tdeg(nv, 0);
    std::vector<std::uint32_t> bridge_ids;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (is_bridge[i] && uf.find(edges[i][0]) == crossing_root) {
            bridge_ids.push_back(static_cast<std::uint32_t>(i));
            ++tdeg[comp.find(edges[i][0])];
            ++tdeg[comp.find(edges[i][1])];
        }
    std::vector<std::uint32_t> toff(nv + 1, 0);
    for (std::uint32_t v = 0; v < nv; ++v) toff[v + 1] = toff[v] + tdeg[v];
    std::vector<std::uint32_t> tnb(toff.back()), tbid(toff.back());
    {
        std::vector<std::uint32_t> cur(toff.begin(), toff.end() - 1);
        for (std::uint32_t bi : bridge_ids) {
            const std::uint32_t a = comp.find(edges[bi][0]);
            const std::uint32_t b = comp.find(edges[bi][1]);
            tnb[cur[a]] = b;
            tbid[cur[a]++] = bi;
            tnb[cur[b]] = a;
            tbid[cur[b]++] = bi;
        }
    }
    // DFS from the crossing cluster's root component accumulating subtree
    // left/right counts
    const std::uint32_t root_comp = comp.find(crossing_root);
    std::vector<std::uint32_t> order;
    std::vector<std::uint32_t> from_bridge(nv, kUnset), tparent(nv, kUnset);
    std::vector<char> seen(nv, 0);
    order.push_back(root_comp);
    seen[root_comp] = 1;
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        const std::uint32_t c = order[qi];
        for (std::uint32_t k = toff[c]; k < toff[c + 1]; ++k) {
            const std::uint32_t d = tnb[k];
            if (seen[d]) continue;
            seen[d] = 1;
            tparent[d] = c;
            from_bridge[d] = tbid[k];
            order.push_back(d);
        }
    }
    for (std::size_t qi = order.size(); qi-- > 1;) {
        const std::uint32_t c = order[qi];
        cnt_l[tparent[c]] += cnt_l[c];
        cnt_r[tparent[c]] += cnt_r[c];
        const std::uint32_t sl = cnt_l[c], sr = cnt_r[c];
        const bool below_crosses = sl > 0 && sr > 0;
        const bool above_crosses = sl < total_l && sr < total_r;
        if (!below_crosses && !above_crosses) pivotal[from_bridge[c]] = 1;
    }
    return pivotal;
}

inline InfluenceProfile influence_mc_crossing(const LatticeGraph& g, double p,
                                              const SamplerSpec& spec) {
    detail::require_replicas(spec.replicas);
    const std::size_t n = g.carrier_size();
    const std::uint64_t seed = detail::subseed(spec.master_seed, 9);
    std::vector<std::uint64_t> counts(n, 0);
    std::vector<std::uint32_t> per_replica(spec.replicas, 0);
    const std::size_t chunks = std::min(thread_count(), spec.replicas ? spec.replicas : 1);
    std::vector<std::vector<std::uint64_t>> chunk_counts(chunks,
                                                         std::vector<std::uint64_t>(n, 0));
    const std::size_t chunk_size = (spec.replicas + chunks - 1) / chunks;
    parallel_for(chunks, [&](std::size_t ci) {
        auto& local = chunk_counts[ci];
        const std::size_t lo = ci * chunk_size;
        const std::size_t hi = std::min(spec.replicas, lo + chunk_size);
        for (std::size_t r = lo; r < hi; ++r) {
            const Configuration w = sample_at(g, seed, r, p);
            const auto piv = pivotal_edges_crossing(g, w);
            std::uint32_t total = 0;
            for (std::size_t e = 0; e < n; ++e)
                if (piv[e]) {
                    ++local[e];
                    ++total;
                }
            per_replica[r] = total;
        }
    });
    for (const auto& local : chunk_counts)
        for (std::size_t e = 0; e < n; ++e) counts[e] += local[e];
    return detail::profile_from_counts(p, spec.replicas, counts, per_replica);
}

// ---------------------------------------------------------------------------
// threshold windows

struct ThresholdWindow {
    std::string family;
    int n = 0;
    double eps = 0;
    double p_low = 0;   // inf{p : P(A) >= eps} on the coupled curve
    double p_high = 0;  // inf{p : P(A) >= 1 - eps}
    double width = 0;
    double width_se = 0;  // seeded bootstrap
    double p0 = 0;        // median crossing point
    double eta = 0;       // max influence at p0 (when measured)
    std::size_t replicas = 0;
};

// inf{p : coupled curve >= target}, resolved on the 41-point grid refined
// adaptively around the jump
inline double curve_quantile(const std::vector<double>& sorted_thresholds, double target) {
    const auto R = static_cast<double>(sorted_thresholds.size());
    auto curve = [&](double p) {
        const auto it = std::upper_bound(sorted_thresholds.begin(), sorted_thresholds.end(), p);
        return static_cast<double>(it - sorted_thresholds.begin()) / R;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 1; i <= 41; ++i) {
        const double p = static_cast<double>(i - 1) / 40.0;
        if (curve(p) >= target) {
            hi = p;
            lo = p - 1.0 / 40.0;
            break;
        }
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (curve(mid) >= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

inline ThresholdWindow window_from_thresholds(std::vector<double> thresholds, double eps,
                                              std::uint64_t seed) {
    if (thresholds.empty()) throw std::invalid_argument("window needs at least one replica");
    if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("eps must lie in (0, 1/2)");
    std::sort(thresholds.begin(), thresholds.end());
    ThresholdWindow win;
    win.eps = eps;
    win.replicas = thresholds.size();
    win.p_low = curve_quantile(thresholds, eps);
    win.p_high = curve_quantile(thresholds, 1.0 - eps);
    win.width = win.p_high - win.p_low;
    win.p0 = curve_quantile(thresholds, 0.5);

    // bootstrap the width
    const std::size_t B = 200;
    CounterRng rng(seed);
    std::vector<double> widths(B);
    std::vector<double> resample(thresholds.size());
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            const auto j = static_cast<std::size_t>(rng.uniform(b, i, 11) *
                                                    static_cast<double>(thresholds.size()));
            resample[i] = thresholds[std::min(j, thresholds.size() - 1)];
        }
        std::sort(resample.begin(), resample.end());
        widths[b] = curve_quantile(resample, 1.0 - eps) - curve_quantile(resample, eps);
    }
    double mean = 0;
    for (double v : widths) mean += v;
    mean /= static_cast<double>(B);
    double ss = 0;
    for (double v : widths) ss += (v - mean) * (v - mean);
    win.width_se = std::sqrt(ss / static_cast<double>(B - 1));  // bootstrap sd
    return win;
}

// window of the left-right crossing of B(n,n); eta is the maximum
// estimated influence at the median point
inline ThresholdWindow threshold_window_crossing(Model model, int n, double eps,
                                                 const SamplerSpec& spec,
                                                 std::size_t eta_replicas = 0) {
    const LatticeGraph g = build_box(model, {n, n});
    auto thresholds =
        crossing_thresholds(g, detail::subseed(spec.master_seed, 300 + n), spec.replicas);
    ThresholdWindow win = window_from_thresholds(
        std::move(thresholds), eps, detail::subseed(spec.master_seed, 400 + n));
    win.family = std::string("lr-") + model_name(model);
    win.n = n;
    if (eta_replicas > 0) {
        SamplerSpec es = spec;
        es.replicas = eta_replicas;
        win.eta = influence_mc_crossing(g, win.p0, es).max_influence;
    }
    return win;
}

// dictator family: P_p(A) = p for every n, so the window is [eps, 1-eps]
inline ThresholdWindow threshold_window_dictator(int n, double eps, const SamplerSpec& spec) {
    CounterRng rng(detail::subseed(spec.master_seed, 500));
    std::vector<double> thresholds(spec.replicas);
    for (std::size_t r = 0; r < spec.replicas; ++r) thresholds[r] = rng.uniform(r, 0);
    ThresholdWindow win = window_from_thresholds(std::move(thresholds), eps,
                                                         detail::subseed(spec.master_seed, 501));
    win.family = "dictator";
    win.n = n;
    win.eta = 1.0;
    return win;
}

// the approximate-zero-one-law tail shape eps_p = 1 / (1 + (1/eta)^{|p-p0|}),
// with the unknown absolute constant left as a caller-chosen multiplier
inline double epsilon_p_shape(double eta, double p, double p0, double c = 1.0) {
    return 1.0 / (1.0 + std::pow(1.0 / eta, c * std::abs(p - p0)));
}

// ---------------------------------------------------------------------------
// influence-sum lower-bound ratio

struct TalagrandReport {
    double p = 0;
    double event_prob = 0;
    double total_influence = 0;
    double max_influence = 0;
    double ratio = 0;  // total / [P(1-P) log(1/max)]
};

inline TalagrandReport talagrand_from_values(double p, double event_prob, double total,
                                             double max_influence) {
    if (!(event_prob > 0.0 && event_prob < 1.0))
        throw std::domain_error("ratio undefined: event probability is degenerate");
    if (!(max_influence > 0.0))
        throw std::domain_error("ratio undefined: no element has positive influence");
    if (max_influence >= 1.0)
        throw std::domain_error("ratio undefined: maximal influence is 1, log term vanishes");
    TalagrandReport rep;
    rep.p = p;
    rep.event_prob = event_prob;
    rep.total_influence = total;
    rep.max_influence = max_influence;
    rep.ratio = total / (event_prob * (1.0 - event_prob) * std::log(1.0 / max_influence));
    return rep;
}

inline TalagrandReport talagrand_ratio_crossing(const LatticeGraph& g, double p,
                                                const SamplerSpec& spec) {
    SamplerSpec s = spec;
    s.p = p;
    s.master_seed = detail::subseed(spec.master_seed, 600);
    const Estimate prob = estimate_event(g, s, lr_crossing);
    const InfluenceProfile prof = influence_mc_crossing(g, p, spec);
    return talagrand_from_values(p, prob.value, prof.total, prof.max_influence);
}

// exact-oracle variant: caller supplies exact event probability and
// influences (see exact.hpp)
inline TalagrandReport talagrand_ratio_exact(double p, double event_prob,
                                             const std::vector<double>& influences) {
    double total = 0, mx = 0;
    for (double v : influences) {
        total += v;
        mx = std::max(mx, v);
    }
    return talagrand_from_values(p, event_prob, total, mx);
}

// ---------------------------------------------------------------------------
// Monte Carlo shadow of the pivotality identity

struct RussoShadowReport {
    double p = 0, h = 0;
    double influence_total = 0, influence_total_se = 0;
    double fd_derivative = 0, fd_se = 0;
    double diff = 0, pooled_se = 0;
    bool pass = false;  // |diff| <= 5 pooled se
};

// Sum of estimated influences vs the centred finite difference of the
// coupled crossing curve.
inline RussoShadowReport russo_shadow_crossing(const LatticeGraph& g, double p, double h,
                                               const SamplerSpec& influence_spec,
                                               std::size_t fd_replicas) {
    RussoShadowReport rep;
    rep.p = p;
    rep.h = h;
    const InfluenceProfile prof = influence_mc_crossing(g, p, influence_spec);
    rep.influence_total = prof.total;
    rep.influence_total_se = prof.total_se;

    const auto thresholds = crossing_thresholds(
        g, detail::subseed(influence_spec.master_seed, 700), fd_replicas);
    std::size_t in_window = 0;
    for (double t : thresholds) in_window += (t > p - h && t <= p + h) ? 1 : 0;
    const double f = static_cast<double>(in_window) / static_cast<double>(fd_replicas);
    rep.fd_derivative = f / (2.0 * h);
    rep.fd_se = std::sqrt(f * (1.0 - f) / static_cast<double>(fd_replicas)) / (2.0 * h);

    rep.diff = rep.influence_total - rep.fd_derivative;
    rep.pooled_se = std::sqrt(rep.influence_total_se * rep.influence_total_se +
                              rep.fd_se * rep.fd_se);
    rep.pass = std::abs(rep.diff) <= 5.0 * rep.pooled_se;
    return rep;
}

} // namespace percolab
