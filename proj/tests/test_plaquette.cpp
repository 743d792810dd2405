#include <percolab/plaquette.hpp>

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "oracles.hpp"

using namespace percolab;

namespace {
std::set<std::uint64_t> boundary_keys(const Edge3& e) {
    std::set<std::uint64_t> keys;
    for (const auto& d : plaquette_boundary_edges(e))
        keys.insert(pack_geometry_key(d.u, d.axis));
    return keys;
}

Bitset random_chain(const PlaquetteRegion& r, std::uint64_t seed, std::uint64_t replica) {
    CounterRng rng(seed);
    Bitset chain(r.plaquette_count());
    for (std::size_t i = 0; i < r.plaquette_count(); ++i)
        chain.set(i, rng.uniform(replica, i) < 0.5);
    return chain;
}
} // namespace

TEST_CASE("plaquette of an x-edge at the origin") {
    const auto bd = plaquette_boundary_edges({{0, 0, 0}, 0});
    CHECK(bd.size() == 4);
    const std::set<std::uint64_t> got = boundary_keys({{0, 0, 0}, 0});
    // the transverse square has corners u in {0} x {-1,0} x {-1,0}
    const std::set<std::uint64_t> want{
        pack_geometry_key({0, -1, -1}, 1), pack_geometry_key({0, -1, 0}, 1),
        pack_geometry_key({0, -1, -1}, 2), pack_geometry_key({0, 0, -1}, 2)};
    CHECK(got == want);
}

TEST_CASE("edge/plaquette bijection round trip over a 3-cube") {
    const PlaquetteRegion r = PlaquetteRegion::box({0, 0, 0}, {3, 3, 3});
    for (std::size_t i = 0; i < r.plaquette_count(); ++i) {
        const Edge3 e = r.primal_edge(i);
        CHECK(primal_edge_of(dual_plaquette(e)) == e);
    }
    // distinct edges, distinct plaquettes
    std::set<std::set<std::uint64_t>> distinct;
    for (std::size_t i = 0; i < r.plaquette_count(); ++i)
        distinct.insert(boundary_keys(r.primal_edge(i)));
    CHECK(distinct.size() == r.plaquette_count());
}

TEST_CASE("parallel adjacent edges share exactly one dual edge") {
    const auto a = boundary_keys({{0, 0, 0}, 0});
    const auto b = boundary_keys({{0, 1, 0}, 0});
    std::vector<std::uint64_t> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    CHECK(inter.size() == 1);
}

TEST_CASE("boundary of single and paired plaquettes") {
    const PlaquetteRegion r = PlaquetteRegion::box({-1, -1, -1}, {2, 2, 2});
    Bitset one(r.plaquette_count());
    const auto i0 = r.find_plaquette({{0, 0, 0}, 0});
    REQUIRE(i0 >= 0);
    one.set(static_cast<std::size_t>(i0), true);
    CHECK(r.boundary(one).count() == 4);

    Bitset two = one;
    const auto i1 = r.find_plaquette({{0, 1, 0}, 0});
    REQUIRE(i1 >= 0);
    two.set(static_cast<std::size_t>(i1), true);
    CHECK(r.boundary(two).count() == 6);  // the shared dual edge cancels
}

TEST_CASE("closed surfaces have empty boundary") {
    const PlaquetteRegion r = PlaquetteRegion::box({-2, -2, -2}, {3, 3, 3});
    auto cube_chain = [&](const Vec3& v) {
        Bitset chain(r.plaquette_count());
        const Edge3 incident[6] = {{{v.x, v.y, v.z}, 0},    {{v.x - 1, v.y, v.z}, 0},
                                   {{v.x, v.y, v.z}, 1},    {{v.x, v.y - 1, v.z}, 1},
                                   {{v.x, v.y, v.z}, 2},    {{v.x, v.y, v.z - 1}, 2}};
        for (const auto& e : incident) {
            const auto i = r.find_plaquette(e);
            REQUIRE(i >= 0);
            chain.set(static_cast<std::size_t>(i), true);
        }
        return chain;
    };
    CHECK(r.boundary(cube_chain({0, 0, 0})).none());
    // two adjacent dual cubes tile into a closed 1x2 box surface
    Bitset pair = cube_chain({0, 0, 0});
    pair ^= cube_chain({1, 0, 0});
    CHECK(pair.count() == 10);
    CHECK(r.boundary(pair).none());
}

TEST_CASE("boundary is GF(2)-linear") {
    const PlaquetteRegion r = PlaquetteRegion::box({0, 0, 0}, {3, 3, 3});
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Bitset f = random_chain(r, 101, t);
        const Bitset g = random_chain(r, 102, t);
        CHECK(r.boundary(f ^ g) == (r.boundary(f) ^ r.boundary(g)));
    }
}

TEST_CASE("spanning: hand cases") {
    const LoopGamma unit{{0, 0, 0}, 1, 1};
    const PlaquetteRegion r = gamma_region(unit, 1);
    const Bitset target = loop_indicator(r, unit);

    // the single flat plaquette is its own spanning surface
    Bitset occ(r.plaquette_count());
    const auto disc = r.find_plaquette({{1, 1, 0}, 2});
    REQUIRE(disc >= 0);
    occ.set(static_cast<std::size_t>(disc), true);
    CHECK(spans_chain(r, occ, target));

    CHECK_FALSE(spans_chain(r, Bitset(r.plaquette_count()), target));
    CHECK(spans_chain(r, Bitset(r.plaquette_count(), true), target));

    // a 2x2 loop with every plaquette occupied spans via the flat disc
    const LoopGamma g22{{0, 0, 0}, 2, 2};
    const PlaquetteRegion r22 = gamma_region(g22, 0);
    CHECK(spans(r22, Bitset(r22.plaquette_count(), true), g22));

    // an open chain is not a legal target
    Bitset open_chain(r.dual_edge_count());
    open_chain.set(0, true);
    CHECK_THROWS_AS(spans_chain(r, occ, open_chain), std::domain_error);

    // a loop outside the region
    CHECK_THROWS_AS(loop_indicator(r, LoopGamma{{40, 40, 0}, 1, 1}), std::domain_error);
}

TEST_CASE("gaussian elimination agrees with subset enumeration") {
    const LoopGamma unit{{0, 0, 0}, 1, 1};
    const PlaquetteRegion r = gamma_region(unit, 1);  // 3x3x3 vertex box
    const Bitset target = loop_indicator(r, unit);
    std::size_t positives = 0;
    for (std::uint64_t t = 0; t < 150; ++t) {
        // sparse occupancy keeps the 2^occ enumeration honest and fast
        CounterRng rng(303);
        Bitset occ(r.plaquette_count());
        std::size_t k = 0;
        for (std::size_t i = 0; i < r.plaquette_count(); ++i) {
            const bool on = rng.uniform(t, i) < 0.2;
            occ.set(i, on);
            k += on;
        }
        if (k > 20) continue;
        const bool fast = spans_chain(r, occ, target);
        CHECK(fast == oracles::spans_by_enumeration(r, occ, target));
        positives += fast;
    }
    CHECK(positives > 0);  // the comparison exercised both outcomes
}

TEST_CASE("region-truncated estimates: endpoints and exact reference") {
    SamplerSpec spec;
    spec.master_seed = 71;
    spec.replicas = 400;
    const LoopGamma unit{{0, 0, 0}, 1, 1};
    const WgammaEstimate all = wgamma_probability(unit, 0.0, 1, spec);
    CHECK(all.prob.value == 1.0);  // every plaquette occupied
    const WgammaEstimate none = wgamma_probability(unit, 1.0, 1, spec);
    CHECK(none.prob.value == 0.0);
    CHECK(none.below_resolution);

    // tiny region: margin 0 around the unit loop holds very few
    // plaquettes, so the exact occupancy enumeration is feasible
    const PlaquetteRegion r0 = gamma_region(unit, 0);
    REQUIRE(r0.plaquette_count() <= 18);
    const Bitset target = loop_indicator(r0, unit);
    const double exact = oracles::exact_wgamma_probability(r0, target, 0.3);
    std::uint64_t hits = 0;
    const std::size_t reps = 20000;
    for (std::size_t rep = 0; rep < reps; ++rep)
        hits += spans_chain(r0, sample_occupied(r0, 5, rep, 0.3), target) ? 1 : 0;
    const double mc = static_cast<double>(hits) / static_cast<double>(reps);
    const double se = std::sqrt(exact * (1 - exact) / static_cast<double>(reps));
    CHECK(std::abs(mc - exact) < 4 * se);
}

TEST_CASE("one-plaquette loops are spanned whenever the primal edge closes") {
    // P(W_gamma) >= 1 - p when gamma bounds a single plaquette
    const LoopGamma unit{{0, 0, 0}, 1, 1};
    const PlaquetteRegion r0 = gamma_region(unit, 0);
    const Bitset target = loop_indicator(r0, unit);
    for (const double p : {0.2, 0.5, 0.8})
        CHECK(oracles::exact_wgamma_probability(r0, target, p) >= 1.0 - p - 1e-12);
}

TEST_CASE("spanning is monotone in density and region") {
    const LoopGamma g21{{0, 0, 0}, 2, 1};
    const PlaquetteRegion small = gamma_region(g21, 0);
    const PlaquetteRegion big = gamma_region(g21, 1);
    const Bitset t_small = loop_indicator(small, g21);
    const Bitset t_big = loop_indicator(big, g21);
    for (std::uint64_t rep = 0; rep < 150; ++rep) {
        // more density, fewer occupied plaquettes, weaker event
        const bool lo = spans_chain(small, sample_occupied(small, 9, rep, 0.3), t_small);
        const bool hi = spans_chain(small, sample_occupied(small, 9, rep, 0.7), t_small);
        if (hi) CHECK(lo);
        // geometry-keyed sampling couples the nested regions
        const bool in_small = spans_chain(small, sample_occupied(small, 9, rep, 0.5), t_small);
        const bool in_big = spans_chain(big, sample_occupied(big, 9, rep, 0.5), t_big);
        if (in_small) CHECK(in_big);
    }
}

TEST_CASE("area/perimeter probe emits finite rows") {
    SamplerSpec spec;
    spec.master_seed = 83;
    spec.replicas = 150;
    const auto rows = wgamma_probe({{1, 1}, {2, 1}, {2, 2}}, 0.25, 1, spec);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.area == row.m * row.n);
        CHECK(row.perimeter == 2 * (row.m + row.n));
        if (!row.below_resolution) CHECK(row.minus_log >= 0.0);
    }
    const std::string regime = fit_regime(rows);
    CHECK((regime == "area" || regime == "perimeter"));
}

TEST_CASE("coexistence endpoints") {
    SamplerSpec spec;
    spec.master_seed = 97;
    spec.replicas = 60;
    const CoexistenceReport rep = coexistence_check(1.0, 8, spec);
    CHECK(rep.open_span.value == 1.0);
    CHECK(rep.closed_span.value == 0.0);
    CHECK(rep.both_span.value == 0.0);
    const CoexistenceReport rep0 = coexistence_check(0.0, 8, spec);
    CHECK(rep0.open_span.value == 0.0);
    CHECK(rep0.closed_span.value == 1.0);
}

TEST_CASE("site-z3 spanning sits mid-range near the expected transition") {
    // around p ~ 0.31 neither phase dominates at desk scale, while
    // slightly off-transition densities pin the frequency to 0 or 1
    SamplerSpec spec;
    spec.master_seed = 98;
    spec.replicas = 400;
    for (const int L : {12, 24}) {
        const CoexistenceReport near = coexistence_check(0.31, L, spec);
        CHECK(near.open_span.value > 0.05);
        CHECK(near.open_span.value < 0.95);
    }
    CHECK(coexistence_check(0.25, 24, spec).open_span.value < 0.05);
    CHECK(coexistence_check(0.40, 24, spec).open_span.value > 0.95);
}
