// Acceptance suite: every exit criterion of the laboratory, one line per
// check. Tolerances and replica counts are pinned here; the binary exits
// nonzero if any line fails.

#include <percolab/cli.hpp>
#include <percolab/percolab.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace percolab;
using Clock = std::chrono::steady_clock;

namespace {

int g_index = 0;
int g_failures = 0;

void report(bool pass, const std::string& name, const std::string& detail, double seconds) {
    ++g_index;
    if (!pass) ++g_failures;
    std::printf("[%2d/12] %s  %-26s %s  (%.1fs)\n", g_index, pass ? "PASS" : "FAIL",
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
}

template <class F>
void criterion(const std::string& name, double time_cap_s, F&& body) {
    const auto t0 = Clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (time_cap_s > 0 && secs > time_cap_s) {
        pass = false;
        detail += " [over time cap]";
    }
    report(pass, name, detail, secs);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// 1. exact pivotality identity for named and random increasing events
void c1_russo_exact() {
    criterion("russo-exact-identity", 10.0, [](std::string& detail) {
        bool ok = verify_russo(dictator_event(0), GroundSet(5)).equal;
        ok = ok && verify_russo(majority3_event(), GroundSet(3)).equal;
        const LatticeGraph g = build_box(Model::BondZ2, {1, 1});
        ok = ok && verify_russo(crossing_event(g), g.ground_set()).equal;
        std::size_t checked = 3;
        for (std::uint64_t s = 0; s < 200 && ok; ++s) {
            const std::size_t n = 2 + s % 9;  // sizes 2..10
            ok = verify_russo(random_increasing_event(n, 8, 9000 + s), GroundSet(n)).equal;
            ++checked;
        }
        detail = std::to_string(checked) + " events, integer-exact equality";
        return ok;
    });
}

// 2. square-crossing probability at the self-dual density
void c2_self_duality() {
    criterion("self-duality-input", 60.0, [](std::string& detail) {
        bool ok = true;
        std::ostringstream os;
        for (const int n : {4, 8, 16}) {
            const LatticeGraph g = build_box(Model::BondZ2, {n, n});
            SamplerSpec spec{0.5, 4242 + static_cast<std::uint64_t>(n), 10000};
            const Estimate est = estimate_event(g, spec, lr_crossing);
            ok = ok && est.value >= 0.5 - 4.0 * est.se;
            os << " n" << n << "=" << fmt(est.value);
        }
        detail = "P(LR(n,n)) at 1/2:" + os.str();
        return ok;
    });
}

// 3. rectangle crossing dominates the square-crossing bound
void c3_rsw() {
    criterion("rsw-inequality", 300.0, [](std::string& detail) {
        bool ok = true;
        double worst = 1e9;
        for (const int n : {4, 8, 16})
            for (const double p : {0.4, 0.5, 0.6}) {
                SamplerSpec spec{p, 777, 10000};
                const RswReport rep = rsw_check(n, p, spec);
                ok = ok && rep.pass;
                worst = std::min(worst, rep.margin + 4.0 * rep.pooled_se);
            }
        detail = "9 cells, worst slack " + fmt(worst);
        return ok;
    });
}

// 4. annulus circuits stay probable at the self-dual density; the scan
// sizes are pinned, the replica count is raised until the 4-sigma margin
// and the convergence gate are meaningful at the small circuit
// probabilities of the ratio-3 annulus
void c4_annulus() {
    criterion("annulus-lower-bound", 0.0, [](std::string& detail) {
        SamplerSpec spec{0.5, 31337, 100000};
        const AnnulusScan scan = annulus_bound_scan(0.5, {1, 2, 4, 8}, spec);
        double min_margin = 1.0;
        std::ostringstream os;
        for (const auto& row : scan.rows) {
            min_margin = std::min(min_margin, row.prob.value - 4.0 * row.prob.se);
            os << " A" << row.n << "=" << fmt(row.prob.value);
        }
        detail = "min 4-sigma margin " + fmt(min_margin) + ";" + os.str();
        return scan.positive && scan.no_decay;
    });
}

// 5. critical points: self-dual bond value and the site/matching sum
void c5_critical_points() {
    criterion("critical-points", 600.0, [](std::string& detail) {
        SamplerSpec spec{0.5, 555, 600};
        const PcResult bond = estimate_pc(Model::BondZ2, {8, 16, 32}, spec);
        const PcResult site = estimate_pc(Model::SiteZ2, {8, 16, 32}, spec);
        const PcResult match = estimate_pc(Model::SiteZ2Matching, {8, 16, 32}, spec);
        const double sum = site.value + match.value;
        const bool ok_bond = bond.value >= 0.48 && bond.value <= 0.52;
        const bool ok_sum = sum >= 0.97 && sum <= 1.03;
        detail = "bond " + fmt(bond.value) + "; site " + fmt(site.value) + " + matching " +
                 fmt(match.value) + " = " + fmt(sum);
        return ok_bond && ok_sum;
    });
}

// 6. sharp threshold: crossing windows shrink, dictator windows do not
void c6_sharp_threshold() {
    criterion("sharp-threshold-window", 0.0, [](std::string& detail) {
        SamplerSpec spec{0.5, 6001, 2000};
        const ThresholdWindow w8 = threshold_window_crossing(Model::BondZ2, 8, 0.1, spec);
        const ThresholdWindow w32 = threshold_window_crossing(Model::BondZ2, 32, 0.1, spec);
        const double gap = w8.width - w32.width;
        const double se = std::sqrt(w8.width_se * w8.width_se + w32.width_se * w32.width_se);
        const bool shrinks = gap > 3.0 * se;

        SamplerSpec dspec{0.5, 6002, 10000};
        const ThresholdWindow dict = threshold_window_dictator(8, 0.1, dspec);
        const bool flat = std::abs(dict.width - 0.8) <= 0.05 * 0.8;
        detail = "width(8)=" + fmt(w8.width) + " width(32)=" + fmt(w32.width) + " gap/se=" +
                 fmt(gap / se) + "; dictator " + fmt(dict.width);
        return shrinks && flat;
    });
}

// 7. influence sums track the coupled derivative of the crossing curve
void c7_russo_shadow() {
    criterion("mc-russo-shadow", 0.0, [](std::string& detail) {
        const LatticeGraph g = build_box(Model::BondZ2, {4, 4});
        bool ok = true;
        std::ostringstream os;
        for (const double p : {0.45, 0.5, 0.55}) {
            SamplerSpec spec{p, 7007, 10000};
            const RussoShadowReport rep = russo_shadow_crossing(g, p, 0.02, spec, 40000);
            ok = ok && rep.pass;
            os << " p" << p << ": " << fmt(rep.influence_total) << "~" << fmt(rep.fd_derivative);
        }
        detail = "sum(I) ~ dP/dp within 5 se;" + os.str();
        return ok;
    });
}

// 8. plaquette boundary algebra and spanning vs exhaustive enumeration
void c8_plaquette_algebra() {
    criterion("plaquette-algebra", 0.0, [](std::string& detail) {
        const PlaquetteRegion cube = PlaquetteRegion::box({0, 0, 0}, {3, 3, 3});
        CounterRng rng(808);
        bool ok = true;
        for (std::uint64_t t = 0; t < 1000 && ok; ++t) {
            Bitset f(cube.plaquette_count()), h(cube.plaquette_count());
            for (std::size_t i = 0; i < cube.plaquette_count(); ++i) {
                f.set(i, rng.uniform(t, i, 1) < 0.5);
                h.set(i, rng.uniform(t, i, 2) < 0.5);
            }
            ok = cube.boundary(f ^ h) == (cube.boundary(f) ^ cube.boundary(h));
        }

        // closed dual cube around a primal vertex, and two cubes tiled
        const PlaquetteRegion r = PlaquetteRegion::box({-2, -2, -2}, {3, 3, 3});
        auto cube_chain = [&](const Vec3& v) {
            Bitset chain(r.plaquette_count());
            const Edge3 inc[6] = {{{v.x, v.y, v.z}, 0}, {{v.x - 1, v.y, v.z}, 0},
                                  {{v.x, v.y, v.z}, 1}, {{v.x, v.y - 1, v.z}, 1},
                                  {{v.x, v.y, v.z}, 2}, {{v.x, v.y, v.z - 1}, 2}};
            for (const auto& e : inc)
                chain.set(static_cast<std::size_t>(r.find_plaquette(e)), true);
            return chain;
        };
        ok = ok && r.boundary(cube_chain({0, 0, 0})).none();
        Bitset two = cube_chain({0, 0, 0});
        two ^= cube_chain({1, 0, 0});
        ok = ok && r.boundary(two).none();

        // spanning vs subset enumeration, exact, on 12- and 20-plaquette regions
        std::size_t agreements = 0;
        for (const auto& hi : {Vec3{1, 1, 1}, Vec3{2, 1, 1}}) {
            const PlaquetteRegion small = PlaquetteRegion::box({0, 0, 0}, hi);
            if (small.plaquette_count() > 20) return false;
            const LoopGamma unit{{0, 0, 0}, 1, 1};
            const Bitset target = loop_indicator(small, unit);
            for (std::uint64_t t = 0; t < 120 && ok; ++t) {
                Bitset occ(small.plaquette_count());
                const double dens = 0.15 + 0.1 * static_cast<double>(t % 8);
                for (std::size_t i = 0; i < small.plaquette_count(); ++i)
                    occ.set(i, rng.uniform(5000 + t, i) < dens);
                ok = spans_chain(small, occ, target) ==
                     oracles::spans_by_enumeration(small, occ, target);
                ++agreements;
            }
            const Bitset all(small.plaquette_count(), true);
            ok = ok && spans_chain(small, all, target) ==
                           oracles::spans_by_enumeration(small, all, target);
            ok = ok && !spans_chain(small, Bitset(small.plaquette_count()), target);
        }
        detail = "1000 linearity chains, closed surfaces, " + std::to_string(agreements) +
                 " enumeration agreements";
        return ok;
    });
}

// 9. open and closed clusters span simultaneously at p = 1/2 on Z^3 sites
void c9_coexistence() {
    criterion("z3-coexistence", 0.0, [](std::string& detail) {
        SamplerSpec spec{0.5, 909, 1000};
        const CoexistenceReport rep = coexistence_check(0.5, 24, spec);
        detail = "both-span " + fmt(rep.both_span.value) + " (open " +
                 fmt(rep.open_span.value) + ", closed " + fmt(rep.closed_span.value) + ")";
        return rep.both_span.value >= 0.9;
    });
}

// 10. trifurcation proxy densities fall as the box grows
void c10_uniqueness_trend() {
    criterion("uniqueness-trend", 0.0, [](std::string& detail) {
        std::vector<double> d2;
        std::ostringstream os;
        for (const int L : {32, 64, 128}) {
            SamplerSpec spec{0.6, 1010, 1000};
            const UniquenessReport rep = uniqueness_diagnostics(Model::BondZ2, 0.6, L, spec);
            d2.push_back(rep.adj2_density.value);
            os << " L" << L << "=" << fmt(rep.adj2_density.value);
        }
        detail = "adj2 density:" + os.str();
        return d2[0] > d2[1] && d2[1] > d2[2];
    });
}

// 11. Ising spin percolation in both phases
void c11_ising_phases() {
    criterion("ising-phases", 0.0, [](std::string& detail) {
        SpinScanSpec spec;
        spec.master_seed = 1111;
        spec.chains = 10;
        spec.samples_per_chain = 30;
        const auto rows = spin_percolation_scan(32, {0.5, 10.0}, 0.0, SpinBoundary::Plus, spec);
        const double low_T_plus = rows[0].plus_spans.value;
        const double high_T_neither = rows[1].neither_spans.value;
        detail = "plus@T=0.5: " + fmt(low_T_plus) + ", neither@T=10: " + fmt(high_T_neither);
        return low_T_plus > 0.95 && high_T_neither > 0.5;
    });
}

// 12. byte-identical replay across thread counts
void c12_determinism() {
    criterion("replay-determinism", 0.0, [](std::string& detail) {
        namespace fs = std::filesystem;
        const auto base = fs::temp_directory_path() / "percolab_acceptance";
        fs::remove_all(base);
        const Json params{{"op", "mc.crossing"}, {"model", "bond-z2"}, {"n", 8},
                          {"p", 0.5},            {"reps", 2000},       {"seed", 2024}};
        std::ostringstream sink;  // keep run_op's console lines out of the tally
        auto* saved = std::cout.rdbuf(sink.rdbuf());
        set_thread_count(1);
        percolab::cli::run_op(params, (base / "t1").string());
        set_thread_count(2);
        percolab::cli::run_op(params, (base / "t2").string());
        set_thread_count(0);
        bool ok = files_identical((base / "t1" / "results.jsonl").string(),
                                  (base / "t2" / "results.jsonl").string());

        // and a manifest replay of the multi-threaded run
        const Json manifest = load_manifest((base / "t2").string());
        percolab::cli::run_op(manifest.at("params"), (base / "replay").string());
        std::cout.rdbuf(saved);
        for (const auto& f : manifest.at("outputs")) {
            const auto name = f.get<std::string>();
            ok = ok && files_identical((base / "t2" / name).string(),
                                       (base / "replay" / name).string());
        }
        detail = ok ? "results.jsonl byte-identical (1 vs 2 threads, replay)" : "byte mismatch";
        return ok;
    });
}

} // namespace

int main() {
    std::printf("percolab acceptance suite\n");
    const auto t0 = Clock::now();
    c1_russo_exact();
    c2_self_duality();
    c3_rsw();
    c4_annulus();
    c5_critical_points();
    c6_sharp_threshold();
    c7_russo_shadow();
    c8_plaquette_algebra();
    c9_coexistence();
    c10_uniqueness_trend();
    c11_ising_phases();
    c12_determinism();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%d/12 criteria passed in %.1fs\n", 12 - g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
