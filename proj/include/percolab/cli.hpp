#pragma once

// Command-line front door. Every run writes results.jsonl, any CSV
// tables, and a manifest into a run directory; re-running the manifest's
// params reproduces the result files byte for byte (thread count
// included). Exit codes: 0 success, 1 usage or domain error, 2 a theorem
// check failed beyond its tolerance.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "percolab/events.hpp"
#include "percolab/exact.hpp"
#include "percolab/io.hpp"
#include "percolab/ising.hpp"
#include "percolab/montecarlo.hpp"
#include "percolab/plaquette.hpp"
#include "percolab/rsw.hpp"

namespace percolab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

namespace detail {

struct NamedEvent {
    MonotoneEvent event;
    GroundSet gs{1};
    std::shared_ptr<LatticeGraph> graph;  // keeps crossing predicates alive
};

inline NamedEvent make_event(const Json& params) {
    const std::string name = params.value("event", "majority3");
    NamedEvent ne;
    if (name == "dictator") {
        const auto n = params.value("n", std::size_t{5});
        ne.gs = GroundSet(n);
        ne.event = dictator_event(0);
    } else if (name == "majority3") {
        ne.gs = GroundSet(3);
        ne.event = majority3_event();
    } else if (name == "parity3") {
        ne.gs = GroundSet(3);
        ne.event = parity_event();
    } else if (name == "lr11" || name == "lr21") {
        const BoxSpec spec = name == "lr11" ? BoxSpec{1, 1} : BoxSpec{2, 1};
        ne.graph = std::make_shared<LatticeGraph>(build_box(Model::BondZ2, spec));
        ne.gs = ne.graph->ground_set();
        auto g = ne.graph;
        ne.event = {std::string("lr_crossing(") + name + ")",
                    [g](const Configuration& w) { return lr_crossing(*g, w); }, true};
    } else if (name == "random") {
        const auto n = params.value("n", std::size_t{8});
        const auto gens = params.value("gens", std::size_t{4});
        const auto seed = params.value("event_seed", std::uint64_t{1});
        ne.gs = GroundSet(n);
        ne.event = random_increasing_event(n, gens, seed);
    } else {
        throw std::invalid_argument("unknown event: " + name);
    }
    return ne;
}

inline SamplerSpec sampler(const Json& params) {
    SamplerSpec s;
    s.p = params.value("p", 0.5);
    s.master_seed = params.value("seed", std::uint64_t{42});
    s.replicas = params.value("reps", std::size_t{10000});
    return s;
}

inline void check_line(const std::string& name, bool pass, double margin, RunWriter& out) {
    out.raw_record(Json{{"op", "check"}, {"check", name}, {"pass", pass}, {"margin", margin}});
    std::cout << (pass ? "PASS " : "FAIL ") << name << "  margin=" << margin << "\n";
}

// --- op handlers, dispatched on params["op"] -------------------------------

inline int run_oracle(const Json& params, RunWriter& out) {
    const std::string sub = params.at("op");
    NamedEvent ne = make_event(params);
    if (sub == "oracle.verify-russo") {
        const RussoReport rep = verify_russo(ne.event, ne.gs);
        out.raw_record(Json{{"op", sub},
                            {"event", ne.event.name},
                            {"n", ne.gs.size},
                            {"counts", rep.event.counts},
                            {"derivative", polynomial_json(rep.derivative)},
                            {"pivotal_sum", polynomial_json(rep.pivotal_sum)},
                            {"equal", rep.equal}});
        std::cout << "identity: " << (rep.equal ? "exact" : "MISMATCH") << "  ("
                  << ne.event.name << ", " << ne.gs.size << " elements)\n";
        return rep.equal ? kExitOk : kExitCheckFailed;
    }
    if (sub == "oracle.event-poly") {
        const EventPolynomial poly = event_polynomial(ne.event, ne.gs);
        out.raw_record(Json{{"op", sub},
                            {"event", ne.event.name},
                            {"n", ne.gs.size},
                            {"counts", poly.counts},
                            {"dense", polynomial_json(to_dense(poly))}});
        std::cout << ne.event.name << ": P(1/2) = " << poly.evaluate(0.5) << "\n";
        return kExitOk;
    }
    if (sub == "oracle.pivotal-poly") {
        const auto e = params.value("element", std::size_t{0});
        const DensePolynomial poly = pivotal_polynomial(ne.event, e, ne.gs);
        out.raw_record(Json{{"op", sub},
                            {"event", ne.event.name},
                            {"element", e},
                            {"dense", polynomial_json(poly)}});
        std::cout << ne.event.name << " pivotal(" << e << ") at 1/2 = " << poly.evaluate(0.5)
                  << "\n";
        return kExitOk;
    }
    if (sub == "oracle.influence") {
        const auto e = params.value("element", std::size_t{0});
        const double p = params.value("p", 0.5);
        const double v = influence_exact(ne.event, e, p, ne.gs);
        out.raw_record(
            Json{{"op", sub}, {"event", ne.event.name}, {"element", e}, {"p", p}, {"influence", v}});
        std::cout << "I(" << ne.event.name << ", e=" << e << ", p=" << p << ") = " << v << "\n";
        return kExitOk;
    }
    throw std::invalid_argument("unknown oracle op " + sub);
}

inline int run_mc(const Json& params, RunWriter& out) {
    const std::string sub = params.at("op");
    const SamplerSpec spec = sampler(params);
    const Model model = model_from_name(params.value("model", "bond-z2"));
    if (sub == "mc.theta" || sub == "mc.chi") {
        const int L = params.value("L", 16);
        const Estimate est = sub == "mc.theta" ? estimate_theta(model, spec.p, L, spec)
                                               : estimate_chi(model, spec.p, L, spec);
        out.record(sub, model_name(model), Json{{"p", spec.p}, {"L", L}}, est, spec.master_seed);
        std::cout << sub << " p=" << spec.p << " L=" << L << ": " << est.value << " +- "
                  << est.se << "\n";
        return kExitOk;
    }
    if (sub == "mc.crossing") {
        const int n = params.value("n", 8);
        const LatticeGraph g = build_box(model, {n, n});
        const Estimate est = estimate_event(g, spec, lr_crossing);
        out.record(sub, model_name(model), Json{{"p", spec.p}, {"n", n}}, est, spec.master_seed);
        std::cout << "P(LR(" << n << "," << n << ")) at p=" << spec.p << ": " << est.value
                  << " +- " << est.se << "\n";
        return kExitOk;
    }
    if (sub == "mc.annulus") {
        const int n = params.value("n", 2);
        const LatticeGraph g = build_annulus({n}, Model::BondZ2);
        const Estimate est = estimate_event(g, spec, annulus_cycle);
        out.record(sub, "bond-z2", Json{{"p", spec.p}, {"n", n}}, est, spec.master_seed);
        std::cout << "P(A_" << n << ") at p=" << spec.p << ": " << est.value << " +- " << est.se
                  << "\n";
        return kExitOk;
    }
    throw std::invalid_argument("unknown mc op " + sub);
}

inline int run_rsw(const Json& params, RunWriter& out) {
    const std::string sub = params.at("op");
    const SamplerSpec spec = sampler(params);
    if (sub == "rsw.check") {
        const int n = params.value("n", 8);
        const RswReport rep = rsw_check(n, spec.p, spec);
        out.raw_record(Json{{"op", sub},
                            {"model", "bond-z2"},
                            {"n", n},
                            {"p", spec.p},
                            {"tau", estimate_json(rep.tau)},
                            {"lhs", estimate_json(rep.lhs)},
                            {"bound", rep.bound},
                            {"margin", rep.margin},
                            {"pooled_stderr", rep.pooled_se},
                            {"replicas", rep.replicas},
                            {"seed", spec.master_seed},
                            {"wall_time", nullptr}});
        check_line("rsw_lower_bound(n=" + std::to_string(n) + ",p=" + csv_field(spec.p) + ")",
                   rep.pass, rep.margin, out);
        return rep.pass ? kExitOk : kExitCheckFailed;
    }
    if (sub == "rsw.annulus-scan") {
        std::vector<int> ns = params.value("ns", std::vector<int>{1, 2, 4, 8});
        const AnnulusScan scan = annulus_bound_scan(spec.p, ns, spec);
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : scan.rows) {
            out.record(sub, "bond-z2", Json{{"p", spec.p}, {"n", row.n}}, row.prob,
                       spec.master_seed);
            rows.push_back({std::to_string(row.n), csv_field(row.prob.value),
                            csv_field(row.prob.se), std::to_string(row.prob.replicas)});
        }
        out.csv("annulus_scan.csv", {"n", "estimate", "stderr", "replicas"}, rows);
        if (!scan.in_hypothesis) {
            std::cout << "p=" << spec.p << " is outside the p>=1/2 hypothesis; report only\n";
            return kExitOk;
        }
        double min_margin = 1.0;
        for (const auto& row : scan.rows)
            min_margin = std::min(min_margin, row.prob.value - 4.0 * row.prob.se);
        check_line("annulus_lower_bound(p=" + csv_field(spec.p) + ")", scan.pass, min_margin,
                   out);
        return scan.pass ? kExitOk : kExitCheckFailed;
    }
    throw std::invalid_argument("unknown rsw op " + sub);
}

inline int run_pc(const Json& params, RunWriter& out) {
    const SamplerSpec spec = sampler(params);
    const Model model = model_from_name(params.value("model", "bond-z2"));
    const int nmax = params.value("nmax", 32);
    std::vector<int> ns;
    for (int n = 4; n <= nmax; n *= 2) ns.push_back(n);
    if (ns.empty() || ns.back() != nmax) ns.push_back(nmax);
    const PcResult res = estimate_pc(model, ns, spec);
    std::vector<std::vector<std::string>> rows;
    for (const auto& [n, v] : res.per_n) {
        out.raw_record(Json{{"op", "pc"},
                            {"model", model_name(model)},
                            {"params", Json{{"n", n}}},
                            {"estimate", v},
                            {"stderr", nullptr},
                            {"replicas", res.replicas},
                            {"seed", spec.master_seed},
                            {"wall_time", nullptr}});
        rows.push_back({std::to_string(n), csv_field(v)});
        std::cout << "n=" << n << "  median crossing point " << v << "\n";
    }
    out.csv("pc.csv", {"n", "p_hat"}, rows);
    std::cout << "pc(" << model_name(model) << ") ~= " << res.value << "\n";
    if (model == Model::BondZ2) {
        const bool pass = res.value >= 0.48 && res.value <= 0.52;
        check_line("pc_bond_z2_half", pass, res.value - 0.5, out);
        return pass ? kExitOk : kExitCheckFailed;
    }
    return kExitOk;
}

inline int run_threshold(const Json& params, RunWriter& out) {
    const std::string sub = params.at("op");
    const SamplerSpec spec = sampler(params);
    if (sub == "threshold.window") {
        const std::string family = params.value("family", "lr");
        const double eps = params.value("eps", 0.1);
        std::vector<int> ns = params.value("ns", std::vector<int>{8, 16, 32});
        const auto eta_reps = params.value("eta_reps", std::size_t{400});
        std::vector<std::vector<std::string>> wrows, crows;
        std::vector<ThresholdWindow> wins;
        for (const int n : ns) {
            ThresholdWindow win;
            std::vector<double> thresholds;
            if (family == "lr") {
                const LatticeGraph g = build_box(Model::BondZ2, {n, n});
                thresholds = crossing_thresholds(
                    g, percolab::detail::subseed(spec.master_seed, 300 + n), spec.replicas);
                win = window_from_thresholds(thresholds, eps,
                                             percolab::detail::subseed(spec.master_seed, 400 + n));
                win.family = "lr-bond-z2";
                win.n = n;
                if (eta_reps > 0) {
                    SamplerSpec es = spec;
                    es.replicas = eta_reps;
                    win.eta = influence_mc_crossing(g, win.p0, es).max_influence;
                }
            } else if (family == "dictator") {
                win = threshold_window_dictator(n, eps, spec);
                CounterRng rng(percolab::detail::subseed(spec.master_seed, 500));
                thresholds.resize(spec.replicas);
                for (std::size_t r = 0; r < spec.replicas; ++r)
                    thresholds[r] = rng.uniform(r, 0);
            } else {
                throw std::invalid_argument("unknown family " + family);
            }
            wins.push_back(win);
            out.raw_record(Json{{"op", sub},
                                {"model", "bond-z2"},
                                {"family", win.family},
                                {"n", n},
                                {"eps", eps},
                                {"p_low", win.p_low},
                                {"p_high", win.p_high},
                                {"width", win.width},
                                {"width_stderr", win.width_se},
                                {"p0", win.p0},
                                {"eta", win.eta},
                                {"replicas", win.replicas},
                                {"seed", spec.master_seed},
                                {"wall_time", nullptr}});
            wrows.push_back({win.family, std::to_string(n), csv_field(eps),
                             csv_field(win.p_low), csv_field(win.p_high), csv_field(win.width),
                             csv_field(win.width_se), csv_field(win.p0), csv_field(win.eta)});
            std::sort(thresholds.begin(), thresholds.end());
            for (int i = 0; i <= 40; ++i) {
                const double p = static_cast<double>(i) / 40.0;
                const double est = coupled_curve(thresholds, p);
                const auto k = static_cast<std::uint64_t>(
                    est * static_cast<double>(thresholds.size()) + 0.5);
                const Estimate pe = proportion_estimate(k, thresholds.size());
                crows.push_back({std::to_string(n), csv_field(p), csv_field(pe.value),
                                 csv_field(pe.se), std::to_string(thresholds.size())});
            }
            std::cout << win.family << " n=" << n << ": window [" << win.p_low << ", "
                      << win.p_high << "] width " << win.width << " (eta " << win.eta << ")\n";
        }
        out.csv("windows.csv",
                {"family", "n", "eps", "p_low", "p_high", "width", "width_stderr", "p0", "eta"},
                wrows);
        out.csv("curves.csv", {"n", "p", "estimate", "stderr", "replicas"}, crows);
        // tail shape implied by the measured eta, with the unknown
        // absolute constant left at 1
        std::vector<std::vector<std::string>> srows;
        for (const auto& win : wins) {
            if (!(win.eta > 0.0 && win.eta < 1.0)) continue;
            for (int i = 0; i <= 40; ++i) {
                const double pp = static_cast<double>(i) / 40.0;
                srows.push_back({std::to_string(win.n), csv_field(pp),
                                 csv_field(epsilon_p_shape(win.eta, pp, win.p0))});
            }
        }
        if (!srows.empty()) out.csv("window_shape.csv", {"n", "p", "epsilon_p"}, srows);
        return kExitOk;
    }
    if (sub == "threshold.talagrand") {
        const int n = params.value("n", 4);
        const LatticeGraph g = build_box(Model::BondZ2, {n, n});
        const TalagrandReport rep = talagrand_ratio_crossing(g, spec.p, spec);
        out.raw_record(Json{{"op", sub},
                            {"model", "bond-z2"},
                            {"n", n},
                            {"p", spec.p},
                            {"event_prob", rep.event_prob},
                            {"total_influence", rep.total_influence},
                            {"max_influence", rep.max_influence},
                            {"ratio", rep.ratio},
                            {"replicas", spec.replicas},
                            {"seed", spec.master_seed},
                            {"wall_time", nullptr}});
        std::cout << "influence-sum ratio at p=" << spec.p << ": " << rep.ratio << "\n";
        return kExitOk;
    }
    if (sub == "threshold.influence") {
        const int n = params.value("n", 4);
        const LatticeGraph g = build_box(Model::BondZ2, {n, n});
        const InfluenceProfile prof = influence_mc_crossing(g, spec.p, spec);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t e = 0; e < prof.influence.size(); ++e)
            rows.push_back({std::to_string(e), g.carrier_label(static_cast<std::uint32_t>(e)),
                            csv_field(prof.influence[e])});
        out.csv("influence.csv", {"element", "label", "influence"}, rows);
        out.raw_record(Json{{"op", sub},
                            {"model", "bond-z2"},
                            {"n", n},
                            {"p", spec.p},
                            {"total", prof.total},
                            {"total_stderr", prof.total_se},
                            {"max", prof.max_influence},
                            {"replicas", prof.replicas},
                            {"seed", spec.master_seed},
                            {"wall_time", nullptr}});
        std::cout << "total influence " << prof.total << " (max " << prof.max_influence
                  << ") over " << prof.influence.size() << " edges\n";
        return kExitOk;
    }
    throw std::invalid_argument("unknown threshold op " + sub);
}

inline int run_plaquette(const Json& params, RunWriter& out) {
    const std::string sub = params.at("op");
    const SamplerSpec spec = sampler(params);
    if (sub == "plaquette.probe") {
        const int margin = params.value("margin", 2);
        std::vector<double> ps = params.value("ps", std::vector<double>{0.3, 0.8});
        const std::vector<std::pair<int, int>> shapes{{1, 1}, {2, 1}, {2, 2}, {3, 2}};
        std::vector<std::vector<std::string>> rows;
        for (const double p : ps) {
            const auto probe = wgamma_probe(shapes, p, margin, spec);
            for (const auto& r : probe) {
                rows.push_back({std::to_string(r.m), std::to_string(r.n),
                                std::to_string(r.area), std::to_string(r.perimeter),
                                csv_field(r.p),
                                r.below_resolution ? "below_resolution" : csv_field(r.minus_log),
                                csv_field(r.se_of_log), std::to_string(r.margin)});
            }
            std::cout << "p=" << p << ": better fit ~ " << fit_regime(probe) << "\n";
            out.raw_record(Json{{"op", sub},
                                {"p", p},
                                {"margin", margin},
                                {"regime", fit_regime(probe)},
                                {"replicas", spec.replicas},
                                {"seed", spec.master_seed},
                                {"wall_time", nullptr}});
        }
        out.csv("wgamma_probe.csv",
                {"gamma_m", "gamma_n", "area", "perimeter", "p", "minus_log_estimate", "stderr",
                 "region_margin"},
                rows);
        return kExitOk;
    }
    if (sub == "plaquette.coexist") {
        const int L = params.value("L", 24);
        const CoexistenceReport rep = coexistence_check(spec.p, L, spec);
        out.record("plaquette.coexist.open", "site-z3", Json{{"p", spec.p}, {"L", L}},
                   rep.open_span, spec.master_seed);
        out.record("plaquette.coexist.closed", "site-z3", Json{{"p", spec.p}, {"L", L}},
                   rep.closed_span, spec.master_seed);
        out.record("plaquette.coexist.both", "site-z3", Json{{"p", spec.p}, {"L", L}},
                   rep.both_span, spec.master_seed);
        std::cout << "open " << rep.open_span.value << ", closed " << rep.closed_span.value
                  << ", both " << rep.both_span.value << "\n";
        return kExitOk;
    }
    throw std::invalid_argument("unknown plaquette op " + sub);
}

inline int run_uniqueness(const Json& params, RunWriter& out) {
    const SamplerSpec spec = sampler(params);
    const Model model = model_from_name(params.value("model", "bond-z2"));
    std::vector<int> Ls = params.value("Ls", std::vector<int>{32, 64, 128});
    std::vector<std::vector<std::string>> rows;
    for (const int L : Ls) {
        const UniquenessReport rep = uniqueness_diagnostics(model, spec.p, L, spec);
        out.record("uniqueness.multi_large", model_name(model), Json{{"p", spec.p}, {"L", L}},
                   rep.multi_large_freq, spec.master_seed);
        out.record("uniqueness.adj2_density", model_name(model), Json{{"p", spec.p}, {"L", L}},
                   rep.adj2_density, spec.master_seed);
        out.record("uniqueness.adj3_density", model_name(model), Json{{"p", spec.p}, {"L", L}},
                   rep.adj3_density, spec.master_seed);
        rows.push_back({std::to_string(L), csv_field(rep.multi_large_freq.value),
                        csv_field(rep.adj2_density.value), csv_field(rep.adj2_density.se),
                        csv_field(rep.adj3_density.value), csv_field(rep.adj3_density.se)});
        std::cout << "L=" << L << ": adj2 density " << rep.adj2_density.value << ", adj3 "
                  << rep.adj3_density.value << "\n";
    }
    out.csv("uniqueness.csv", {"L", "multi_large_freq", "adj2", "adj2_stderr", "adj3", "adj3_stderr"},
            rows);
    return kExitOk;
}

inline int run_ising(const Json& params, RunWriter& out) {
    const std::string sub = params.at("op");
    const auto seed = params.value("seed", std::uint64_t{42});
    const int L = params.value("L", 32);
    const double h = params.value("h", 0.0);
    const SpinBoundary bc = boundary_from_name(params.value("bc", "free"));
    if (sub == "ising.sample") {
        const double T = params.value("T", 2.0);
        const int sweeps = params.value("sweeps", 1000);
        const SpinConfig cfg = glauber_sample(L, T, h, bc, sweeps, seed);
        out.raw_record(Json{{"op", sub},
                            {"L", L},
                            {"T", T},
                            {"h", h},
                            {"bc", boundary_name(bc)},
                            {"sweeps", sweeps},
                            {"magnetization", cfg.magnetization()},
                            {"seed", seed},
                            {"wall_time", nullptr}});
        std::cout << "magnetization " << cfg.magnetization() << "\n";
        return kExitOk;
    }
    if (sub == "ising.scan") {
        std::vector<double> Ts = params.value("Ts", std::vector<double>{0.5, 2.0, 10.0});
        SpinScanSpec spec;
        spec.master_seed = seed;
        spec.chains = params.value("chains", std::size_t{8});
        spec.samples_per_chain = params.value("samples", 25);
        spec.burnin_sweeps = params.value("burnin", 1000);
        spec.stride_sweeps = params.value("stride", 10);
        const auto rows = spin_percolation_scan(L, Ts, h, bc, spec);
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : rows) {
            out.record("ising.scan.plus", "ising-2d",
                       Json{{"T", r.T}, {"h", h}, {"bc", boundary_name(bc)}, {"L", L}},
                       r.plus_spans, seed);
            out.record("ising.scan.minus", "ising-2d",
                       Json{{"T", r.T}, {"h", h}, {"bc", boundary_name(bc)}, {"L", L}},
                       r.minus_spans, seed);
            out.record("ising.scan.neither", "ising-2d",
                       Json{{"T", r.T}, {"h", h}, {"bc", boundary_name(bc)}, {"L", L}},
                       r.neither_spans, seed);
            csv.push_back({csv_field(r.T), csv_field(r.plus_spans.value),
                           csv_field(r.plus_spans.se), csv_field(r.minus_spans.value),
                           csv_field(r.minus_spans.se), csv_field(r.neither_spans.value),
                           csv_field(r.neither_spans.se), csv_field(r.mean_magnetization)});
            std::cout << "T=" << r.T << ": + spans " << r.plus_spans.value << ", - spans "
                      << r.minus_spans.value << ", neither " << r.neither_spans.value << "\n";
        }
        out.csv("ising_scan.csv",
                {"T", "plus", "plus_stderr", "minus", "minus_stderr", "neither",
                 "neither_stderr", "magnetization"},
                csv);
        return kExitOk;
    }
    throw std::invalid_argument("unknown ising op " + sub);
}

} // namespace detail

// Execute one op from its manifest params into out_dir. The manifest's
// command string is informational; params are authoritative for replay.
inline int run_op(const Json& params, const std::string& out_dir,
                  const std::string& command = "") {
    const std::string op = params.at("op");
    RunWriter out(out_dir);
    int code;
    if (op.rfind("oracle.", 0) == 0) code = detail::run_oracle(params, out);
    else if (op.rfind("mc.", 0) == 0) code = detail::run_mc(params, out);
    else if (op.rfind("rsw.", 0) == 0) code = detail::run_rsw(params, out);
    else if (op == "pc") code = detail::run_pc(params, out);
    else if (op.rfind("threshold.", 0) == 0) code = detail::run_threshold(params, out);
    else if (op.rfind("plaquette.", 0) == 0) code = detail::run_plaquette(params, out);
    else if (op == "uniqueness") code = detail::run_uniqueness(params, out);
    else if (op.rfind("ising.", 0) == 0) code = detail::run_ising(params, out);
    else throw std::invalid_argument("unknown op " + op);
    out.write_manifest(command, params, params.value("seed", std::uint64_t{42}));
    return code;
}

inline int run_report(const std::string& dir, bool replay) {
    const Json manifest = load_manifest(dir);
    std::cout << "run: " << manifest.value("command", std::string{}) << "\n";
    std::cout << "params: " << manifest.at("params").dump() << "\n";

    std::ifstream results(dir + "/results.jsonl");
    if (!results) throw std::runtime_error("missing results.jsonl in " + dir);
    std::string line;
    std::size_t checks = 0;
    while (std::getline(results, line)) {
        if (line.empty()) continue;
        const Json rec = Json::parse(line);
        if (rec.value("op", std::string{}) == "check") {
            ++checks;
            std::cout << (rec.value("pass", false) ? "PASS " : "FAIL ")
                      << rec.value("check", std::string{})
                      << "  margin=" << rec.value("margin", 0.0) << "\n";
        }
    }
    if (checks == 0) std::cout << "(no theorem checks recorded in this run)\n";
    for (const auto& f : manifest.at("outputs"))
        if (f.get<std::string>().ends_with(".csv"))
            std::cout << "plot data: " << dir << "/" << f.get<std::string>() << "\n";

    if (!replay) return kExitOk;

    const std::string replay_dir = dir + "/replay";
    run_op(manifest.at("params"), replay_dir, manifest.value("command", std::string{}));
    bool identical = true;
    for (const auto& f : manifest.at("outputs")) {
        const auto name = f.get<std::string>();
        const bool same = files_identical(dir + "/" + name, replay_dir + "/" + name);
        std::cout << (same ? "REPLAY OK   " : "REPLAY DIFF ") << name << "\n";
        identical = identical && same;
    }
    return identical ? kExitOk : kExitCheckFailed;
}

inline int main(int argc, const char* const* argv) {
    CLI::App app{"percolab: a desk-scale percolation laboratory"};
    app.set_config("--config", "", "key=value configuration file");
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir;
    std::size_t threads = 0;
    std::uint64_t seed = 42;
    app.add_option("--out", out_dir, "run directory (default runs/<op>)");
    app.add_option("--threads", threads, "worker threads (default: PERCOLAB_THREADS or all)");
    app.add_option("--seed", seed, "master seed; all randomness derives from it");

    Json params;
    std::string op;

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact enumeration checks");
    std::string event = "majority3";
    std::size_t ev_n = 8, ev_gens = 4, element = 0;
    std::uint64_t ev_seed = 1;
    double p = 0.5;
    for (const char* sub : {"verify-russo", "event-poly", "pivotal-poly", "influence"}) {
        auto* c = oracle->add_subcommand(sub);
        c->add_option("--event", event, "dictator|majority3|parity3|lr11|lr21|random");
        c->add_option("--n", ev_n, "ground set size (dictator/random)");
        c->add_option("--gens", ev_gens, "generator count (random)");
        c->add_option("--event-seed", ev_seed, "generator seed (random)");
        c->add_option("--element", element, "element index");
        c->add_option("--p", p, "density");
        c->callback([&, sub] {
            op = std::string("oracle.") + sub;
            params = Json{{"op", op},      {"event", event},        {"n", ev_n},
                          {"gens", ev_gens}, {"event_seed", ev_seed}, {"element", element},
                          {"p", p},        {"seed", seed}};
        });
    }

    // mc
    auto* mc = app.add_subcommand("mc", "sampling estimators");
    std::string model = "bond-z2";
    int L = 16, box_n = 8;
    std::size_t reps = 10000;
    for (const char* sub : {"theta", "chi", "crossing", "annulus"}) {
        auto* c = mc->add_subcommand(sub);
        c->add_option("--model", model, "bond-z2|site-z2|site-z2-matching|bond-z3|site-z3");
        c->add_option("--p", p, "density");
        c->add_option("--L", L, "box radius");
        c->add_option("--n", box_n, "box/annulus scale n");
        c->add_option("--reps", reps, "replica count");
        c->callback([&, sub] {
            op = std::string("mc.") + sub;
            params = Json{{"op", op}, {"model", model}, {"p", p},      {"L", L},
                          {"n", box_n}, {"reps", reps},  {"seed", seed}};
        });
    }

    // rsw; a bare `rsw --n 8 --p 0.5` runs the crossing-bound check
    auto* rsw = app.add_subcommand("rsw", "box-crossing inequality checks");
    std::vector<int> ns{1, 2, 4, 8};
    rsw->add_option("--n", box_n, "square scale (even)");
    rsw->add_option("--p", p, "density");
    rsw->add_option("--reps", reps, "replica count");
    rsw->callback([&] {
        if (op.empty()) {
            op = "rsw.check";
            params = Json{{"op", op}, {"n", box_n}, {"p", p}, {"reps", reps}, {"seed", seed}};
        }
    });
    {
        auto* c = rsw->add_subcommand("check", "rectangle-vs-square lower bound");
        c->add_option("--n", box_n, "square scale (even)");
        c->add_option("--p", p, "density");
        c->add_option("--reps", reps, "replica count");
        c->callback([&] {
            op = "rsw.check";
            params = Json{{"op", op}, {"n", box_n}, {"p", p}, {"reps", reps}, {"seed", seed}};
        });
        auto* a = rsw->add_subcommand("annulus-scan", "annulus circuit lower bound over n");
        a->add_option("--p", p, "density");
        a->add_option("--ns", ns, "annulus scales");
        a->add_option("--reps", reps, "replica count");
        a->callback([&] {
            op = "rsw.annulus-scan";
            params = Json{{"op", op}, {"p", p}, {"ns", ns}, {"reps", reps}, {"seed", seed}};
        });
    }

    // pc
    auto* pc = app.add_subcommand("pc", "critical point by coupled bisection");
    int nmax = 32;
    pc->add_option("--model", model, "lattice model");
    pc->add_option("--nmax", nmax, "largest square scale");
    pc->add_option("--reps", reps, "replica count");
    pc->callback([&] {
        op = "pc";
        params = Json{{"op", op}, {"model", model}, {"nmax", nmax}, {"reps", reps}, {"seed", seed}};
    });

    // threshold
    auto* th = app.add_subcommand("threshold", "sharp-threshold measurements");
    std::string family = "lr";
    double eps = 0.1;
    std::vector<int> win_ns{8, 16, 32};
    std::size_t eta_reps = 400;
    {
        auto* w = th->add_subcommand("window", "threshold window widths");
        w->add_option("--family", family, "lr|dictator");
        w->add_option("--ns", win_ns, "event sizes");
        w->add_option("--eps", eps, "window level in (0, 1/2)");
        w->add_option("--reps", reps, "replica count");
        w->add_option("--eta-reps", eta_reps, "replicas for the max-influence estimate");
        w->callback([&] {
            op = "threshold.window";
            params = Json{{"op", op},   {"family", family}, {"ns", win_ns},
                          {"eps", eps}, {"reps", reps},     {"eta_reps", eta_reps},
                          {"seed", seed}};
        });
        auto* t = th->add_subcommand("talagrand", "influence-sum lower-bound ratio");
        t->add_option("--n", box_n, "square scale");
        t->add_option("--p", p, "density");
        t->add_option("--reps", reps, "replica count");
        t->callback([&] {
            op = "threshold.talagrand";
            params = Json{{"op", op}, {"n", box_n}, {"p", p}, {"reps", reps}, {"seed", seed}};
        });
        auto* i = th->add_subcommand("influence", "per-edge influence profile");
        i->add_option("--n", box_n, "square scale");
        i->add_option("--p", p, "density");
        i->add_option("--reps", reps, "replica count");
        i->callback([&] {
            op = "threshold.influence";
            params = Json{{"op", op}, {"n", box_n}, {"p", p}, {"reps", reps}, {"seed", seed}};
        });
    }

    // plaquette
    auto* pl = app.add_subcommand("plaquette", "3d dual-surface spanning");
    int margin = 2;
    std::vector<double> probe_ps{0.3, 0.8};
    {
        auto* pr = pl->add_subcommand("probe", "area/perimeter scaling probe");
        pr->add_option("--ps", probe_ps, "densities to probe");
        pr->add_option("--margin", margin, "region dilation around the loop");
        pr->add_option("--reps", reps, "replica count");
        pr->callback([&] {
            op = "plaquette.probe";
            params = Json{{"op", op},     {"ps", probe_ps}, {"margin", margin},
                          {"reps", reps}, {"seed", seed}};
        });
        auto* co = pl->add_subcommand("coexist", "open/closed spanning on site-z3");
        co->add_option("--p", p, "density");
        co->add_option("--L", L, "box side");
        co->add_option("--reps", reps, "replica count");
        co->callback([&] {
            op = "plaquette.coexist";
            params = Json{{"op", op}, {"p", p}, {"L", L}, {"reps", reps}, {"seed", seed}};
        });
    }

    // uniqueness
    auto* un = app.add_subcommand("uniqueness", "large-cluster adjacency densities");
    std::vector<int> Ls{32, 64, 128};
    un->add_option("--model", model, "lattice model");
    un->add_option("--p", p, "density");
    un->add_option("--Ls", Ls, "box radii");
    un->add_option("--reps", reps, "replica count");
    un->callback([&] {
        op = "uniqueness";
        params = Json{{"op", op},   {"model", model}, {"p", p},
                      {"Ls", Ls},   {"reps", reps},   {"seed", seed}};
    });

    // ising
    auto* is = app.add_subcommand("ising", "2d Ising spin percolation");
    double T = 2.0, hfield = 0.0;
    std::string bc = "free";
    int sweeps = 1000, samples = 25, burnin = 1000, stride = 10;
    std::size_t chains = 8;
    std::vector<double> Ts{0.5, 2.0, 10.0};
    {
        auto* sa = is->add_subcommand("sample", "one equilibrated configuration");
        sa->add_option("--L", L, "box side");
        sa->add_option("--T", T, "temperature");
        sa->add_option("--field", hfield, "external field h");
        sa->add_option("--bc", bc, "plus|minus|free");
        sa->add_option("--sweeps", sweeps, "sweeps to run");
        sa->callback([&] {
            op = "ising.sample";
            params = Json{{"op", op}, {"L", L},           {"T", T},       {"h", hfield},
                          {"bc", bc}, {"sweeps", sweeps}, {"seed", seed}};
        });
        auto* sc = is->add_subcommand("scan", "spanning frequency over temperatures");
        sc->add_option("--L", L, "box side");
        sc->add_option("--Ts", Ts, "temperatures");
        sc->add_option("--field", hfield, "external field h");
        sc->add_option("--bc", bc, "plus|minus|free");
        sc->add_option("--chains", chains, "independent chains");
        sc->add_option("--samples", samples, "samples per chain");
        sc->add_option("--burnin", burnin, "burn-in sweeps");
        sc->add_option("--stride", stride, "sweeps between samples");
        sc->callback([&] {
            op = "ising.scan";
            params = Json{{"op", op},         {"L", L},
                          {"Ts", Ts},         {"h", hfield},
                          {"bc", bc},         {"chains", chains},
                          {"samples", samples}, {"burnin", burnin},
                          {"stride", stride}, {"seed", seed}};
        });
    }

    // report
    auto* rep = app.add_subcommand("report", "summarize a run directory");
    std::string report_dir;
    bool replay = false;
    rep->add_option("dir", report_dir, "run directory")->required();
    rep->add_flag("--replay", replay, "re-run the manifest and compare bytes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (threads > 0) set_thread_count(threads);

    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];

    try {
        if (rep->parsed()) return run_report(report_dir, replay);
        if (op.empty()) {
            std::cerr << "missing subcommand; see --help\n";
            return kExitUsage;
        }
        if (out_dir.empty()) {
            std::string slug = op;
            for (auto& c : slug)
                if (c == '.') c = '-';
            out_dir = "runs/" + slug;
        }
        return run_op(params, out_dir, cmd.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace percolab::cli
