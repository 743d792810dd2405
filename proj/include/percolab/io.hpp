#pragma once

// Run directory persistence: JSON-lines results, CSV tables, and the run
// manifest. Result files are replay-stable byte for byte: records carry a
// null wall_time placeholder and all floating-point text comes from the
// JSON shortest-round-trip printer; measured wall time lives in the
// manifest only.

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "estimate.hpp"
#include "exact.hpp"
#include "lattice.hpp"

namespace percolab {

using Json = nlohmann::json;

// full geometry dump: vertex coordinates, edge endpoints, carrier
// indexing, boundary role masks
inline nlohmann::json graph_json(const LatticeGraph& g) {
    nlohmann::json j;
    j["model"] = model_name(g.model());
    auto verts = nlohmann::json::array();
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        const Vec3& c = g.vertex(v);
        verts.push_back({{"x", c.x}, {"y", c.y}, {"z", c.z}, {"role", g.vertex_role(v)}});
    }
    j["vertices"] = std::move(verts);
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e[0], e[1]});
    j["edges"] = std::move(edges);
    auto carrier = nlohmann::json::array();
    for (std::uint32_t i = 0; i < g.carrier_size(); ++i) {
        const CarrierInfo ci = g.carrier_info(i);
        carrier.push_back({{"x", ci.base.x}, {"y", ci.base.y}, {"z", ci.base.z}, {"axis", ci.axis}});
    }
    j["carrier"] = std::move(carrier);
    return j;
}

inline Json estimate_json(const Estimate& e) {
    return Json{{"value", e.value},
                {"stderr", e.se},
                {"lo", e.lo},
                {"hi", e.hi},
                {"replicas", e.replicas},
                {"ci_method", e.method}};
}

// integer coefficients ascending in degree; values beyond 2^53 are emitted
// as decimal strings to stay exact
inline Json polynomial_json(const DensePolynomial& poly) {
    Json arr = Json::array();
    static const BigInt kSafeMax = (BigInt(1) << 53);
    for (const auto& c : poly.coeff) {
        if (c <= kSafeMax && c >= -kSafeMax)
            arr.push_back(static_cast<std::int64_t>(c));
        else
            arr.push_back(c.str());
    }
    return arr;
}

inline std::string csv_field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// One run = one directory holding results.jsonl, any CSV tables, and
// manifest.json written at the end.
class RunWriter {
public:
    explicit RunWriter(std::string dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
        results_.open(dir_ + "/results.jsonl", std::ios::trunc);
        if (!results_) throw std::runtime_error("cannot open " + dir_ + "/results.jsonl");
        outputs_.push_back("results.jsonl");
        start_ = std::chrono::steady_clock::now();
    }

    const std::string& dir() const { return dir_; }

    // canonical record: {op, model, params, estimate, stderr, replicas,
    // seed, wall_time}; wall_time is null so replays are byte-identical
    void record(const std::string& op, const std::string& model, const Json& params,
                const Estimate& est, std::uint64_t seed) {
        Json rec{{"op", op},          {"model", model},
                 {"params", params},  {"estimate", est.value},
                 {"stderr", est.se},  {"replicas", est.replicas},
                 {"seed", seed},      {"wall_time", nullptr}};
        raw_record(rec);
    }

    void raw_record(const Json& rec) { results_ << rec.dump() << "\n"; }

    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
        std::ofstream out(dir_ + "/" + name, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + dir_ + "/" + name);
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << "\n";
        }
        outputs_.push_back(name);
    }

    void write_manifest(const std::string& command, const Json& params,
                        std::uint64_t master_seed) {
        results_.flush();
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
        Json manifest{{"command", command},
                      {"params", params},
                      {"master_seed", master_seed},
                      {"version", "percolab 0.1.0"},
                      {"wall_time_ms", elapsed},
                      {"outputs", outputs_}};
        std::ofstream out(dir_ + "/manifest.json", std::ios::trunc);
        out << manifest.dump(2) << "\n";
    }

private:
    std::string dir_;
    std::ofstream results_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

inline Json load_manifest(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw std::runtime_error("no manifest.json in " + dir);
    Json m;
    try {
        in >> m;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("corrupt manifest: ") + e.what());
    }
    return m;
}

inline bool files_identical(const std::string& a, const std::string& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return ca == cb;
}

} // namespace percolab
