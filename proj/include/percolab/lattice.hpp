#pragma once

// Finite lattice geometries: boxes of Z^2 (bond and site), the matching
// lattice (square lattice plus both diagonals of every face, site models
// only), boxes of Z^3, and square annuli.
//
// Carrier indexing (the ground set of the percolation process) is
// documented and stable:
//   * bond models: edges, grouped by axis (x block, then y, then z), each
//     block in row-major order of the edge's base vertex (x fastest, then
//     y, then z); matching diagonals are not a bond carrier.
//   * site models: vertices in row-major order over the bounding box,
//     skipping absent cells (annulus hole).
// Every carrier element also has a packed geometry key so that counter-based
// sampling assigns the same uniform to the same physical element in nested
// or differently-sized regions.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cube.hpp"

namespace percolab {

enum class Model { BondZ2, SiteZ2, SiteZ2Matching, BondZ3, SiteZ3 };

inline bool model_is_bond(Model m) { return m == Model::BondZ2 || m == Model::BondZ3; }
inline bool model_is_site(Model m) { return !model_is_bond(m); }
inline bool model_is_3d(Model m) { return m == Model::BondZ3 || m == Model::SiteZ3; }

inline const char* model_name(Model m) {
    switch (m) {
        case Model::BondZ2: return "bond-z2";
        case Model::SiteZ2: return "site-z2";
        case Model::SiteZ2Matching: return "site-z2-matching";
        case Model::BondZ3: return "bond-z3";
        case Model::SiteZ3: return "site-z3";
    }
    return "?";
}

inline Model model_from_name(const std::string& s) {
    if (s == "bond-z2") return Model::BondZ2;
    if (s == "site-z2") return Model::SiteZ2;
    if (s == "site-z2-matching") return Model::SiteZ2Matching;
    if (s == "bond-z3") return Model::BondZ3;
    if (s == "site-z3") return Model::SiteZ3;
    throw std::invalid_argument("unknown model: " + s);
}

struct Vec3 {
    int x = 0, y = 0, z = 0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

namespace role {
inline constexpr std::uint8_t Left = 1;    // x == lo.x
inline constexpr std::uint8_t Right = 2;   // x == hi.x
inline constexpr std::uint8_t Bottom = 4;  // y == lo.y
inline constexpr std::uint8_t Top = 8;     // y == hi.y
inline constexpr std::uint8_t ZLow = 16;
inline constexpr std::uint8_t ZHigh = 32;
inline constexpr std::uint8_t Inner = 64;   // annulus: max-norm == n
inline constexpr std::uint8_t Outer = 128;  // annulus: max-norm == 3n
} // namespace role

// 2D box B(m,n) = [0,2m] x [0,2n]; 3D box [0,m] x [0,n] x [0,depth]
struct BoxSpec {
    int m = 1, n = 1;
    int depth = 0;
};

// annulus [-3n,3n]^2 minus the interior of [-n,n]^2
struct AnnulusSpec {
    int n = 1;
};

// carrier element geometry: axis -1 = site, 0/1/2 = edge along x/y/z
struct CarrierInfo {
    Vec3 base;
    int axis = -1;
};

inline std::uint64_t pack_geometry_key(const Vec3& v, int axis) {
    auto u = [](int c) { return static_cast<std::uint64_t>(c + 0x8000) & 0xFFFFu; };
    return (u(v.x) << 48) | (u(v.y) << 32) | (u(v.z) << 16) |
           static_cast<std::uint64_t>(axis + 1);
}

class LatticeGraph {
public:
    Model model() const { return model_; }
    bool is_bond() const { return model_is_bond(model_); }
    bool is_3d() const { return model_is_3d(model_); }

    std::size_t vertex_count() const { return verts_.size(); }
    const Vec3& vertex(std::uint32_t v) const { return verts_[v]; }
    std::uint8_t vertex_role(std::uint32_t v) const { return roles_[v]; }

    // -1 when the cell is outside the region
    std::int32_t vertex_at(const Vec3& c) const {
        if (c.x < lo_.x || c.x > hi_.x || c.y < lo_.y || c.y > hi_.y || c.z < lo_.z ||
            c.z > hi_.z)
            return -1;
        const std::size_t w = static_cast<std::size_t>(hi_.x - lo_.x + 1);
        const std::size_t h = static_cast<std::size_t>(hi_.y - lo_.y + 1);
        const std::size_t idx = (static_cast<std::size_t>(c.z - lo_.z) * h +
                                 static_cast<std::size_t>(c.y - lo_.y)) *
                                    w +
                                static_cast<std::size_t>(c.x - lo_.x);
        return grid_[idx];
    }

    const std::vector<std::array<std::uint32_t, 2>>& edges() const { return edges_; }

    // lattice adjacency (includes matching diagonals for the matching model)
    const std::uint32_t* neighbors_begin(std::uint32_t v) const { return adj_.data() + adj_off_[v]; }
    const std::uint32_t* neighbors_end(std::uint32_t v) const { return adj_.data() + adj_off_[v + 1]; }
    std::size_t degree(std::uint32_t v) const { return adj_off_[v + 1] - adj_off_[v]; }

    std::size_t carrier_size() const { return is_bond() ? edges_.size() : verts_.size(); }

    CarrierInfo carrier_info(std::uint32_t i) const {
        if (i >= carrier_size()) throw std::domain_error("carrier index out of range");
        if (!is_bond()) return {verts_[i], -1};
        return {edge_base_[i], edge_axis_[i]};
    }

    std::uint32_t carrier_index(const CarrierInfo& ci) const {
        if (!is_bond()) {
            if (ci.axis != -1) throw std::domain_error("site model carrier has no axis");
            const std::int32_t v = vertex_at(ci.base);
            if (v < 0) throw std::domain_error("vertex not in region");
            return static_cast<std::uint32_t>(v);
        }
        const std::uint64_t key = pack_geometry_key(ci.base, ci.axis);
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (carrier_keys_[i] == key) return static_cast<std::uint32_t>(i);
        throw std::domain_error("edge not in region");
    }

    std::uint64_t carrier_key(std::uint32_t i) const { return carrier_keys_[i]; }

    // stable element name: axis letter (s for sites, d/a for the two face
    // diagonals) plus base coordinates
    std::string carrier_label(std::uint32_t i) const {
        const CarrierInfo ci = carrier_info(i);
        static constexpr const char* kAxis[] = {"x", "y", "z", "d", "a"};
        std::string s = ci.axis < 0 ? "s" : kAxis[ci.axis];
        s += "(" + std::to_string(ci.base.x) + "," + std::to_string(ci.base.y);
        if (is_3d()) s += "," + std::to_string(ci.base.z);
        return s + ")";
    }

    GroundSet ground_set() const {
        std::vector<std::string> labels;
        labels.reserve(carrier_size());
        for (std::uint32_t i = 0; i < carrier_size(); ++i) labels.push_back(carrier_label(i));
        return {carrier_size(), std::move(labels)};
    }

    Vec3 box_lo() const { return lo_; }
    Vec3 box_hi() const { return hi_; }
    int annulus_n() const { return annulus_n_; }  // 0 for plain boxes

    // --- builders ---------------------------------------------------------

    static LatticeGraph box(Model model, const BoxSpec& spec) {
        if (spec.m < 1 || spec.n < 1) throw std::invalid_argument("box dimensions must be >= 1");
        LatticeGraph g;
        g.model_ = model;
        if (model_is_3d(model)) {
            if (spec.depth < 1) throw std::invalid_argument("3d box needs depth >= 1");
            g.lo_ = {0, 0, 0};
            g.hi_ = {spec.m, spec.n, spec.depth};
        } else {
            g.lo_ = {0, 0, 0};
            g.hi_ = {2 * spec.m, 2 * spec.n, 0};
        }
        g.build_from_predicate([](const Vec3&) { return true; });
        g.assign_box_roles();
        return g;
    }

    static LatticeGraph annulus(const AnnulusSpec& spec, Model model) {
        if (spec.n < 1) throw std::invalid_argument("annulus n must be >= 1");
        if (model_is_3d(model)) throw std::invalid_argument("annulus is a 2d region");
        LatticeGraph g;
        g.model_ = model;
        g.annulus_n_ = spec.n;
        const int n = spec.n;
        g.lo_ = {-3 * n, -3 * n, 0};
        g.hi_ = {3 * n, 3 * n, 0};
        g.build_from_predicate([n](const Vec3& v) {
            const int norm = std::max(std::abs(v.x), std::abs(v.y));
            return norm >= n;
        });
        for (std::uint32_t v = 0; v < g.verts_.size(); ++v) {
            const int norm = std::max(std::abs(g.verts_[v].x), std::abs(g.verts_[v].y));
            if (norm == n) g.roles_[v] |= role::Inner;
            if (norm == 3 * n) g.roles_[v] |= role::Outer;
        }
        return g;
    }

private:
    template <class Pred>
    void build_from_predicate(Pred inside) {
        const std::size_t w = static_cast<std::size_t>(hi_.x - lo_.x + 1);
        const std::size_t h = static_cast<std::size_t>(hi_.y - lo_.y + 1);
        const std::size_t d = static_cast<std::size_t>(hi_.z - lo_.z + 1);
        if (w * h * d > (std::size_t{1} << 26))
            throw std::length_error("lattice region exceeds the 2^26 vertex limit");

        grid_.assign(w * h * d, -1);
        for (int z = lo_.z; z <= hi_.z; ++z)
            for (int y = lo_.y; y <= hi_.y; ++y)
                for (int x = lo_.x; x <= hi_.x; ++x) {
                    const Vec3 c{x, y, z};
                    if (!inside(c)) continue;
                    const std::size_t idx =
                        (static_cast<std::size_t>(z - lo_.z) * h +
                         static_cast<std::size_t>(y - lo_.y)) *
                            w +
                        static_cast<std::size_t>(x - lo_.x);
                    grid_[idx] = static_cast<std::int32_t>(verts_.size());
                    verts_.push_back(c);
                }
        roles_.assign(verts_.size(), 0);

        // nearest-neighbour edges, x block then y block then z block
        const int axes = model_is_3d(model_) ? 3 : 2;
        const Vec3 unit[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (int a = 0; a < axes; ++a)
            for (std::uint32_t v = 0; v < verts_.size(); ++v) {
                const Vec3 c = verts_[v];
                const Vec3 nb{c.x + unit[a].x, c.y + unit[a].y, c.z + unit[a].z};
                const std::int32_t u = vertex_at(nb);
                if (u < 0) continue;
                edges_.push_back({v, static_cast<std::uint32_t>(u)});
                edge_base_.push_back(c);
                edge_axis_.push_back(a);
            }

        // matching lattice: both diagonals of every unit face
        if (model_ == Model::SiteZ2Matching)
            for (std::uint32_t v = 0; v < verts_.size(); ++v) {
                const Vec3 c = verts_[v];
                const std::int32_t ne = vertex_at({c.x + 1, c.y + 1, c.z});
                const std::int32_t e = vertex_at({c.x + 1, c.y, c.z});
                const std::int32_t n = vertex_at({c.x, c.y + 1, c.z});
                if (ne >= 0) {
                    edges_.push_back({v, static_cast<std::uint32_t>(ne)});
                    edge_base_.push_back(c);
                    edge_axis_.push_back(3);  // main diagonal
                }
                if (e >= 0 && n >= 0) {
                    edges_.push_back({static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(n)});
                    edge_base_.push_back(c);
                    edge_axis_.push_back(4);  // anti-diagonal
                }
            }

        carrier_keys_.clear();
        if (is_bond()) {
            carrier_keys_.reserve(edges_.size());
            for (std::size_t i = 0; i < edges_.size(); ++i)
                carrier_keys_.push_back(pack_geometry_key(edge_base_[i], edge_axis_[i]));
        } else {
            carrier_keys_.reserve(verts_.size());
            for (const auto& c : verts_) carrier_keys_.push_back(pack_geometry_key(c, -1));
        }

        build_adjacency();
    }

    void build_adjacency() {
        adj_off_.assign(verts_.size() + 1, 0);
        for (const auto& e : edges_) {
            ++adj_off_[e[0] + 1];
            ++adj_off_[e[1] + 1];
        }
        for (std::size_t i = 1; i < adj_off_.size(); ++i) adj_off_[i] += adj_off_[i - 1];
        adj_.assign(adj_off_.back(), 0);
        std::vector<std::uint32_t> cursor(adj_off_.begin(), adj_off_.end() - 1);
        for (const auto& e : edges_) {
            adj_[cursor[e[0]]++] = e[1];
            adj_[cursor[e[1]]++] = e[0];
        }
    }

    void assign_box_roles() {
        for (std::uint32_t v = 0; v < verts_.size(); ++v) {
            const Vec3 c = verts_[v];
            if (c.x == lo_.x) roles_[v] |= role::Left;
            if (c.x == hi_.x) roles_[v] |= role::Right;
            if (c.y == lo_.y) roles_[v] |= role::Bottom;
            if (c.y == hi_.y) roles_[v] |= role::Top;
            if (is_3d()) {
                if (c.z == lo_.z) roles_[v] |= role::ZLow;
                if (c.z == hi_.z) roles_[v] |= role::ZHigh;
            }
        }
    }

    Model model_ = Model::BondZ2;
    Vec3 lo_, hi_;
    int annulus_n_ = 0;
    std::vector<Vec3> verts_;
    std::vector<std::uint8_t> roles_;
    std::vector<std::int32_t> grid_;
    std::vector<std::array<std::uint32_t, 2>> edges_;
    std::vector<Vec3> edge_base_;
    std::vector<std::uint8_t> edge_axis_;
    std::vector<std::uint64_t> carrier_keys_;
    std::vector<std::uint32_t> adj_off_, adj_;
};

inline LatticeGraph build_box(Model model, const BoxSpec& spec) {
    return LatticeGraph::box(model, spec);
}
inline LatticeGraph build_annulus(const AnnulusSpec& spec, Model model) {
    return LatticeGraph::annulus(spec, model);
}

// endpoints of a carrier edge; axis 3 = main diagonal, axis 4 = anti-diagonal
inline std::pair<Vec3, Vec3> edge_endpoints(const CarrierInfo& ci) {
    const Vec3 b = ci.base;
    switch (ci.axis) {
        case 0: return {b, {b.x + 1, b.y, b.z}};
        case 1: return {b, {b.x, b.y + 1, b.z}};
        case 2: return {b, {b.x, b.y, b.z + 1}};
        case 3: return {b, {b.x + 1, b.y + 1, b.z}};
        case 4: return {{b.x + 1, b.y, b.z}, {b.x, b.y + 1, b.z}};
        default: throw std::domain_error("not an edge carrier");
    }
}

// canonical (base, axis) for an unordered 2D endpoint pair
inline CarrierInfo edge_from_endpoints(Vec3 a, Vec3 b) {
    Vec3 d{b.x - a.x, b.y - a.y, b.z - a.z};
    if (d.x + d.y + d.z < 0 || (d.x == 1 && d.y == -1)) {
        std::swap(a, b);
        d = {-d.x, -d.y, -d.z};
    }
    if (d.x == 1 && d.y == 0 && d.z == 0) return {a, 0};
    if (d.x == 0 && d.y == 1 && d.z == 0) return {a, 1};
    if (d.x == 0 && d.y == 0 && d.z == 1) return {a, 2};
    if (d.x == 1 && d.y == 1) return {a, 3};
    if (d.x == -1 && d.y == 1) return {{a.x - 1, a.y, a.z}, 4};
    throw std::domain_error("endpoints are not lattice-adjacent");
}

enum class ReflectAxis { Horizontal, Vertical, Diagonal };

// carrier permutation induced by reflecting a 2D box across an axis;
// Diagonal (swap x and y) requires a square box
inline std::vector<std::uint32_t> reflection_permutation(const LatticeGraph& g, ReflectAxis ax) {
    if (g.is_3d()) throw std::invalid_argument("reflection permutation is 2d only");
    const Vec3 lo = g.box_lo(), hi = g.box_hi();
    if (ax == ReflectAxis::Diagonal && (hi.x - lo.x) != (hi.y - lo.y))
        throw std::invalid_argument("diagonal reflection needs a square box");
    auto reflect_vertex = [&](Vec3 c) {
        switch (ax) {
            case ReflectAxis::Horizontal: c.x = hi.x + lo.x - c.x; break;
            case ReflectAxis::Vertical: c.y = hi.y + lo.y - c.y; break;
            case ReflectAxis::Diagonal: std::swap(c.x, c.y); break;
        }
        return c;
    };
    std::vector<std::uint32_t> perm(g.carrier_size());
    for (std::uint32_t i = 0; i < g.carrier_size(); ++i) {
        const CarrierInfo ci = g.carrier_info(i);
        if (ci.axis == -1) {
            perm[i] = g.carrier_index({reflect_vertex(ci.base), -1});
            continue;
        }
        const auto [a, b] = edge_endpoints(ci);
        perm[i] = g.carrier_index(edge_from_endpoints(reflect_vertex(a), reflect_vertex(b)));
    }
    return perm;
}

} // namespace percolab
