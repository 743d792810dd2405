#pragma once

// Incremental GF(2) span over bitset rows. Rows are kept in echelon form
// keyed by lowest set bit; membership queries reduce a copy.

#include <cstdint>
#include <vector>

#include "bitset.hpp"

namespace percolab {

class Gf2Basis {
public:
    explicit Gf2Basis(std::size_t dim) : dim_(dim), row_at_pivot_(dim, -1) {}

    std::size_t rank() const { return rows_.size(); }
    std::size_t dimension() const { return dim_; }

    // reduce v against the basis in place; returns the residual's lowest
    // set bit, or dim if v lies in the span
    std::size_t reduce(Bitset& v) const {
        for (;;) {
            const std::size_t pos = v.lowest();
            if (pos >= dim_) return dim_;
            const std::int32_t r = row_at_pivot_[pos];
            if (r < 0) return pos;
            v ^= rows_[static_cast<std::size_t>(r)];
        }
    }

    bool in_span(Bitset v) const { return reduce(v) >= dim_; }

    // returns true when the vector enlarged the span
    bool insert(Bitset v) {
        const std::size_t pos = reduce(v);
        if (pos >= dim_) return false;
        row_at_pivot_[pos] = static_cast<std::int32_t>(rows_.size());
        rows_.push_back(std::move(v));
        return true;
    }

private:
    std::size_t dim_;
    std::vector<Bitset> rows_;
    std::vector<std::int32_t> row_at_pivot_;
};

} // namespace percolab
