#pragma once

// Packed bit vector used for percolation configurations and GF(2) rows.
// Fixed universe size, 64-bit word storage.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace percolab {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n, bool fill = false)
        : n_(n), words_((n + 63) / 64, fill ? ~std::uint64_t{0} : 0) {
        trim();
    }

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool none() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    // coordinatewise partial order
    bool leq(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool contains(const Bitset& o) const { return o.leq(*this); }

    Bitset& operator^=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    friend Bitset operator^(Bitset a, const Bitset& b) { a ^= b; return a; }
    friend bool operator==(const Bitset& a, const Bitset& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

    // index of lowest set bit, or size() if empty
    std::size_t lowest() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
        return n_;
    }

    std::uint64_t* words() { return words_.data(); }
    const std::uint64_t* words() const { return words_.data(); }
    std::size_t word_count() const { return words_.size(); }

    // load the n lowest bits from an integer index (enumeration order)
    static Bitset from_index(std::size_t n, std::uint64_t idx) {
        Bitset b(n);
        if (!b.words_.empty()) b.words_[0] = idx;
        b.trim();
        return b;
    }

private:
    void trim() {
        if (n_ & 63 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace percolab
