#pragma once

// Exhaustive enumeration over small ground sets. Events become truth
// tables (one bit per configuration), truth tables become exact
// polynomials in p, and the pivotality identity
//     d/dp P_p(A) = sum_e P_p(e pivotal for A)
// is checked as equality of integer coefficient vectors. No floating
// point enters any identity check; evaluation at a density uses exact
// rationals (a double converts exactly to a binary rational).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cube.hpp"
#include "parallel.hpp"

namespace percolab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kEnumerationCap = 24;

namespace detail {
inline void require_cap(std::size_t n, std::size_t cap) {
    if (n > cap)
        throw std::length_error("ground set of " + std::to_string(n) +
                                " elements exceeds the enumeration cap of " +
                                std::to_string(cap));
    if (n == 0) throw std::invalid_argument("empty ground set");
}

inline std::vector<std::vector<BigInt>> binomial_table(std::size_t n) {
    std::vector<std::vector<BigInt>> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1);
        for (std::size_t j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}
} // namespace detail

// one bit per configuration, index bits = element states
struct TruthTable {
    std::size_t n = 0;
    std::vector<std::uint64_t> bits;

    bool get(std::uint64_t idx) const { return (bits[idx >> 6] >> (idx & 63)) & 1u; }
    std::uint64_t configurations() const { return std::uint64_t{1} << n; }
};

inline TruthTable enumerate_event(const MonotoneEvent& a, std::size_t n,
                                  std::size_t cap = kEnumerationCap) {
    detail::require_cap(n, cap);
    TruthTable t;
    t.n = n;
    const std::uint64_t total = std::uint64_t{1} << n;
    t.bits.assign((total + 63) / 64, 0);
    parallel_for(t.bits.size(), [&](std::size_t wi) {
        std::uint64_t word = 0;
        const std::uint64_t base = static_cast<std::uint64_t>(wi) * 64;
        const std::uint64_t hi = std::min<std::uint64_t>(total - base, 64);
        for (std::uint64_t b = 0; b < hi; ++b) {
            const Configuration w = Configuration::from_index(n, base + b);
            if (a(w)) word |= std::uint64_t{1} << b;
        }
        t.bits[wi] = word;
    });
    return t;
}

// P_p(A) in Bernstein form: counts[k] accepting configurations with k open
struct EventPolynomial {
    std::size_t n = 0;
    std::vector<std::uint64_t> counts;

    double evaluate(double p) const {
        // stable enough for reporting; identity checks never use this path
        double sum = 0;
        for (std::size_t k = 0; k <= n; ++k) {
            double term = static_cast<double>(counts[k]);
            for (std::size_t i = 0; i < k; ++i) term *= p;
            for (std::size_t i = k; i < n; ++i) term *= 1 - p;
            sum += term;
        }
        return sum;
    }
};

inline EventPolynomial event_polynomial_from_table(const TruthTable& t) {
    EventPolynomial poly;
    poly.n = t.n;
    poly.counts.assign(t.n + 1, 0);
    for (std::uint64_t idx = 0; idx < t.configurations(); ++idx)
        if (t.get(idx)) ++poly.counts[static_cast<std::size_t>(std::popcount(idx))];
    return poly;
}

inline EventPolynomial event_polynomial(const MonotoneEvent& a, const GroundSet& e,
                                        std::size_t cap = kEnumerationCap) {
    return event_polynomial_from_table(enumerate_event(a, e.size, cap));
}

// dense univariate polynomial with exact integer coefficients, ascending degree
struct DensePolynomial {
    std::vector<BigInt> coeff;

    void trim() {
        while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
    }

    DensePolynomial derivative() const {
        DensePolynomial d;
        for (std::size_t k = 1; k < coeff.size(); ++k)
            d.coeff.push_back(coeff[k] * static_cast<unsigned>(k));
        d.trim();
        return d;
    }

    DensePolynomial& operator+=(const DensePolynomial& o) {
        if (o.coeff.size() > coeff.size()) coeff.resize(o.coeff.size(), 0);
        for (std::size_t k = 0; k < o.coeff.size(); ++k) coeff[k] += o.coeff[k];
        return *this;
    }

    friend bool operator==(const DensePolynomial& a, const DensePolynomial& b) {
        DensePolynomial x = a, y = b;
        x.trim();
        y.trim();
        return x.coeff == y.coeff;
    }

    BigRational evaluate(const BigRational& p) const {
        BigRational acc = 0;
        for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * p + BigRational(coeff[k]);
        return acc;
    }

    double evaluate(double p) const {
        return static_cast<double>(evaluate(BigRational(p)));
    }
};

// expand sum_k counts[k] p^k (1-p)^(m-k) into dense coefficients
inline DensePolynomial bernstein_to_dense(std::size_t m, const std::vector<std::uint64_t>& counts) {
    const auto binom = detail::binomial_table(m);
    DensePolynomial d;
    d.coeff.assign(m + 1, 0);
    for (std::size_t k = 0; k < counts.size() && k <= m; ++k) {
        if (!counts[k]) continue;
        const BigInt c = counts[k];
        for (std::size_t j = 0; j + k <= m; ++j) {
            const BigInt term = c * binom[m - k][j];
            if (j & 1) d.coeff[k + j] -= term;
            else d.coeff[k + j] += term;
        }
    }
    d.trim();
    return d;
}

inline DensePolynomial to_dense(const EventPolynomial& poly) {
    return bernstein_to_dense(poly.n, poly.counts);
}

// exact polynomial for P_p(e pivotal for A); for increasing A this equals
// the influence polynomial
inline DensePolynomial pivotal_polynomial_from_table(const TruthTable& t, std::size_t e) {
    if (e >= t.n) throw std::domain_error("element index out of range");
    std::vector<std::uint64_t> piv(t.n + 1, 0);
    const std::uint64_t bit = std::uint64_t{1} << e;
    for (std::uint64_t idx = 0; idx < t.configurations(); ++idx)
        if (t.get(idx | bit) && !t.get(idx & ~bit))
            ++piv[static_cast<std::size_t>(std::popcount(idx))];
    return bernstein_to_dense(t.n, piv);
}

inline DensePolynomial pivotal_polynomial(const MonotoneEvent& a, std::size_t e,
                                          const GroundSet& gs, std::size_t cap = kEnumerationCap) {
    return pivotal_polynomial_from_table(enumerate_event(a, gs.size, cap), e);
}

struct RussoReport {
    EventPolynomial event;
    DensePolynomial derivative;
    DensePolynomial pivotal_sum;
    bool equal = false;
};

// exhaustive single-flip monotonicity check on an enumerated table
inline bool table_is_increasing(const TruthTable& t) {
    for (std::size_t e = 0; e < t.n; ++e) {
        const std::uint64_t bit = std::uint64_t{1} << e;
        for (std::uint64_t idx = 0; idx < t.configurations(); ++idx)
            if (idx & bit && !t.get(idx) && t.get(idx & ~bit)) return false;
    }
    return true;
}

// Exact verification of the pivotality identity. The hypothesis (A
// increasing) is enforced by an exhaustive contract check first.
inline RussoReport verify_russo(const MonotoneEvent& a, const GroundSet& gs,
                                std::size_t cap = kEnumerationCap) {
    detail::require_cap(gs.size, cap);
    const TruthTable t = enumerate_event(a, gs.size, cap);
    if (!table_is_increasing(t))
        throw std::logic_error("event is not increasing; the identity's hypothesis fails");
    RussoReport rep;
    rep.event = event_polynomial_from_table(t);
    rep.derivative = to_dense(rep.event).derivative();
    for (std::size_t e = 0; e < gs.size; ++e)
        rep.pivotal_sum += pivotal_polynomial_from_table(t, e);
    rep.pivotal_sum.trim();
    rep.equal = rep.derivative == rep.pivotal_sum;
    return rep;
}

// I_{A,p}(e) = P_p(1_A(w_e) != 1_A(w^e)), exact rational evaluated to a
// double; defined for arbitrary events, increasing or not
inline double influence_exact(const MonotoneEvent& a, std::size_t e, double p,
                              const GroundSet& gs, std::size_t cap = kEnumerationCap) {
    detail::require_cap(gs.size, cap);
    if (e >= gs.size) throw std::domain_error("element index out of range");
    const TruthTable t = enumerate_event(a, gs.size, cap);
    const std::size_t m = gs.size - 1;
    std::vector<std::uint64_t> diff(m + 1, 0);
    const std::uint64_t bit = std::uint64_t{1} << e;
    for (std::uint64_t idx = 0; idx < t.configurations(); ++idx) {
        if (idx & bit) continue;  // reduced configuration with e removed
        if (t.get(idx | bit) != t.get(idx))
            ++diff[static_cast<std::size_t>(std::popcount(idx))];
    }
    const DensePolynomial d = bernstein_to_dense(m, diff);
    return static_cast<double>(d.evaluate(BigRational(p)));
}

// exact sign check of a polynomial on the uniform rational grid k/denom
inline bool nonnegative_on_grid(const DensePolynomial& d, unsigned denom = 40) {
    for (unsigned k = 0; k <= denom; ++k)
        if (d.evaluate(BigRational(k, denom)) < 0) return false;
    return true;
}

} // namespace percolab
