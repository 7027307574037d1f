#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bclab {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q" or "p" (decimal big-int digits, optional leading '-').
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        return rat(num, den);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational: '" + s + "'");
    }
}

inline std::string to_string(const Int& z) { return z.get_str(); }

/// Canonical "p/q" form; integers rendered without the "/1".
inline std::string to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Int pow_int(Int base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline bool fits_int64(const Int& z) { return z.fits_slong_p(); }

namespace detail {
// Pairwise sum on raw num/den pairs; canonicalization deferred to the caller.
inline void sum_range(std::span<const Rat> terms, Int& num, Int& den) {
    if (terms.empty()) {
        num = 0;
        den = 1;
        return;
    }
    if (terms.size() == 1) {
        num = terms[0].get_num();
        den = terms[0].get_den();
        return;
    }
    Int n1, d1, n2, d2;
    size_t half = terms.size() / 2;
    sum_range(terms.first(half), n1, d1);
    sum_range(terms.subspan(half), n2, d2);
    num = n1 * d2 + n2 * d1;
    den = d1 * d2;
}
}  // namespace detail

/// Exact sum of many rationals. Divide-and-conquer keeps intermediate
/// operand sizes balanced, which matters for 10^5-term harmonic-type sums.
inline Rat exact_sum(std::span<const Rat> terms) {
    Int num, den;
    detail::sum_range(terms, num, den);
    return rat(num, den);
}

inline Rat exact_sum(const std::vector<Rat>& terms) {
    return exact_sum(std::span<const Rat>(terms));
}

}  // namespace bclab
