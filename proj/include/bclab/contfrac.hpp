#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "numtheory.hpp"
#include "rational.hpp"

namespace bclab {

/// Thrown when a window threshold cannot be met within the configured
/// support horizon of psi (or the end of an f table).
struct horizon_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic primality for word-sized inputs (Miller-Rabin with a base
/// set proven complete below 3.3 * 10^24); BPSW + Miller-Rabin rounds above.
inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p()) {
        u64 v = n.get_ui();
        if (v < 2) return false;
        for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 37ULL})
            if (v % p == 0) return v == p;
        auto mulmod = [](u64 a, u64 b, u64 m) -> u64 {
            return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
        };
        auto powmod = [&](u64 a, u64 e, u64 m) -> u64 {
            u64 r = 1;
            a %= m;
            while (e) {
                if (e & 1) r = mulmod(r, a, m);
                a = mulmod(a, a, m);
                e >>= 1;
            }
            return r;
        };
        u64 d = v - 1;
        unsigned s = 0;
        while ((d & 1) == 0) {
            d >>= 1;
            ++s;
        }
        for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                      31ULL, 37ULL}) {
            u64 x = powmod(a, d, v);
            if (x == 1 || x == v - 1) continue;
            bool witness = true;
            for (unsigned i = 1; i < s; ++i) {
                x = mulmod(x, x, v);
                if (x == v - 1) {
                    witness = false;
                    break;
                }
            }
            if (witness) return false;
        }
        return true;
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;
}

/// Continued-fraction expansion [a0; a1, a2, ...] with big-integer
/// convergents p_k/q_k (k counts quotients consumed; p_0/q_0 = a0/1).
class CFExpansion {
   public:
    explicit CFExpansion(Int a0 = 0) : a0_(std::move(a0)) {
        ps_ = {a0_};
        qs_ = {Int(1)};
    }

    void push_quotient(const Int& a) {
        if (a < 1) throw std::invalid_argument("CFExpansion: quotient must be >= 1");
        quotients_.push_back(a);
        size_t k = quotients_.size();
        Int p = a * ps_[k - 1] + (k >= 2 ? ps_[k - 2] : Int(1));
        Int q = a * qs_[k - 1] + (k >= 2 ? qs_[k - 2] : Int(0));
        ps_.push_back(p);
        qs_.push_back(q);
    }

    const Int& a0() const { return a0_; }
    const std::vector<Int>& quotients() const { return quotients_; }
    size_t length() const { return quotients_.size(); }

    /// p_k/q_k after consuming k quotients (k = 0 gives a0/1).
    std::pair<Int, Int> convergent(size_t k) const {
        if (k >= ps_.size()) throw std::invalid_argument("convergent: index out of range");
        return {ps_[k], qs_[k]};
    }

    const Int& q_at(size_t k) const {
        if (k >= qs_.size()) throw std::invalid_argument("q_at: index out of range");
        return qs_[k];
    }

    /// Exact value of the finite expansion.
    Rat value() const { return rat(ps_.back(), qs_.back()); }

   private:
    Int a0_;
    std::vector<Int> quotients_;
    std::vector<Int> ps_, qs_;
};

/// k-th convergent in the usual enumeration that starts at [a0; a1].
inline std::pair<Int, Int> convergents(const CFExpansion& cf, size_t k) {
    return cf.convergent(k + 1);
}

inline CFExpansion cf_of_rational(const Int& A, const Int& B) {
    if (B <= 0) throw std::invalid_argument("cf_of_rational: denominator must be positive");
    Int g;
    mpz_gcd(g.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
    if (g != 1) throw std::invalid_argument("cf_of_rational: gcd(A,B) must be 1");
    Int num = A, den = B;
    Int a0;
    mpz_fdiv_q(a0.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    CFExpansion cf(a0);
    Int rem = num - a0 * den;
    // Euclid on (den, rem).
    Int x = den, y = rem;
    while (y > 0) {
        Int a = x / y;
        cf.push_quotient(a);
        Int r = x % y;
        x = y;
        y = r;
    }
    return cf;
}

/// Certified upper bound 1/(q_k q_{k+1}) on |gamma - p_k/q_k|, with k in the
/// same enumeration as convergents().
inline Rat approx_error_upper(const CFExpansion& cf, size_t k) {
    if (k + 2 > cf.length())
        throw std::invalid_argument("approx_error_upper: k out of range");
    return rat(Int(1), cf.q_at(k + 1) * cf.q_at(k + 2));
}

/// Lower bound on max_{k<=K} log a_{k+1} / log q_k at finite depth, as an
/// exact rational with denominator 8. Comparisons are pure big-integer
/// power checks; no logarithms are evaluated.
inline Rat liouville_margin(const CFExpansion& cf, size_t K) {
    Rat best(0);
    for (size_t k = 1; k <= K && k < cf.length(); ++k) {
        const Int& q = cf.q_at(k);
        const Int& a = cf.quotients()[k];  // a_{k+1}
        if (q < 2 || a < 2) continue;
        // Largest s with a^8 >= q^s, found by bracketed binary search.
        Int a8 = pow_int(a, 8);
        unsigned long lo = 0,
                      hi = 8 * static_cast<unsigned long>(mpz_sizeinbase(a.get_mpz_t(), 2)) + 8;
        while (lo < hi) {
            unsigned long mid = (lo + hi + 1) / 2;
            if (pow_int(q, mid) <= a8)
                lo = mid;
            else
                hi = mid - 1;
        }
        Rat margin = rat(static_cast<long>(lo), 8);
        if (margin > best) best = margin;
    }
    return best;
}

/// One inductive step of a gamma construction, with every inequality
/// recorded for later bit-for-bit revalidation.
struct GammaStep {
    size_t k = 0;         // index of the chosen quotient
    Int window_lo, window_hi;
    Rat sum;              // exact window sum (psi mode) or f value (f mode)
    Int bound;            // q_{k-1}^9
    Int a_k;
    Int q_k;
    Int q_prev;           // q_{k-1}
    Int margin_bound;     // q_{k-1}^i, the Liouville margin requirement
};

struct GammaCertificate {
    std::string kind;  // "psi" or "f"
    bool prime_denominators = false;
    std::map<size_t, Int> fixed_pattern;      // K0: k -> a_k
    std::map<u64, Rat> psi_table;             // psi mode: finite support table
    std::vector<std::pair<Int, Int>> f_table; // f mode: (q, f(q)), monotone
    std::vector<GammaStep> steps;
};

namespace detail {

inline Int choose_quotient(const Int& a_min, const Int& q_prev, const Int& q_prev2,
                           bool prime_denominators, Int* q_out) {
    Int a = a_min < 1 ? Int(1) : a_min;
    Int q = a * q_prev + q_prev2;
    if (prime_denominators) {
        while (!is_prime(q)) {
            a += 1;
            q += q_prev;
        }
    }
    *q_out = q;
    return a;
}

/// Indices not claimed by K0, in increasing order.
inline size_t next_free_index(const std::map<size_t, Int>& k0, size_t after) {
    size_t k = after + 1;
    while (k0.count(k)) ++k;
    return k;
}

}  // namespace detail

/// Builds gamma = [0; a_1, a_2, ...] for a given psi: at each free index k_i
/// the window (Q_{i-1}, Q_i] is extended until the exact partial sum of
/// psi(q) phi(q)/q reaches q_{k_i - 1}^9, then a_{k_i} is taken as the
/// smallest integer with a >= Q_i^2 and a >= q_{k_i-1}^i (and, optionally,
/// prime q_{k_i}). Minimality makes the output deterministic.
inline std::pair<CFExpansion, GammaCertificate> construct_gamma_for_psi(
    const std::map<u64, Rat>& psi_table, const std::map<size_t, Int>& fixed_pattern,
    size_t steps, bool prime_denominators = false) {
    for (const auto& [q, v] : psi_table)
        if (v < 0) throw std::invalid_argument("construct_gamma_for_psi: psi must be >= 0");
    u64 horizon = 0;
    for (const auto& [q, v] : psi_table)
        if (v > 0) horizon = std::max(horizon, q);

    GammaCertificate cert;
    cert.kind = "psi";
    cert.prime_denominators = prime_denominators;
    cert.fixed_pattern = fixed_pattern;
    cert.psi_table = psi_table;

    CFExpansion cf(0);
    size_t last_k = 0;
    Int Q_prev(0);
    for (size_t i = 1; i <= steps; ++i) {
        size_t k_i = detail::next_free_index(fixed_pattern, last_k);
        for (size_t k = last_k + 1; k < k_i; ++k) cf.push_quotient(fixed_pattern.at(k));
        // copy: push_quotient below may reallocate the convergent table
        const Int q_prev = cf.q_at(k_i - 1);
        const Int q_prev2 = k_i >= 2 ? cf.q_at(k_i - 2) : Int(0);
        Int bound = pow_int(q_prev, 9);

        Rat sum(0);
        Int Q = Q_prev;
        u64 q = Q_prev.fits_ulong_p() ? Q_prev.get_ui() : horizon + 1;
        while (sum < bound) {
            ++q;
            if (q > horizon)
                throw horizon_error(
                    "window " + std::to_string(i) + " cannot reach threshold " +
                    to_string(bound) + ": psi support exhausted at q = " +
                    std::to_string(horizon));
            auto it = psi_table.find(q);
            if (it == psi_table.end() || it->second == 0) continue;
            sum += it->second * rat(static_cast<long>(euler_phi(q)), static_cast<long>(q));
            Q = static_cast<long>(q);
        }

        Int a_min = Q * Q;
        Int margin = pow_int(q_prev, static_cast<unsigned long>(i));
        if (margin > a_min) a_min = margin;
        Int q_k;
        Int a = detail::choose_quotient(a_min, q_prev, q_prev2, prime_denominators, &q_k);
        cf.push_quotient(a);

        GammaStep step;
        step.k = k_i;
        step.window_lo = Q_prev + 1;
        step.window_hi = Q;
        step.sum = sum;
        step.bound = bound;
        step.a_k = a;
        step.q_k = q_k;
        step.q_prev = q_prev;
        step.margin_bound = pow_int(q_prev, static_cast<unsigned long>(i));
        cert.steps.push_back(step);

        last_k = k_i;
        Q_prev = Q;
    }
    return {std::move(cf), std::move(cert)};
}

/// Builds gamma for a monotone unbounded table f: a_{k_i} is at least the
/// least table point q with f(q) >= q_{k_i-1}^9, subject to the same
/// Liouville margin and optional primality as the psi construction.
inline std::pair<CFExpansion, GammaCertificate> construct_gamma_for_f(
    const std::vector<std::pair<Int, Int>>& f_table,
    const std::map<size_t, Int>& fixed_pattern, size_t steps,
    bool prime_denominators = false) {
    for (size_t i = 1; i < f_table.size(); ++i) {
        if (f_table[i].first <= f_table[i - 1].first ||
            f_table[i].second < f_table[i - 1].second)
            throw std::invalid_argument("construct_gamma_for_f: table must be monotone");
    }

    GammaCertificate cert;
    cert.kind = "f";
    cert.prime_denominators = prime_denominators;
    cert.fixed_pattern = fixed_pattern;
    cert.f_table = f_table;

    CFExpansion cf(0);
    size_t last_k = 0;
    for (size_t i = 1; i <= steps; ++i) {
        size_t k_i = detail::next_free_index(fixed_pattern, last_k);
        for (size_t k = last_k + 1; k < k_i; ++k) cf.push_quotient(fixed_pattern.at(k));
        // copy: push_quotient below may reallocate the convergent table
        const Int q_prev = cf.q_at(k_i - 1);
        const Int q_prev2 = k_i >= 2 ? cf.q_at(k_i - 2) : Int(0);
        Int bound = pow_int(q_prev, 9);

        auto it = std::find_if(f_table.begin(), f_table.end(),
                               [&](const auto& e) { return e.second >= bound; });
        if (it == f_table.end())
            throw horizon_error("f table exhausted before reaching threshold " +
                                to_string(bound));

        Int a_min = std::max(it->first, pow_int(q_prev, static_cast<unsigned long>(i)));
        Int q_k;
        Int a = detail::choose_quotient(a_min, q_prev, q_prev2, prime_denominators, &q_k);
        cf.push_quotient(a);

        GammaStep step;
        step.k = k_i;
        step.window_lo = it->first;
        step.window_hi = it->first;
        step.sum = rat(it->second, Int(1));
        step.bound = bound;
        step.a_k = a;
        step.q_k = q_k;
        step.q_prev = q_prev;
        step.margin_bound = pow_int(q_prev, static_cast<unsigned long>(i));
        cert.steps.push_back(step);

        last_k = k_i;
    }
    return {std::move(cf), std::move(cert)};
}

/// Revalidates every recorded inequality from scratch: window sums are
/// recomputed from the embedded table and must agree bit-for-bit.
inline bool verify_certificate(const GammaCertificate& cert,
                               std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    CFExpansion cf(0);
    size_t last_k = 0;
    Int Q_prev(0);
    for (size_t i = 1; i <= cert.steps.size(); ++i) {
        const GammaStep& step = cert.steps[i - 1];
        size_t k_i = detail::next_free_index(cert.fixed_pattern, last_k);
        if (k_i != step.k) return fail("step index mismatch");
        for (size_t k = last_k + 1; k < k_i; ++k)
            cf.push_quotient(cert.fixed_pattern.at(k));
        const Int& q_prev = cf.q_at(k_i - 1);
        if (q_prev != step.q_prev) return fail("q_prev mismatch");
        if (step.bound != pow_int(q_prev, 9)) return fail("bound mismatch");
        if (step.margin_bound != pow_int(q_prev, static_cast<unsigned long>(i)))
            return fail("margin bound mismatch");
        if (step.a_k < step.margin_bound) return fail("Liouville margin violated");

        if (cert.kind == "psi") {
            if (step.window_lo != Q_prev + 1) return fail("window start mismatch");
            Rat sum(0);
            for (u64 q = step.window_lo.get_ui(); q <= step.window_hi.get_ui(); ++q) {
                auto it = cert.psi_table.find(q);
                if (it == cert.psi_table.end() || it->second == 0) continue;
                sum += it->second *
                       rat(static_cast<long>(euler_phi(q)), static_cast<long>(q));
            }
            if (sum != step.sum) return fail("window sum mismatch");
            if (sum < step.bound) return fail("window sum below threshold");
            if (step.a_k < step.window_hi * step.window_hi)
                return fail("a_k below Q_i^2");
            Q_prev = step.window_hi;
        } else if (cert.kind == "f") {
            auto it = std::find_if(cert.f_table.begin(), cert.f_table.end(),
                                   [&](const auto& e) { return e.second >= step.bound; });
            if (it == cert.f_table.end() || it->first != step.window_lo)
                return fail("f threshold mismatch");
            if (step.sum != rat(it->second, Int(1))) return fail("f value mismatch");
            if (step.a_k < it->first) return fail("a_k below f threshold");
        } else {
            return fail("unknown certificate kind");
        }

        cf.push_quotient(step.a_k);
        if (cf.q_at(k_i) != step.q_k) return fail("q_k mismatch");
        if (cert.prime_denominators && !is_prime(step.q_k))
            return fail("q_k not prime");
        last_k = k_i;
    }
    return true;
}

}  // namespace bclab
