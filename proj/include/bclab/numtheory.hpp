#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace bclab {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// prime -> exponent, strictly increasing primes.
using Factorization = std::vector<std::pair<u64, unsigned>>;

/// Smallest-prime-factor sieve. Built once, read-only afterwards.
class Sieve {
   public:
    explicit Sieve(u64 limit) : limit_(limit), spf_(limit + 1, 0) {
        for (u64 i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                primes_.push_back(i);
                for (u64 j = i; j <= limit; j += i)
                    if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
            }
        }
    }

    u64 limit() const { return limit_; }
    const std::vector<u64>& primes() const { return primes_; }
    bool is_prime(u64 q) const { return q >= 2 && q <= limit_ && spf_[q] == q; }

    /// Deterministic factorization. Inputs beyond limit^2 are rejected so
    /// every factorization stays certain.
    Factorization factor(u64 q) const {
        if (q == 0) throw std::invalid_argument("factor: q must be >= 1");
        Factorization f;
        while (q > 1 && q <= limit_) {
            u64 p = spf_[q];
            unsigned e = 0;
            while (q % p == 0) {
                q /= p;
                ++e;
            }
            f.push_back({p, e});
        }
        if (q > 1) {
            // Trial division by sieved primes; any survivor above limit^2
            // could be composite, which we refuse to guess about.
            for (u64 p : primes_) {
                if (p * p > q) break;
                if (q % p == 0) {
                    unsigned e = 0;
                    while (q % p == 0) {
                        q /= p;
                        ++e;
                    }
                    f.push_back({p, e});
                }
            }
            if (q > 1) {
                if (q > limit_ * limit_)
                    throw std::invalid_argument("factor: input exceeds sieve range");
                f.push_back({q, 1});
            }
        }
        std::sort(f.begin(), f.end());
        return f;
    }

   private:
    u64 limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<u64> primes_;
};

inline const Sieve& default_sieve() {
    static const Sieve sieve(1'000'000);
    return sieve;
}

inline Factorization factor(u64 q) { return default_sieve().factor(q); }

inline u64 euler_phi(u64 q) {
    u64 out = q;
    for (const auto& [p, e] : factor(q)) out -= out / p;
    return out;
}

inline int moebius(u64 q) {
    auto f = factor(q);
    for (const auto& [p, e] : f)
        if (e > 1) return 0;
    return f.size() % 2 == 0 ? 1 : -1;
}

inline u64 tau(u64 q) {
    u64 out = 1;
    for (const auto& [p, e] : factor(q)) out *= e + 1;
    return out;
}

/// Number of distinct prime factors.
inline unsigned omega(u64 q) { return static_cast<unsigned>(factor(q).size()); }

/// phi(q,b) = phi(q) * prod_{p | (q,b)} (1 + 1/(p-1)); always an integer
/// since each factor cancels against phi's local (1 - 1/p).
inline u64 phi_qb(u64 q, u64 b) {
    if (q == 0 || b == 0) throw std::invalid_argument("phi_qb: arguments must be >= 1");
    // Equivalently q * prod_{p | q, p not | b} (1 - 1/p).
    u64 out = q;
    for (const auto& [p, e] : factor(q))
        if (b % p != 0) out -= out / p;
    return out;
}

struct ResidueSet {
    u64 modulus = 0;
    std::vector<u64> members;  // sorted subset of Z_q

    u64 size() const { return members.size(); }
};

namespace detail {
inline u64 mod_pos(i64 a, u64 q) {
    i64 m = a % static_cast<i64>(q);
    return static_cast<u64>(m < 0 ? m + static_cast<i64>(q) : m);
}
}  // namespace detail

/// I_q = {a in Z_q : (A + aB, q) = 1} by direct gcd enumeration.
inline ResidueSet enumerate_Iq(u64 q, i64 A, u64 B) {
    if (q == 0 || B == 0) throw std::invalid_argument("enumerate_Iq: q, B must be >= 1");
    if (std::gcd(detail::mod_pos(A, B), B) != 1)
        throw std::invalid_argument("enumerate_Iq: gcd(A,B) must be 1");
    ResidueSet out;
    out.modulus = q;
    u64 r = detail::mod_pos(A, q);
    u64 step = B % q;
    for (u64 a = 0; a < q; ++a) {
        if (std::gcd(r, q) == 1) out.members.push_back(a);
        r += step;
        if (r >= q) r -= q;
    }
    return out;
}

/// |I_q| by enumeration, avoiding storage. Divisibility is tracked
/// incrementally per prime factor of q, so the inner loop is addition-only.
inline u64 count_Iq(u64 q, i64 A, u64 B) {
    if (q == 0 || B == 0) throw std::invalid_argument("count_Iq: q, B must be >= 1");
    auto f = factor(q);
    // Residues A + aB mod p for each p | q; a residue of 0 disqualifies a.
    std::vector<u64> ps, rs, steps;
    for (const auto& [p, e] : f) {
        ps.push_back(p);
        rs.push_back(detail::mod_pos(A, p));
        steps.push_back(B % p);
    }
    u64 count = 0;
    size_t k = ps.size();
    for (u64 a = 0; a < q; ++a) {
        bool ok = true;
        for (size_t i = 0; i < k; ++i) {
            if (rs[i] == 0) ok = false;
            rs[i] += steps[i];
            if (rs[i] >= ps[i]) rs[i] -= ps[i];
        }
        count += ok;
    }
    return count;
}

/// F(h,q) = #{a in Z_q : (A+aB, q) = (A+aB+hB, q) = 1} by brute force.
inline u64 F_hq(i64 h, u64 q, i64 A, u64 B) {
    if (q == 0 || B == 0) throw std::invalid_argument("F_hq: q, B must be >= 1");
    u64 r1 = detail::mod_pos(A, q);
    u64 r2 = detail::mod_pos(A + h * static_cast<i64>(B), q);
    u64 step = B % q;
    u64 count = 0;
    for (u64 a = 0; a < q; ++a) {
        if (std::gcd(r1, q) == 1 && std::gcd(r2, q) == 1) ++count;
        r1 += step;
        if (r1 >= q) r1 -= q;
        r2 += step;
        if (r2 >= q) r2 -= q;
    }
    return count;
}

/// Multiplicative formula: F(h,p^k) = p^(k-1)(p-2) if p∤hB, p^(k-1)(p-1) if
/// p|h and p∤B, and p^k if p|B. Independent of A for gcd(A,B)=1.
inline u64 F_hq_formula(i64 h, u64 q, u64 B) {
    if (q == 0 || B == 0) throw std::invalid_argument("F_hq_formula: q, B must be >= 1");
    u64 habs = static_cast<u64>(h < 0 ? -h : h);
    u64 out = 1;
    for (const auto& [p, e] : factor(q)) {
        u64 pk1 = 1;  // p^(k-1)
        for (unsigned i = 1; i < e; ++i) pk1 *= p;
        if (B % p == 0)
            out *= pk1 * p;
        else if (habs % p == 0)
            out *= pk1 * (p - 1);
        else
            out *= pk1 * (p - 2);
    }
    return out;
}

/// The (m, l, n) decomposition of a pair q != r: n collects the primes with
/// unequal exponents at the max exponent, m the same primes at the min
/// exponent, l the primes with equal exponents. m * l^2 * n = q * r.
struct MLN {
    u64 q = 0, r = 0;
    u64 m = 1, l = 1, n = 1;
    u64 gcd_qr = 1, lcm_qr = 1;
};

inline MLN mln_decompose(u64 q, u64 r) {
    if (q == 0 || r == 0) throw std::invalid_argument("mln_decompose: q, r must be >= 1");
    if (q == r) throw std::invalid_argument("mln_decompose: q and r must be distinct");
    MLN out;
    out.q = q;
    out.r = r;
    out.gcd_qr = std::gcd(q, r);
    out.lcm_qr = q / out.gcd_qr * r;
    auto fq = factor(q), fr = factor(r);
    std::map<u64, std::pair<unsigned, unsigned>> exps;
    for (const auto& [p, e] : fq) exps[p].first = e;
    for (const auto& [p, e] : fr) exps[p].second = e;
    for (const auto& [p, uv] : exps) {
        auto [u, v] = uv;
        unsigned lo = std::min(u, v), hi = std::max(u, v);
        if (u == v) {
            for (unsigned i = 0; i < u; ++i) out.l *= p;
        } else {
            for (unsigned i = 0; i < hi; ++i) out.n *= p;
            for (unsigned i = 0; i < lo; ++i) out.m *= p;
        }
    }
    return out;
}

/// X(q,r) = 2 max{psi(q)/q, psi(r)/r} * B * lcm(q,r).
inline Rat X_qr(u64 q, u64 r, const Rat& psi_q, const Rat& psi_r, u64 B) {
    MLN d = mln_decompose(q, r);
    Rat mx = std::max(psi_q / Rat(static_cast<unsigned long>(q)),
                      psi_r / Rat(static_cast<unsigned long>(r)));
    mx.canonicalize();
    Rat out = 2 * mx * Rat(static_cast<unsigned long>(B)) *
              Rat(static_cast<unsigned long>(d.lcm_qr));
    out.canonicalize();
    return out;
}

/// L_t(q,r) = sum over primes p | qr/(q,r)^2 with p >= t of 1/p, exactly.
inline Rat L_t(u64 q, u64 r, const Rat& t) {
    MLN d = mln_decompose(q, r);
    std::vector<Rat> terms;
    for (const auto& [p, e] : factor(d.n)) {
        if (Rat(static_cast<unsigned long>(p)) >= t)
            terms.push_back(rat(1, static_cast<long>(p)));
    }
    return exact_sum(terms);
}

/// H(c): pairs (a,b) in Z_{Bq}^* x Z_{Br}^* with a = b = A (mod B) and
/// a/(Bq) - b/(Br) = c/(B lcm(q,r)). Enumerates b and solves for a.
inline u64 H_c(i64 c, u64 q, u64 r, i64 A, u64 B) {
    if (q == r) throw std::invalid_argument("H_c: q and r must be distinct");
    if (std::gcd(detail::mod_pos(A, B), B) != 1)
        throw std::invalid_argument("H_c: gcd(A,B) must be 1");
    u64 g = std::gcd(q, r);
    i64 A0 = static_cast<i64>(detail::mod_pos(A, B));
    u64 count = 0;
    // b = A0 + jB, j in [0, r); a = (c*g + q*b) / r must land in Z_{Bq}.
    for (u64 j = 0; j < r; ++j) {
        i64 b = A0 + static_cast<i64>(j * B);
        if (std::gcd(static_cast<u64>(b) % r, r) != 1) continue;
        i64 num = c * static_cast<i64>(g) + static_cast<i64>(q) * b;
        if (num % static_cast<i64>(r) != 0) continue;
        i64 a = num / static_cast<i64>(r);
        if (a < 0 || a >= static_cast<i64>(B * q)) continue;
        u64 au = static_cast<u64>(a);
        if (au % B != static_cast<u64>(A0)) continue;
        if (std::gcd(au, B * q) != 1) continue;
        ++count;
    }
    return count;
}

/// Vanishing test: H(c) = 0 whenever c != (r-q)/(q,r) * A (mod B) or
/// gcd(c, n) > 1.
inline bool H_c_must_vanish(i64 c, u64 q, u64 r, i64 A, u64 B) {
    MLN d = mln_decompose(q, r);
    i64 t = (static_cast<i64>(r) - static_cast<i64>(q)) / static_cast<i64>(d.gcd_qr) * A;
    if (detail::mod_pos(c, B) != detail::mod_pos(t, B)) return true;
    u64 cabs = static_cast<u64>(c < 0 ? -c : c);
    if (std::gcd(cabs, d.n) != 1) return true;  // gcd(0, n) = n > 1
    return false;
}

/// Right side of the counting bound:
/// (q,r) phi(m)/m phi(l)^2/l^2 * prod_{p|(B,m)}(1-1/p)^-1
///   * prod_{p|(l,c)}(1-1/p)^-1 * prod_{p|(B,l)}(1-1/p)^-2.
inline Rat H_c_bound(i64 c, u64 q, u64 r, u64 B) {
    MLN d = mln_decompose(q, r);
    Rat out(static_cast<unsigned long>(d.gcd_qr));
    out *= rat(static_cast<long>(euler_phi(d.m)), static_cast<long>(d.m));
    Rat fl = rat(static_cast<long>(euler_phi(d.l)), static_cast<long>(d.l));
    out *= fl * fl;
    u64 cabs = static_cast<u64>(c < 0 ? -c : c);
    auto inv_factor = [](u64 p) { return rat(static_cast<long>(p), static_cast<long>(p - 1)); };
    for (const auto& [p, e] : factor(std::gcd(B, d.m))) out *= inv_factor(p);
    for (const auto& [p, e] : factor(d.l)) {
        if (cabs % p == 0) out *= inv_factor(p);  // c = 0: every p | l counts
    }
    for (const auto& [p, e] : factor(std::gcd(B, d.l))) out *= inv_factor(p) * inv_factor(p);
    out.canonicalize();
    return out;
}

/// Full H table for a pair, by scanning all admissible (a,b) pairs once.
/// Returns c -> H(c) for every c with H(c) > 0 plus the total pair count.
struct HTable {
    std::map<i64, u64> values;
    u64 total_pairs = 0;  // |{a}| * |{b}|
};

inline HTable H_table(u64 q, u64 r, i64 A, u64 B) {
    if (q == r) throw std::invalid_argument("H_table: q and r must be distinct");
    u64 g = std::gcd(q, r);
    i64 A0 = static_cast<i64>(detail::mod_pos(A, B));
    std::vector<i64> as, bs;
    for (u64 j = 0; j < q; ++j) {
        i64 a = A0 + static_cast<i64>(j * B);
        if (std::gcd(static_cast<u64>(a), B * q) == 1) as.push_back(a);
    }
    for (u64 j = 0; j < r; ++j) {
        i64 b = A0 + static_cast<i64>(j * B);
        if (std::gcd(static_cast<u64>(b), B * r) == 1) bs.push_back(b);
    }
    HTable out;
    out.total_pairs = static_cast<u64>(as.size()) * bs.size();
    i64 gi = static_cast<i64>(g), qi = static_cast<i64>(q), ri = static_cast<i64>(r);
    // c = (r a - q b)/(q,r), always integral; aggregate via sort rather than
    // per-pair map insertion, which dominates at bulk-scan scale.
    std::vector<i64> cs;
    cs.reserve(out.total_pairs);
    for (i64 a : as) {
        i64 ra = ri * a;
        for (i64 b : bs) cs.push_back((ra - qi * b) / gi);
    }
    std::sort(cs.begin(), cs.end());
    for (size_t i = 0; i < cs.size();) {
        size_t j = i;
        while (j < cs.size() && cs[j] == cs[i]) ++j;
        out.values.emplace_hint(out.values.end(), cs[i], j - i);
        i = j;
    }
    return out;
}

}  // namespace bclab
