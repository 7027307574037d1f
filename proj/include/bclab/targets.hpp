#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "circle_set.hpp"
#include "contfrac.hpp"
#include "numtheory.hpp"
#include "rational.hpp"

namespace bclab {

/// Finitely supported approximating function q -> rational >= 0.
class ApproxFn {
   public:
    ApproxFn() = default;
    explicit ApproxFn(std::map<u64, Rat> values) : values_(std::move(values)) {
        for (auto it = values_.begin(); it != values_.end();) {
            if (it->second < 0)
                throw std::invalid_argument("ApproxFn: values must be >= 0");
            if (it->second == 0)
                it = values_.erase(it);
            else
                ++it;
        }
    }

    /// c / q^s for q = 1..Q.
    static ApproxFn power_family(const Rat& c, unsigned long s, u64 Q) {
        std::map<u64, Rat> v;
        for (u64 q = 1; q <= Q; ++q) v[q] = c / rat(pow_int(Int(static_cast<unsigned long>(q)), s), Int(1));
        return ApproxFn(std::move(v));
    }

    static ApproxFn constant(const Rat& c, u64 Q) {
        std::map<u64, Rat> v;
        for (u64 q = 1; q <= Q; ++q) v[q] = c;
        return ApproxFn(std::move(v));
    }

    Rat operator()(u64 q) const {
        auto it = values_.find(q);
        return it == values_.end() ? Rat(0) : it->second;
    }

    bool supports(u64 q) const { return values_.count(q) != 0; }
    u64 horizon() const { return values_.empty() ? 0 : values_.rbegin()->first; }
    const std::map<u64, Rat>& values() const { return values_; }

    ApproxFn restricted(i64 s, u64 u) const {
        std::map<u64, Rat> v;
        for (const auto& [q, val] : values_)
            if (detail::mod_pos(static_cast<i64>(q), u) == detail::mod_pos(s, u)) v[q] = val;
        return ApproxFn(std::move(v));
    }

   private:
    std::map<u64, Rat> values_;
};

/// Shift of the arc centers: an exact rational, or a convergent surrogate
/// carrying the depth and certified error bound it was cut at.
struct InhomShift {
    Rat gamma;
    bool surrogate = false;
    size_t depth = 0;     // convergent index used, when surrogate
    Rat error_bound = Rat(0);

    static InhomShift exact(Rat g) { return {std::move(g), false, 0, Rat(0)}; }

    static InhomShift from_convergent(const CFExpansion& cf, size_t k) {
        auto [p, q] = convergents(cf, k);
        return {rat(p, q), true, k, approx_error_upper(cf, k)};
    }
};

namespace detail {

inline CircleSet arcs_over(u64 q, const Rat& gamma, const Rat& psi_q,
                           const std::vector<u64>& numerators) {
    std::vector<std::pair<Rat, Rat>> arcs;
    arcs.reserve(numerators.size());
    Rat radius = psi_q / rat(static_cast<long>(q), 1);
    for (u64 a : numerators)
        arcs.emplace_back((rat(static_cast<long>(a), 1) + gamma) / rat(static_cast<long>(q), 1),
                          radius);
    return CircleSet::from_arcs(arcs);
}

}  // namespace detail

/// Union over all a in Z_q of arcs centered (a + gamma)/q with radius
/// psi(q)/q. Measure is 2 psi(q) for psi(q) <= 1/2, independent of gamma.
inline CircleSet build_Eq(u64 q, const Rat& gamma, const ApproxFn& psi) {
    if (q == 0) throw std::invalid_argument("build_Eq: q must be positive");
    if (!psi.supports(q)) return CircleSet::empty_set();
    std::vector<u64> as(q);
    std::iota(as.begin(), as.end(), 0);
    return detail::arcs_over(q, gamma, psi(q), as);
}

/// Restriction of build_Eq to reduced numerators a in Z_q^*.
inline CircleSet build_Eq_prime(u64 q, const Rat& gamma, const ApproxFn& psi) {
    if (q == 0) throw std::invalid_argument("build_Eq_prime: q must be positive");
    if (!psi.supports(q)) return CircleSet::empty_set();
    std::vector<u64> as;
    for (u64 a = 0; a < q; ++a)
        if (std::gcd(a, q) == 1) as.push_back(a);
    return detail::arcs_over(q, gamma, psi(q), as);
}

/// Restriction of build_Eq to an explicit residue set I of modulus q.
inline CircleSet build_Eq_I(u64 q, const Rat& gamma, const ApproxFn& psi,
                            const ResidueSet& I) {
    if (I.modulus != q)
        throw std::invalid_argument("build_Eq_I: residue set modulus mismatch");
    if (!psi.supports(q)) return CircleSet::empty_set();
    return detail::arcs_over(q, gamma, psi(q), I.members);
}

/// Arcs centered a/(Bq) with radius psi(q)/q, over a in Z_{Bq}^* with
/// a = A (mod B); the gamma = A/B arc family rewritten over one modulus.
inline CircleSet build_Eq_star(u64 q, i64 A, u64 B, const ApproxFn& psi) {
    if (q == 0 || B == 0)
        throw std::invalid_argument("build_Eq_star: q and B must be positive");
    if (std::gcd(detail::mod_pos(A, B), B) != 1)
        throw std::invalid_argument("build_Eq_star: gcd(A,B) must be 1");
    if (!psi.supports(q)) return CircleSet::empty_set();
    u64 Bq = B * q;
    Rat radius = psi(q) / rat(static_cast<long>(q), 1);
    std::vector<std::pair<Rat, Rat>> arcs;
    for (u64 a = detail::mod_pos(A, B); a < Bq; a += B) {
        if (std::gcd(a, Bq) != 1) continue;
        arcs.emplace_back(rat(static_cast<long>(a), static_cast<long>(Bq)), radius);
    }
    return CircleSet::from_arcs(arcs);
}

struct MeasureParts {
    Rat main;   // 2 psi(q) |I_q| / q
    Rat T;      // sum over cyclic gaps g <= 2 psi of (2 psi - g)
    Rat exact;  // main - T/q, checked against the set measure
};

/// Splits the measure of the I_q arc family into the main term and the
/// overlap correction T collected from cyclic gaps of I_q, and verifies
/// the split against the exact set measure.
inline MeasureParts large_psi_measure_parts(u64 q, i64 A, u64 B, const Rat& psi_q) {
    ResidueSet I = enumerate_Iq(q, A, B);
    if (I.members.empty())
        throw std::invalid_argument("large_psi_measure_parts: I_q is empty");
    if (psi_q < 0) throw std::invalid_argument("large_psi_measure_parts: psi < 0");

    Rat two_psi = Rat(2) * psi_q;
    Rat T(0);
    const auto& m = I.members;
    for (size_t i = 0; i < m.size(); ++i) {
        u64 gap = i + 1 < m.size() ? m[i + 1] - m[i] : q - m.back() + m.front();
        Rat g = rat(static_cast<long>(gap), 1);
        if (g <= two_psi) T += two_psi - g;
    }
    Rat qq = rat(static_cast<long>(q), 1);
    MeasureParts parts;
    parts.main = two_psi * rat(static_cast<long>(m.size()), 1) / qq;
    parts.T = T;
    parts.exact = parts.main - T / qq;

    ApproxFn psi(std::map<u64, Rat>{{q, psi_q}});
    CircleSet set = build_Eq_I(q, Rat(0), psi, I);
    if (parts.exact != set.measure())
        throw std::logic_error("large_psi_measure_parts: split disagrees with set measure");
    return parts;
}

struct DiscrepancyReport {
    Rat max_abs_error;
    Rat bound;  // 4 * 2^omega(q)
};

/// Equidistribution diagnostic for I/q in [0,1): the worst counting error
/// over a dyadic-style grid, against the calibrated bound 4 * 2^omega(q).
inline DiscrepancyReport discrepancy_Iq(u64 q, const ResidueSet& I,
                                        u64 grid_denominator) {
    if (grid_denominator < 2)
        throw std::invalid_argument("discrepancy_Iq: grid must be >= 2");
    if (I.modulus != q)
        throw std::invalid_argument("discrepancy_Iq: residue set modulus mismatch");
    Rat worst(0);
    Rat card = rat(static_cast<long>(I.members.size()), 1);
    for (u64 j = 1; j <= grid_denominator; ++j) {
        Rat y = rat(static_cast<long>(j), static_cast<long>(grid_denominator));
        // #{a in I : a/q < y} = #{a in I : a < y*q}, I sorted ascending.
        Rat yq = y * rat(static_cast<long>(q), 1);
        size_t cnt = 0;
        while (cnt < I.members.size() &&
               rat(static_cast<long>(I.members[cnt]), 1) < yq)
            ++cnt;
        Rat err = rat(static_cast<long>(cnt), 1) - y * card;
        if (err < 0) err = -err;
        if (err > worst) worst = err;
    }
    DiscrepancyReport rep;
    rep.max_abs_error = worst;
    rep.bound = rat(4L << omega(q), 1);
    return rep;
}

}  // namespace bclab
