#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "circle_set.hpp"
#include "contfrac.hpp"
#include "numtheory.hpp"
#include "rational.hpp"
#include "targets.hpp"

namespace bclab {

/// A finite sorted window of indices q (one scale of the divergence sum).
struct IndexWindow {
    std::vector<u64> members;

    IndexWindow() = default;
    explicit IndexWindow(std::vector<u64> m) : members(std::move(m)) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
    }

    u64 min_index() const {
        if (members.empty()) throw std::invalid_argument("IndexWindow: empty");
        return members.front();
    }
    size_t size() const { return members.size(); }
};

enum class WeightKind { unit, phi_over_q, I_over_q };

struct Weight {
    WeightKind kind = WeightKind::unit;
    i64 A = 0;  // used by I_over_q
    u64 B = 1;

    Rat operator()(u64 q) const {
        switch (kind) {
            case WeightKind::unit:
                return Rat(1);
            case WeightKind::phi_over_q:
                return rat(static_cast<long>(euler_phi(q)), static_cast<long>(q));
            case WeightKind::I_over_q:
                return rat(static_cast<long>(phi_qb(q, B)), static_cast<long>(q));
        }
        throw std::logic_error("Weight: bad kind");
    }
};

/// Exact weighted sum of psi over the window, via balanced summation.
inline Rat psi_sum(const IndexWindow& S, const ApproxFn& psi, const Weight& w) {
    std::vector<Rat> terms;
    terms.reserve(S.members.size());
    for (u64 q : S.members) {
        Rat v = psi(q);
        if (v == 0) continue;
        terms.push_back(v * w(q));
    }
    return exact_sum(terms);
}

struct MomentReport {
    IndexWindow window;
    Rat Psi;              // sum of individual measures
    Rat overlap_offdiag;  // sum over s < t of mu(E_s ∩ E_t)
    Rat overlap_full;     // sum over all ordered pairs, diagonal included
    std::optional<Rat> C_prime;  // overlap_offdiag / Psi^2
    std::optional<Rat> C_full;   // overlap_full / Psi^2
    std::map<u64, Rat> measures;
    std::map<std::pair<u64, u64>, Rat> pair_measures;  // keys s < t
};

/// Exact pairwise second moments for the sets produced by `builder`.
inline MomentReport overlap_moments(const IndexWindow& S,
                                    const std::function<CircleSet(u64)>& builder,
                                    size_t max_window = 4096) {
    if (S.members.empty())
        throw std::invalid_argument("overlap_moments: empty window");
    if (S.members.size() > max_window)
        throw std::invalid_argument("overlap_moments: window too large for exact pairwise work");

    std::vector<CircleSet> sets;
    sets.reserve(S.members.size());
    for (u64 q : S.members) sets.push_back(builder(q));

    MomentReport rep;
    rep.window = S;
    std::vector<Rat> diag;
    for (size_t i = 0; i < sets.size(); ++i) {
        Rat mu = sets[i].measure();
        rep.measures[S.members[i]] = mu;
        diag.push_back(mu);
    }
    rep.Psi = exact_sum(diag);

    std::vector<Rat> off;
    for (size_t i = 0; i < sets.size(); ++i)
        for (size_t j = i + 1; j < sets.size(); ++j) {
            Rat mu = intersect(sets[i], sets[j]).measure();
            rep.pair_measures[{S.members[i], S.members[j]}] = mu;
            off.push_back(mu);
        }
    rep.overlap_offdiag = exact_sum(off);
    rep.overlap_full = Rat(2) * rep.overlap_offdiag + rep.Psi;
    if (rep.Psi > 0) {
        rep.C_prime = rep.overlap_offdiag / (rep.Psi * rep.Psi);
        rep.C_full = rep.overlap_full / (rep.Psi * rep.Psi);
    }
    return rep;
}

namespace detail {

inline Rat offdiag_sum(const std::vector<u64>& S, const std::map<std::pair<u64, u64>, Rat>& pairs) {
    std::vector<Rat> terms;
    for (size_t i = 0; i < S.size(); ++i)
        for (size_t j = i + 1; j < S.size(); ++j) {
            auto it = pairs.find({S[i], S[j]});
            if (it == pairs.end())
                throw std::invalid_argument("missing pair measure for (" +
                                            std::to_string(S[i]) + "," +
                                            std::to_string(S[j]) + ")");
            terms.push_back(it->second);
        }
    return exact_sum(terms);
}

inline Rat measure_sum(const std::vector<u64>& S, const std::map<u64, Rat>& measures) {
    std::vector<Rat> terms;
    for (u64 q : S) {
        auto it = measures.find(q);
        if (it == measures.end())
            throw std::invalid_argument("missing measure for index " + std::to_string(q));
        terms.push_back(it->second);
    }
    return exact_sum(terms);
}

}  // namespace detail

/// Smallest index whose removal keeps sum_{s<t} mu(E_s ∩ E_t) <= C' (sum mu)^2.
/// Existence is guaranteed whenever the input satisfies the inequality, so a
/// failed search is an internal error, not a caller error.
inline u64 reduction_step(const IndexWindow& S, const std::map<u64, Rat>& measures,
                          const std::map<std::pair<u64, u64>, Rat>& pair_measures,
                          const Rat& C_prime) {
    if (S.members.empty())
        throw std::invalid_argument("reduction_step: empty window");
    Rat mu_sum = detail::measure_sum(S.members, measures);
    Rat off = detail::offdiag_sum(S.members, pair_measures);
    if (off > C_prime * mu_sum * mu_sum)
        throw std::invalid_argument("reduction_step: quasi-independence precondition fails");
    if (S.members.size() <= 2) return S.members.front();

    for (u64 m : S.members) {
        std::vector<u64> rest;
        for (u64 q : S.members)
            if (q != m) rest.push_back(q);
        Rat mu_rest = detail::measure_sum(rest, measures);
        Rat off_rest = detail::offdiag_sum(rest, pair_measures);
        if (off_rest <= C_prime * mu_rest * mu_rest) return m;
    }
    throw std::logic_error("reduction_step: no removable index found");
}

/// Removes indices until the weighted sum lands in [eps*, eps] while the
/// quasi-independence inequality keeps holding, eps* = min{c, eps/2}.
/// Pair measures must cover the window so each removal can be revalidated.
inline IndexWindow reduce_to_band(const IndexWindow& S, const ApproxFn& psi,
                                  const Weight& w,
                                  const std::map<std::pair<u64, u64>, Rat>& pair_measures,
                                  const Rat& eps, const Rat& C_prime,
                                  const std::optional<Rat>& c = std::nullopt) {
    if (eps <= 0) throw std::invalid_argument("reduce_to_band: eps must be positive");
    Rat eps_star = eps / 2;
    if (c && *c < eps_star) eps_star = *c;
    if (eps_star <= 0) throw std::invalid_argument("reduce_to_band: band is empty");

    std::map<u64, Rat> terms;
    for (u64 q : S.members) {
        Rat t = psi(q) * w(q);
        if (t >= eps_star)
            throw std::invalid_argument("reduce_to_band: term at q = " + std::to_string(q) +
                                        " is not below the band floor");
        terms[q] = t;
    }
    IndexWindow cur = S;
    Rat sum = detail::measure_sum(cur.members, terms);
    if (sum < eps_star)
        throw std::invalid_argument("reduce_to_band: window sum below the band floor");

    while (sum > eps) {
        u64 m = reduction_step(cur, terms, pair_measures, C_prime);
        std::vector<u64> rest;
        for (u64 q : cur.members)
            if (q != m) rest.push_back(q);
        cur = IndexWindow(std::move(rest));
        sum = detail::measure_sum(cur.members, terms);
    }
    // Each removed term is < eps* <= eps/2, so the sum cannot jump past the
    // floor; revalidate anyway.
    if (sum < eps_star || sum > eps)
        throw std::logic_error("reduce_to_band: band membership lost");
    Rat off = detail::offdiag_sum(cur.members, pair_measures);
    if (off > C_prime * sum * sum)
        throw std::logic_error("reduce_to_band: quasi-independence lost");
    return cur;
}

struct DSRatio {
    Rat sum_psi;
    Rat sum_ds;  // sum of phi(q) psi(q) / q
    std::optional<Rat> ratio;
};

/// Partial sums comparing the plain series with its totient-weighted form.
inline DSRatio ds_condition_ratio(u64 Q, const ApproxFn& psi) {
    if (Q < 1) throw std::invalid_argument("ds_condition_ratio: Q must be >= 1");
    std::vector<Rat> plain, weighted;
    for (const auto& [q, v] : psi.values()) {
        if (q > Q) break;
        plain.push_back(v);
        weighted.push_back(v * rat(static_cast<long>(euler_phi(q)), static_cast<long>(q)));
    }
    DSRatio r;
    r.sum_psi = exact_sum(plain);
    r.sum_ds = exact_sum(weighted);
    if (r.sum_psi > 0) r.ratio = r.sum_ds / r.sum_psi;
    return r;
}

/// phi(q, b) for big-integer b: q times the product of (1 - 1/p) over the
/// prime divisors p of q that do not divide b.
inline u64 phi_qb_big(u64 q, const Int& b) {
    u64 result = q;
    for (const auto& [p, e] : factor(q)) {
        if (mpz_divisible_ui_p(b.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        result -= result / p;
    }
    return result;
}

struct DSWindowCheck {
    bool c1 = false;   // convergent error <= psi(q) on the whole window
    bool c2 = false;   // sum psi phi / q >= q_k^8
    Rat c3_term;       // max over psi(q) >= 1/2 of psi(q) phi(q, q_k) / q
};

/// Checks the three window conditions at convergent depth k: the shift
/// surrogate error against psi, the eighth-power mass threshold, and the
/// large-value max term (zero when no psi(q) reaches 1/2).
inline DSWindowCheck check_general_DS_window(const IndexWindow& S, const ApproxFn& psi,
                                             const CFExpansion& cf, size_t k) {
    DSWindowCheck out;
    // The error bound is zero when the expansion terminates at depth k.
    Rat err = (k + 2 > cf.length()) ? Rat(0) : approx_error_upper(cf, k);
    out.c1 = true;
    for (u64 q : S.members)
        if (err > psi(q)) {
            out.c1 = false;
            break;
        }

    const Int& qk = cf.q_at(k + 1);
    Rat mass = psi_sum(S, psi, Weight{WeightKind::phi_over_q});
    out.c2 = mass >= rat(pow_int(qk, 8), Int(1));

    Rat half = rat(1L, 2);
    out.c3_term = Rat(0);
    for (u64 q : S.members) {
        Rat v = psi(q);
        if (v < half) continue;
        Rat term = v * rat(static_cast<long>(phi_qb_big(q, qk)), static_cast<long>(q));
        if (term > out.c3_term) out.c3_term = term;
    }
    return out;
}

}  // namespace bclab
