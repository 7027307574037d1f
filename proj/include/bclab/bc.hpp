#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "circle_set.hpp"
#include "numtheory.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "targets.hpp"

namespace bclab {

/// Finite probability space with an eventually periodic event sequence, so
/// the limsup set is exactly computable.
struct FinSpace {
    std::vector<Rat> atom_weights;
    std::vector<std::vector<size_t>> preperiod;  // events as atom-index lists
    std::vector<std::vector<size_t>> period;     // length >= 1

    void validate() const {
        if (period.empty()) throw std::invalid_argument("FinSpace: period must be non-empty");
        std::vector<Rat> w = atom_weights;
        for (const Rat& x : w)
            if (x <= 0) throw std::invalid_argument("FinSpace: weights must be positive");
        if (exact_sum(w) != 1)
            throw std::invalid_argument("FinSpace: weights must sum to 1");
        auto check_event = [&](const std::vector<size_t>& ev) {
            for (size_t a : ev)
                if (a >= atom_weights.size())
                    throw std::invalid_argument("FinSpace: atom index out of range");
        };
        for (const auto& ev : preperiod) check_event(ev);
        for (const auto& ev : period) check_event(ev);
    }

    /// Event at 1-based index i.
    const std::vector<size_t>& event(u64 i) const {
        if (i == 0) throw std::invalid_argument("FinSpace: events are 1-based");
        if (i <= preperiod.size()) return preperiod[i - 1];
        return period[(i - preperiod.size() - 1) % period.size()];
    }

    Rat event_measure(const std::vector<size_t>& ev) const {
        std::vector<Rat> terms;
        std::set<size_t> seen(ev.begin(), ev.end());
        for (size_t a : seen) terms.push_back(atom_weights[a]);
        return exact_sum(terms);
    }
};

/// Exact measure of the set of atoms lying in infinitely many events: the
/// union of the periodic part, since each periodic event recurs forever.
inline Rat finspace_limsup_measure(const FinSpace& space) {
    space.validate();
    std::set<size_t> recurring;
    for (const auto& ev : space.period) recurring.insert(ev.begin(), ev.end());
    std::vector<Rat> terms;
    for (size_t a : recurring) terms.push_back(space.atom_weights[a]);
    return exact_sum(terms);
}

enum class Verdict { confirmed, counterexample, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::confirmed: return "confirmed";
        case Verdict::counterexample: return "counterexample";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct DbcReport {
    Verdict verdict = Verdict::inconclusive;
    Rat limsup_measure;
    Rat lower_bound;        // 1/C
    bool divergent = false; // periodic part carries positive measure
    std::optional<u64> quasi_independence_at;  // first horizon where the
                                               // second-moment inequality held
};

/// Checks the divergence and quasi-independence hypotheses at the horizon,
/// then compares the exact limsup measure with 1/C. A confirmed hypothesis
/// set with measure below 1/C is a counterexample report.
inline DbcReport verify_dbc(const FinSpace& space, const Rat& C, u64 horizon) {
    if (C <= 0) throw std::invalid_argument("verify_dbc: C must be positive");
    space.validate();
    DbcReport rep;
    rep.limsup_measure = finspace_limsup_measure(space);
    rep.lower_bound = Rat(1) / C;

    // The event sequence is eventually periodic, so the measure series
    // diverges exactly when the periodic part contributes positive mass.
    Rat per_period(0);
    for (const auto& ev : space.period) per_period += space.event_measure(ev);
    rep.divergent = per_period > 0;

    std::vector<Rat> mu;  // per-event measures up to the horizon
    for (u64 i = 1; i <= horizon; ++i) mu.push_back(space.event_measure(space.event(i)));

    for (u64 Q = 1; Q <= horizon && !rep.quasi_independence_at; ++Q) {
        std::vector<Rat> pair_terms;
        for (u64 s = 1; s <= Q; ++s)
            for (u64 t = 1; t <= Q; ++t) {
                const auto& es = space.event(s);
                const auto& et = space.event(t);
                std::set<size_t> a(es.begin(), es.end());
                std::vector<size_t> both;
                for (size_t x : et)
                    if (a.count(x)) both.push_back(x);
                pair_terms.push_back(space.event_measure(both));
            }
        std::vector<Rat> head(mu.begin(), mu.begin() + Q);
        Rat sum = exact_sum(head);
        if (sum > 0 && exact_sum(pair_terms) <= C * sum * sum)
            rep.quasi_independence_at = Q;
    }

    if (!rep.divergent || !rep.quasi_independence_at) {
        rep.verdict = Verdict::inconclusive;
        return rep;
    }
    rep.verdict = rep.limsup_measure >= rep.lower_bound ? Verdict::confirmed
                                                        : Verdict::counterexample;
    return rep;
}

struct ProbeResult {
    std::optional<u64> first_index;  // least i0 with no violation in [i0, hi]
    std::vector<u64> violations;
};

/// With A fixed, finds where mu(A ∩ E_i) <= (1+delta) mu(A) mu(E_i) starts
/// holding through the end of the probe range.
inline ProbeResult probe_intersection_bound(const CircleSet& A,
                                            const std::vector<CircleSet>& seq,
                                            const Rat& delta, u64 lo, u64 hi) {
    if (lo == 0 || lo > hi || hi > seq.size())
        throw std::invalid_argument("probe range must satisfy 1 <= lo <= hi <= |sequence|");
    ProbeResult res;
    Rat muA = A.measure();
    for (u64 i = lo; i <= hi; ++i) {
        const CircleSet& E = seq[i - 1];
        Rat lhs = intersect(A, E).measure();
        if (lhs > (Rat(1) + delta) * muA * E.measure()) res.violations.push_back(i);
    }
    if (res.violations.empty())
        res.first_index = lo;
    else if (res.violations.back() < hi)
        res.first_index = res.violations.back() + 1;
    return res;
}

/// Condition probe with A = union of a block of the sequence itself.
inline ProbeResult check_M1(const std::vector<CircleSet>& seq, const Rat& delta,
                            u64 q1, u64 q2, u64 lo, u64 hi) {
    if (q1 >= q2 || q2 > seq.size())
        throw std::invalid_argument("check_M1: need q1 < q2 <= |sequence|");
    CircleSet A = CircleSet::empty_set();
    for (u64 j = q1; j <= q2; ++j) A = unite(A, seq[j - 1]);
    return probe_intersection_bound(A, seq, delta, lo, hi);
}

/// Condition probe with A = a single closed ball.
inline ProbeResult check_B1(const std::vector<CircleSet>& seq, const Rat& center,
                            const Rat& radius, const Rat& delta, u64 lo, u64 hi) {
    CircleSet A = CircleSet::from_arcs({{center, radius}});
    return probe_intersection_bound(A, seq, delta, lo, hi);
}

// ---------------------------------------------------------------------------
// Tail unions
// ---------------------------------------------------------------------------

/// Exact measure of the union over q in [m, Q] of builder(q), by a global
/// endpoint sort and sweep (accumulating unions one set at a time would be
/// quadratic in the interval count).
inline Rat tail_union_measure(const std::function<CircleSet(u64)>& builder, u64 m,
                              u64 Q) {
    if (m > Q) return Rat(0);
    std::vector<std::pair<Rat, Rat>> iv;
    for (u64 q = m; q <= Q; ++q) {
        CircleSet s = builder(q);
        if (s == CircleSet::full_circle()) return Rat(1);
        for (const auto& seg : s.intervals()) iv.emplace_back(seg.lo, seg.hi);
    }
    if (iv.empty()) return Rat(0);
    std::sort(iv.begin(), iv.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Rat> lengths;
    Rat cur_lo = iv.front().first, cur_hi = iv.front().second;
    for (size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].first <= cur_hi) {
            if (iv[i].second > cur_hi) cur_hi = iv[i].second;
        } else {
            lengths.push_back(cur_hi - cur_lo);
            cur_lo = iv[i].first;
            cur_hi = iv[i].second;
        }
    }
    lengths.push_back(cur_hi - cur_lo);
    Rat total = exact_sum(lengths);
    return total > 1 ? Rat(1) : total;
}

namespace detail {

/// Interval with both endpoints over one word-sized denominator; lets large
/// arc collections be sorted and swept without big-integer traffic.
struct FracInterval {
    i64 lo, hi, den;
};

inline bool frac_less(i64 an, i64 ad, i64 bn, i64 bd) {
    return static_cast<__int128>(an) * bd < static_cast<__int128>(bn) * ad;
}

inline Rat sweep_measure(std::vector<FracInterval>& iv) {
    if (iv.empty()) return Rat(0);
    std::sort(iv.begin(), iv.end(), [](const FracInterval& a, const FracInterval& b) {
        return frac_less(a.lo, a.den, b.lo, b.den);
    });
    std::vector<Rat> lengths;
    i64 cl = iv.front().lo, cld = iv.front().den;
    i64 ch = iv.front().hi, chd = iv.front().den;
    for (size_t i = 1; i < iv.size(); ++i) {
        const FracInterval& x = iv[i];
        if (!frac_less(ch, chd, x.lo, x.den)) {
            if (frac_less(ch, chd, x.hi, x.den)) {
                ch = x.hi;
                chd = x.den;
            }
        } else {
            lengths.push_back(rat(ch, chd) - rat(cl, cld));
            cl = x.lo;
            cld = x.den;
            ch = x.hi;
            chd = x.den;
        }
    }
    lengths.push_back(rat(ch, chd) - rat(cl, cld));
    Rat total = exact_sum(lengths);
    return total > 1 ? Rat(1) : total;
}

}  // namespace detail

/// Fast tail union for the residue-restricted arc family: arcs centered
/// (aB + A)/(Bq) with radius psi(q)/q over a in I_q(A, B). Falls back to
/// the generic sweep when endpoints do not fit a word-sized denominator.
inline Rat tail_union_measure_residue(u64 m, u64 Q, i64 A, u64 B,
                                      const std::function<Rat(u64)>& psi) {
    std::vector<detail::FracInterval> iv;
    for (u64 q = std::max<u64>(m, 1); q <= Q; ++q) {
        Rat p = psi(q);
        if (p <= 0) continue;
        if (p * 2 >= 1 && q == 1) return Rat(1);
        const Int& pn_z = p.get_num();
        const Int& pd_z = p.get_den();
        if (!pn_z.fits_slong_p() || !pd_z.fits_slong_p())
            throw std::invalid_argument("tail_union_measure_residue: psi value too large");
        i64 pn = pn_z.get_si(), pd = pd_z.get_si();
        // Endpoints (aB + A) pd ± B pn over denominator B q pd.
        if (static_cast<double>(B) * q * pd > 4e18 ||
            static_cast<double>(B) * q * pd * 2 + std::abs(static_cast<double>(A)) * pd >
                4e18)
            throw std::invalid_argument("tail_union_measure_residue: denominator overflow");
        i64 den = static_cast<i64>(B) * static_cast<i64>(q) * pd;
        i64 rad = static_cast<i64>(B) * pn;
        if (2 * rad >= den) return Rat(1);  // one arc already covers the circle
        ResidueSet I = enumerate_Iq(q, A, B);
        for (u64 a : I.members) {
            i64 c = (static_cast<i64>(a) * static_cast<i64>(B) + A) * pd;
            i64 lo = c - rad, hi = c + rad;
            if (lo < 0) {
                iv.push_back({0, hi, den});
                iv.push_back({den + lo, den, den});
            } else if (hi > den) {
                iv.push_back({lo, den, den});
                iv.push_back({0, hi - den, den});
            } else {
                iv.push_back({lo, hi, den});
            }
        }
    }
    return detail::sweep_measure(iv);
}

// ---------------------------------------------------------------------------
// Monte Carlo hit scanning
// ---------------------------------------------------------------------------

inline constexpr unsigned kDefaultPrecisionBits = 256;

enum class HitMode { all_a, coprime, residue, congruence };

/// Arithmetic condition a witness numerator must satisfy. residue uses
/// gcd(A + aB, q) = 1; congruence uses a = r (mod t), q = s (mod u), and
/// gcd(a, q) = 1 (one congruence relation on each side).
struct HitModeSpec {
    HitMode mode = HitMode::all_a;
    i64 A = 0;
    u64 B = 1;
    i64 r = 0;
    u64 t = 1;
    i64 s = 0;
    u64 u = 1;

    bool q_allowed(u64 q) const {
        if (mode == HitMode::congruence)
            return detail::mod_pos(static_cast<i64>(q), u) == detail::mod_pos(s, u);
        return true;
    }

    bool a_allowed(const Int& a, u64 q) const {
        switch (mode) {
            case HitMode::all_a:
                return true;
            case HitMode::coprime: {
                Int g, qq(static_cast<unsigned long>(q));
                Int am = a % qq;
                if (am < 0) am += qq;
                mpz_gcd(g.get_mpz_t(), am.get_mpz_t(), qq.get_mpz_t());
                return g == 1;
            }
            case HitMode::residue: {
                Int v = Int(A) + a * static_cast<unsigned long>(B);
                Int g, qq(static_cast<unsigned long>(q));
                Int vm = v % qq;
                if (vm < 0) vm += qq;
                mpz_gcd(g.get_mpz_t(), vm.get_mpz_t(), qq.get_mpz_t());
                return g == 1;
            }
            case HitMode::congruence: {
                Int tm = a % static_cast<unsigned long>(t);
                if (tm < 0) tm += static_cast<unsigned long>(t);
                if (tm != detail::mod_pos(r, t)) return false;
                Int g, qq(static_cast<unsigned long>(q));
                Int am = a % qq;
                if (am < 0) am += qq;
                mpz_gcd(g.get_mpz_t(), am.get_mpz_t(), qq.get_mpz_t());
                return g == 1;
            }
        }
        return false;
    }
};

struct HitRecord {
    u64 sample = 0;
    Int x_numerator;  // sample point = x_numerator / 2^P
    std::vector<std::pair<u64, i64>> hits;  // (q, witness a), unambiguous only
    std::vector<std::pair<u64, i64>> ambiguous;
    std::vector<std::pair<u64, u64>> checkpoints;  // (q, cumulative hits)
};

namespace detail {

/// Scans q = 1..Q for one sample point x = X / 2^P: a hit at q is an
/// admissible integer a with |q x - a - gamma| <= psi(q), decided exactly;
/// decisions within q 2^{-P} of the boundary are flagged ambiguous so they
/// survive any refinement of x.
inline HitRecord scan_sample(u64 sample_id, const Int& X, unsigned P, const Rat& gamma,
                             const std::vector<std::pair<i64, i64>>& psi_nd, u64 Q,
                             const HitModeSpec& mode, u64 stop_after_hits,
                             const std::vector<u64>& checkpoints) {
    HitRecord rec;
    rec.sample = sample_id;
    rec.x_numerator = X;

    const Int& g_num = gamma.get_num();
    const Int& g_den = gamma.get_den();
    if (!g_den.fits_ulong_p())
        throw std::invalid_argument("scan_sample: gamma denominator too large");
    Int pow2P = Int(1) << P;
    Int d = g_den * pow2P;        // common denominator B0 * 2^P
    Int XB = X * g_den;           // increment of N per step of q
    Int N = -g_num * pow2P;      // N(q) = q X B0 - A0 2^P, built incrementally
    Int lo_num, a_lo, a_hi, rdiff, lhs, margin;

    size_t cp = 0;
    for (u64 q = 1; q <= Q; ++q) {
        N += XB;
        while (cp < checkpoints.size() && checkpoints[cp] < q) ++cp;
        if (cp < checkpoints.size() && checkpoints[cp] == q) {
            rec.checkpoints.emplace_back(q, rec.hits.size());
            ++cp;
        }
        i64 pn = psi_nd[q].first, pd = psi_nd[q].second;
        if (pn <= 0 || !mode.q_allowed(q)) continue;

        // Candidate range: a in [ (N - psi d)/d , (N + psi d)/d ].
        Int pnd = d * pn;
        lo_num = N * pd - pnd;
        Int dd = d * pd;
        mpz_fdiv_q(a_lo.get_mpz_t(), lo_num.get_mpz_t(), dd.get_mpz_t());
        lo_num += pnd * 2;
        mpz_fdiv_q(a_hi.get_mpz_t(), lo_num.get_mpz_t(), dd.get_mpz_t());

        bool hit = false, amb = false;
        i64 witness = 0, amb_witness = 0;
        for (Int a = a_lo; a <= a_hi; a += 1) {
            if (!mode.a_allowed(a, q)) continue;
            rdiff = N - a * d;
            mpz_abs(rdiff.get_mpz_t(), rdiff.get_mpz_t());
            lhs = rdiff * pd;
            // slack on q x is q 2^{-P}; scaled by B0 2^P pd it is q B0 pd
            margin = g_den * static_cast<unsigned long>(q) * pd;
            if (lhs <= pnd - margin) {
                hit = true;
                witness = a.fits_slong_p() ? a.get_si() : 0;
                break;
            }
            if (lhs <= pnd + margin) {
                amb = true;
                amb_witness = a.fits_slong_p() ? a.get_si() : 0;
            }
        }
        if (hit) {
            rec.hits.emplace_back(q, witness);
            if (stop_after_hits && rec.hits.size() >= stop_after_hits) break;
        } else if (amb) {
            rec.ambiguous.emplace_back(q, amb_witness);
        }
    }
    return rec;
}

}  // namespace detail

/// Deterministic Monte Carlo hit scan: sample s draws a P-bit point from
/// stream (seed, s); results are independent of thread count and order.
inline std::vector<HitRecord> montecarlo_hits(const Rat& gamma,
                                              const std::function<Rat(u64)>& psi, u64 Q,
                                              u64 samples, u64 seed,
                                              const HitModeSpec& mode = {},
                                              unsigned P = kDefaultPrecisionBits,
                                              u64 stop_after_hits = 0,
                                              unsigned threads = 1,
                                              std::vector<u64> checkpoints = {}) {
    if (Q < 1 || samples < 1)
        throw std::invalid_argument("montecarlo_hits: Q and samples must be >= 1");
    std::sort(checkpoints.begin(), checkpoints.end());
    // psi as word-sized fractions, one lookup per q for all samples
    std::vector<std::pair<i64, i64>> psi_nd(Q + 1, {0, 1});
    for (u64 q = 1; q <= Q; ++q) {
        Rat v = psi(q);
        if (v < 0) throw std::invalid_argument("montecarlo_hits: psi must be >= 0");
        if (v == 0) continue;
        if (!v.get_num().fits_slong_p() || !v.get_den().fits_slong_p())
            throw std::invalid_argument("montecarlo_hits: psi value out of word range");
        psi_nd[q] = {v.get_num().get_si(), v.get_den().get_si()};
    }

    std::vector<HitRecord> out(samples);
    auto work = [&](u64 begin, u64 end) {
        for (u64 s = begin; s < end; ++s) {
            CounterRng rng(seed, s);
            Int X = rng.next_fixed_point(P);
            out[s] = detail::scan_sample(s, X, P, gamma, psi_nd, Q, mode,
                                         stop_after_hits, checkpoints);
        }
    };
    if (threads <= 1) {
        work(0, samples);
    } else {
        std::vector<std::thread> pool;
        u64 chunk = (samples + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            u64 b = t * chunk, e = std::min<u64>(samples, b + chunk);
            if (b >= e) break;
            pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

struct DichotomyRow {
    u64 sample;
    u64 hits_first;
    u64 hits_second;
    bool containment;  // every hit for (gamma, psi) is one for (gamma', C psi)
};

struct DichotomyReport {
    Rat C;
    std::vector<DichotomyRow> rows;
    u64 samples_first_exceeds = 0;
    u64 containment_violations = 0;
};

/// Compares hit counts for (gamma, psi) against (gamma', C psi) with
/// C = |gamma - gamma'|/delta + 1; the second family must absorb every hit
/// of the first through the triangle inequality, checked per witness.
inline DichotomyReport dichotomy_probe(const Rat& gamma, const Rat& gamma_prime,
                                       const std::function<Rat(u64)>& psi,
                                       const Rat& delta, u64 Q, u64 samples, u64 seed,
                                       unsigned P = kDefaultPrecisionBits,
                                       unsigned threads = 1) {
    if (delta <= 0) throw std::invalid_argument("dichotomy_probe: delta must be positive");
    for (u64 q = 1; q <= Q; ++q) {
        Rat v = psi(q);
        if (v != 0 && v < delta)
            throw std::invalid_argument("dichotomy_probe: psi below delta at q = " +
                                        std::to_string(q));
    }
    Rat diff = gamma - gamma_prime;
    if (diff < 0) diff = -diff;
    Rat C = diff / delta + 1;

    auto psi2 = [&](u64 q) { return C * psi(q); };
    auto first = montecarlo_hits(gamma, psi, Q, samples, seed, {}, P, 0, threads);
    auto second = montecarlo_hits(gamma_prime, psi2, Q, samples, seed, {}, P, 0, threads);

    DichotomyReport rep;
    rep.C = C;
    for (u64 s = 0; s < samples; ++s) {
        DichotomyRow row;
        row.sample = s;
        row.hits_first = first[s].hits.size();
        row.hits_second = second[s].hits.size();
        // Containment over q values: ambiguous second-family hits still count
        // as contained (the inclusion can be boundary-exact).
        std::set<u64> covered;
        for (const auto& [q, a] : second[s].hits) covered.insert(q);
        for (const auto& [q, a] : second[s].ambiguous) covered.insert(q);
        row.containment = true;
        for (const auto& [q, a] : first[s].hits)
            if (!covered.count(q)) row.containment = false;
        if (!row.containment) ++rep.containment_violations;
        if (row.hits_first > row.hits_second + second[s].ambiguous.size())
            ++rep.samples_first_exceeds;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace bclab
