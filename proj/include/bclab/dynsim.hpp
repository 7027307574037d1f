#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bc.hpp"
#include "circle_set.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace bclab {

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Circle system: the expanding map x -> b x (mod 1), or rotation by a
/// rational angle. Irrational rotations are out of scope: their exact-mode
/// orbits would be periodic rationals, which defeats sampling experiments.
struct DynSystem {
    enum class Kind { times_b, rotation };
    Kind kind = Kind::times_b;
    u64 b = 2;
    Rat alpha;  // rotation angle

    static DynSystem times(u64 b) {
        if (b < 2) throw std::invalid_argument("DynSystem: need b >= 2");
        return {Kind::times_b, b, Rat(0)};
    }
    static DynSystem rotate(Rat a) { return {Kind::rotation, 0, std::move(a)}; }
};

inline constexpr size_t kPreimageBudget = size_t(1) << 20;

namespace detail {

inline CircleSet translate(const CircleSet& A, const Rat& delta) {
    std::vector<std::pair<Rat, Rat>> arcs;
    for (const auto& iv : A.intervals()) {
        Rat len = iv.hi - iv.lo;
        arcs.emplace_back((iv.lo + iv.hi) / 2 + delta, len / 2);
    }
    return CircleSet::from_arcs(arcs);
}

/// mu(B ∩ [0, y]) for y in [0, 1].
inline Rat partial_measure(const CircleSet& B, const Rat& y) {
    std::vector<Rat> parts;
    for (const auto& iv : B.intervals()) {
        if (iv.lo >= y) break;
        parts.push_back(std::min(iv.hi, y) - iv.lo);
    }
    return exact_sum(parts);
}

/// mu(T^{-n}B ∩ [0, x]) * b^n for the times-b map, as the coverage function
/// F(b^n x) with F(t) = floor(t) mu(B) + mu(B ∩ [0, frac(t)]): T^{-n}B meets
/// each cell [j/b^n, (j+1)/b^n] in a scaled copy of B.
inline Rat coverage(const CircleSet& B, const Rat& t, const Rat& muB) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
    Rat frac = t - rat(fl, Int(1));
    return rat(fl, Int(1)) * muB + partial_measure(B, frac);
}

}  // namespace detail

/// Exact T^{-n}A. For times-b this multiplies the piece count by b each
/// step, so a budget guards against runaway interval counts.
inline CircleSet exact_preimage(const CircleSet& A, u64 n, const DynSystem& sys,
                                size_t budget = kPreimageBudget) {
    if (sys.kind == DynSystem::Kind::rotation)
        return detail::translate(A, -sys.alpha * rat(static_cast<long>(n), 1));
    CircleSet cur = A;
    for (u64 i = 0; i < n; ++i) {
        if (cur.intervals().size() * sys.b > budget)
            throw resource_error("exact_preimage: piece budget " + std::to_string(budget) +
                                 " exceeded at step " + std::to_string(i + 1));
        cur = cur.preimage_mul(sys.b);
    }
    return cur;
}

/// Exact mu(A ∩ T^{-n}B) - mu(A) mu(B), computed in O(|A| |B|) via the
/// coverage function rather than by materializing T^{-n}B.
inline Rat mixing_gap(const CircleSet& A, const CircleSet& B, u64 n,
                      const DynSystem& sys) {
    Rat muA = A.measure(), muB = B.measure();
    if (sys.kind == DynSystem::Kind::rotation) {
        CircleSet shifted = detail::translate(B, -sys.alpha * rat(static_cast<long>(n), 1));
        return intersect(A, shifted).measure() - muA * muB;
    }
    Rat s = rat(pow_int(Int(static_cast<unsigned long>(sys.b)), n), Int(1));
    std::vector<Rat> parts;
    for (const auto& iv : A.intervals())
        parts.push_back(detail::coverage(B, s * iv.hi, muB) -
                        detail::coverage(B, s * iv.lo, muB));
    return exact_sum(parts) / s - muA * muB;
}

struct MixingProfile {
    // gaps[pair][n-1] = mu(A ∩ T^{-n}B) - mu(A) mu(B)
    std::vector<std::vector<Rat>> gaps;
    std::vector<Rat> envelopes;  // 2 b^{-n}, n = 1..N
    bool within_envelope = true;
    std::vector<std::pair<size_t, u64>> violations;  // (pair index, n)
};

/// Exact gaps for every pair and n <= N, checked against the summable
/// envelope |g_n| <= 2 mu(B) b^{-n}.
inline MixingProfile sigma_mixing_envelope(
    const DynSystem& sys, const std::vector<std::pair<CircleSet, CircleSet>>& pairs,
    u64 N) {
    if (sys.kind != DynSystem::Kind::times_b)
        throw std::invalid_argument("sigma_mixing_envelope: times-b systems only");
    MixingProfile prof;
    Rat binv = rat(1L, static_cast<long>(sys.b));
    Rat env = Rat(2);
    for (u64 n = 1; n <= N; ++n) {
        env *= binv;
        prof.envelopes.push_back(env);
    }
    for (size_t i = 0; i < pairs.size(); ++i) {
        const auto& [A, B] = pairs[i];
        Rat muB = B.measure();
        std::vector<Rat> row;
        for (u64 n = 1; n <= N; ++n) {
            Rat g = mixing_gap(A, B, n, sys);
            Rat bound = muB * prof.envelopes[n - 1];
            Rat ag = g < 0 ? -g : g;
            if (ag > bound) {
                prof.within_envelope = false;
                prof.violations.emplace_back(i, n);
            }
            row.push_back(std::move(g));
        }
        prof.gaps.push_back(std::move(row));
    }
    return prof;
}

/// Shrinking-target sequence A_n = ball(c_n, r_n) with exact rational data.
/// Random centers are 64-bit dyadic rationals drawn from stream (seed, n),
/// so center n is the same whatever order targets are queried in.
class TargetSequence {
   public:
    static constexpr u64 kCenterStreamTag = u64(1) << 62;

    static TargetSequence random_centers(u64 seed, std::function<Rat(u64)> radius) {
        TargetSequence t;
        t.seed_ = seed;
        t.seeded_ = true;
        t.radius_ = std::move(radius);
        return t;
    }

    static TargetSequence from_table(std::vector<std::pair<Rat, Rat>> balls) {
        TargetSequence t;
        t.table_ = std::move(balls);
        for (const auto& [c, r] : t.table_)
            if (r < 0) throw std::invalid_argument("TargetSequence: negative radius");
        return t;
    }

    Rat center(u64 n) const {
        if (!seeded_) {
            if (n == 0 || n > table_.size())
                throw std::invalid_argument("TargetSequence: n out of table range");
            return table_[n - 1].first;
        }
        CounterRng rng(seed_, kCenterStreamTag + n);
        return rat(Int(static_cast<unsigned long>(rng.next_u64())), Int(1) << 64);
    }

    Rat radius(u64 n) const {
        if (!seeded_) {
            if (n == 0 || n > table_.size())
                throw std::invalid_argument("TargetSequence: n out of table range");
            return table_[n - 1].second;
        }
        Rat r = radius_(n);
        if (r < 0) throw std::invalid_argument("TargetSequence: negative radius");
        return r;
    }

    u64 seed() const { return seed_; }
    bool seeded() const { return seeded_; }

    /// Phi(N) = sum of mu(A_n) = sum of min(2 r_n, 1), exact.
    Rat phi(u64 N) const {
        std::vector<Rat> terms;
        terms.reserve(N);
        for (u64 n = 1; n <= N; ++n) {
            Rat m = Rat(2) * radius(n);
            terms.push_back(m > 1 ? Rat(1) : m);
        }
        return exact_sum(terms);
    }

   private:
    bool seeded_ = false;
    u64 seed_ = 0;
    std::function<Rat(u64)> radius_;
    std::vector<std::pair<Rat, Rat>> table_;
};

/// Required sample precision for N steps of the times-b map: the orbit
/// consumes ceil(log2 b) bits per step plus a guard margin, rounded up to
/// whole limbs.
inline unsigned orbit_precision(u64 N, u64 b, unsigned guard = 64) {
    unsigned lb = 0;
    while ((u64(1) << lb) < b) ++lb;
    u64 p = N * lb + guard;
    return static_cast<unsigned>((p + 63) / 64 * 64);
}

namespace detail {

/// Fixed window view of a big dyadic fraction X / 2^P: the 128 bits of the
/// expansion starting after position `skip`.
struct BitWindow {
    std::vector<u64> limbs;  // little-endian, padded so reads never overrun
    unsigned P;

    explicit BitWindow(const Int& X, unsigned P_) : P(P_) {
        size_t words = P / 64;
        limbs.assign(words + 3, 0);
        size_t count = 0;
        mpz_export(limbs.data(), &count, -1, sizeof(u64), 0, 0, X.get_mpz_t());
    }

    unsigned __int128 read(u64 skip) const {
        // bits [P - skip - 128, P - skip) of X, LSB-indexed
        if (skip + 128 > P) throw std::invalid_argument("BitWindow: window out of range");
        u64 low = P - skip - 128;
        size_t w = low / 64;
        unsigned off = low % 64;
        unsigned __int128 v = (static_cast<unsigned __int128>(limbs[w + 1]) << 64) | limbs[w];
        if (off) {
            v >>= off;
            v |= static_cast<unsigned __int128>(limbs[w + 2]) << (128 - off);
        }
        return v;
    }
};

enum class HitClass { hit, miss, ambiguous };

inline Rat circle_dist(const Rat& t, const Rat& c) {
    Rat d = t - c;
    // reduce to [0, 1)
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), d.get_num().get_mpz_t(), d.get_den().get_mpz_t());
    d -= rat(fl, Int(1));
    Rat alt = Rat(1) - d;
    return d < alt ? d : alt;
}

inline HitClass classify(const Rat& t, const Rat& c, const Rat& r, const Rat& eps) {
    Rat d = circle_dist(t, c);
    if (d <= r - eps) return HitClass::hit;
    if (d <= r + eps) return HitClass::ambiguous;
    return HitClass::miss;
}

}  // namespace detail

/// Counts n <= N with T^n x in A_n for the times-b map, with exact decisions
/// and ambiguity flags inside the +-b^n 2^{-P} precision band. For b = 2 the
/// orbit is read as bit windows of x, with an exact fallback when a window
/// comparison is too close to call.
inline HitRecord orbit_hits(const Int& X, unsigned P, const TargetSequence& targets,
                            u64 N, const DynSystem& sys, u64 sample_id = 0) {
    if (sys.kind != DynSystem::Kind::times_b)
        throw std::invalid_argument("orbit_hits: times-b systems only");
    unsigned needed = orbit_precision(N, sys.b);
    if (P < needed)
        throw std::invalid_argument("orbit_hits: insufficient precision, need P >= " +
                                    std::to_string(needed));
    HitRecord rec;
    rec.sample = sample_id;
    rec.x_numerator = X;

    if (sys.b == 2) {
        detail::BitWindow win(X, P);
        for (u64 n = 1; n <= N; ++n) {
            Rat r = targets.radius(n);
            if (Rat(2) * r >= 1) {
                rec.hits.emplace_back(n, 0);
                continue;
            }
            Rat c = targets.center(n);
            const Int& cn = c.get_num();
            const Int& cd = c.get_den();
            // fast path: dyadic center of <= 64 bits, word-sized radius,
            // and 128 window bits actually available at this depth
            size_t cd_bits = mpz_sizeinbase(cd.get_mpz_t(), 2);
            bool fast_ok = n + 128 <= P && cd_bits <= 65 &&
                           mpz_popcount(cd.get_mpz_t()) == 1 && cn >= 0 &&
                           cn.fits_ulong_p() && r.get_num().fits_slong_p() &&
                           r.get_den().fits_slong_p() &&
                           r.get_num().get_si() < (i64(1) << 27);
            if (fast_ok) {
                unsigned shift = static_cast<unsigned>(cd_bits - 1);
                unsigned __int128 c128 = static_cast<unsigned __int128>(cn.get_ui())
                                         << (128 - shift);
                unsigned __int128 t128 = win.read(n);
                i64 rn = r.get_num().get_si(), rd = r.get_den().get_si();
                // lower bound on r * 2^128, short by less than 2^28
                unsigned __int128 rfloor =
                    ((static_cast<unsigned __int128>(rn) << 100) / rd) << 28;
                unsigned __int128 ud = t128 - c128;
                unsigned __int128 dist = std::min(ud, static_cast<unsigned __int128>(-ud));
                // window truncation + orbit slack 2^{n-P}, padded generously
                long e = static_cast<long>(n) + 128 - static_cast<long>(P);
                unsigned __int128 M =
                    (e <= 0 ? 1 : (static_cast<unsigned __int128>(1) << e)) +
                    (static_cast<unsigned __int128>(1) << 29);
                if (dist + M <= rfloor) {
                    rec.hits.emplace_back(n, 0);
                    continue;
                }
                if (dist > rfloor + 2 * M) continue;
            }
            // exact fallback: T^n x = (X mod 2^{P-n}) / 2^{P-n}
            Int rem;
            mpz_fdiv_r_2exp(rem.get_mpz_t(), X.get_mpz_t(), P - n);
            Rat t = rat(rem, Int(1) << (P - n));
            Rat eps = rat(Int(1) << n, Int(1) << P);
            switch (detail::classify(t, c, r, eps)) {
                case detail::HitClass::hit:
                    rec.hits.emplace_back(n, 0);
                    break;
                case detail::HitClass::ambiguous:
                    rec.ambiguous.emplace_back(n, 0);
                    break;
                case detail::HitClass::miss:
                    break;
            }
        }
        return rec;
    }

    // general b: exact orbit numerator mod 2^P
    Int Y = X;
    for (u64 n = 1; n <= N; ++n) {
        Y *= static_cast<unsigned long>(sys.b);
        mpz_fdiv_r_2exp(Y.get_mpz_t(), Y.get_mpz_t(), P);
        Rat r = targets.radius(n);
        if (Rat(2) * r >= 1) {
            rec.hits.emplace_back(n, 0);
            continue;
        }
        Rat t = rat(Y, Int(1) << P);
        Rat eps = rat(pow_int(Int(static_cast<unsigned long>(sys.b)), n), Int(1) << P);
        switch (detail::classify(t, targets.center(n), r, eps)) {
            case detail::HitClass::hit:
                rec.hits.emplace_back(n, 0);
                break;
            case detail::HitClass::ambiguous:
                rec.ambiguous.emplace_back(n, 0);
                break;
            case detail::HitClass::miss:
                break;
        }
    }
    return rec;
}

struct CountRow {
    u64 sample;
    u64 N;
    u64 hits;
    Rat phi;
    Rat residual;      // hits - Phi(N)
    double bound;      // K Phi^{1/2} (log Phi)^{3/2 + eps}
    bool pass;
};

struct CountReport {
    std::vector<CountRow> rows;
    double pass_fraction = 0.0;
    Rat phi;
    unsigned precision = 0;
    std::string rng = kRngAlgorithm;
};

/// Residual experiment for the quantitative counting bound: each sample
/// draws a fresh P-bit orbit start from stream (seed, sample) and its hit
/// count is compared with Phi(N) at tolerance K Phi^{1/2} (log Phi)^{3/2+eps}.
inline CountReport counting_experiment(const DynSystem& sys,
                                       const TargetSequence& targets, u64 N,
                                       u64 samples, double eps, u64 seed,
                                       double K = 10.0, unsigned threads = 1) {
    if (sys.kind != DynSystem::Kind::times_b)
        throw std::invalid_argument("counting_experiment: times-b systems only");
    unsigned P = orbit_precision(N, sys.b);
    CountReport rep;
    rep.precision = P;
    rep.phi = targets.phi(N);
    double phi_d = rep.phi.get_d();
    double bound = phi_d > 1.0
                       ? K * std::sqrt(phi_d) * std::pow(std::log(phi_d), 1.5 + eps)
                       : K;  // log term degenerates for tiny Phi; a flat K cap

    rep.rows.resize(samples);
    auto work = [&](u64 b0, u64 e0) {
        for (u64 s = b0; s < e0; ++s) {
            CounterRng rng(seed, s);
            Int X = rng.next_fixed_point(P);
            HitRecord rec = orbit_hits(X, P, targets, N, sys, s);
            CountRow row;
            row.sample = s;
            row.N = N;
            row.hits = rec.hits.size();
            row.phi = rep.phi;
            row.residual = rat(Int(static_cast<unsigned long>(row.hits)), Int(1)) - rep.phi;
            row.bound = bound;
            double res_d = std::abs(row.residual.get_d());
            row.pass = res_d <= bound;
            rep.rows[s] = std::move(row);
        }
    };
    if (threads <= 1) {
        work(0, samples);
    } else {
        std::vector<std::thread> pool;
        u64 chunk = (samples + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            u64 b0 = t * chunk, e0 = std::min<u64>(samples, b0 + chunk);
            if (b0 >= e0) break;
            pool.emplace_back(work, b0, e0);
        }
        for (auto& th : pool) th.join();
    }
    u64 passed = 0;
    for (const auto& r : rep.rows) passed += r.pass ? 1 : 0;
    rep.pass_fraction = samples ? static_cast<double>(passed) / samples : 0.0;
    return rep;
}

}  // namespace bclab
