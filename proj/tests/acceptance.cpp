// Acceptance gate: twelve end-to-end criteria, one PASS/FAIL line each.
// Every check is exact (rational arithmetic) unless a line reports a
// measured decimal; tolerances are pinned in code next to each criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "bclab/bclab.hpp"

using namespace bclab;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
    std::printf("AC%d %s %s\n", idx, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- AC1: |I_q(A,B)| = phi(q,B) for q <= 2000, B <= 50, gcd(A,B) = 1 -------
void ac1() {
    auto t0 = std::chrono::steady_clock::now();
    u64 mismatches = 0, checked = 0;
    std::vector<unsigned char> cop;
    for (u64 q = 1; q <= 2000; ++q) {
        cop.assign(q, 0);
        for (u64 r = 0; r < q; ++r) cop[r] = std::gcd(r, q) == 1 ? 1 : 0;
        for (u64 B = 1; B <= 50; ++B) {
            u64 expected = phi_qb(q, B);
            u64 step = B % q;
            for (u64 A = 0; A < B; ++A) {
                if (std::gcd(A, B) != 1) continue;
                u64 count = 0, r = A % q;
                for (u64 a = 0; a < q; ++a) {
                    count += cop[r];
                    r += step;
                    if (r >= q) r -= q;
                }
                ++checked;
                if (count != expected) ++mismatches;
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "residue-set cardinality vs totient formula: %llu cases, %llu "
                  "mismatches, %.1fs",
                  static_cast<unsigned long long>(checked),
                  static_cast<unsigned long long>(mismatches), seconds_since(t0));
    report(1, mismatches == 0, buf);
}

// --- AC2: brute-force F(h,q) = multiplicative formula ----------------------
void ac2() {
    auto t0 = std::chrono::steady_clock::now();
    u64 mismatches = 0, checked = 0, spot = 0;
    std::vector<unsigned char> cop, m;
    for (u64 q = 1; q <= 500; ++q) {
        cop.assign(q, 0);
        for (u64 r = 0; r < q; ++r) cop[r] = std::gcd(r, q) == 1 ? 1 : 0;
        m.resize(q);
        for (u64 B = 1; B <= 10; ++B) {
            u64 step = B % q;
            for (u64 A = 0; A < B; ++A) {
                if (std::gcd(A, B) != 1) continue;
                u64 r = A % q;
                for (u64 a = 0; a < q; ++a) {
                    m[a] = cop[r];
                    r += step;
                    if (r >= q) r -= q;
                }
                for (i64 h = -50; h <= 50; ++h) {
                    u64 hm = detail::mod_pos(h, q);
                    u64 count = 0, j = hm;
                    for (u64 a = 0; a < q; ++a) {
                        count += static_cast<u64>(m[a] & m[j]);
                        ++j;
                        if (j >= q) j = 0;
                    }
                    ++checked;
                    if (count != F_hq_formula(h, q, B)) ++mismatches;
                    // tie the hoisted brute force to the library's direct loop
                    if (checked % 9973 == 0) {
                        ++spot;
                        if (count != F_hq(h, q, static_cast<i64>(A), B)) ++mismatches;
                    }
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "pair-coprimality count vs multiplicative formula: %llu cases "
                  "(%llu direct spot checks), %llu mismatches, %.1fs",
                  static_cast<unsigned long long>(checked),
                  static_cast<unsigned long long>(spot),
                  static_cast<unsigned long long>(mismatches), seconds_since(t0));
    report(2, mismatches == 0, buf);
}

// --- AC3: H(c) vanishing, bound, and total over all q != r <= 120 ----------
void ac3() {
    auto t0 = std::chrono::steady_clock::now();
    u64 bad_vanish = 0, bad_bound = 0, bad_total = 0, combos = 0;
    for (u64 q = 1; q <= 120; ++q) {
        for (u64 r = 1; r <= 120; ++r) {
            if (q == r) continue;
            MLN d = mln_decompose(q, r);
            for (u64 B = 1; B <= 10; ++B) {
                // the c-independent part of the counting bound
                Rat base(static_cast<unsigned long>(d.gcd_qr));
                base *= rat(static_cast<long>(euler_phi(d.m)), static_cast<long>(d.m));
                Rat fl = rat(static_cast<long>(euler_phi(d.l)), static_cast<long>(d.l));
                base *= fl * fl;
                auto inv = [](u64 p) {
                    return rat(static_cast<long>(p), static_cast<long>(p - 1));
                };
                for (const auto& [p, e] : factor(std::gcd(B, d.m))) base *= inv(p);
                for (const auto& [p, e] : factor(std::gcd(B, d.l)))
                    base *= inv(p) * inv(p);
                std::vector<u64> l_primes;
                for (const auto& [p, e] : factor(d.l)) l_primes.push_back(p);

                for (u64 A = 0; A < B; ++A) {
                    if (std::gcd(A, B) != 1) continue;
                    ++combos;
                    HTable tab = H_table(q, r, static_cast<i64>(A), B);
                    u64 total = 0;
                    i64 tmod = (static_cast<i64>(r) - static_cast<i64>(q)) /
                               static_cast<i64>(d.gcd_qr) * static_cast<i64>(A);
                    u64 tB = detail::mod_pos(tmod, B);
                    for (const auto& [c, cnt] : tab.values) {
                        total += cnt;
                        // Lemma: H(c) = 0 unless c = (r-q)/(q,r) A (mod B)
                        // and gcd(c, n) = 1; every surviving c must comply.
                        u64 cabs = static_cast<u64>(c < 0 ? -c : c);
                        if (detail::mod_pos(c, B) != tB || std::gcd(cabs, d.n) != 1)
                            ++bad_vanish;
                        Rat bound = base;
                        for (u64 p : l_primes)
                            if (cabs % p == 0)
                                bound *= rat(static_cast<long>(p),
                                             static_cast<long>(p - 1));
                        if (rat(Int(static_cast<unsigned long>(cnt)), Int(1)) > bound)
                            ++bad_bound;
                    }
                    if (total != tab.total_pairs) ++bad_total;
                }
            }
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "difference-count table: %llu (q,r,A,B) combos; vanishing "
                  "violations %llu, bound violations %llu, total mismatches %llu, "
                  "%.1fs",
                  static_cast<unsigned long long>(combos),
                  static_cast<unsigned long long>(bad_vanish),
                  static_cast<unsigned long long>(bad_bound),
                  static_cast<unsigned long long>(bad_total), seconds_since(t0));
    report(3, bad_vanish == 0 && bad_bound == 0 && bad_total == 0, buf);
}

// --- AC4: exact measure formulas --------------------------------------------
void ac4() {
    auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(401, 0);
    u64 bad = 0;
    for (int i = 0; i < 500; ++i) {
        u64 q = 1 + rng.next_below(1000);
        Rat psi_q = rat(1 + static_cast<long>(rng.next_below(1000)), 2000);  // <= 1/2
        Rat gamma = rat(static_cast<long>(rng.next_below(997)), 997);
        ApproxFn psi(std::map<u64, Rat>{{q, psi_q}});
        Rat mu_prime = build_Eq_prime(q, gamma, psi).measure();
        if (mu_prime != Rat(2) * psi_q *
                            rat(static_cast<long>(euler_phi(q)), static_cast<long>(q)))
            ++bad;
        u64 B = 1 + rng.next_below(8);
        u64 A = rng.next_below(B);
        while (std::gcd(A, B) != 1) A = rng.next_below(B);
        ResidueSet I = enumerate_Iq(q, static_cast<i64>(A), B);
        if (build_Eq_I(q, gamma, psi, I).measure() !=
            Rat(2) * psi_q *
                rat(static_cast<long>(I.members.size()), static_cast<long>(q)))
            ++bad;
    }
    u64 bad_large = 0;
    for (int i = 0; i < 200; ++i) {
        u64 q = 1 + rng.next_below(400);
        Rat psi_q = rat(static_cast<long>(501 + rng.next_below(3000)), 1000);  // > 1/2
        u64 B = 1 + rng.next_below(8);
        u64 A = rng.next_below(B);
        while (std::gcd(A, B) != 1) A = rng.next_below(B);
        try {
            MeasureParts p = large_psi_measure_parts(q, static_cast<i64>(A), B, psi_q);
            Rat main = Rat(2) * psi_q *
                       rat(static_cast<long>(phi_qb(q, B)), static_cast<long>(q));
            if (p.main != main) ++bad_large;  // exact == set measure is
                                              // revalidated internally
        } catch (const std::logic_error&) {
            ++bad_large;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "arc-family measures: 500 small-psi + 200 large-psi randomized "
                  "cases, %llu + %llu mismatches, %.1fs",
                  static_cast<unsigned long long>(bad),
                  static_cast<unsigned long long>(bad_large), seconds_since(t0));
    report(4, bad == 0 && bad_large == 0, buf);
}

// --- AC5: X < 1 forces exact disjointness -----------------------------------
void ac5() {
    auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(501, 0);
    u64 bad = 0, cases = 0;
    while (cases < 500) {
        u64 q = 2 + rng.next_below(99);
        u64 r = 2 + rng.next_below(99);
        if (q == r) continue;
        u64 B = 1 + rng.next_below(5);
        u64 lcm = std::lcm(q, r);
        // draw psi with max(psi/q, psi/r) strictly below 1/(2 B lcm)
        long rho = 1 + static_cast<long>(rng.next_below(998));
        Rat cap = rat(rho, 1000) / rat(2 * static_cast<long>(B * lcm), 1);
        Rat psi_q = cap * rat(static_cast<long>(q), 1);
        Rat psi_r = cap * rat(static_cast<long>(r), 1) *
                    rat(1 + static_cast<long>(rng.next_below(1000)), 1000);
        if (X_qr(q, r, psi_q, psi_r, B) >= 1) continue;
        ++cases;
        u64 A = rng.next_below(B);
        while (std::gcd(A, B) != 1) A = rng.next_below(B);
        ApproxFn psi(std::map<u64, Rat>{{q, psi_q}, {r, psi_r}});
        Rat mu = intersect(build_Eq_star(q, static_cast<i64>(A), B, psi),
                           build_Eq_star(r, static_cast<i64>(A), B, psi))
                     .measure();
        if (mu != 0) ++bad;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "sub-threshold overlap scale: 500 randomized pairs, %llu "
                  "non-empty intersections, %.1fs",
                  static_cast<unsigned long long>(bad), seconds_since(t0));
    report(5, bad == 0, buf);
}

// --- AC6: the sharp constant-set example ------------------------------------
void ac6() {
    auto half = [](u64) { return CircleSet::from_intervals({{Rat(0), rat(1, 2)}}); };
    bool ok = true;
    for (u64 n : {4, 16, 64}) {
        std::vector<u64> S(n);
        std::iota(S.begin(), S.end(), 1);
        MomentReport rep = overlap_moments(IndexWindow(S), half);
        if (!rep.C_full || *rep.C_full != Rat(2)) ok = false;
    }
    FinSpace constant{{rat(1, 2), rat(1, 2)}, {}, {{0}}};
    DbcReport dbc = verify_dbc(constant, Rat(2), 4);
    if (dbc.limsup_measure != rat(1, 2) || dbc.lower_bound != rat(1, 2) ||
        dbc.verdict != Verdict::confirmed)
        ok = false;
    report(6, ok,
           "constant-set second moment = 2 Psi^2 at |S| in {4,16,64}; limsup "
           "measure exactly 1/2 = 1/C");
}

// --- AC7: reduction lemma on 1000 randomized instances -----------------------
void ac7() {
    auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(701, 0);
    u64 bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        u64 n = 3 + rng.next_below(8);
        std::vector<u64> S(n);
        std::iota(S.begin(), S.end(), 1);
        std::map<u64, Rat> mu;
        for (u64 s : S) mu[s] = rat(1 + static_cast<long>(rng.next_below(20)), 40);
        std::map<std::pair<u64, u64>, Rat> pairs;
        Rat sum(0), off(0);
        for (u64 s : S) sum += mu[s];
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                Rat cap = std::min(mu[S[i]], mu[S[j]]);
                Rat v = cap * rat(static_cast<long>(rng.next_below(21)), 20);
                pairs[{S[i], S[j]}] = v;
                off += v;
            }
        Rat C = off / (sum * sum) + rat(1, 1000000);
        try {
            u64 m = reduction_step(IndexWindow(S), mu, pairs, C);
            Rat sum2(0), off2(0);
            for (u64 s : S)
                if (s != m) sum2 += mu[s];
            for (const auto& [st, v] : pairs)
                if (st.first != m && st.second != m) off2 += v;
            if (off2 > C * sum2 * sum2) ++bad;
        } catch (const std::exception&) {
            ++bad;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "window reduction: 1000 randomized instances, %llu revalidation "
                  "failures, %.1fs",
                  static_cast<unsigned long long>(bad), seconds_since(t0));
    report(7, bad == 0, buf);
}

// --- AC8: series comparability at Q = 10^5 -----------------------------------
void ac8() {
    auto t0 = std::chrono::steady_clock::now();
    const u64 Q = 100000;
    std::vector<Rat> plain, weighted;
    plain.reserve(Q);
    weighted.reserve(Q);
    for (u64 q = 1; q <= Q; ++q) {
        plain.push_back(rat(1, static_cast<long>(q)));
        weighted.push_back(rat(static_cast<long>(euler_phi(q)),
                               static_cast<long>(q) * static_cast<long>(q)));
    }
    Rat ratio = exact_sum(weighted) / exact_sum(plain);
    double val = ratio.get_d();
    double target = 6.0 / (M_PI * M_PI);
    double rel = std::abs(val - target) / target;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "totient-weighted vs plain partial sums at Q=1e5: exact ratio "
                  "%.6f vs 6/pi^2 = %.6f, relative gap %.4f (tolerance 0.02), %.1fs",
                  val, target, rel, seconds_since(t0));
    report(8, rel <= 0.02, buf);
}

// --- AC9: rational-shift approximation at desk scale -------------------------
void ac9() {
    auto t0 = std::chrono::steady_clock::now();
    auto psi = [](u64 q) { return rat(1, 2 * static_cast<long>(q)); };

    Rat tail = tail_union_measure_residue(100, 5000, 1, 3, psi);
    double tail_d = tail.get_d();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "(a) exact tail union m=100 Q=5000 for shift 1/3: measure %.6f "
                  "(threshold 0.99), %.1fs",
                  tail_d, seconds_since(t0));
    report(9, tail >= rat(99, 100), buf);

    auto t1 = std::chrono::steady_clock::now();
    HitModeSpec mode{HitMode::residue, 1, 3};
    auto recs = montecarlo_hits(rat(1, 3), psi, 100000, 1000, 7, mode, 256);
    u64 enough = 0;
    for (const auto& r : recs)
        if (r.hits.size() >= 10) ++enough;
    double frac = static_cast<double>(enough) / 1000.0;
    std::snprintf(buf, sizeof buf,
                  "(b) Monte Carlo seed 7 P=256: %llu/1000 samples with >= 10 "
                  "unambiguous hits by Q=1e5 (threshold 0.99), %.1fs",
                  static_cast<unsigned long long>(enough), seconds_since(t1));
    report(9, frac >= 0.99, buf);
}

// --- AC10: construction certificates -----------------------------------------
void ac10() {
    bool ok = true;
    std::string detail;
    std::map<u64, Rat> half;
    for (u64 q = 1; q <= 200; ++q) half[q] = rat(1, 2);
    auto [cf1, cert1] = construct_gamma_for_psi(half, {}, 1);
    if (cert1.steps[0].window_hi != 3 || cert1.steps[0].sum != rat(13, 12)) ok = false;
    if (!verify_certificate(cert1)) ok = false;

    std::map<u64, Rat> big;
    for (u64 q = 1; q <= 40; ++q) big[q] = rat(pow_int(Int(10), 15), Int(1));
    auto [cf2, cert2] = construct_gamma_for_psi(big, {}, 3);
    auto [cf3, cert3] = construct_gamma_for_psi(big, {}, 3, true);
    auto [cf4, cert4] = construct_gamma_for_psi(big, {{1, Int(3)}}, 2);
    std::vector<std::pair<Int, Int>> ftab;
    for (long k = 0; k <= 40; ++k) ftab.emplace_back(pow_int(Int(2), k), pow_int(Int(4), k));
    auto [cf5, cert5] = construct_gamma_for_f(ftab, {}, 2);
    for (const GammaCertificate* c : {&cert2, &cert3, &cert4, &cert5}) {
        std::string why;
        if (!verify_certificate(*c, &why)) {
            ok = false;
            detail = " (" + why + ")";
        }
        for (size_t i = 0; i < c->steps.size(); ++i) {
            const GammaStep& s = c->steps[i];
            if (s.a_k < s.margin_bound) ok = false;
            if (c->kind == "psi" && s.a_k < s.window_hi * s.window_hi) ok = false;
        }
        // round trip through serialization must revalidate too
        if (!verify_certificate(certificate_from_json(certificate_to_json(*c))))
            ok = false;
    }
    report(10, ok,
           "shift-construction certificates: first window (1..3] sum 13/12, "
           "quotient margins, prime/fixed/f variants, JSON round trip" + detail);
}

// --- AC11: summable mixing envelope -------------------------------------------
void ac11() {
    auto t0 = std::chrono::steady_clock::now();
    DynSystem x2 = DynSystem::times(2);
    CounterRng rng(1101, 0);
    std::vector<std::pair<CircleSet, CircleSet>> pairs;
    auto rand_seg = [&]() {
        long den = 2 + static_cast<long>(rng.next_below(500));
        long a = static_cast<long>(rng.next_below(static_cast<u64>(den)));
        long len = 1 + static_cast<long>(rng.next_below(static_cast<u64>(den - a)));
        return CircleSet::from_intervals({{rat(a, den), rat(a + len, den)}});
    };
    for (int i = 0; i < 100; ++i) pairs.emplace_back(rand_seg(), rand_seg());
    MixingProfile prof = sigma_mixing_envelope(x2, pairs, 20);

    bool dyadic_ok = true;
    for (int i = 0; i < 50; ++i) {
        unsigned lvl = 1 + rng.next_below(8);
        u64 cells = u64(1) << lvl;
        u64 a = rng.next_below(cells);
        u64 len = 1 + rng.next_below(cells - a);
        CircleSet A = CircleSet::from_intervals(
            {{rat(static_cast<long>(a), static_cast<long>(cells)),
              rat(static_cast<long>(a + len), static_cast<long>(cells))}});
        CircleSet B = rand_seg();
        for (u64 n = lvl; n <= lvl + 3; ++n)
            if (mixing_gap(A, B, n, x2) != Rat(0)) dyadic_ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "doubling-map correlation gaps: 100 pairs x 20 steps within "
                  "2 mu(B) 2^-n (%zu violations); dyadic gaps exactly 0: %s, %.1fs",
                  prof.violations.size(), dyadic_ok ? "yes" : "no",
                  seconds_since(t0));
    report(11, prof.within_envelope && dyadic_ok, buf);
}

// --- AC12: quantitative counting ----------------------------------------------
void ac12() {
    auto t0 = std::chrono::steady_clock::now();
    DynSystem x2 = DynSystem::times(2);
    TargetSequence shrink = TargetSequence::random_centers(
        1201, [](u64 n) { return rat(1, 4 * static_cast<long>(n)); });
    CountReport rep = counting_experiment(x2, shrink, 100000, 200, 0.1, 7, 10.0);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "(a) residual bound K=10 eps=0.1 at N=1e5: pass fraction %.3f "
                  "(threshold 0.95), %.1fs",
                  rep.pass_fraction, seconds_since(t0));
    report(12, rep.pass_fraction >= 0.95, buf);

    auto t1 = std::chrono::steady_clock::now();
    TargetSequence conv = TargetSequence::random_centers(1202, [](u64 n) {
        return rat(1, static_cast<long>(n) * static_cast<long>(n));
    });
    CountReport crep = counting_experiment(x2, conv, 100000, 200, 0.1, 7, 10.0);
    u64 bounded = 0;
    for (const auto& row : crep.rows)
        if (row.hits <= 20) ++bounded;
    double frac = static_cast<double>(bounded) / 200.0;
    std::snprintf(buf, sizeof buf,
                  "(b) convergent radii n^-2: fraction of samples with <= 20 hits "
                  "%.3f (threshold 0.95), %.1fs",
                  frac, seconds_since(t1));
    report(12, frac >= 0.95, buf);
}

}  // namespace

int main() {
    ac1();
    ac2();
    ac3();
    ac4();
    ac5();
    ac6();
    ac7();
    ac8();
    ac9();
    ac10();
    ac11();
    ac12();
    if (g_failures) {
        std::printf("%d criterion check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
