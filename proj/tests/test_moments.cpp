#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bclab/moments.hpp"
#include "bclab/rng.hpp"

using namespace bclab;

namespace {

std::map<std::pair<u64, u64>, Rat> constant_pairs(const std::vector<u64>& S, const Rat& v) {
    std::map<std::pair<u64, u64>, Rat> p;
    for (size_t i = 0; i < S.size(); ++i)
        for (size_t j = i + 1; j < S.size(); ++j) p[{S[i], S[j]}] = v;
    return p;
}

std::vector<u64> iota_window(u64 n) {
    std::vector<u64> v(n);
    std::iota(v.begin(), v.end(), 1);
    return v;
}

}  // namespace

TEST_CASE("weighted divergence sums") {
    IndexWindow S({1, 2, 3});
    ApproxFn psi = ApproxFn::constant(rat(1, 2), 3);
    CHECK(psi_sum(S, psi, Weight{WeightKind::phi_over_q}) == rat(13, 12));
    CHECK(psi_sum(S, psi, Weight{WeightKind::unit}) == rat(3, 2));
    CHECK(psi_sum(S, ApproxFn(), Weight{}) == Rat(0));

    // additive over disjoint windows
    IndexWindow a({1, 3}), b({2});
    Weight w{WeightKind::I_over_q, 1, 2};
    CHECK(psi_sum(a, psi, w) + psi_sum(b, psi, w) == psi_sum(S, psi, w));
}

TEST_CASE("second moments of identical sets") {
    auto half = [](u64) {
        return CircleSet::from_intervals({{Rat(0), rat(1, 2)}});
    };
    MomentReport rep = overlap_moments(IndexWindow(iota_window(4)), half);
    CHECK(rep.Psi == Rat(2));
    CHECK(rep.overlap_offdiag == Rat(3));
    CHECK(rep.overlap_full == Rat(8));
    REQUIRE(rep.C_full);
    CHECK(*rep.C_full == Rat(2));

    // the full-pair constant is exactly 2 at every window size
    for (u64 n : {16, 64}) {
        MomentReport r = overlap_moments(IndexWindow(iota_window(n)), half);
        REQUIRE(r.C_full);
        CHECK(*r.C_full == Rat(2));
        CHECK(r.overlap_full == Rat(2) * r.overlap_offdiag + r.Psi);
    }
}

TEST_CASE("second moments of disjoint sets") {
    auto builder = [](u64 q) {
        return CircleSet::from_intervals(
            {{rat(static_cast<long>(q), 10), rat(static_cast<long>(q), 10) + rat(1, 20)}});
    };
    MomentReport rep = overlap_moments(IndexWindow({1, 2, 3, 4}), builder);
    CHECK(rep.overlap_offdiag == Rat(0));
    REQUIRE(rep.C_prime);
    CHECK(*rep.C_prime == Rat(0));
}

TEST_CASE("second moments of prime-indexed arc families") {
    ApproxFn psi = ApproxFn::constant(rat(1, 4), 7);
    auto builder = [&](u64 q) { return build_Eq_star(q, 0, 1, psi); };
    MomentReport rep = overlap_moments(IndexWindow({2, 3, 5, 7}), builder);
    CHECK(rep.Psi > 0);
    REQUIRE(rep.C_prime);
    CHECK(*rep.C_prime >= 0);
    CHECK(rep.overlap_full == Rat(2) * rep.overlap_offdiag + rep.Psi);
}

TEST_CASE("window size refusal") {
    auto half = [](u64) {
        return CircleSet::from_intervals({{Rat(0), rat(1, 2)}});
    };
    CHECK_THROWS_AS(overlap_moments(IndexWindow(iota_window(5)), half, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(overlap_moments(IndexWindow(std::vector<u64>{}), half),
                    std::invalid_argument);
}

TEST_CASE("one reduction step") {
    std::vector<u64> S{1, 2, 3};
    std::map<u64, Rat> mu{{1, rat(1, 2)}, {2, rat(1, 2)}, {3, rat(1, 2)}};
    auto pairs = constant_pairs(S, rat(1, 2));
    // equality case: off = 3/2 = (2/3)(3/2)^2; smallest index is returned
    CHECK(reduction_step(IndexWindow(S), mu, pairs, rat(2, 3)) == 1);
    // two-element windows return their front once the hypothesis holds
    CHECK(reduction_step(IndexWindow({5, 9}), {{5, Rat(1)}, {9, Rat(1)}},
                         {{{5, 9}, Rat(0)}}, Rat(0)) == 5);
    // violated hypothesis is a caller error
    CHECK_THROWS_AS(reduction_step(IndexWindow(S), mu, pairs, rat(1, 100)),
                    std::invalid_argument);
}

TEST_CASE("random reduction steps revalidate") {
    CounterRng rng(23, 0);
    for (int trial = 0; trial < 25; ++trial) {
        u64 n = 3 + rng.next_below(6);
        std::vector<u64> S = iota_window(n);
        std::map<u64, Rat> mu;
        for (u64 q : S) mu[q] = rat(1 + static_cast<long>(rng.next_below(9)), 10);
        std::map<std::pair<u64, u64>, Rat> pairs;
        for (size_t i = 0; i < S.size(); ++i)
            for (size_t j = i + 1; j < S.size(); ++j) {
                Rat cap = mu[S[i]] < mu[S[j]] ? mu[S[i]] : mu[S[j]];
                pairs[{S[i], S[j]}] =
                    cap * rat(static_cast<long>(rng.next_below(11)), 10);
            }
        // pick C' at the observed ratio so the hypothesis holds exactly
        Rat sum(0), off(0);
        for (u64 q : S) sum += mu[q];
        for (const auto& [st, v] : pairs) off += v;
        Rat C = off / (sum * sum) + rat(1, 1000);

        u64 m = reduction_step(IndexWindow(S), mu, pairs, C);
        std::vector<u64> rest;
        for (u64 q : S)
            if (q != m) rest.push_back(q);
        Rat sum2(0), off2(0);
        for (u64 q : rest) sum2 += mu[q];
        for (size_t i = 0; i < rest.size(); ++i)
            for (size_t j = i + 1; j < rest.size(); ++j)
                off2 += pairs[{rest[i], rest[j]}];
        CHECK(off2 <= C * sum2 * sum2);
    }
}

TEST_CASE("band reduction") {
    std::vector<u64> S = iota_window(10);
    ApproxFn psi = ApproxFn::constant(rat(1, 100), 10);
    Weight unit{WeightKind::unit};
    auto pairs = constant_pairs(S, Rat(0));  // disjoint

    // sum 1/10 already inside [eps/2, eps] for eps = 1/5
    IndexWindow same =
        reduce_to_band(IndexWindow(S), psi, unit, pairs, rat(1, 5), Rat(1));
    CHECK(same.members == S);

    // shrink to the band [1/40, 1/20]
    IndexWindow cut =
        reduce_to_band(IndexWindow(S), psi, unit, pairs, rat(1, 20), Rat(1));
    Rat sum = psi_sum(cut, psi, unit);
    CHECK(sum >= rat(1, 40));
    CHECK(sum <= rat(1, 20));
    CHECK(cut.size() < S.size());

    // every term must sit below the band floor
    CHECK_THROWS_AS(
        reduce_to_band(IndexWindow(S), psi, unit, pairs, rat(1, 200), Rat(1)),
        std::invalid_argument);
    // explicit floor constant c tightens the band
    IndexWindow with_c = reduce_to_band(IndexWindow(S), psi, unit, pairs,
                                        rat(1, 20), Rat(1), rat(3, 100));
    Rat sum_c = psi_sum(with_c, psi, unit);
    CHECK(sum_c >= rat(3, 100));
    CHECK(sum_c <= rat(1, 20));
}

TEST_CASE("series comparison ratios") {
    // single supported q: the ratio collapses to phi(q)/q
    ApproxFn one(std::map<u64, Rat>{{12, rat(7, 3)}});
    DSRatio r = ds_condition_ratio(100, one);
    REQUIRE(r.ratio);
    CHECK(*r.ratio == rat(1, 3));  // phi(12)/12 = 4/12

    // empty sum has no ratio
    CHECK(!ds_condition_ratio(5, ApproxFn()).ratio.has_value());

    // indicator of primes: the ratio approaches 1
    std::map<u64, Rat> pv;
    for (u64 q = 2; q <= 10000; ++q)
        if (is_prime(Int(static_cast<unsigned long>(q)))) pv[q] = Rat(1);
    DSRatio rp = ds_condition_ratio(10000, ApproxFn(std::move(pv)));
    REQUIRE(rp.ratio);
    double val = rp.ratio->get_d();
    CHECK(val > 0.99);
    CHECK(val <= 1.0);
}

TEST_CASE("window condition checks") {
    // terminated expansion: zero error bound, c1 holds on any window
    CFExpansion cf = cf_of_rational(1, 2);
    IndexWindow S({1, 2, 3});
    ApproxFn big = ApproxFn::constant(Rat(300), 3);
    DSWindowCheck chk = check_general_DS_window(S, big, cf, 0);
    CHECK(chk.c1);
    CHECK(chk.c2);  // 300 * (1 + 1/2 + 2/3) = 650 >= 2^8
    CHECK(chk.c3_term == Rat(300));

    // small psi: the large-value maximum is empty
    ApproxFn small = ApproxFn::constant(rat(1, 4), 3);
    DSWindowCheck chk2 = check_general_DS_window(S, small, cf, 0);
    CHECK(chk2.c3_term == Rat(0));
    CHECK(!chk2.c2);

    // deep convergents against tiny psi: c1 fails
    CFExpansion golden(0);
    for (int i = 0; i < 6; ++i) golden.push_quotient(1);
    ApproxFn tiny(std::map<u64, Rat>{{2, rat(1, 1000)}});
    DSWindowCheck chk3 = check_general_DS_window(IndexWindow({2}), tiny, golden, 1);
    CHECK(!chk3.c1);  // 1/6 > 1/1000
}

TEST_CASE("totient with a big-integer coprimality base") {
    CHECK(phi_qb_big(12, Int(2)) == 8);
    CHECK(phi_qb_big(9, Int(3)) == 9);
    CHECK(phi_qb_big(7, Int("1000000000000000000000")) == 6);
    CounterRng rng(29, 1);
    for (int trial = 0; trial < 30; ++trial) {
        u64 q = 1 + rng.next_below(500);
        u64 b = 1 + rng.next_below(500);
        CHECK(phi_qb_big(q, Int(static_cast<unsigned long>(b))) == phi_qb(q, b));
    }
}
