#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bclab/contfrac.hpp"
#include "bclab/json_io.hpp"

using namespace bclab;

namespace {

CFExpansion golden_prefix(int n) {
    CFExpansion cf(0);
    for (int i = 0; i < n; ++i) cf.push_quotient(1);
    return cf;
}

std::map<u64, Rat> constant_psi(const Rat& v, u64 Q) {
    std::map<u64, Rat> t;
    for (u64 q = 1; q <= Q; ++q) t[q] = v;
    return t;
}

}  // namespace

TEST_CASE("is_prime spot checks") {
    CHECK(is_prime(Int(2)));
    CHECK(is_prime(Int(97)));
    CHECK(!is_prime(Int(1)));
    CHECK(!is_prime(Int(561)));       // Carmichael
    CHECK(is_prime(Int("2305843009213693951")));  // 2^61 - 1
    CHECK(!is_prime(Int("2305843009213693953")));
}

TEST_CASE("convergents of the Fibonacci expansion") {
    CFExpansion cf = golden_prefix(4);  // [0;1,1,1,1]
    auto c0 = convergents(cf, 0);
    auto c1 = convergents(cf, 1);
    auto c2 = convergents(cf, 2);
    auto c3 = convergents(cf, 3);
    CHECK(c0 == std::pair<Int, Int>{1, 1});
    CHECK(c1 == std::pair<Int, Int>{1, 2});
    CHECK(c2 == std::pair<Int, Int>{2, 3});
    CHECK(c3 == std::pair<Int, Int>{3, 5});
    CHECK_THROWS_AS(convergents(cf, 4), std::invalid_argument);
}

TEST_CASE("cf_of_rational") {
    CFExpansion cf = cf_of_rational(1, 3);
    CHECK(cf.a0() == 0);
    CHECK(cf.quotients() == std::vector<Int>{3});
    CHECK(cf.value() == rat(1, 3));
    CHECK_THROWS_AS(cf_of_rational(2, 4), std::invalid_argument);
    CHECK_THROWS_AS(cf_of_rational(1, 0), std::invalid_argument);

    // round trip on a few rationals
    for (auto [p, q] : {std::pair<long, long>{355, 113}, {7, 19}, {1, 2}}) {
        CHECK(cf_of_rational(p, q).value() == rat(p, q));
    }
}

TEST_CASE("approx_error_upper") {
    CFExpansion cf = golden_prefix(3);  // [0;1,1,1]
    CHECK(approx_error_upper(cf, 1) == rat(1, 6));  // 1/(2*3)
}

TEST_CASE("convergent invariants") {
    CFExpansion cf(0);
    for (long a : {2, 7, 1, 4, 3, 9, 2}) cf.push_quotient(a);
    Int prev_q = 0;
    for (size_t k = 0; k <= cf.length(); ++k) {
        auto [p, q] = cf.convergent(k);
        Int g;
        mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        CHECK(g == 1);
        if (k >= 1) CHECK(q > prev_q);
        prev_q = q;
    }
    // truncation error bound: |value - p_k/q_k| <= 1/(q_k q_{k+1})
    Rat full = cf.value();
    for (size_t k = 0; k + 1 <= cf.length(); ++k) {
        auto [p, q] = cf.convergent(k);
        Rat err = full - rat(p, q);
        if (err < 0) err = -err;
        CHECK(err <= rat(Int(1), q * cf.q_at(k + 1)));
    }
}

TEST_CASE("liouville_margin") {
    CHECK(liouville_margin(golden_prefix(10), 0) == 0);
    CHECK(liouville_margin(golden_prefix(10), 8) == 0);  // all quotients 1

    CFExpansion cf(0);
    cf.push_quotient(2);     // q_1 = 2
    cf.push_quotient(1024);  // a_2 = 2^10 vs q_1 = 2: ratio exactly 10
    CHECK(liouville_margin(cf, 1) == Rat(10));
}

TEST_CASE("gamma construction for constant psi = 1/2") {
    auto [cf, cert] = construct_gamma_for_psi(constant_psi(rat(1, 2), 100), {}, 1);
    REQUIRE(cert.steps.size() == 1);
    const GammaStep& s = cert.steps[0];
    CHECK(s.k == 1);
    CHECK(s.window_lo == 1);
    CHECK(s.window_hi == 3);                 // 1/2 + 1/4 + 1/3 = 13/12 >= 1
    CHECK(s.sum == rat(13, 12));
    CHECK(s.bound == 1);
    CHECK(s.a_k == 9);                       // smallest a >= Q_1^2 = 9
    CHECK(cf.q_at(1) == 9);
    CHECK(verify_certificate(cert));
}

TEST_CASE("gamma construction fails on empty support") {
    CHECK_THROWS_AS(construct_gamma_for_psi({}, {}, 1), horizon_error);
    CHECK_THROWS_AS(construct_gamma_for_psi(constant_psi(rat(1, 2), 3), {}, 2),
                    horizon_error);
}

TEST_CASE("multi-step gamma construction revalidates") {
    auto psi = constant_psi(Rat(1000000000), 20);
    auto [cf, cert] = construct_gamma_for_psi(psi, {}, 3);
    REQUIRE(cert.steps.size() == 3);
    std::string why;
    CHECK(verify_certificate(cert, &why));
    // Liouville margin at step i is at least i
    for (size_t i = 0; i < cert.steps.size(); ++i)
        CHECK(cert.steps[i].a_k >= cert.steps[i].margin_bound);

    // tampering is detected
    GammaCertificate bad = cert;
    bad.steps[1].sum += 1;
    CHECK(!verify_certificate(bad, &why));
    CHECK(!why.empty());
}

TEST_CASE("prime denominators option") {
    auto [cf, cert] =
        construct_gamma_for_psi(constant_psi(Rat(1000000000), 20), {}, 3, true);
    CHECK(verify_certificate(cert));
    for (const GammaStep& s : cert.steps) CHECK(is_prime(s.q_k));
}

TEST_CASE("fixed pattern indices are respected") {
    std::map<size_t, Int> k0{{1, Int(2)}, {3, Int(5)}};
    Rat big = rat(pow_int(Int(10), 13), Int(1));
    auto [cf, cert] = construct_gamma_for_psi(constant_psi(big, 30), k0, 2);
    REQUIRE(cert.steps.size() == 2);
    CHECK(cert.steps[0].k == 2);  // first free index
    CHECK(cert.steps[1].k == 4);
    CHECK(cf.quotients()[0] == 2);
    CHECK(cf.quotients()[2] == 5);
    CHECK(verify_certificate(cert));
}

TEST_CASE("gamma construction from a divergence-rate table f") {
    std::vector<std::pair<Int, Int>> f;
    for (long q = 1; q <= 100; ++q) f.emplace_back(q, q);
    auto [cf, cert] = construct_gamma_for_f(f, {}, 1);
    REQUIRE(cert.steps.size() == 1);
    CHECK(cert.steps[0].a_k == 1);  // threshold and margin both force 1
    CHECK(verify_certificate(cert));

    // bounded table exhausts once the threshold outgrows it
    std::vector<std::pair<Int, Int>> small{{10, 1000}};
    CHECK_THROWS_AS(construct_gamma_for_f(small, {}, 2), horizon_error);

    // non-monotone table is rejected
    std::vector<std::pair<Int, Int>> badf{{1, 3}, {2, 1}};
    CHECK_THROWS_AS(construct_gamma_for_f(badf, {}, 1), std::invalid_argument);
}

TEST_CASE("certificate JSON round trip") {
    auto [cf, cert] = construct_gamma_for_psi(constant_psi(Rat(1000000000), 20), {}, 2);
    json j = certificate_to_json(cert);
    GammaCertificate back = certificate_from_json(j);
    CHECK(verify_certificate(back));
    CHECK(back.steps.size() == cert.steps.size());
    CHECK(back.steps[1].q_k == cert.steps[1].q_k);

    auto [cff, certf] = construct_gamma_for_f(
        std::vector<std::pair<Int, Int>>{{1, 1}, {10, 100}, {100, 10000}}, {}, 1);
    GammaCertificate backf = certificate_from_json(certificate_to_json(certf));
    CHECK(verify_certificate(backf));
}
