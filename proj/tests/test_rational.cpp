#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bclab/rational.hpp"
#include "bclab/rng.hpp"

using namespace bclab;

TEST_CASE("rat constructs reduced rationals") {
    CHECK(rat(2, 4) == rat(1, 2));
    CHECK(rat(-3, 6) == rat(-1, 2));
    CHECK(rat(5) == Rat(5));
    CHECK_THROWS_AS(rat(1, 0), std::invalid_argument);
}

TEST_CASE("parse_rat and to_string round trip") {
    CHECK(parse_rat("3/4") == rat(3, 4));
    CHECK(parse_rat("-7/2") == rat(-7, 2));
    CHECK(parse_rat("12") == Rat(12));
    CHECK(to_string(rat(3, 4)) == "3/4");
    CHECK(to_string(Rat(5)) == "5");
    CHECK(to_string(rat(-1, 3)) == "-1/3");
    CHECK(parse_rat(to_string(rat(123456789L, 987654321L))) == rat(123456789L, 987654321L));
    CHECK_THROWS_AS(parse_rat("abc"), std::invalid_argument);
}

TEST_CASE("pow_int") {
    CHECK(pow_int(Int(2), 10) == 1024);
    CHECK(pow_int(Int(9), 9) == Int("387420489"));
    CHECK(pow_int(Int(5), 0) == 1);
}

TEST_CASE("exact_sum equals sequential accumulation") {
    std::vector<Rat> terms;
    Rat naive(0);
    CounterRng rng(42, 0);
    for (int i = 0; i < 500; ++i) {
        Rat t = rat(static_cast<long>(rng.next_below(2000)) - 1000,
                    static_cast<long>(rng.next_below(999)) + 1);
        terms.push_back(t);
        naive += t;
    }
    CHECK(exact_sum(terms) == naive);
}

TEST_CASE("exact_sum edge cases") {
    CHECK(exact_sum(std::vector<Rat>{}) == 0);
    CHECK(exact_sum(std::vector<Rat>{rat(1, 3)}) == rat(1, 3));
    // harmonic partial sum H_10 = 7381/2520
    std::vector<Rat> h;
    for (long n = 1; n <= 10; ++n) h.push_back(rat(1, n));
    CHECK(exact_sum(h) == rat(7381, 2520));
}
