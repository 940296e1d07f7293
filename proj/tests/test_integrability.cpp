#include <doctest.h>

#include <random>

#include "quadtrap/integrability.hpp"

using namespace quadtrap;

namespace {

Rational Q(const std::string& s) { return parse_rational(s); }

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(Q("3") == Rational(3));
    CHECK(Q("-2/6") == Rational(-1, 3));
    CHECK(to_string(Q("4/8")) == "1/2");
    CHECK(to_string(Q("-7")) == "-7");
    CHECK(Q("123456789012345678901234567890/3") == Rational(BigInt("41152263004115226300411522630")));
    CHECK_THROWS_AS(Q("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Q("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Q("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(Q(""), std::invalid_argument);
    CHECK_THROWS_AS(Q("0x10"), std::invalid_argument);
    CHECK_THROWS_AS(Q("1/"), std::invalid_argument);
}

TEST_CASE("exact square roots") {
    CHECK(rational_sqrt(Q("9/4")) == Q("3/2"));
    CHECK(rational_sqrt(Q("0")) == Q("0"));
    CHECK_FALSE(rational_sqrt(Q("2")).has_value());
    CHECK_FALSE(rational_sqrt(Q("33/4")).has_value());
    CHECK_FALSE(rational_sqrt(Q("-4")).has_value());
    const BigInt big = BigInt(1) << 200;
    CHECK(rational_sqrt(Rational(big * big, 9)) == Rational(big, 3));
    CHECK(is_integer(Q("6/3")));
    CHECK_FALSE(is_integer(Q("7/3")));
}

TEST_CASE("membership in K2") {
    CHECK(in_K2(Q("2")));
    CHECK_FALSE(in_K2(Q("1")));
    CHECK(in_K2(Q("2/5")));
    CHECK(in_K2(Q("-2")));
    CHECK(in_K2(Q("2/3")));
    CHECK(in_K2(Q("-2/7")));
    CHECK_FALSE(in_K2(Q("4")));
    CHECK_FALSE(in_K2(Q("2/4")));
    CHECK_FALSE(in_K2(Q("1/3")));
    CHECK_THROWS_AS(in_K2(Q("0")), std::invalid_argument);
}

TEST_CASE("family membership examples") {
    auto c = in_I_family(1, Q("1"), Q("1"));
    CHECK(c.member);
    REQUIRE(c.witness);
    CHECK(family_value(1, Q("1"), *c.witness) == Q("1"));
    c = in_I_family(1, Q("1"), Q("4"));
    CHECK_FALSE(c.member);
    CHECK_FALSE(c.witness);
    c = in_I_family(2, Q("1"), Q("3"));
    CHECK(c.member);
    REQUIRE(c.witness);
    CHECK(family_value(2, Q("1"), *c.witness) == Q("3"));
    CHECK((*c.witness == 2 || *c.witness == -3));
    for (int i = 1; i <= 6; ++i) {
        CAPTURE(i);
        const auto f = in_I_family(i, Q("1"), Q("4"));
        CHECK_FALSE(f.member);
        CHECK_FALSE(f.detail.empty());
    }
    CHECK_THROWS_AS(in_I_family(7, Q("1"), Q("1")), std::invalid_argument);
    CHECK_THROWS_AS(in_I_family(1, Q("0"), Q("1")), std::invalid_argument);
}

TEST_CASE("family values follow the defining formulas") {
    CHECK(family_shift(2) == Q("1/2"));
    CHECK(family_shift(3) == Q("1/3"));
    CHECK(family_shift(4) == Q("1/4"));
    CHECK(family_shift(5) == Q("1/5"));
    CHECK(family_shift(6) == Q("2/5"));
    const Rational k = Q("3/7");
    for (int p = -5; p <= 5; ++p) {
        CHECK(family_value(1, k, p) == Rational(p) + k / 2 * p * (p - 1));
        for (int i = 2; i <= 6; ++i) {
            const Rational ps = Rational(p) + family_shift(i);
            CHECK(family_value(i, k, p) == (4 * k * k * ps * ps - (k - 2) * (k - 2)) / (8 * k));
        }
    }
}

TEST_CASE("witnesses are sound over a wide range of p") {
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<long> up(-1000000, 1000000);
    const Rational ks[] = {Q("1"), Q("-3/4"), Q("5/7"), Q("7"), Q("-1/9")};
    for (const auto& k : ks) {
        for (int n = 0; n < 40; ++n) {
            const BigInt p = up(rng);
            for (int i = 1; i <= 6; ++i) {
                const Rational lambda = family_value(i, k, p);
                const auto c = in_I_family(i, k, lambda);
                CAPTURE(i);
                REQUIRE(c.member);
                REQUIRE(c.witness);
                CHECK(family_value(i, k, *c.witness) == lambda);
            }
        }
    }
    // a value just off the family is rejected
    CHECK_FALSE(in_I_family(1, Q("1"), family_value(1, Q("1"), 1000) + Q("1/1000000")).member);
}

TEST_CASE("admissible family sets") {
    CHECK(admissible_families(Q("1")) == std::vector<int>{1, 2});
    CHECK(admissible_families(Q("3")) == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK(admissible_families(Q("-3/4")) == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK(admissible_families(Q("4")) == std::vector<int>{1, 2, 3});
    CHECK(admissible_families(Q("-4/9")) == std::vector<int>{1, 2, 3});
    CHECK(admissible_families(Q("5/6")) == std::vector<int>{1, 2, 3, 5});
    CHECK(admissible_families(Q("5/7")) == std::vector<int>{1, 2, 3, 6});
    CHECK(admissible_families(Q("7")) == std::vector<int>{1, 2});
}

TEST_CASE("Morales-Ramis verdicts") {
    const std::vector<Rational> v1{Q("0"), Q("1"), Q("4")};
    const auto fail = morales_ramis_verdict(Q("1"), v1);
    CHECK_FALSE(fail.pass);
    CHECK_FALSE(fail.k_in_K2);
    REQUIRE(fail.witness);
    CHECK(*fail.witness == Q("4"));
    REQUIRE(fail.log.size() == 3);
    CHECK(fail.log[0].admissible);
    CHECK(fail.log[1].admissible);
    CHECK_FALSE(fail.log[2].admissible);
    REQUIRE(fail.log[2].checks.size() == 6);
    for (const auto& c : fail.log[2].checks) CHECK_FALSE(c.member);

    const auto pass = morales_ramis_verdict(Q("1"), {Q("0"), Q("1"), Q("3")});
    CHECK(pass.pass);
    CHECK_FALSE(pass.witness);

    const auto k2 = morales_ramis_verdict(Q("2"), {Q("17/3"), Q("-5")});
    CHECK(k2.pass);
    CHECK(k2.k_in_K2);

    CHECK_THROWS_AS(morales_ramis_verdict(Q("0"), v1), std::invalid_argument);
}

TEST_CASE("Darboux point of V1") {
    const auto rep = verify_darboux_V1();
    CHECK(rep.d[0] == Q("1/2"));
    CHECK(rep.d[1] == 0);
    CHECK(rep.d[2] == 0);
    // V1(1/2, 0, 0) = sqrt((1/4)/4) = 1/4
    CHECK(rep.c == Q("1/4"));
    CHECK(rep.c_published == Q("1/2"));
    CHECK_FALSE(rep.c_matches_published);
    for (const auto& g : rep.gradient_residual) CHECK(g == 0);
    CHECK(rep.hessian_eigenvalues[0] == 0);
    CHECK(rep.hessian_eigenvalues[1] == 1);
    CHECK(rep.hessian_eigenvalues[2] == 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(rep.hessian[i][j] == (i == j ? rep.hessian_eigenvalues[i] : Rational(0)));
    CHECK(rep.F_at_dc == 0);
    CHECK(rep.dF_du != 0);
    for (const auto& r : rep.dF_dq_plus_dF_du_d) CHECK(r == 0);
    CHECK(rep.verified);
}
