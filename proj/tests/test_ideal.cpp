#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hc/ideal.hpp"

#include <random>

using namespace hc;

namespace {

FieldElement sqrt5(const Field&) { return {Rat(-1), Rat(2)}; }  // 2w - 1

Ideal rand_ideal(const Field& F, std::mt19937& rng) {
    std::uniform_int_distribution<long> coef(-9, 9);
    for (;;) {
        FieldElement g1{Rat(coef(rng)), Rat(coef(rng))};
        FieldElement g2{Rat(coef(rng)), Rat(coef(rng))};
        if (g1.is_zero() && g2.is_zero()) continue;
        std::vector<FieldElement> gens;
        if (!g1.is_zero()) gens.push_back(g1);
        if (!g2.is_zero()) gens.push_back(g2);
        return ideal_from_generators(F, gens);
    }
}

} // namespace

TEST_CASE("dual of o is d^{-1}") {
    Field F = make_field(5);
    Ideal o = ideal_whole(F);
    Ideal dinv = ideal_inv(F, ideal_different(F));
    CHECK(ideal_dual_star(F, o) == dinv);
}

TEST_CASE("norm and product of (4+sqrt5), (4-sqrt5)") {
    Field F = make_field(5);
    FieldElement s5 = sqrt5(F);
    Ideal a = ideal_principal(F, FieldElement(4) + s5);
    Ideal b = ideal_principal(F, FieldElement(4) - s5);
    CHECK(ideal_norm(F, a) == 11);
    Ideal prod = ideal_mul(F, a, b);
    CHECK(prod == ideal_principal(F, FieldElement(11)));
    CHECK(ideal_norm(F, prod) == 121);
}

TEST_CASE("ideal normal form is canonical") {
    Field F = make_field(5);
    FieldElement s5 = sqrt5(F);
    // same ideal from different generating sets
    Ideal a = ideal_principal(F, FieldElement(4) + s5);
    Ideal b = ideal_from_generators(
        F, {F.mul(FieldElement(4) + s5, FieldElement(Rat(0), Rat(1))), FieldElement(11)});
    CHECK(a == b);
}

TEST_CASE("inverse and double dual") {
    std::mt19937 rng(3);
    for (long D : {5L, 13L, 2L}) {
        Field F = make_field(D);
        for (int i = 0; i < 40; ++i) {
            Ideal f = rand_ideal(F, rng);
            CHECK(ideal_mul(F, f, ideal_inv(F, f)) == ideal_whole(F));
            CHECK(ideal_dual_star(F, ideal_dual_star(F, f)) == f);
        }
    }
}

TEST_CASE("norm multiplicativity on random pairs") {
    std::mt19937 rng(5);
    Field F = make_field(13);
    for (int i = 0; i < 60; ++i) {
        Ideal a = rand_ideal(F, rng), b = rand_ideal(F, rng);
        CHECK(ideal_norm(F, ideal_mul(F, a, b)) == ideal_norm(F, a) * ideal_norm(F, b));
    }
}

TEST_CASE("rational prime splitting in Q(sqrt5)") {
    Field F = make_field(5);
    auto s11 = factor_rational_prime(F, 11);
    CHECK(s11.type == SplitType::Split);
    REQUIRE(s11.primes.size() == 2);
    CHECK(ideal_norm(F, s11.primes[0].prime) == 11);
    CHECK(ideal_norm(F, s11.primes[1].prime) == 11);
    CHECK(ideal_mul(F, s11.primes[0].prime, s11.primes[1].prime) ==
          ideal_principal(F, FieldElement(11)));

    auto s13 = factor_rational_prime(F, 13);
    CHECK(s13.type == SplitType::Inert);
    REQUIRE(s13.primes.size() == 1);
    CHECK(ideal_norm(F, s13.primes[0].prime) == 169);
    CHECK(s13.primes[0].residue_degree == 2);

    auto s5 = factor_rational_prime(F, 5);
    CHECK(s5.type == SplitType::Ramified);
    REQUIRE(s5.primes.size() == 1);
    CHECK(ideal_mul(F, s5.primes[0].prime, s5.primes[0].prime) ==
          ideal_principal(F, FieldElement(5)));

    CHECK_THROWS_AS(factor_rational_prime(F, 12), std::invalid_argument);
}

TEST_CASE("quotient data examples") {
    Field F = make_field(5);
    SUBCASE("unit ideal") {
        auto qd = quotient_data(F, ideal_whole(F));
        CHECK(qd.phi == 1);
        CHECK(qd.exponent == 1);
        CHECK(qd.ring.size() == 1);
    }
    SUBCASE("(4+sqrt5): o/f = Z/11") {
        Ideal f = ideal_principal(F, FieldElement(4) + sqrt5(F));
        auto qd = quotient_data(F, f);
        CHECK(qd.phi == 10);
        CHECK(qd.exponent == 11);
        CHECK(qd.ring.size() == 11);
    }
    SUBCASE("inert 13: o/f = F_169") {
        Ideal f = ideal_principal(F, FieldElement(13));
        auto qd = quotient_data(F, f);
        CHECK(qd.phi == 168);
        CHECK(qd.exponent == 13);
        CHECK(qd.ring.size() == 169);
    }
    SUBCASE("non-integral rejected") {
        Ideal half = ideal_principal(F, FieldElement(Rat(1, 2)));
        CHECK_THROWS_AS(quotient_data(F, half), std::invalid_argument);
    }
}

TEST_CASE("residue ring size equals norm; unit count equals phi") {
    std::mt19937 rng(17);
    for (long D : {5L, 13L}) {
        Field F = make_field(D);
        int checked = 0;
        for (int i = 0; i < 80 && checked < 12; ++i) {
            Ideal f = rand_ideal(F, rng);
            if (!f.is_integral()) f = ideal_principal(F, f.basis1());  // force integral attempt
            if (!f.is_integral()) continue;
            Rat n = ideal_norm(F, f);
            if (n > 200 || n < 2) continue;
            ++checked;
            ResidueRing R(F, f);
            CHECK(R.size() == num(n));
            CHECK(R.count_units() == ideal_phi(F, f));
        }
        CHECK(checked >= 5);
    }
}

TEST_CASE("Z cap f equals the reported exponent, via lattice intersection") {
    Field F = make_field(5);
    std::mt19937 rng(23);
    for (int i = 0; i < 30; ++i) {
        Ideal f = rand_ideal(F, rng);
        if (!f.is_integral()) continue;
        // intersection with the rank-1 lattice Z is exercised through o
        Int e = ideal_exponent(F, f);
        CHECK(ideal_contains(F, f, FieldElement(Rat(e))));
        for (Int k = 1; k < e; ++k) CHECK(!ideal_contains(F, f, FieldElement(Rat(k))));
    }
}

TEST_CASE("intersection and sum are lattice meet/join") {
    Field F = make_field(13);
    std::mt19937 rng(29);
    for (int i = 0; i < 40; ++i) {
        Ideal a = rand_ideal(F, rng), b = rand_ideal(F, rng);
        Ideal m = ideal_intersect(F, a, b), s = ideal_sum(F, a, b);
        CHECK(ideal_subset(F, m, a));
        CHECK(ideal_subset(F, m, b));
        CHECK(ideal_subset(F, a, s));
        CHECK(ideal_subset(F, b, s));
        // product = meet * join for ideals of a Dedekind domain
        CHECK(ideal_mul(F, m, s) == ideal_mul(F, a, b));
    }
}

TEST_CASE("principal generator search") {
    Field F = make_field(5);
    auto p11 = factor_rational_prime(F, 11).primes[0].prime;
    auto g = ideal_principal_generator(F, p11);
    REQUIRE(g.has_value());
    CHECK(ideal_principal(F, *g) == p11);
}

TEST_CASE("degree-1 ideals are rational multiples") {
    Field Q = make_field_rational();
    Ideal f = ideal_principal(Q, FieldElement(Rat(5)));
    CHECK(ideal_norm(Q, f) == 5);
    CHECK(ideal_exponent(Q, f) == 5);
    CHECK(ideal_phi(Q, f) == 4);
    Ideal fifth = ideal_inv(Q, f);
    CHECK(ideal_norm(Q, fifth) == Rat(1, 5));
    CHECK(ideal_mul(Q, f, fifth) == ideal_whole(Q));
    CHECK(ideal_dual_star(Q, ideal_whole(Q)) == ideal_whole(Q));
    auto qd = quotient_data(Q, f);
    CHECK(qd.ring.size() == 5);
    CHECK(qd.ring.count_units() == 4);
}
