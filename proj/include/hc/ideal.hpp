#pragma once

#include "hc/field.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace hc {

// A fractional ideal of F as a normalized Z-lattice. In degree 2 the
// lattice is num/den with num in Hermite form: rows r1 = (A,0),
// r2 = (B,C) in integral-basis coordinates, A,C > 0, 0 <= B < A,
// gcd(A,B,C,den) = 1. The form is unique, so equality is structural.
// In degree 1 an ideal is just a positive rational generator (A/den, C=1).
struct Ideal {
    Int A = 1, B = 0, C = 1;
    Int den = 1;

    bool operator==(const Ideal& o) const {
        return A == o.A && B == o.B && C == o.C && den == o.den;
    }
    bool operator!=(const Ideal& o) const { return !(*this == o); }
    bool operator<(const Ideal& o) const {  // deterministic map key order
        if (A != o.A) return A < o.A;
        if (B != o.B) return B < o.B;
        if (C != o.C) return C < o.C;
        return den < o.den;
    }

    FieldElement basis1() const { return {Rat(A) / Rat(den), 0}; }
    FieldElement basis2() const { return {Rat(B) / Rat(den), Rat(C) / Rat(den)}; }
    bool is_integral() const { return den == 1; }
};

std::ostream& operator<<(std::ostream& os, const Ideal& f);

// -- construction --
Ideal ideal_whole(const Field& F);                                  // o
Ideal ideal_from_generators(const Field& F, const std::vector<FieldElement>& gens);
Ideal ideal_principal(const Field& F, const FieldElement& g);       // g != 0
Ideal ideal_different(const Field& F);                              // d

// -- arithmetic --
Ideal ideal_mul(const Field& F, const Ideal& a, const Ideal& b);
Ideal ideal_inv(const Field& F, const Ideal& a);
Ideal ideal_sum(const Field& F, const Ideal& a, const Ideal& b);
Ideal ideal_intersect(const Field& F, const Ideal& a, const Ideal& b);
Ideal ideal_dual_star(const Field& F, const Ideal& a);              // a^{-1} d^{-1}
Ideal ideal_scale(const Field& F, const Ideal& a, const FieldElement& g);
Rat ideal_norm(const Field& F, const Ideal& a);                     // positive rational
bool ideal_contains(const Field& F, const Ideal& a, const FieldElement& e);
bool ideal_subset(const Field& F, const Ideal& a, const Ideal& b);  // a subset of b
bool ideal_coprime(const Field& F, const Ideal& a, const Ideal& b); // a + b = o (integral a,b)

// Bundle mirroring the ideal_ops() operation of the interface.
struct IdealOps {
    Ideal product;
    Ideal inverse_of_a;
    Ideal dual_star_of_a;
    Rat norm_of_a;
};
IdealOps ideal_ops(const Field& F, const Ideal& a, const Ideal& b);

// -- rational prime splitting --
enum class SplitType { Split, Inert, Ramified };

struct PrimeFactor {
    Ideal prime;
    int residue_degree = 1;   // f
    int ramification = 1;     // e
};

struct PrimeSplitting {
    SplitType type;
    std::vector<PrimeFactor> primes;  // 1 or 2 entries
};

PrimeSplitting factor_rational_prime(const Field& F, const Int& p);

// factorization of an integral ideal into prime ideals (map prime -> exponent)
std::vector<std::pair<PrimeFactor, int>> ideal_factor(const Field& F, const Ideal& f);
// all divisors of an integral ideal, deterministic order
std::vector<Ideal> ideal_divisors(const Field& F, const Ideal& f);

// #(o/f)^x, computed multiplicatively over the factorization
Int ideal_phi(const Field& F, const Ideal& f);
// smallest positive integer in f (integral f): the exponent of o/f
Int ideal_exponent(const Field& F, const Ideal& f);

// Finite ring o/f for integral f. Elements are canonical representatives
// x + y*w with 0 <= x < A, 0 <= y < C, indexed by idx = x*C + y.
class ResidueRing {
public:
    ResidueRing(const Field& F, const Ideal& f);

    const Ideal& modulus() const { return f_; }
    Int size() const { return size_; }

    // canonical representative of an integral element
    FieldElement reduce(const FieldElement& e) const;
    long index_of(const FieldElement& reduced) const;
    FieldElement element_at(long idx) const;

    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    bool is_unit(const FieldElement& a) const;
    std::optional<FieldElement> inverse(const FieldElement& a) const;  // by scan

    Int count_units() const;  // brute force; the test oracle for ideal_phi

private:
    const Field* F_;
    Ideal f_;
    Int size_;
};

// Bundle mirroring the quotient_data() operation.
struct QuotientData {
    Int phi;
    Int exponent;
    ResidueRing ring;
};
QuotientData quotient_data(const Field& F, const Ideal& f);

// Bounded search for a generator: returns g with (g) = f, or nullopt if
// none found within the coordinate budget (class-group obstruction or
// budget too small). Deterministic.
std::optional<FieldElement> ideal_principal_generator(const Field& F, const Ideal& f,
                                                      long coord_budget = 4096);

// Smallest-box search helpers used across modules: enumerate elements of f
// with coordinates (in the lattice basis) bounded by |m|,|k| <= box.
std::vector<FieldElement> ideal_box_elements(const Field& F, const Ideal& f, long box);

} // namespace hc
