#pragma once

#include "hc/numeric.hpp"

#include <iosfwd>
#include <utility>

namespace hc {

struct Field;

// Element x + y*w of a real quadratic field Q(sqrt(D)) in the integral
// basis (1, w), with w = (1+sqrt(D))/2 when D = 1 mod 4 and w = sqrt(D)
// otherwise. For the degree-1 field (F = Q) the y coordinate must be 0.
// All arithmetic is exact; no decision procedure ever touches floating point.
struct FieldElement {
    Rat x, y;

    FieldElement() : x(0), y(0) {}
    FieldElement(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {}
    explicit FieldElement(const Rat& r) : x(r), y(0) {}
    explicit FieldElement(long v) : x(v), y(0) {}

    bool is_zero() const { return x == 0 && y == 0; }

    FieldElement operator+(const FieldElement& o) const { return {x + o.x, y + o.y}; }
    FieldElement operator-(const FieldElement& o) const { return {x - o.x, y - o.y}; }
    FieldElement operator-() const { return {-x, -y}; }
    FieldElement scale(const Rat& r) const { return {x * r, y * r}; }

    bool operator==(const FieldElement& o) const { return x == o.x && y == o.y; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    // lexicographic; used only as a deterministic tie-break order
    bool operator<(const FieldElement& o) const {
        if (x != o.x) return x < o.x;
        return y < o.y;
    }
};

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

// A totally real field of degree <= 2: either Q or Q(sqrt(D)), D > 1
// squarefree. Carries the data every other module keys off of: the
// integral basis, trace/norm coefficients of w, discriminant and a
// generator of the different.
struct Field {
    int degree = 1;              // 1 or 2
    long long D = 0;             // squarefree radicand (degree 2 only)
    bool half_basis = false;     // w = (1+sqrt(D))/2 ?
    Int trace_w = 0;             // Tr(w): 1 if half_basis else 0
    Int norm_w = 0;              // N(w): (1-D)/4 if half_basis else -D
    Int discriminant = 1;        // D or 4D; 1 in degree 1
    FieldElement different_gen;  // sqrt(D) resp. 2*sqrt(D); 1 in degree 1

    bool is_rational() const { return degree == 1; }

    // -- element arithmetic that needs the defining data of w --
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement conj(const FieldElement& a) const;
    FieldElement inv(const FieldElement& a) const;  // a != 0
    FieldElement pow(const FieldElement& a, long e) const;  // e < 0 needs a invertible
    Rat trace(const FieldElement& a) const;
    Rat norm(const FieldElement& a) const;

    bool is_integral(const FieldElement& a) const { return is_integer(a.x) && is_integer(a.y); }

    // sign of the embedding s(a) where sqrt(D) |-> +sqrt(D) (which = +1)
    // resp. -sqrt(D) (which = -1); exact rational sign test.
    int embedding_sign(const FieldElement& a, int which) const;
    bool totally_positive(const FieldElement& a) const;
    bool totally_nonnegative(const FieldElement& a) const;

    // sign of s1(a)s2(b) - s1(b)s2(a); orientation of (a,b) in the
    // embedding plane, computed rationally.
    int cross_sign(const FieldElement& a, const FieldElement& b) const;

    // rational p, q with a = p + q*sqrt(D)
    std::pair<Rat, Rat> sqrtD_coords(const FieldElement& a) const;
};

// Descriptor of the invariants computed by element_invariants().
struct ElementInvariants {
    FieldElement conjugate;
    Rat trace;
    Rat norm;
    bool totally_positive;
};

// D = squarefree integer > 1; throws std::invalid_argument otherwise.
Field make_field(long long D);
// The degree-1 fallback F = Q.
Field make_field_rational();

ElementInvariants element_invariants(const Field& F, const FieldElement& e);

} // namespace hc
