#include "hc/field.hpp"

#include <ostream>

namespace hc {

std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
    if (e.y == 0) return os << e.x;
    if (e.x != 0) os << e.x << (e.y > 0 ? "+" : "");
    if (e.y == 1)
        os << "w";
    else if (e.y == -1)
        os << "-w";
    else
        os << e.y << "w";
    return os;
}

FieldElement Field::mul(const FieldElement& a, const FieldElement& b) const {
    if (degree == 1) return {a.x * b.x, 0};
    // w^2 = trace_w * w - norm_w
    Rat t(trace_w), n(norm_w);
    return {a.x * b.x - n * a.y * b.y, a.x * b.y + a.y * b.x + t * a.y * b.y};
}

FieldElement Field::conj(const FieldElement& a) const {
    if (degree == 1) return a;
    // conj(w) = Tr(w) - w
    return {a.x + Rat(trace_w) * a.y, -a.y};
}

FieldElement Field::inv(const FieldElement& a) const {
    if (a.is_zero()) throw std::domain_error("Field::inv: zero element");
    if (degree == 1) return FieldElement(Rat(1) / a.x);
    return conj(a).scale(Rat(1) / norm(a));
}

FieldElement Field::pow(const FieldElement& a, long e) const {
    if (e < 0) return pow(inv(a), -e);
    FieldElement r(1);
    FieldElement base = a;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

Rat Field::trace(const FieldElement& a) const {
    if (degree == 1) return a.x;
    return 2 * a.x + Rat(trace_w) * a.y;
}

Rat Field::norm(const FieldElement& a) const {
    if (degree == 1) return a.x;
    return a.x * a.x + Rat(trace_w) * a.x * a.y + Rat(norm_w) * a.y * a.y;
}

std::pair<Rat, Rat> Field::sqrtD_coords(const FieldElement& a) const {
    if (degree == 1) return {a.x, 0};
    if (half_basis) return {a.x + a.y / 2, a.y / 2};
    return {a.x, a.y};
}

int Field::embedding_sign(const FieldElement& a, int which) const {
    if (degree == 1) return a.x == 0 ? 0 : (a.x > 0 ? 1 : -1);
    auto [p, q] = sqrtD_coords(a);
    if (which < 0) q = -q;
    // sign of p + q*sqrt(D)
    if (q == 0) return p == 0 ? 0 : (p > 0 ? 1 : -1);
    if (p == 0) return q > 0 ? 1 : -1;
    if (p > 0 && q > 0) return 1;
    if (p < 0 && q < 0) return -1;
    // opposite signs: compare p^2 with q^2 D
    Rat lhs = p * p, rhs = q * q * Rat(D);
    if (lhs == rhs) return 0;  // cannot happen for D squarefree, p,q != 0
    bool abs_p_wins = lhs > rhs;
    return abs_p_wins ? (p > 0 ? 1 : -1) : (q > 0 ? 1 : -1);
}

bool Field::totally_positive(const FieldElement& a) const {
    if (degree == 1) return a.x > 0;
    return embedding_sign(a, +1) > 0 && embedding_sign(a, -1) > 0;
}

bool Field::totally_nonnegative(const FieldElement& a) const {
    if (degree == 1) return a.x >= 0;
    return embedding_sign(a, +1) >= 0 && embedding_sign(a, -1) >= 0;
}

int Field::cross_sign(const FieldElement& a, const FieldElement& b) const {
    if (degree == 1) return 0;
    // s1(a)s2(b) - s1(b)s2(a) = 2*(qa*pb - pa*qb)*sqrt(D) ... with the
    // convention s1 = +sqrt(D): the coefficient below carries the sign.
    auto [pa, qa] = sqrtD_coords(a);
    auto [pb, qb] = sqrtD_coords(b);
    Rat c = qa * pb - pa * qb;
    return c == 0 ? 0 : (c > 0 ? 1 : -1);
}

static bool squarefree(long long D) {
    if (D % 4 == 0) return false;
    for (long long p = 2; p * p <= D; ++p)
        if (D % (p * p) == 0) return false;
    return true;
}

Field make_field(long long D) {
    if (D <= 1 || !squarefree(D))
        throw std::invalid_argument("make_field: D must be squarefree and > 1");
    Field F;
    F.degree = 2;
    F.D = D;
    F.half_basis = (D % 4 == 1);
    if (F.half_basis) {
        F.trace_w = 1;
        F.norm_w = Int(1 - D) / 4;
        F.discriminant = D;
        // sqrt(D) = 2w - 1
        F.different_gen = FieldElement(Rat(-1), Rat(2));
    } else {
        F.trace_w = 0;
        F.norm_w = -Int(D);
        F.discriminant = 4 * Int(D);
        // 2*sqrt(D) = 2w
        F.different_gen = FieldElement(Rat(0), Rat(2));
    }
    return F;
}

Field make_field_rational() {
    Field F;
    F.degree = 1;
    F.discriminant = 1;
    F.different_gen = FieldElement(1);
    return F;
}

ElementInvariants element_invariants(const Field& F, const FieldElement& e) {
    return {F.conj(e), F.trace(e), F.norm(e), F.totally_positive(e)};
}

} // namespace hc
