#include "hc/ideal.hpp"

#include <algorithm>
#include <ostream>

namespace hc {

namespace {

// extended gcd: returns g = gcd(a,b) >= 0 and x,y with a*x + b*y = g
Int xgcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        if (a < 0) { x = -1; y = 0; return -a; }
        x = 1; y = 0;
        return a;
    }
    Int x1, y1;
    Int g = xgcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

struct RawLat {
    // rows (A,0)/den, (B,C)/den; same normal form as Ideal
    Int A = 1, B = 0, C = 1, den = 1;
};

// Hermite form of the lattice spanned by integer rows / den.
// Throws if the rows do not span a rank-2 lattice.
RawLat hnf_rows(const std::vector<std::pair<Int, Int>>& rows, Int den) {
    // pass 1: gcd-combination (Bx, C) of all rows, C = gcd of y's
    Int Bx = 0, Cy = 0;
    for (const auto& [x, y] : rows) {
        if (y == 0) continue;
        Int s, t;
        Int g = xgcd(Cy, y, s, t);
        Bx = s * Bx + t * x;
        Cy = g;
    }
    if (Cy == 0) throw std::invalid_argument("ideal: rank-deficient lattice");
    // pass 2: clear y from every row with the combined row, gcd the x's
    Int A = 0;
    for (const auto& [x, y] : rows) A = gcd(A, x - (y / Cy) * Bx);
    if (A == 0) throw std::invalid_argument("ideal: rank-deficient lattice");
    Int B = mod_floor(Bx, A);
    // normalize content
    Int g = gcd(gcd(A, B), gcd(Cy, den));
    if (den < 0) den = -den;
    RawLat L;
    L.A = A / g;
    L.B = B / g;
    L.C = Cy / g;
    L.den = den / g;
    return L;
}

RawLat raw_dual(const RawLat& L) {
    // dual basis w.r.t. the standard dot product, rows over denominator A*C
    std::vector<std::pair<Int, Int>> rows = {{L.den * L.C, -L.den * L.B}, {Int(0), L.den * L.A}};
    return hnf_rows(std::move(rows), L.A * L.C);
}

RawLat raw_sum(const RawLat& a, const RawLat& b) {
    std::vector<std::pair<Int, Int>> rows = {
        {a.A * b.den, Int(0)}, {a.B * b.den, a.C * b.den},
        {b.A * a.den, Int(0)}, {b.B * a.den, b.C * a.den}};
    return hnf_rows(std::move(rows), a.den * b.den);
}

Ideal from_raw(const RawLat& L) {
    Ideal f;
    f.A = L.A; f.B = L.B; f.C = L.C; f.den = L.den;
    return f;
}

RawLat to_raw(const Ideal& f) { return {f.A, f.B, f.C, f.den}; }

Rat rat_abs(const Rat& r) { return r < 0 ? -r : r; }

// gcd of a list of rationals: the fractional Z-ideal they generate
Rat rat_gcd(const std::vector<Rat>& xs) {
    Int n = 0, d = 1;
    for (const Rat& x : xs) {
        if (x == 0) continue;
        // gcd(n/d, p/q) = gcd(n*q, p*d) / (d*q)
        Int p = num(x), q = den(x);
        if (p < 0) p = -p;
        n = gcd(n * q, p * d);
        d = d * q;
        Int g = gcd(n, d);
        n /= g; d /= g;
    }
    return Rat(n, d);
}

bool is_probable_prime(const Int& p) {
    if (p < 2) return false;
    for (Int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

} // namespace

std::ostream& operator<<(std::ostream& os, const Ideal& f) {
    return os << "[(" << f.A << ",0),(" << f.B << "," << f.C << ")]/" << f.den;
}

Ideal ideal_whole(const Field&) { return Ideal{}; }

Ideal ideal_from_generators(const Field& F, const std::vector<FieldElement>& gens) {
    if (F.degree == 1) {
        std::vector<Rat> xs;
        for (const auto& g : gens) xs.push_back(g.x);
        Rat q = rat_gcd(xs);
        if (q == 0) throw std::invalid_argument("ideal: zero ideal");
        Ideal f;
        f.A = num(q); f.den = den(q);
        return f;
    }
    // clear denominators, include w*g so the span is an o-module
    Int D = 1;
    std::vector<FieldElement> full;
    for (const auto& g : gens) {
        full.push_back(g);
        full.push_back(F.mul(g, FieldElement(Rat(0), Rat(1))));
    }
    for (const auto& g : full) D = D / gcd(D, den(g.x) * den(g.y)) * (den(g.x) * den(g.y));
    std::vector<std::pair<Int, Int>> rows;
    bool all_zero = true;
    for (const auto& g : full) {
        Rat gx = g.x * D, gy = g.y * D;
        rows.emplace_back(num(gx), num(gy));
        if (!g.is_zero()) all_zero = false;
    }
    if (all_zero) throw std::invalid_argument("ideal: zero ideal");
    return from_raw(hnf_rows(std::move(rows), D));
}

Ideal ideal_principal(const Field& F, const FieldElement& g) {
    if (g.is_zero()) throw std::invalid_argument("ideal: zero generator");
    return ideal_from_generators(F, {g});
}

Ideal ideal_different(const Field& F) {
    if (F.degree == 1) return ideal_whole(F);
    return ideal_principal(F, F.different_gen);
}

Rat ideal_norm(const Field& F, const Ideal& a) {
    if (F.degree == 1) return Rat(a.A, a.den);
    return Rat(a.A * a.C, a.den * a.den);
}

Ideal ideal_mul(const Field& F, const Ideal& a, const Ideal& b) {
    if (F.degree == 1) {
        std::vector<Rat> xs = {Rat(a.A, a.den) * Rat(b.A, b.den)};
        Rat q = xs[0];
        Ideal f;
        f.A = num(q); f.den = den(q);
        return f;
    }
    std::vector<FieldElement> gens;
    for (const auto& x : {a.basis1(), a.basis2()})
        for (const auto& y : {b.basis1(), b.basis2()}) gens.push_back(F.mul(x, y));
    return ideal_from_generators(F, gens);
}

Ideal ideal_scale(const Field& F, const Ideal& a, const FieldElement& g) {
    if (g.is_zero()) throw std::invalid_argument("ideal_scale: zero scalar");
    return ideal_from_generators(F, {F.mul(a.basis1(), g), F.mul(a.basis2(), g)});
}

Ideal ideal_inv(const Field& F, const Ideal& a) {
    if (F.degree == 1) {
        Ideal f;
        f.A = a.den; f.den = a.A;
        Int g = gcd(f.A, f.den);
        f.A /= g; f.den /= g;
        return f;
    }
    // a * conj(a) = N(a) * o in the maximal order, so a^{-1} = conj(a)/N(a)
    Ideal c = ideal_from_generators(F, {F.conj(a.basis1()), F.conj(a.basis2())});
    Rat n = ideal_norm(F, a);
    return ideal_scale(F, c, FieldElement(Rat(1) / n));
}

Ideal ideal_sum(const Field& F, const Ideal& a, const Ideal& b) {
    if (F.degree == 1) {
        Rat q = rat_gcd({Rat(a.A, a.den), Rat(b.A, b.den)});
        Ideal f;
        f.A = num(q); f.den = den(q);
        return f;
    }
    return from_raw(raw_sum(to_raw(a), to_raw(b)));
}

Ideal ideal_intersect(const Field& F, const Ideal& a, const Ideal& b) {
    if (F.degree == 1) {
        // lcm of the generators
        Rat x(a.A, a.den), y(b.A, b.den);
        Rat l = x * y / rat_gcd({x, y});
        Ideal f;
        f.A = num(l); f.den = den(l);
        return f;
    }
    return from_raw(raw_dual(raw_sum(raw_dual(to_raw(a)), raw_dual(to_raw(b)))));
}

Ideal ideal_dual_star(const Field& F, const Ideal& a) {
    return ideal_mul(F, ideal_inv(F, a), ideal_inv(F, ideal_different(F)));
}

bool ideal_contains(const Field& F, const Ideal& a, const FieldElement& e) {
    if (F.degree == 1) {
        if (e.y != 0) return false;
        Rat q = e.x / Rat(a.A, a.den);
        return is_integer(q);
    }
    // solve m*(A,0) + k*(B,C) = den*e over Z
    Rat ky = e.y * a.den;
    if (!is_integer(ky)) return false;
    Rat kk = ky / Rat(a.C);
    if (!is_integer(kk)) return false;
    Rat mx = (e.x * a.den - kk * Rat(a.B)) / Rat(a.A);
    return is_integer(mx);
}

bool ideal_subset(const Field& F, const Ideal& a, const Ideal& b) {
    if (F.degree == 1) return is_integer(Rat(a.A, a.den) / Rat(b.A, b.den));
    return ideal_contains(F, b, a.basis1()) && ideal_contains(F, b, a.basis2());
}

bool ideal_coprime(const Field& F, const Ideal& a, const Ideal& b) {
    return ideal_sum(F, a, b) == ideal_whole(F);
}

IdealOps ideal_ops(const Field& F, const Ideal& a, const Ideal& b) {
    return {ideal_mul(F, a, b), ideal_inv(F, a), ideal_dual_star(F, a), ideal_norm(F, a)};
}

PrimeSplitting factor_rational_prime(const Field& F, const Int& p) {
    if (!is_probable_prime(p)) throw std::invalid_argument("factor_rational_prime: p not prime");
    if (F.degree == 1) {
        PrimeFactor pf{ideal_principal(F, FieldElement(Rat(p))), 1, 1};
        return {SplitType::Split, {pf}};
    }
    const FieldElement w(Rat(0), Rat(1));
    auto prime_above = [&](const Int& t) {
        return ideal_from_generators(F, {FieldElement(Rat(p)), w - FieldElement(Rat(t))});
    };
    // min poly of w: x^2 - trace_w*x + norm_w
    auto poly_mod = [&](const Int& x) { return mod_floor(x * x - F.trace_w * x + F.norm_w, p); };
    if (F.discriminant % p == 0) {
        // ramified: double root of the minimal polynomial mod p
        for (Int t = 0; t < p; ++t)
            if (poly_mod(t) == 0) return {SplitType::Ramified, {{prime_above(t), 1, 2}}};
        throw std::logic_error("ramified prime without root");
    }
    std::vector<Int> roots;
    for (Int t = 0; t < p && roots.size() < 2; ++t)
        if (poly_mod(t) == 0) roots.push_back(t);
    if (roots.empty()) {
        PrimeFactor pf{ideal_principal(F, FieldElement(Rat(p))), 2, 1};
        return {SplitType::Inert, {pf}};
    }
    if (roots.size() != 2) throw std::logic_error("split prime with one root");
    return {SplitType::Split,
            {{prime_above(roots[0]), 1, 1}, {prime_above(roots[1]), 1, 1}}};
}

static std::vector<std::pair<Int, int>> factor_integer(Int n) {
    std::vector<std::pair<Int, int>> out;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<std::pair<PrimeFactor, int>> ideal_factor(const Field& F, const Ideal& f) {
    if (!f.is_integral()) throw std::invalid_argument("ideal_factor: non-integral ideal");
    std::vector<std::pair<PrimeFactor, int>> out;
    Ideal g = f;
    for (const auto& [p, e] : factor_integer(num(ideal_norm(F, f)))) {
        (void)e;
        for (const auto& pf : factor_rational_prime(F, p).primes) {
            int v = 0;
            while (ideal_subset(F, g, pf.prime)) {
                g = ideal_mul(F, g, ideal_inv(F, pf.prime));
                ++v;
            }
            if (v > 0) out.emplace_back(pf, v);
        }
    }
    if (!(g == ideal_whole(F))) throw std::logic_error("ideal_factor: incomplete factorization");
    return out;
}

std::vector<Ideal> ideal_divisors(const Field& F, const Ideal& f) {
    auto fac = ideal_factor(F, f);
    std::vector<Ideal> divs = {ideal_whole(F)};
    for (const auto& [pf, e] : fac) {
        std::vector<Ideal> next;
        Ideal pk = ideal_whole(F);
        for (int k = 0; k <= e; ++k) {
            for (const auto& d : divs) next.push_back(ideal_mul(F, d, pk));
            if (k < e) pk = ideal_mul(F, pk, pf.prime);
        }
        divs = std::move(next);
    }
    std::sort(divs.begin(), divs.end(), [&](const Ideal& a, const Ideal& b) {
        Rat na = ideal_norm(F, a), nb = ideal_norm(F, b);
        if (na != nb) return na < nb;
        return a < b;
    });
    return divs;
}

Int ideal_phi(const Field& F, const Ideal& f) {
    if (!f.is_integral()) throw std::invalid_argument("ideal_phi: non-integral ideal");
    Int phi = 1;
    for (const auto& [pf, e] : ideal_factor(F, f)) {
        Int q = num(ideal_norm(F, pf.prime));
        Int qe = 1;
        for (int k = 1; k < e; ++k) qe *= q;
        phi *= qe * (q - 1);
    }
    return phi;
}

Int ideal_exponent(const Field& F, const Ideal& f) {
    if (!f.is_integral()) throw std::invalid_argument("ideal_exponent: non-integral ideal");
    (void)F;
    return f.A;
}

ResidueRing::ResidueRing(const Field& F, const Ideal& f) : F_(&F), f_(f) {
    if (!f.is_integral()) throw std::invalid_argument("ResidueRing: non-integral modulus");
    size_ = f.A * f.C;
}

FieldElement ResidueRing::reduce(const FieldElement& e) const {
    if (!F_->is_integral(e)) throw std::invalid_argument("ResidueRing: non-integral element");
    Int x = num(e.x), y = num(e.y);
    Int j = mod_floor(y, f_.C);
    Int k = (y - j) / f_.C;
    Int i = mod_floor(x - k * f_.B, f_.A);
    return {Rat(i), Rat(j)};
}

long ResidueRing::index_of(const FieldElement& r) const {
    return static_cast<long>(num(r.x) * f_.C + num(r.y));
}

FieldElement ResidueRing::element_at(long idx) const {
    Int i = Int(idx) / f_.C, j = Int(idx) % f_.C;
    return {Rat(i), Rat(j)};
}

FieldElement ResidueRing::mul(const FieldElement& a, const FieldElement& b) const {
    return reduce(F_->mul(a, b));
}

FieldElement ResidueRing::add(const FieldElement& a, const FieldElement& b) const {
    return reduce(a + b);
}

bool ResidueRing::is_unit(const FieldElement& a) const {
    FieldElement r = reduce(a);
    if (r.is_zero()) return size_ == 1;
    return ideal_sum(*F_, ideal_principal(*F_, r), f_) == ideal_whole(*F_);
}

std::optional<FieldElement> ResidueRing::inverse(const FieldElement& a) const {
    if (size_ == 1) return FieldElement();
    FieldElement r = reduce(a);
    for (long i = 0; i < size_; ++i) {
        FieldElement b = element_at(i);
        FieldElement p = mul(r, b);
        if (p.x == 1 && p.y == 0) return b;
    }
    return std::nullopt;
}

Int ResidueRing::count_units() const {
    Int c = 0;
    for (long i = 0; i < size_; ++i)
        if (is_unit(element_at(i))) ++c;
    return c;
}

QuotientData quotient_data(const Field& F, const Ideal& f) {
    if (!f.is_integral()) throw std::invalid_argument("quotient_data: non-integral ideal");
    return {ideal_phi(F, f), ideal_exponent(F, f), ResidueRing(F, f)};
}

std::vector<FieldElement> ideal_box_elements(const Field& F, const Ideal& f, long box) {
    (void)F;
    std::vector<FieldElement> out;
    FieldElement b1 = f.basis1(), b2 = f.basis2();
    for (long m = -box; m <= box; ++m)
        for (long k = -box; k <= box; ++k)
            out.push_back(b1.scale(Rat(m)) + b2.scale(Rat(k)));
    return out;
}

std::optional<FieldElement> ideal_principal_generator(const Field& F, const Ideal& f,
                                                      long coord_budget) {
    if (F.degree == 1) return FieldElement(Rat(f.A, f.den));
    Rat target = ideal_norm(F, f);
    FieldElement b1 = f.basis1(), b2 = f.basis2();
    for (long box = 1; box <= coord_budget; box *= 2) {
        for (long m = -box; m <= box; ++m) {
            for (long k = -box; k <= box; ++k) {
                if (m == 0 && k == 0) continue;
                FieldElement e = b1.scale(Rat(m)) + b2.scale(Rat(k));
                if (rat_abs(F.norm(e)) == target) return e;
            }
        }
    }
    return std::nullopt;
}

} // namespace hc
