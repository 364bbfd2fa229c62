#include "hc/cusps.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace hc {

namespace {

// first element of f (growing coordinate box, deterministic order)
// satisfying pred, skipping `skip` earlier matches
FieldElement find_in_ideal(const Field& F, const Ideal& f, int skip,
                           const std::function<bool(const FieldElement&)>& pred) {
    for (long box = 1; box <= 64; box *= 2) {
        FieldElement b1 = f.basis1(), b2 = f.basis2();
        int remaining = skip;
        for (long m = -box; m <= box; ++m)
            for (long k = -box; k <= box; ++k) {
                if (F.degree == 1 && k != 0) continue;
                FieldElement e = b1.scale(Rat(m));
                if (F.degree == 2) e = e + b2.scale(Rat(k));
                if (e.is_zero()) continue;
                if (pred(e)) {
                    if (remaining == 0) return e;
                    --remaining;
                }
            }
    }
    throw std::runtime_error("find_in_ideal: no element found in box");
}

} // namespace

LevelContext::LevelContext(Field F, Ideal c_, Ideal n_, DFlag d)
    : field(std::move(F)), c(std::move(c_)), n_ideal(std::move(n_)), d_flag(d) {
    if (!n_ideal.is_integral())
        throw std::invalid_argument("LevelContext: n must be integral");
    Int nn = num(ideal_norm(field, n_ideal));
    if (nn <= 1) throw std::invalid_argument("LevelContext: n must be a proper level");
    if (gcd(nn, 6 * field.discriminant) != 1)
        throw std::invalid_argument("LevelContext: n must be coprime to 6*disc");
    // y0 with o = n + y0 c
    Ideal cinv = ideal_inv(field, c);
    const Field& Fr = field;
    const Ideal& nid = n_ideal;
    const Ideal& cid = c;
    y0 = find_in_ideal(field, cinv, 0, [&](const FieldElement& y) {
        return ideal_sum(Fr, nid, ideal_scale(Fr, cid, y)) == ideal_whole(Fr);
    });
}

bool gamma_membership(const Field& F, const Mat2& m, const LevelContext& ctx) {
    Ideal o = ideal_whole(F);
    Ideal cstar = ideal_dual_star(F, ctx.c);
    Ideal cdn = ideal_mul(F, ideal_mul(F, ctx.c, ideal_different(F)), ctx.n_ideal);
    if (!ideal_contains(F, o, m.a) || !ideal_contains(F, o, m.d)) return false;
    if (!ideal_contains(F, cstar, m.b)) return false;
    if (!ideal_contains(F, cdn, m.c)) return false;
    FieldElement det = F.mul(m.a, m.d) - F.mul(m.b, m.c);
    if (ctx.d_flag == DFlag::Gm) {
        if (det != FieldElement(1)) return false;
    } else {
        Rat nd = F.norm(det);
        if (!F.is_integral(det) || (nd != 1 && nd != -1) || !F.totally_positive(det))
            return false;
    }
    return ideal_contains(F, ctx.n_ideal, m.d - FieldElement(1));
}

CuspRecord cusp_invariants(const FieldElement& a, const FieldElement& c,
                           const LevelContext& ctx) {
    const Field& F = ctx.field;
    if (a.is_zero() && c.is_zero())
        throw std::invalid_argument("cusp_invariants: (0,0) is not a cusp");
    Ideal cstar = ideal_dual_star(F, ctx.c);
    Ideal cnstar = ideal_dual_star(F, ideal_mul(F, ctx.c, ctx.n_ideal));

    std::vector<FieldElement> gens_b, gens_bp;
    if (!a.is_zero()) {
        gens_b.push_back(a);
        gens_bp.push_back(a);
    }
    if (!c.is_zero()) {
        gens_b.push_back(F.mul(c, cstar.basis1()));
        gens_bp.push_back(F.mul(c, cnstar.basis1()));
        if (F.degree == 2) {
            gens_b.push_back(F.mul(c, cstar.basis2()));
            gens_bp.push_back(F.mul(c, cnstar.basis2()));
        }
    }
    CuspRecord r;
    r.a = a;
    r.c = c;
    r.b = ideal_from_generators(F, gens_b);
    r.b_prime = ideal_from_generators(F, gens_bp);
    Ideal nbcd = ideal_mul(F, ideal_mul(F, ctx.n_ideal, r.b),
                           ideal_mul(F, ctx.c, ideal_different(F)));
    r.ramified = !c.is_zero() && !ideal_contains(F, nbcd, c);
    Ideal f = ideal_mul(F, r.b, ideal_inv(F, r.b_prime));
    r.X = ideal_mul(F, ctx.c, ideal_mul(F, r.b, r.b_prime));
    r.unit_data = cusp_unit_data(F, f, ctx.n_ideal, ctx.d_flag);
    r.n = r.unit_data.n;

    // complete (a,c) to gamma with det 1: d in b^{-1}, b_ in (bc)^*
    if (c.is_zero()) {
        r.gamma_d = F.inv(a);
        r.gamma_b = FieldElement(0);
    } else {
        Ideal binv = ideal_inv(F, r.b);
        Ideal bcstar = ideal_dual_star(F, ideal_mul(F, r.b, ctx.c));
        r.gamma_d = find_in_ideal(F, binv, 0, [&](const FieldElement& d) {
            FieldElement bb = F.mul(F.mul(a, d) - FieldElement(1), F.inv(c));
            return ideal_contains(F, bcstar, bb);
        });
        r.gamma_b = F.mul(F.mul(a, r.gamma_d) - FieldElement(1), F.inv(c));
    }
    return r;
}

// ---------------------------------------------------------------- CuspModule

CuspModule::CuspModule(const LevelContext& ctx, const Ideal& b, int generator_choice)
    : ctx_(&ctx),
      b_(b),
      n_ideal_(ctx.n_ideal),
      R_(ctx.field, ctx.n_ideal) {
    const Field& F = ctx.field;
    a_star_ = ideal_dual_star(F, ideal_mul(F, b_, ctx.c));
    N_ = static_cast<long>(R_.size());
    long long total = static_cast<long long>(N_) * N_;
    if (total > ctx.budget)
        throw resource_limit_error("enumeration budget exceeded: " + std::to_string(total));

    const Ideal& nf = n_ideal_;
    rA_ = static_cast<long long>(nf.A);
    rB_ = static_cast<long long>(nf.B);
    rC_ = static_cast<long long>(nf.C);
    tw_ = static_cast<long long>(F.trace_w);
    nw_ = static_cast<long long>(F.norm_w);

    // local generators of n^{-1}b/b and n^{-1}a*/a*
    Ideal nb = ideal_mul(F, ideal_inv(F, n_ideal_), b_);
    Ideal na = ideal_mul(F, ideal_inv(F, n_ideal_), a_star_);
    h_b_ = find_in_ideal(F, nb, generator_choice, [&](const FieldElement& h) {
        return ideal_sum(F, b_, ideal_principal(F, h)) == nb;
    });
    h_a_ = find_in_ideal(F, na, generator_choice, [&](const FieldElement& h) {
        return ideal_sum(F, a_star_, ideal_principal(F, h)) == na;
    });

    // primitivity tables per prime of n
    for (const auto& [pf, e] : ideal_factor(F, n_ideal_)) {
        (void)e;
        std::vector<char> t(N_);
        for (long i = 0; i < N_; ++i)
            t[i] = ideal_contains(F, pf.prime, R_.element_at(i)) ? 1 : 0;
        in_prime_.push_back(std::move(t));
    }

    build_generators();
}

long CuspModule::reduce64(long long x, long long y) const {
    long long j = ((y % rC_) + rC_) % rC_;
    long long k = (y - j) / rC_;
    long long i = (((x - k * rB_) % rA_) + rA_) % rA_;
    return static_cast<long>(i * rC_ + j);
}

long CuspModule::mul_res(long e1, long e2) const {
    long long x1 = e1 / rC_, y1 = e1 % rC_;
    long long x2 = e2 / rC_, y2 = e2 % rC_;
    // (x1 + y1 w)(x2 + y2 w), w^2 = tw*w - nw
    long long x = x1 * x2 - nw_ * y1 * y2;
    long long y = x1 * y2 + y1 * x2 + tw_ * y1 * y2;
    return reduce64(x, y);
}

long CuspModule::add_res(long e1, long e2) const {
    long long x1 = e1 / rC_, y1 = e1 % rC_;
    long long x2 = e2 / rC_, y2 = e2 % rC_;
    return reduce64(x1 + x2, y1 + y2);
}

long CuspModule::apply(const Gen& g, long v) const {
    long x = v / N_, y = v % N_;
    long nx = mul_res(g.alpha, x);
    long ny = add_res(mul_res(g.beta, y), mul_res(g.gamma, x));
    return nx * N_ + ny;
}

void CuspModule::build_generators() {
    const Field& F = ctx_->field;
    auto res_idx = [&](const FieldElement& e) { return R_.index_of(R_.reduce(e)); };
    const long one = res_idx(FieldElement(1));
    const long zero = res_idx(FieldElement(0));

    auto divide = [&](const FieldElement& v, const FieldElement& h, const Ideal& small) {
        for (long t = 0; t < N_; ++t) {
            FieldElement tt = R_.element_at(t);
            if (ideal_contains(F, small, v - F.mul(tt, h))) return t;
        }
        throw std::logic_error("CuspModule: division failed");
    };

    // diagonal unit scalings (x,y) -> (u e x, u^{-1} y)
    for (const auto& p : unit_group_generators(F, ctx_->d_flag)) {
        Gen g;
        g.alpha = res_idx(F.mul(p.u, p.eps));
        FieldElement uinv = F.inv(p.u);
        if (!F.is_integral(uinv)) throw std::logic_error("unit inverse not integral");
        g.beta = res_idx(uinv);
        g.gamma = zero;
        g.u = p.u;
        g.eps = p.eps;
        unit_gens_.push_back(g);
    }

    // shears (x,y) -> (x, y + t x), t over a Z-basis of (c b^2)^*
    Ideal shear_lat = ideal_dual_star(F, ideal_mul(F, ctx_->c, ideal_mul(F, b_, b_)));
    std::vector<FieldElement> shear_basis = {shear_lat.basis1()};
    if (F.degree == 2) shear_basis.push_back(shear_lat.basis2());
    for (const auto& xs : shear_basis) {
        Gen g;
        g.alpha = one;
        g.beta = one;
        // coordinate of xs * h_b inside n^{-1}a*/a* w.r.t. h_a
        g.gamma = divide(F.mul(xs, h_b_), h_a_, a_star_);
        g.u = FieldElement(1);
        g.eps = FieldElement(1);
        shear_gens_.push_back(g);
    }

    // composante scalings (x,y) -> (a x, y), a in (Z/n_max)^x
    Int n_max = ideal_exponent(F, n_ideal_);
    for (Int a = 1; a < n_max; ++a) {
        if (gcd(a, n_max) != 1) continue;
        Gen g;
        g.alpha = res_idx(FieldElement(Rat(a)));
        g.beta = one;
        g.gamma = zero;
        g.u = FieldElement(1);
        g.eps = FieldElement(1);
        g.abar = a;
        scale_gens_.push_back(g);
    }
}

bool CuspModule::primitive(long v) const {
    long x = v / N_, y = v % N_;
    for (const auto& t : in_prime_)
        if (t[x] && t[y]) return false;
    return true;
}

Ideal CuspModule::bprime_of(long v) const {
    const Field& F = ctx_->field;
    long x = v / N_;
    FieldElement xe = R_.element_at(x);
    if (xe.is_zero()) return b_;
    return ideal_sum(F, b_, ideal_principal(F, F.mul(xe, h_b_)));
}

std::vector<const CuspModule::Gen*> CuspModule::gens_for(Variant variant) const {
    std::vector<const Gen*> gens;
    for (const auto& g : unit_gens_) gens.push_back(&g);
    for (const auto& g : shear_gens_) gens.push_back(&g);
    if (variant == Variant::Composantes)
        for (const auto& g : scale_gens_) gens.push_back(&g);
    return gens;
}

OrbitEnumeration CuspModule::enumerate(Variant variant) const {
    auto gens = gens_for(variant);
    const long total = module_size();
    std::vector<char> visited(total, 0);
    OrbitEnumeration out;
    for (long v = 0; v < total; ++v) {
        if (visited[v] || !primitive(v)) continue;
        long size = 0;
        std::deque<long> q{v};
        visited[v] = 1;
        while (!q.empty()) {
            long x = q.front();
            q.pop_front();
            ++size;
            for (const Gen* g : gens) {
                long y = apply(*g, x);
                if (!visited[y]) {
                    visited[y] = 1;
                    q.push_back(y);
                }
            }
        }
        Orbit orb;
        orb.rep_index = v;
        orb.size = size;
        orb.b_prime = bprime_of(v);
        out.primitive_count += size;
        out.counts_by_bprime[orb.b_prime] += 1;
        out.orbits.push_back(std::move(orb));
    }
    return out;
}

long CuspModule::vector_of(const CuspRecord& cusp) const {
    const Field& F = ctx_->field;
    if (!(cusp.b == b_)) throw std::invalid_argument("vector_of: cusp lies over another b");
    // generator of n^{-1}d^{-1}/d^{-1}
    Ideal dinv = ideal_inv(F, ideal_different(F));
    Ideal ndinv = ideal_mul(F, ideal_inv(F, n_ideal_), dinv);
    FieldElement mu = find_in_ideal(F, ndinv, 0, [&](const FieldElement& m) {
        return ideal_sum(F, dinv, ideal_principal(F, m)) == ndinv;
    });
    auto divide = [&](const FieldElement& v, const FieldElement& h, const Ideal& small) {
        for (long t = 0; t < N_; ++t) {
            FieldElement tt = R_.element_at(t);
            if (ideal_contains(F, small, v - F.mul(tt, h))) return t;
        }
        throw std::logic_error("vector_of: division failed");
    };
    FieldElement vb = F.mul(F.mul(ctx_->y0, cusp.c), mu);
    FieldElement va = F.mul(F.mul(ctx_->y0, cusp.gamma_d), mu);
    long x = divide(vb, h_b_, b_);
    long y = divide(va, h_a_, a_star_);
    return x * N_ + y;
}

std::optional<CuspModule::PathWitness> CuspModule::find_path(long from, long to,
                                                             Variant variant) const {
    auto gens = gens_for(variant);
    const Field& F = ctx_->field;
    std::map<long, std::pair<long, const Gen*>> parent;  // node -> (prev, gen)
    parent[from] = {from, nullptr};
    std::deque<long> q{from};
    while (!q.empty()) {
        long x = q.front();
        q.pop_front();
        for (const Gen* g : gens) {
            long y = apply(*g, x);
            if (!parent.count(y)) {
                parent[y] = {x, g};
                q.push_back(y);
            }
        }
    }
    if (!parent.count(to)) return std::nullopt;
    PathWitness w{FieldElement(1), FieldElement(1), Int(1)};
    Int nmax = ideal_exponent(F, n_ideal_);
    long cur = to;
    while (cur != from) {
        auto [prev, g] = parent[cur];
        w.u = F.mul(w.u, g->u);
        w.eps = F.mul(w.eps, g->eps);
        w.h = mod_floor(w.h * g->abar, nmax);
        cur = prev;
    }
    return w;
}

OrbitEnumeration enumerate_cusps_bruteforce(const LevelContext& ctx, const Ideal& b,
                                            Variant variant, int generator_choice) {
    CuspModule M(ctx, b, generator_choice);
    return M.enumerate(variant);
}

std::map<Ideal, Int> cusp_count_formula(const LevelContext& ctx, const Ideal& b,
                                        Variant variant) {
    const Field& F = ctx.field;
    std::map<Ideal, Int> out;
    for (const auto& f : ideal_divisors(F, ctx.n_ideal)) {
        Ideal b_prime = ideal_mul(F, ideal_inv(F, f), b);
        Ideal nf = ideal_mul(F, ctx.n_ideal, ideal_inv(F, f));
        Int numerator = ideal_phi(F, f) * ideal_phi(F, nf);
        CuspUnitData cd = cusp_unit_data(F, f, ctx.n_ideal, ctx.d_flag);
        Int count;
        if (variant == Variant::Pointes) {
            if (numerator % cd.index_full != 0)
                throw std::logic_error("cusp_count_formula: non-integral pointes count");
            count = numerator / cd.index_full;
        } else {
            Int nunits = 0;
            for (Int a = 1; a < cd.n; ++a)
                if (gcd(a, cd.n) == 1) ++nunits;
            if (cd.n == 1) nunits = 1;
            Int denom = nunits * cd.index_full_bar;
            if (numerator % denom != 0)
                throw std::logic_error("cusp_count_formula: non-integral composante count");
            count = numerator / denom;
        }
        out[b_prime] = count;
    }
    return out;
}

IsoResult component_isomorphic(const LevelContext& ctx, const CuspRecord& c1,
                               const CuspRecord& c2, long xi_budget) {
    const Field& F = ctx.field;
    IsoResult res;
    FieldElement xi(1);
    CuspRecord c2t = c2;
    if (!(c1.b == c2.b)) {
        // transport: xi with (xi) = b1 * b2^{-1}, so b1 = xi * b2
        Ideal ratio = ideal_mul(F, c1.b, ideal_inv(F, c2.b));
        auto g = ideal_principal_generator(F, ratio, xi_budget);
        if (!g.has_value()) {
            res.outcome = IsoOutcome::Indeterminate;
            return res;
        }
        xi = *g;
        c2t = cusp_invariants(F.mul(xi, c2.a), F.mul(xi, c2.c), ctx);
    }
    if (!(c1.b_prime == c2t.b_prime)) {
        res.outcome = IsoOutcome::No;
        return res;
    }
    CuspModule M(ctx, c1.b);
    long v1 = M.vector_of(c1), v2 = M.vector_of(c2t);
    auto path = M.find_path(v1, v2, Variant::Composantes);
    if (!path.has_value()) {
        res.outcome = IsoOutcome::No;
        return res;
    }
    res.outcome = IsoOutcome::Yes;
    IsoWitness w;
    w.xi = xi;
    w.u = path->u;
    w.eps = path->eps;
    w.h = c1.n == 1 ? Int(1) : mod_floor(path->h, c1.n);
    res.witness = w;
    return res;
}

} // namespace hc
