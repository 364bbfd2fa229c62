#include "hc/qexp.hpp"

#include "hc/units.hpp"

#include <algorithm>
#include <set>

namespace hc {

namespace {

Rat rat_abs(const Rat& r) { return r < 0 ? -r : r; }

Rat sqrt_upper(long long D, int iters = 6) {
    Rat u = Rat(isqrt(Int(D)) + 1);
    for (int i = 0; i < iters; ++i) u = (u + Rat(D) / u) / 2;
    return u;
}

Int rat_floor(const Rat& r) { return floor_div(num(r), den(r)); }
Int rat_ceil(const Rat& r) { return -floor_div(-num(r), den(r)); }

} // namespace

FieldElement unit_weight_power(const Field& F, const FieldElement& u, const Weight& kappa) {
    return F.mul(F.pow(u, kappa.k1), F.pow(F.conj(u), kappa.k2));
}

FieldElement eps_half_power(const Field& F, const FieldElement& eps, const Weight& kappa) {
    if (eps == FieldElement(1)) return FieldElement(1);
    if (F.degree == 2) {
        FieldElement e0 = fundamental_unit(F);
        int sign;
        long k;
        if (decompose_unit(F, e0, eps, sign, k) && sign == +1 && k % 2 == 0)
            return unit_weight_power(F, F.pow(e0, k / 2), kappa);
    }
    if (kappa.parallel()) {
        // eps totally positive of norm 1: (s1 eps s2 eps)^{k/2} = 1
        if (F.norm(eps) == 1) return FieldElement(1);
    }
    throw unsupported_configuration_error("eps^{kappa/2} not exactly representable");
}

XiStarSolution solve_xi_star(const LevelContext& ctx, const CuspRecord& cusp,
                             const FieldElement& u, const FieldElement& eps) {
    const Field& F = ctx.field;
    UnitPair p{u, eps};
    if (!in_o_Cbar(F, cusp.unit_data, p))
        throw no_solution_error("solve_xi_star: (u,eps) not in the composante stabilizer");

    XiStarSolution sol;
    sol.in_o_C = in_o_C(F, cusp.unit_data, p);
    Ideal S = ideal_dual_star(F, ideal_mul(F, ctx.c, ideal_mul(F, cusp.b, cusp.b)));
    Ideal Xstar = ideal_dual_star(F, cusp.X);
    sol.lattice = Xstar;

    Ideal nbinv = ideal_mul(F, ctx.n_ideal, ideal_inv(F, cusp.b));
    const FieldElement& c = cusp.c;
    if (c.is_zero()) {
        // unramified infinity cusp: the congruence is vacuous in xi*
        if (!(S == Xstar))
            throw std::logic_error("solve_xi_star: c = 0 with ramified invariants");
        sol.base = FieldElement(0);
        sol.containment_ok = true;
        return sol;
    }
    // homogeneous part: {xi* in S : eps^{-1} c xi* in n b^{-1}} must equal X*
    Ideal hom = ideal_intersect(
        F, S, ideal_scale(F, nbinv, F.mul(eps, F.inv(c))));
    if (!(hom == Xstar)) throw std::logic_error("solve_xi_star: solution lattice is not X*");

    // particular solution: scan coset representatives of S / X*
    FieldElement target = F.mul(u - FieldElement(1), cusp.gamma_d);
    FieldElement einvc = F.mul(F.inv(eps), c);
    Rat idx = ideal_norm(F, Xstar) / ideal_norm(F, S);
    long K = static_cast<long>(num(idx));
    for (long i = 0; i <= K; ++i)
        for (long j = 0; j <= K; ++j) {
            FieldElement t = S.basis1().scale(Rat(i));
            if (F.degree == 2) t = t + S.basis2().scale(Rat(j));
            if (ideal_contains(F, nbinv, target - F.mul(einvc, t))) {
                sol.base = t;
                Ideal tail = ideal_intersect(
                    F, S,
                    ideal_dual_star(F, ideal_mul(F, ctx.n_ideal,
                                                 ideal_mul(F, ctx.c,
                                                           ideal_mul(F, cusp.b_prime,
                                                                     cusp.b_prime)))));
                Ideal hull = ideal_sum(F, Xstar, tail);
                sol.containment_ok = ideal_contains(F, hull, sol.base);
                return sol;
            }
            if (F.degree == 1) break;  // only i matters
        }
    throw no_solution_error("solve_xi_star: congruence has no solution");
}

Int twist_exponent(const LevelContext& ctx, const CuspRecord& cusp,
                   const XiStarSolution& sol, const FieldElement& xi, const FieldElement& u) {
    const Field& F = ctx.field;
    Rat tr = F.trace(F.mul(F.mul(xi, u), sol.base));
    Rat e = Rat(cusp.n) * tr;
    if (!is_integer(e)) throw std::logic_error("twist_exponent: non-integral zeta exponent");
    return mod_floor(num(e), cusp.n);
}

std::vector<FieldElement> positive_slab(const Field& F, const Ideal& X, long bound) {
    std::vector<FieldElement> out = {FieldElement(0)};
    if (F.degree == 1) {
        Rat g = Rat(X.A, X.den);
        for (Int m = 1; Rat(m) * g <= bound; ++m) out.push_back(FieldElement(Rat(m) * g));
        return out;
    }
    // basis1 = (A/den, 0) is rational; write xi = m b1 + k b2 = p + q sqrt(D):
    // q = k q2 fixed per k, p = m p1 + k p2 with p1 > 0 rational
    auto [p1, q1] = F.sqrtD_coords(X.basis1());
    auto [p2, q2] = F.sqrtD_coords(X.basis2());
    if (q1 != 0 || p1 <= 0 || q2 == 0) throw std::logic_error("positive_slab: basis shape");
    Rat slo = Rat(F.D) / sqrt_upper(F.D);  // slo <= sqrt(D)
    // |q| <= B/(2 slo) and 0 < p <= B/2 for totally positive xi of trace <= B
    Rat halfB = Rat(bound) / 2;
    Int kmax = rat_floor(halfB / (slo * rat_abs(q2))) + 1;
    for (Int k = -kmax; k <= kmax; ++k) {
        Rat mlo = (0 - Rat(k) * p2) / p1, mhi = (halfB - Rat(k) * p2) / p1;
        for (Int m = rat_ceil(mlo) - 1; m <= rat_floor(mhi) + 1; ++m) {
            FieldElement xi = X.basis1().scale(Rat(m)) + X.basis2().scale(Rat(k));
            if (xi.is_zero()) continue;
            if (!F.totally_positive(xi)) continue;
            if (F.trace(xi) > bound) continue;
            out.push_back(xi);
        }
    }
    std::sort(out.begin() + 1, out.end(), [&](const FieldElement& a, const FieldElement& b) {
        Rat ta = F.trace(a), tb = F.trace(b);
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return out;
}

QExpDescriptor qexp_descriptor(const LevelContext& ctx, const CuspRecord& cusp,
                               const Weight& kappa, long bound) {
    const Field& F = ctx.field;
    if (ctx.d_flag != DFlag::Gm && !kappa.parallel())
        throw unsupported_configuration_error(
            "qexp_descriptor: need D = Gm or a parallel weight");

    QExpDescriptor d;
    d.weight = kappa;
    d.bound = bound;
    d.zeta_order = cusp.n;
    d.a_ideal = ideal_mul(F, cusp.b, ctx.c);

    // nontrivial generators of o^x_C with their xi* solutions
    std::vector<XiStarSolution> sols;
    for (const auto& g : cusp.unit_data.o_C_gens) {
        if (g.u == FieldElement(1) && g.eps == FieldElement(1)) continue;
        d.generators.push_back(g);
        sols.push_back(solve_xi_star(ctx, cusp, g.u, g.eps));
    }

    // the orbit group <u^2 eps> inside the totally positive units
    FieldElement lambda(1);
    if (F.degree == 2) {
        FieldElement e0 = fundamental_unit(F);
        long gexp = 0;
        for (const auto& g : d.generators) {
            FieldElement l = F.mul(F.mul(g.u, g.u), g.eps);
            int sign;
            long k;
            if (!decompose_unit(F, e0, l, sign, k) || sign != +1)
                throw std::logic_error("qexp_descriptor: u^2 eps outside <e0>");
            gexp = gexp == 0 ? std::abs(k) : static_cast<long>(gcd(Int(gexp), Int(std::abs(k))));
        }
        if (gexp != 0) lambda = F.pow(e0, gexp);
    }

    auto slab = positive_slab(F, cusp.X, bound);
    std::set<FieldElement> seen;
    for (const auto& xi : slab) {
        if (seen.count(xi)) continue;
        // walk the <lambda> orbit inside the slab
        std::vector<FieldElement> orbit = {xi};
        if (!(lambda == FieldElement(1)) && !xi.is_zero()) {
            for (FieldElement z = F.mul(xi, lambda);
                 F.totally_positive(z) && F.trace(z) <= bound; z = F.mul(z, lambda))
                orbit.push_back(z);
            FieldElement linv = F.inv(lambda);
            for (FieldElement z = F.mul(xi, linv);
                 F.totally_positive(z) && F.trace(z) <= bound; z = F.mul(z, linv))
                orbit.push_back(z);
        }
        for (const auto& z : orbit) seen.insert(z);
        QExpOrbit rec;
        rec.rep = *std::min_element(orbit.begin(), orbit.end(),
                                    [&](const FieldElement& a, const FieldElement& b) {
                                        Rat ta = F.trace(a), tb = F.trace(b);
                                        if (ta != tb) return ta < tb;
                                        return a < b;
                                    });
        rec.size_within_bound = static_cast<long>(orbit.size());
        for (size_t i = 0; i < d.generators.size(); ++i) {
            const auto& g = d.generators[i];
            FieldElement scalar =
                F.mul(eps_half_power(F, g.eps, kappa), unit_weight_power(F, g.u, kappa));
            rec.scalars.push_back(scalar);
            rec.zeta_exponents.push_back(twist_exponent(ctx, cusp, sols[i], rec.rep, g.u));
        }
        if (rec.rep.is_zero()) {
            for (size_t i = 0; i < rec.scalars.size(); ++i)
                if (!(rec.scalars[i] == FieldElement(1)) || rec.zeta_exponents[i] != 0)
                    rec.forced_zero_unless = true;
        }
        d.orbits.push_back(std::move(rec));
    }
    return d;
}

QSeries uniformization_twist(const Field& F, const QSeries& series, const FieldElement& x,
                             const Ideal& ab, const Ideal& ab_prime, const Int& zeta_order) {
    Ideal abstar = ideal_dual_star(F, ab);
    if (!ideal_contains(F, abstar, x))
        throw std::invalid_argument("uniformization_twist: x outside (ab)^*");
    QSeries out;
    out.zeta_order = zeta_order;
    for (const auto& [xi, cz] : series.coeffs) {
        if (!ideal_contains(F, ab_prime, xi))
            throw std::invalid_argument("uniformization_twist: exponent outside ab'");
        Rat e = Rat(zeta_order) * F.trace(F.mul(xi, x));
        if (!is_integer(e))
            throw std::logic_error("uniformization_twist: non-integral zeta exponent");
        out.coeffs[xi] = {cz.first, mod_floor(cz.second + num(e), zeta_order)};
    }
    return out;
}

KoecherWitness koecher_divergence(const Field& F, const FieldElement& xi0,
                                  const FieldElement& xi0_star, const Int& M) {
    if (F.degree != 2)
        throw std::invalid_argument("koecher_divergence: needs a real quadratic field");
    if (F.totally_positive(xi0))
        throw std::invalid_argument("koecher_divergence: xi0 is totally positive");
    if (xi0_star.is_zero()) throw std::invalid_argument("koecher_divergence: zero dual vector");
    FieldElement eta = F.mul(xi0, xi0_star);
    FieldElement e0 = fundamental_unit(F);
    FieldElement step;
    if (F.embedding_sign(eta, +1) < 0)
        step = F.mul(e0, e0);
    else if (F.embedding_sign(eta, -1) < 0)
        step = F.inv(F.mul(e0, e0));
    else
        throw std::invalid_argument("koecher_divergence: pairing has no negative embedding");
    FieldElement cur = eta;
    for (long k = 0; k <= 1000000; ++k) {
        Rat t = F.trace(cur);
        if (t < -Rat(M)) return {k, t};
        cur = F.mul(cur, step);
    }
    throw resource_limit_error("koecher_divergence: iteration limit");
}

std::vector<FieldElement> constant_term_constraint(const LevelContext& ctx,
                                                   const CuspRecord& cusp,
                                                   const Weight& kappa) {
    const Field& F = ctx.field;
    if (ctx.d_flag != DFlag::Gm && !kappa.parallel())
        throw unsupported_configuration_error(
            "constant_term_constraint: need D = Gm or a parallel weight");
    std::vector<FieldElement> out;
    for (const auto& g : cusp.unit_data.o_C_gens) {
        if (g.u == FieldElement(1) && g.eps == FieldElement(1)) continue;
        FieldElement scalar =
            F.mul(eps_half_power(F, g.eps, kappa), unit_weight_power(F, g.u, kappa));
        out.push_back(scalar - FieldElement(1));
    }
    return out;
}

std::vector<BoundaryComponent> boundary_components(const LevelContext& ctx) {
    const Field& F = ctx.field;
    Ideal o = ideal_whole(F);
    auto comps = enumerate_cusps_bruteforce(ctx, o, Variant::Composantes);
    std::vector<BoundaryComponent> out;
    for (const auto& orb : comps.orbits) {
        BoundaryComponent rec;
        rec.b_prime = orb.b_prime;
        Ideal f = ideal_inv(F, orb.b_prime);  // b = o, so f = b b'^{-1}
        CuspUnitData cd = cusp_unit_data(F, f, ctx.n_ideal, ctx.d_flag);
        rec.n = cd.n;
        rec.H_C = cd.H_C;
        Int phi_n = 0;
        if (cd.n == 1)
            phi_n = 1;
        else
            for (Int a = 1; a < cd.n; ++a)
                if (gcd(a, cd.n) == 1) ++phi_n;
        Int h = Int(rec.H_C.size());
        if (phi_n % h != 0)
            throw std::logic_error("boundary_components: H_C does not divide phi(n)");
        rec.geometric_points = phi_n / h;
        rec.closed_point = (cd.n == 1);
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace hc
