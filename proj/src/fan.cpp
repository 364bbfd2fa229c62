#include "hc/fan.hpp"

#include <algorithm>
#include <map>

namespace hc {

namespace {

Int det2(const RayCoord& a, const RayCoord& b) { return a[0] * b[1] - a[1] * b[0]; }

RayCoord make_primitive(RayCoord r) {
    Int g = gcd(r[0], r[1]);
    if (g == 0) throw std::invalid_argument("zero ray");
    r[0] /= g;
    r[1] /= g;
    return r;
}

// rational upper bound on sqrt(D): Newton iteration from above stays above
Rat sqrt_upper(long long D, int iters = 6) {
    Rat u = Rat(isqrt(Int(D)) + 1);
    for (int i = 0; i < iters; ++i) u = (u + Rat(D) / u) / 2;
    return u;
}

Rat rat_abs(const Rat& r) { return r < 0 ? -r : r; }

} // namespace

RayCoord lattice_coords(const Field& F, const Ideal& lat, const FieldElement& e) {
    FieldElement b1 = lat.basis1();
    if (F.degree == 1) {
        Rat m = e.x / b1.x;
        if (!is_integer(m) || e.y != 0)
            throw std::invalid_argument("lattice_coords: not a lattice element");
        return {num(m), 0};
    }
    FieldElement b2 = lat.basis2();
    Rat det = b1.x * b2.y - b1.y * b2.x;
    Rat m = (e.x * b2.y - e.y * b2.x) / det;
    Rat k = (b1.x * e.y - b1.y * e.x) / det;
    if (!is_integer(m) || !is_integer(k))
        throw std::invalid_argument("lattice_coords: not a lattice element");
    return {num(m), num(k)};
}

FieldElement lattice_elem(const Field& F, const Ideal& lat, const RayCoord& c) {
    FieldElement e = lat.basis1().scale(Rat(c[0]));
    if (F.degree == 2) e = e + lat.basis2().scale(Rat(c[1]));
    return e;
}

Int cone_det(const Cone2& c) {
    if (!c.rank2()) return 0;
    return det2(c.rays[0], c.rays[1]);
}

bool cone_smooth(const Cone2& c) {
    if (!c.rank2()) return true;
    Int d = cone_det(c);
    return d == 1 || d == -1;
}

// ------------------------------------------------------------ Hilbert bases

std::vector<RayCoord> hilbert_basis_primal(const RayCoord& r1in, const RayCoord& r2in) {
    RayCoord r1 = make_primitive(r1in), r2 = make_primitive(r2in);
    Int d = det2(r1, r2);
    if (d == 0) throw std::invalid_argument("hilbert_basis: degenerate cone");
    if (d < 0) {
        std::swap(r1, r2);
        d = -d;
    }

    // lattice points of the fundamental parallelepiped {a r1 + b r2 : 0<=a,b<1}
    std::vector<RayCoord> par;
    Int mlo = std::min({Int(0), r1[0], r2[0], Int(r1[0] + r2[0])});
    Int mhi = std::max({Int(0), r1[0], r2[0], Int(r1[0] + r2[0])});
    Int klo = std::min({Int(0), r1[1], r2[1], Int(r1[1] + r2[1])});
    Int khi = std::max({Int(0), r1[1], r2[1], Int(r1[1] + r2[1])});
    for (Int m = mlo; m <= mhi; ++m)
        for (Int k = klo; k <= khi; ++k) {
            if (m == 0 && k == 0) continue;
            RayCoord p{m, k};
            Int a = det2(p, r2), b = det2(r1, p);  // d * barycentric coordinates
            if (a >= 0 && a < d && b >= 0 && b < d) par.push_back(p);
        }

    auto in_monoid = [&](const RayCoord& p) {
        return det2(p, r2) >= 0 && det2(r1, p) >= 0;
    };
    std::vector<RayCoord> basis = {r1, r2};
    for (const auto& c : par) {
        bool reducible = false;
        for (const auto& q : par) {
            if (q == c) continue;
            RayCoord rem{c[0] - q[0], c[1] - q[1]};
            if ((rem[0] != 0 || rem[1] != 0) && in_monoid(rem)) {
                reducible = true;
                break;
            }
        }
        if (!reducible) basis.push_back(c);
    }
    std::sort(basis.begin(), basis.end(), [](const RayCoord& a, const RayCoord& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });
    return basis;
}

std::vector<RayCoord> hilbert_basis(const Cone2& cone) {
    if (!cone.rank2())
        throw std::invalid_argument("hilbert_basis: cone not full-dimensional");
    const RayCoord& r1 = cone.rays[0];
    const RayCoord& r2 = cone.rays[1];
    if (det2(r1, r2) == 0) throw std::invalid_argument("hilbert_basis: degenerate cone");
    // dual cone rays: s1 orthogonal to r2 with s1.r1 > 0, s2 likewise
    RayCoord s1{r2[1], -r2[0]};
    if (s1[0] * r1[0] + s1[1] * r1[1] < 0) s1 = {-s1[0], -s1[1]};
    RayCoord s2{r1[1], -r1[0]};
    if (s2[0] * r2[0] + s2[1] * r2[1] < 0) s2 = {-s2[0], -s2[1]};
    return hilbert_basis_primal(s1, s2);
}

std::vector<Cone2> refine_cone(const Cone2& cone) {
    if (!cone.rank2()) return {cone};
    Int sgn = cone_det(cone) > 0 ? 1 : -1;
    auto hb = hilbert_basis_primal(cone.rays[0], cone.rays[1]);
    // order by angle starting at rays[0]
    std::sort(hb.begin(), hb.end(), [&](const RayCoord& a, const RayCoord& b) {
        return det2(a, b) * sgn > 0;
    });
    std::vector<Cone2> out;
    for (size_t i = 0; i + 1 < hb.size(); ++i) {
        Cone2 c{{hb[i], hb[i + 1]}};
        if (!cone_smooth(c))
            throw std::logic_error("refine_cone: Hilbert-basis subdivision not smooth");
        out.push_back(std::move(c));
    }
    return out;
}

// ------------------------------------------------------------ hull fan

Fan build_admissible_fan(const Field& F, const Ideal& X, const FieldElement& unit_gen,
                         FanMode mode, long box_limit) {
    Fan fan;
    fan.degree = F.degree;
    fan.Xstar = ideal_dual_star(F, X);
    fan.basis1 = fan.Xstar.basis1();
    fan.unit = unit_gen;
    if (F.degree == 1) {
        if (!(unit_gen == FieldElement(1)))
            throw std::invalid_argument("build_admissible_fan: degree-1 unit must be 1");
        fan.unit_matrix = {{{Int(1), Int(0)}, {Int(0), Int(1)}}};
        fan.cones.push_back(Cone2{{RayCoord{1, 0}}});
        return fan;
    }
    if (!F.totally_positive(unit_gen) || unit_gen == FieldElement(1))
        throw std::invalid_argument("build_admissible_fan: unit must be totally positive, != 1");
    fan.basis2 = fan.Xstar.basis2();

    // unit action on coordinates (columns = images of the basis)
    RayCoord uw1 = lattice_coords(F, fan.Xstar, F.mul(unit_gen, fan.basis1));
    RayCoord uw2 = lattice_coords(F, fan.Xstar, F.mul(unit_gen, fan.basis2));
    fan.unit_matrix = {{{uw1[0], uw2[0]}, {uw1[1], uw2[1]}}};
    Int du = fan.unit_matrix[0][0] * fan.unit_matrix[1][1] -
             fan.unit_matrix[0][1] * fan.unit_matrix[1][0];
    if (du != 1) throw std::logic_error("build_admissible_fan: unit action determinant != 1");
    auto applyU = [&](const RayCoord& r) {
        return RayCoord{fan.unit_matrix[0][0] * r[0] + fan.unit_matrix[0][1] * r[1],
                        fan.unit_matrix[1][0] * r[0] + fan.unit_matrix[1][1] * r[1]};
    };
    auto applyUinv = [&](const RayCoord& r) {
        return RayCoord{fan.unit_matrix[1][1] * r[0] - fan.unit_matrix[0][1] * r[1],
                        -fan.unit_matrix[1][0] * r[0] + fan.unit_matrix[0][0] * r[1]};
    };

    const int orient = F.cross_sign(fan.basis1, fan.basis2);
    if (orient == 0) throw std::logic_error("degenerate lattice basis");
    auto elem = [&](const RayCoord& r) { return lattice_elem(F, fan.Xstar, r); };

    // seed: first totally positive lattice point in a growing box
    RayCoord seed{0, 0};
    bool found = false;
    for (long b = 1; b <= box_limit && !found; b *= 2)
        for (long m = -b; m <= b && !found; ++m)
            for (long k = -b; k <= b && !found; ++k) {
                RayCoord r{Int(m), Int(k)};
                if ((m || k) && F.totally_positive(elem(r))) {
                    seed = make_primitive(r);
                    found = true;
                }
            }
    if (!found) throw std::runtime_error("build_admissible_fan: no positive point found");

    auto coordmax = [](const RayCoord& r) {
        Int m = r[0] < 0 ? -r[0] : r[0], k = r[1] < 0 ? -r[1] : r[1];
        return m > k ? m : k;
    };
    Int b0 = coordmax(seed);
    for (const RayCoord& t :
         {applyU(seed), applyU(applyU(seed)), applyUinv(seed), applyUinv(applyUinv(seed))})
        b0 = std::max(b0, coordmax(t));
    long box = static_cast<long>(b0) * 2 + 2;

    for (; box <= box_limit; box *= 2) {
        // candidate points: primitive, totally positive
        std::vector<RayCoord> pts;
        for (long m = -box; m <= box; ++m)
            for (long k = -box; k <= box; ++k) {
                if (m == 0 && k == 0) continue;
                if (gcd(Int(m), Int(k)) != 1) continue;
                RayCoord r{Int(m), Int(k)};
                if (F.totally_positive(elem(r))) pts.push_back(r);
            }
        // sort by angle (ascending in the embedding-plane orientation)
        std::sort(pts.begin(), pts.end(), [&](const RayCoord& a, const RayCoord& b) {
            return det2(a, b) * orient > 0;
        });
        // convex chain facing the origin
        std::vector<RayCoord> chain;
        for (const auto& z : pts) {
            while (chain.size() >= 2) {
                const RayCoord& p = chain[chain.size() - 2];
                const RayCoord& q = chain[chain.size() - 1];
                RayCoord qp{q[0] - p[0], q[1] - p[1]}, zq{z[0] - q[0], z[1] - q[1]};
                if (det2(qp, zq) * orient >= 0)
                    chain.pop_back();
                else
                    break;
            }
            chain.push_back(z);
        }
        std::map<RayCoord, size_t> pos;
        for (size_t i = 0; i < chain.size(); ++i) pos[chain[i]] = i;

        // base vertex: trace-minimal chain vertex whose unit translates stay
        // on the chain (tie-break: lexicographic coordinates)
        bool have_base = false;
        RayCoord base{0, 0};
        Rat best_tr;
        for (const auto& v : chain) {
            if (!pos.count(applyU(v)) || !pos.count(applyUinv(v))) continue;
            Rat tr = F.trace(elem(v));
            if (!have_base || tr < best_tr ||
                (tr == best_tr && (v[0] < base[0] || (v[0] == base[0] && v[1] < base[1])))) {
                have_base = true;
                base = v;
                best_tr = tr;
            }
        }
        if (!have_base) continue;

        // walk the chain from the base vertex to its unit translate
        RayCoord tf = applyUinv(base), tb = applyU(base);
        size_t i0 = pos[base];
        std::vector<RayCoord> cycle;
        bool ok = false;
        for (size_t i = i0; i < chain.size(); ++i) {
            cycle.push_back(chain[i]);
            if (i > i0 && (chain[i] == tf || chain[i] == tb)) {
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        bool consistent = true;
        for (const auto& v : cycle)
            if (!pos.count(applyU(v)) && !pos.count(applyUinv(v))) consistent = false;
        if (!consistent) continue;

        fan.cones.clear();
        for (size_t i = 0; i + 1 < cycle.size(); ++i)
            fan.cones.push_back(Cone2{{cycle[i], cycle[i + 1]}});
        if (mode == FanMode::HullSmooth) {
            std::vector<Cone2> refined;
            for (const auto& c : fan.cones)
                for (auto& piece : refine_cone(c)) refined.push_back(std::move(piece));
            fan.cones = std::move(refined);
        }
        return fan;
    }
    throw resource_limit_error("build_admissible_fan: box limit exceeded");
}

AdmissibleReport check_admissible(const Field& F, const Fan& fan) {
    AdmissibleReport rep;
    rep.representative_count = static_cast<long>(fan.cones.size());
    rep.finite_orbits = !fan.cones.empty();
    if (fan.degree == 1) {
        rep.complete = rep.smooth = rep.unit_stable = rep.finite_orbits;
        return rep;
    }
    rep.smooth = rep.finite_orbits;
    for (const auto& c : fan.cones)
        if (!c.rank2() || !cone_smooth(c)) rep.smooth = false;

    rep.complete = rep.finite_orbits;
    for (const auto& c : fan.cones)
        if (!c.rank2() || cone_det(c) == 0) rep.complete = false;
    if (rep.complete) {
        int dir = 0;
        for (const auto& c : fan.cones) {
            int s = cone_det(c) > 0 ? 1 : -1;
            if (dir == 0) dir = s;
            if (s != dir) rep.complete = false;
        }
        for (size_t i = 0; i + 1 < fan.cones.size(); ++i)
            if (!(fan.cones[i].rays[1] == fan.cones[i + 1].rays[0])) rep.complete = false;
    }
    auto applyU = [&](const RayCoord& r) {
        return RayCoord{fan.unit_matrix[0][0] * r[0] + fan.unit_matrix[0][1] * r[1],
                        fan.unit_matrix[1][0] * r[0] + fan.unit_matrix[1][1] * r[1]};
    };
    bool closure = false;
    if (!fan.cones.empty() && fan.cones.front().rank2() && fan.cones.back().rank2()) {
        const RayCoord& first = fan.cones.front().rays[0];
        const RayCoord& last = fan.cones.back().rays[1];
        closure = (applyU(last) == first) || (applyU(first) == last);
    }
    if (!closure) rep.complete = false;

    Int du = fan.unit_matrix[0][0] * fan.unit_matrix[1][1] -
             fan.unit_matrix[0][1] * fan.unit_matrix[1][0];
    bool positive = true;
    for (const auto& c : fan.cones)
        for (const auto& r : c.rays)
            if (!F.totally_positive(lattice_elem(F, fan.Xstar, applyU(r)))) positive = false;
    rep.unit_stable = closure && du == 1 && positive;
    return rep;
}

// ------------------------------------------------------------ graded layer

FieldElement pairing(const Field& F, const FieldElement& alpha, const FieldElement& beta,
                     const Ideal& X) {
    FieldElement prod = F.mul(alpha, beta);
    if (!ideal_contains(F, X, prod))
        throw lattice_violation_error("pairing: product escapes X (a*b not inside X?)");
    return prod;
}

bool polarization_check(const Field& F, const FieldElement& phi_elt, const Ideal& c) {
    if (!ideal_contains(F, c, phi_elt))
        throw std::invalid_argument("polarization_check: [phi] not in c");
    return F.totally_positive(phi_elt);
}

namespace {

// coordinate box guaranteed to contain all beta with max |embedding| <= B
long height_coord_box(const Field& F, const Ideal& lat, long B) {
    if (F.degree == 1) {
        Rat g = Rat(lat.A, lat.den);
        Rat m = Rat(B) / g;
        return static_cast<long>(num(m) / den(m)) + 1;
    }
    Rat su = sqrt_upper(F.D);
    Rat sl = Rat(F.D) / su;  // sl <= sqrt(D) <= su
    auto [b1p, b1q] = F.sqrtD_coords(lat.basis1());
    auto [b2p, b2q] = F.sqrtD_coords(lat.basis2());
    Rat det = b1p * b2q - b1q * b2p;
    Rat adet = rat_abs(det);
    // e = p + q sqrt(D) with |p| <= B and |q| sqrt(D) <= B
    Rat pmax = Rat(B), qmax = Rat(B) / sl;
    Rat mmax = (rat_abs(b2q) * pmax + rat_abs(b2p) * qmax) / adet;
    Rat kmax = (rat_abs(b1q) * pmax + rat_abs(b1p) * qmax) / adet;
    Rat m = mmax > kmax ? mmax : kmax;
    return static_cast<long>(num(m) / den(m)) + 2;
}

} // namespace

std::vector<GradedGenerator> mumford_generators(const Field& F, const FieldElement& phi_elt,
                                                const Ideal& a_ideal, const Ideal& b_ideal,
                                                const Ideal& X,
                                                const std::vector<FieldElement>& star,
                                                long beta_bound) {
    bool has_zero = false;
    for (const auto& s : star) {
        if (s.is_zero()) has_zero = true;
        if (std::find(star.begin(), star.end(), -s) == star.end())
            throw std::invalid_argument("mumford_generators: star not symmetric");
        if (!ideal_contains(F, a_ideal, s))
            throw std::invalid_argument("mumford_generators: star element outside a");
    }
    if (!has_zero) throw std::invalid_argument("mumford_generators: star misses 0");
    bool has_basis = false;
    if (F.degree == 1) {
        for (const auto& s : star) {
            if (s.is_zero()) continue;
            Int m = lattice_coords(F, a_ideal, s)[0];
            if (m == 1 || m == -1) has_basis = true;
        }
    } else {
        for (size_t i = 0; i < star.size() && !has_basis; ++i)
            for (size_t j = i + 1; j < star.size() && !has_basis; ++j) {
                if (star[i].is_zero() || star[j].is_zero()) continue;
                Int d = det2(lattice_coords(F, a_ideal, star[i]),
                             lattice_coords(F, a_ideal, star[j]));
                if (d == 1 || d == -1) has_basis = true;
            }
    }
    if (!has_basis) throw std::invalid_argument("mumford_generators: star contains no basis");
    if (!ideal_subset(F, ideal_mul(F, a_ideal, b_ideal), X))
        throw std::invalid_argument("mumford_generators: a*b not inside X");

    long box = height_coord_box(F, b_ideal, beta_bound);
    std::vector<GradedGenerator> out;
    const FieldElement bnd{Rat(beta_bound), Rat(0)};
    for (long m = -box; m <= box; ++m)
        for (long k = -box; k <= box; ++k) {
            if (F.degree == 1 && k != 0) continue;
            FieldElement beta = lattice_elem(F, b_ideal, {Int(m), Int(k)});
            if (!F.totally_nonnegative(bnd - beta) || !F.totally_nonnegative(bnd + beta))
                continue;  // trace-height above the cut
            for (const auto& alpha : star) {
                GradedGenerator g;
                g.beta = beta;
                g.alpha = alpha;
                g.q_exponent = F.mul(F.mul(phi_elt, beta) + alpha, beta);
                g.character = F.mul(phi_elt, beta).scale(2) + alpha;
                g.positive = g.q_exponent.is_zero() || F.totally_positive(g.q_exponent);
                if (!ideal_contains(F, X, g.q_exponent))
                    throw lattice_violation_error("mumford_generators: exponent escapes X");
                out.push_back(std::move(g));
            }
        }
    return out;
}

IntegralityScale integrality_scale(const Field& F, const FieldElement& alpha,
                                   const FieldElement& phi_elt, const Ideal& b_ideal,
                                   const Ideal& X, long box) {
    if (!F.totally_positive(phi_elt))
        throw std::invalid_argument("integrality_scale: polarization not totally positive");
    (void)X;
    for (Int n = 1; n <= 1000000; ++n) {
        bool ok = true;
        for (long m = -box; m <= box && ok; ++m)
            for (long k = -box; k <= box && ok; ++k) {
                if (F.degree == 1 && k != 0) continue;
                if (m == 0 && k == 0) continue;
                FieldElement beta = lattice_elem(F, b_ideal, {Int(m), Int(k)});
                if (beta.is_zero()) continue;
                FieldElement q = F.mul(F.mul(phi_elt, beta).scale(Rat(n)) + alpha, beta);
                if (!(q.is_zero() || F.totally_positive(q))) ok = false;
            }
        if (ok) return {n, box};
    }
    throw std::logic_error("integrality_scale: no n found");
}

TorsionStructure torsion_structure(const Field& F, const Ideal& a_ideal, const Ideal& b,
                                   const Ideal& b_prime, const Ideal& n_ideal) {
    if (!ideal_subset(F, b, b_prime) ||
        !ideal_subset(F, b_prime, ideal_mul(F, ideal_inv(F, n_ideal), b)))
        throw std::invalid_argument("torsion_structure: b <= b' <= n^{-1}b violated");
    (void)a_ideal;
    TorsionStructure t;
    Int nn = num(ideal_norm(F, n_ideal));
    t.a_part = nn;
    t.b_part = nn;
    Rat idx = ideal_norm(F, b) / ideal_norm(F, b_prime);
    if (!is_integer(idx)) throw std::logic_error("torsion_structure: non-integral index");
    t.bprime_part = num(idx);
    t.middle = t.a_part * t.b_part;
    if (t.middle % t.bprime_part != 0)
        throw std::logic_error("torsion_structure: exactness bookkeeping failed");
    t.isogeny_target = t.middle / t.bprime_part;
    return t;
}

} // namespace hc
