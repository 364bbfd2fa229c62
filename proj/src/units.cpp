#include "hc/units.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hc {

namespace {

Rat rat_abs(const Rat& r) { return r < 0 ? -r : r; }

// row HNF of a small integer matrix; returns a triangular basis of the
// row span (used for relation lattices in <= 3 unknowns)
std::vector<std::vector<Int>> hnf_small(std::vector<std::vector<Int>> rows, size_t cols) {
    std::vector<std::vector<Int>> basis;
    size_t pivot_col = 0;
    while (pivot_col < cols) {
        // gcd-combine all rows on pivot_col
        std::vector<Int> acc(cols, 0);
        bool have = false;
        for (auto& r : rows) {
            if (r[pivot_col] == 0) continue;
            if (!have) {
                acc = r;
                have = true;
                continue;
            }
            // extended gcd step
            Int a = acc[pivot_col], b = r[pivot_col];
            while (b != 0) {
                Int q = a / b;
                for (size_t j = 0; j < cols; ++j) {
                    Int t = acc[j] - q * r[j];
                    acc[j] = r[j];
                    r[j] = t;
                }
                a = acc[pivot_col];
                b = r[pivot_col];
            }
        }
        if (have) {
            if (acc[pivot_col] < 0)
                for (auto& v : acc) v = -v;
            // clear the pivot column from the remaining rows
            for (auto& r : rows)
                if (r[pivot_col] != 0) {
                    Int q = r[pivot_col] / acc[pivot_col];
                    for (size_t j = 0; j < cols; ++j) r[j] -= q * acc[j];
                }
            basis.push_back(acc);
        }
        ++pivot_col;
    }
    return basis;
}

} // namespace

FieldElement fundamental_unit(const Field& F) {
    if (F.degree == 1) throw std::invalid_argument("fundamental_unit: degree-1 field");
    const Int Delta = F.discriminant;
    const Int s = isqrt(Delta);
    // continued fraction of (P0 + sqrt(Delta))/Q0 with exact (P,Q) steps
    Int P = (Delta % 2 == 0) ? Int(0) : Int(1);
    Int Q = 2;
    std::map<std::pair<Int, Int>, int> seen;
    std::vector<Int> partials;
    int cycle_start = -1;
    for (int step = 0; step < 4096; ++step) {
        auto key = std::make_pair(P, Q);
        auto it = seen.find(key);
        if (it != seen.end()) {
            cycle_start = it->second;
            break;
        }
        seen[key] = step;
        if (Q <= 0) throw std::logic_error("fundamental_unit: nonpositive Q");
        Int a = floor_div(P + s, Q);
        partials.push_back(a);
        Int Pn = a * Q - P;
        Int Qn = (Delta - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    if (cycle_start < 0) throw std::logic_error("fundamental_unit: no period found");
    // multiplier of the periodic part: bottom row (c,d) of prod A(a_i)
    Int m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (size_t i = cycle_start; i < partials.size(); ++i) {
        const Int& a = partials[i];
        // M *= [[a,1],[1,0]]
        Int n00 = m00 * a + m01, n01 = m00;
        Int n10 = m10 * a + m11, n11 = m10;
        m00 = n00; m01 = n01; m10 = n10; m11 = n11;
    }
    // alpha_m = (Pm + sqrt(Delta))/Qm where (Pm,Qm) is the repeated pair
    Int Pm = P, Qm = Q;
    // eps = c*alpha_m + d = ((c*Pm + d*Qm) + c*sqrt(Delta)) / Qm
    Int c = m10, d = m11;
    Rat rx(c * Pm + d * Qm, Qm), rq(c, Qm);  // eps = rx + rq*sqrt(Delta)
    FieldElement eps;
    if (F.half_basis) {
        // sqrt(D) = 2w - 1
        eps = FieldElement(rx - rq, 2 * rq);
    } else {
        // sqrt(Delta) = 2*sqrt(D) = 2w
        eps = FieldElement(rx, 2 * rq);
    }
    if (!F.is_integral(eps) || rat_abs(F.norm(eps)) != 1)
        throw std::logic_error("fundamental_unit: continued fraction gave a non-unit");
    // normalize to eps > 1 in the +sqrt(D) embedding
    if (F.embedding_sign(eps, +1) < 0) eps = -eps;
    if (F.embedding_sign(eps - FieldElement(1), +1) < 0) {
        eps = F.inv(eps);
        if (F.embedding_sign(eps, +1) < 0) eps = -eps;
    }
    if (eps == FieldElement(1) || eps == -FieldElement(1))
        throw std::logic_error("fundamental_unit: trivial unit");
    return eps;
}

FieldElement totally_positive_unit_gen(const Field& F, const FieldElement& e0) {
    if (F.norm(e0) == 1) return e0;
    return F.mul(e0, e0);
}

Int congruence_unit_index(const Field& F, const Ideal& f) {
    if (num(ideal_norm(F, f)) == 0) throw std::invalid_argument("congruence_unit_index: zero ideal");
    ResidueRing R(F, f);
    std::vector<FieldElement> gens = {R.reduce(-FieldElement(1))};
    if (F.degree == 2) gens.push_back(R.reduce(fundamental_unit(F)));
    std::set<long> closure = {R.index_of(R.reduce(FieldElement(1)))};
    std::vector<FieldElement> frontier = {R.reduce(FieldElement(1))};
    while (!frontier.empty()) {
        std::vector<FieldElement> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                FieldElement y = R.mul(x, g);
                if (closure.insert(R.index_of(y)).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return Int(closure.size());
}

std::vector<UnitPair> unit_group_generators(const Field& F, DFlag d) {
    std::vector<UnitPair> gens;
    gens.push_back({-FieldElement(1), FieldElement(1)});
    if (F.degree == 2) {
        FieldElement e0 = fundamental_unit(F);
        gens.push_back({e0, FieldElement(1)});
        if (d == DFlag::ResGm)
            gens.push_back({FieldElement(1), totally_positive_unit_gen(F, e0)});
    }
    return gens;
}

bool in_o_C(const Field& F, const CuspUnitData& cd, const UnitPair& p) {
    FieldElement one(1);
    return ideal_contains(F, cd.m1, p.u - one) &&
           ideal_contains(F, cd.f, F.mul(p.u, p.eps) - one);
}

bool in_o_Cbar(const Field& F, const CuspUnitData& cd, const UnitPair& p) {
    FieldElement one(1);
    if (!ideal_contains(F, cd.m1, p.u - one)) return false;
    if (cd.n == 1) return true;
    FieldElement ue = F.mul(p.u, p.eps);
    for (Int a = 1; a < cd.n; ++a) {
        if (gcd(a, cd.n) != 1) continue;
        if (ideal_contains(F, cd.f, ue - FieldElement(Rat(a)))) return true;
    }
    return false;
}

bool decompose_unit(const Field& F, const FieldElement& e0, const FieldElement& u,
                    int& sign, long& k, long bound) {
    for (long kk = 0; kk <= bound; ++kk)
        for (long sgn_k : {1, -1}) {
            if (kk == 0 && sgn_k == -1) continue;
            FieldElement p = F.pow(e0, sgn_k * kk);
            if (p == u) { sign = +1; k = sgn_k * kk; return true; }
            if (-p == u) { sign = -1; k = sgn_k * kk; return true; }
        }
    return false;
}

CuspUnitData cusp_unit_data(const Field& F, const Ideal& f, const Ideal& n_ideal, DFlag d) {
    if (!f.is_integral()) throw std::invalid_argument("cusp_unit_data: f not integral");
    Ideal m1 = ideal_mul(F, n_ideal, ideal_inv(F, f));
    if (!m1.is_integral())
        throw std::invalid_argument("cusp_unit_data: f does not divide n");

    CuspUnitData cd;
    cd.f = f;
    cd.m1 = m1;
    cd.n = ideal_exponent(F, f);

    ResidueRing R1(F, m1), R2(F, f);
    std::vector<UnitPair> gens = unit_group_generators(F, d);
    const size_t ng = gens.size();

    // evaluation map Phi(u,eps) = (u mod m1, u*eps mod f)
    auto phi = [&](const UnitPair& p) {
        return std::make_pair(R1.index_of(R1.reduce(p.u)),
                              R2.index_of(R2.reduce(F.mul(p.u, p.eps))));
    };
    std::vector<std::pair<long, long>> gen_img(ng);
    for (size_t i = 0; i < ng; ++i) gen_img[i] = phi(gens[i]);

    // closure of the image, remembering one generator word per element
    std::map<std::pair<long, long>, std::vector<long>> word;
    std::pair<long, long> id{R1.index_of(R1.reduce(FieldElement(1))),
                             R2.index_of(R2.reduce(FieldElement(1)))};
    word[id] = std::vector<long>(ng, 0);
    std::vector<std::pair<long, long>> frontier = {id};
    auto mul_img = [&](const std::pair<long, long>& x, const std::pair<long, long>& g) {
        return std::make_pair(R1.index_of(R1.mul(R1.element_at(x.first), R1.element_at(g.first))),
                              R2.index_of(R2.mul(R2.element_at(x.second), R2.element_at(g.second))));
    };
    while (!frontier.empty()) {
        std::vector<std::pair<long, long>> next;
        for (const auto& x : frontier)
            for (size_t i = 0; i < ng; ++i) {
                auto y = mul_img(x, gen_img[i]);
                if (!word.count(y)) {
                    auto w = word[x];
                    w[i] += 1;
                    word[y] = std::move(w);
                    next.push_back(y);
                }
            }
        frontier = std::move(next);
    }
    cd.index_full = Int(word.size());

    // rational residues (Z/n)^x inside (o/f)^x
    std::map<long, Int> rational_units;  // idx in R2 -> residue a mod n
    if (cd.n == 1) {
        rational_units[R2.index_of(R2.reduce(FieldElement(1)))] = 1;
    } else {
        for (Int a = 1; a < cd.n; ++a)
            if (gcd(a, cd.n) == 1)
                rational_units[R2.index_of(R2.reduce(FieldElement(Rat(a))))] = a;
    }

    long id1 = id.first;
    std::set<Int> hc;
    for (const auto& [el, w] : word) {
        (void)w;
        if (el.first != id1) continue;
        auto it = rational_units.find(el.second);
        if (it != rational_units.end()) hc.insert(it->second);
    }
    cd.H_C.assign(hc.begin(), hc.end());
    cd.index_bar = Int(cd.H_C.size());
    if (cd.index_full % cd.index_bar != 0)
        throw std::logic_error("cusp_unit_data: index bookkeeping failed");
    cd.index_full_bar = cd.index_full / cd.index_bar;

    // relation lattice of Phi on Z^ng (with the order-2 relation for -1)
    std::vector<std::vector<Int>> rels;
    {
        std::vector<Int> r(ng, 0);
        r[0] = 2;
        rels.push_back(r);
    }
    for (const auto& [el, w] : word)
        for (size_t i = 0; i < ng; ++i) {
            auto y = mul_img(el, gen_img[i]);
            const auto& wy = word.at(y);
            std::vector<Int> r(ng, 0);
            for (size_t j = 0; j < ng; ++j) r[j] = Int(w[j]) - Int(wy[j]);
            r[i] += 1;
            rels.push_back(std::move(r));
        }
    auto kernel_basis = hnf_small(std::move(rels), ng);
    auto word_to_pair = [&](const std::vector<Int>& w) {
        UnitPair p{FieldElement(1), FieldElement(1)};
        for (size_t i = 0; i < ng; ++i) {
            long e = static_cast<long>(w[i]);
            p.u = F.mul(p.u, F.pow(gens[i].u, e));
            p.eps = F.mul(p.eps, F.pow(gens[i].eps, e));
        }
        return p;
    };
    for (const auto& w : kernel_basis) cd.o_C_gens.push_back(word_to_pair(w));

    // T_1 variant: restrict to the <-1, e0> x {1} part (first two generators)
    size_t ng1 = std::min<size_t>(ng, 2);
    std::map<std::pair<long, long>, std::vector<long>> word1;
    word1[id] = std::vector<long>(ng1, 0);
    frontier = {id};
    while (!frontier.empty()) {
        std::vector<std::pair<long, long>> next;
        for (const auto& x : frontier)
            for (size_t i = 0; i < ng1; ++i) {
                auto y = mul_img(x, gen_img[i]);
                if (!word1.count(y)) {
                    auto w = word1[x];
                    w[i] += 1;
                    word1[y] = std::move(w);
                    next.push_back(y);
                }
            }
        frontier = std::move(next);
    }
    std::set<Int> hc1;
    for (const auto& [el, w] : word1) {
        (void)w;
        if (el.first != id1) continue;
        auto it = rational_units.find(el.second);
        if (it != rational_units.end()) hc1.insert(it->second);
    }
    cd.H_C1.assign(hc1.begin(), hc1.end());

    std::vector<std::vector<Int>> rels1;
    {
        std::vector<Int> r(ng1, 0);
        r[0] = 2;
        rels1.push_back(r);
    }
    for (const auto& [el, w] : word1)
        for (size_t i = 0; i < ng1; ++i) {
            auto y = mul_img(el, gen_img[i]);
            const auto& wy = word1.at(y);
            std::vector<Int> r(ng1, 0);
            for (size_t j = 0; j < ng1; ++j) r[j] = Int(w[j]) - Int(wy[j]);
            r[i] += 1;
            rels1.push_back(std::move(r));
        }
    auto kernel1 = hnf_small(std::move(rels1), ng1);
    for (const auto& w : kernel1) {
        UnitPair p{FieldElement(1), FieldElement(1)};
        p.u = F.mul(F.pow(-FieldElement(1), static_cast<long>(w[0])),
                    ng1 > 1 ? F.pow(gens[1].u, static_cast<long>(w[1])) : FieldElement(1));
        cd.o_C1_gens.push_back(p);
    }

    // descriptors by bounded exponent search over {+-1} x e0^Z
    auto make_descr = [&](auto member) {
        UnitGroupDescriptor ds;
        ds.contains_minus_one = member(-FieldElement(1));
        if (F.degree == 2) {
            FieldElement e0 = gens[1].u;
            FieldElement p(1);
            for (long k = 1; k <= 64; ++k) {
                p = F.mul(p, e0);
                if (member(p)) { ds.exponent_index = k; ds.coupling = +1; break; }
                if (member(-p)) { ds.exponent_index = k; ds.coupling = -1; break; }
            }
        }
        return ds;
    };
    cd.o_C1_descr = make_descr(
        [&](const FieldElement& u) { return in_o_C(F, cd, {u, FieldElement(1)}); });
    cd.o_Cbar1_descr = make_descr(
        [&](const FieldElement& u) { return in_o_Cbar(F, cd, {u, FieldElement(1)}); });

    return cd;
}

} // namespace hc
