#pragma once

#include "hc/cusps.hpp"

#include <map>

namespace hc {

struct unsupported_configuration_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct no_solution_error : std::domain_error {
    using std::domain_error::domain_error;
};

// weight kappa = (k1, k2) over the two real embeddings
struct Weight {
    long k1 = 0, k2 = 0;
    bool parallel() const { return k1 == k2; }
};

// u^kappa = s1(u)^{k1} s2(u)^{k2}, exact (u a unit)
FieldElement unit_weight_power(const Field& F, const FieldElement& u, const Weight& kappa);

// eps^{kappa/2}: exact when eps is a square in <+-e0> or kappa is parallel
// (then the N(eps)^{k/2}-style value is 1); otherwise unsupported.
FieldElement eps_half_power(const Field& F, const FieldElement& eps, const Weight& kappa);

// Affine solution set of the level congruence for xi*_{u,eps} at a cusp:
// (u-1)d - eps^{-1} xi* c  in  n b^{-1},  xi* in (c b^2)^*.
struct XiStarSolution {
    FieldElement base;      // one solution
    Ideal lattice;          // all solutions = base + lattice (= X^*)
    bool in_o_C;            // (u,eps) satisfies the full pointe congruences
    bool containment_ok;    // base in (cbb')^* + (cb^2)^* cap (ncb'^2)^*
};

// pre: (u,eps) in o^x_Cbar (composante stabilizer); throws no_solution_error
// otherwise or when the congruence is unsolvable.
XiStarSolution solve_xi_star(const LevelContext& ctx, const CuspRecord& cusp,
                             const FieldElement& u, const FieldElement& eps);

// zeta exponent n*Tr(xi u xi*) mod n of the relation attached to (u,eps)
Int twist_exponent(const LevelContext& ctx, const CuspRecord& cusp,
                   const XiStarSolution& sol, const FieldElement& xi, const FieldElement& u);

struct QExpOrbit {
    FieldElement rep;          // canonical representative in X_+ u {0}
    long size_within_bound = 1;
    std::vector<FieldElement> scalars;  // eps^{kappa/2} u^kappa per generator
    std::vector<Int> zeta_exponents;    // n Tr(rep * u * xi*_{u,eps}) mod n
    bool forced_zero_unless = false;    // stabilizer twist != 1 (xi = 0 only)
};

struct QExpDescriptor {
    Weight weight;
    long bound = 0;           // trace-height cutoff
    Int zeta_order = 1;       // n
    Ideal a_ideal;            // the (a, kappa) twist-module tag
    std::vector<UnitPair> generators;  // generators of o^x_C used
    std::vector<QExpOrbit> orbits;
};

// pre: D = Gm or kappa parallel; throws unsupported_configuration_error.
QExpDescriptor qexp_descriptor(const LevelContext& ctx, const CuspRecord& cusp,
                               const Weight& kappa, long bound);

// Truncated q-series; each coefficient carries a rational part and a
// zeta-power tracked symbolically as an exponent mod zeta_order.
struct QSeries {
    Int zeta_order = 1;
    std::map<FieldElement, std::pair<Rat, Int>> coeffs;
};

// multiply the coefficient of q^xi by zeta^{n Tr(xi x)}; exponents of the
// series must lie in ab', x taken mod (ab')^*
QSeries uniformization_twist(const Field& F, const QSeries& series, const FieldElement& x,
                             const Ideal& ab, const Ideal& ab_prime, const Int& zeta_order);

struct KoecherWitness {
    long k = 0;
    Rat achieved_trace;
};

// smallest k with Tr(e0^{+-2k} xi0 xi0*) < -M; demonstrates the divergence
// forcing holomorphy at the cusps for d_F > 1
KoecherWitness koecher_divergence(const Field& F, const FieldElement& xi0,
                                  const FieldElement& xi0_star, const Int& M);

// the scalars eps^{kappa/2} u^kappa - 1 whose zero-divisor property is
// necessary for a nonzero constant term
std::vector<FieldElement> constant_term_constraint(const LevelContext& ctx,
                                                   const CuspRecord& cusp,
                                                   const Weight& kappa);

struct BoundaryComponent {
    Ideal b_prime;
    Int n = 1;
    std::vector<Int> H_C;
    Int geometric_points = 1;  // phi(n)/#H_C
    bool closed_point = true;  // iff n = 1
};

// one record per (R,n)-composante over b = o (Cl_F = 1 setting)
std::vector<BoundaryComponent> boundary_components(const LevelContext& ctx);

// lattice points of {xi in X_+ u {0} : Tr(xi) <= bound}, deterministic order
std::vector<FieldElement> positive_slab(const Field& F, const Ideal& X, long bound);

} // namespace hc
