#pragma once

#include "hc/ideal.hpp"

#include <vector>

namespace hc {

// The paper's two extreme auxiliary groups: D = Gm has o^x_{D+} = {1},
// D = Res Gm has o^x_{D+} = the totally positive units.
enum class DFlag { Gm, ResGm };

// Fundamental unit e0 > 1 of a real quadratic field, from the continued
// fraction of w (resp. sqrt(D)). Throws for the degree-1 field.
FieldElement fundamental_unit(const Field& F);

// Generator of the totally positive units: e0 if N(e0) = 1, else e0^2.
FieldElement totally_positive_unit_gen(const Field& F, const FieldElement& e0);

// [o^x : o^x_f]: order of the subgroup of (o/f)^x generated by the images
// of -1 and e0.
Int congruence_unit_index(const Field& F, const Ideal& f);

// A pair (u, eps) in o^x x o^x_{D+}.
struct UnitPair {
    FieldElement u, eps;
};

// Rank-one unit subgroup of o^x encoded by its position in {+-1} x e0^Z:
// generated by coupling * e0^exponent_index together with -1 when
// contains_minus_one is set. exponent_index = 0 encodes a finite group.
struct UnitGroupDescriptor {
    bool contains_minus_one = false;
    long exponent_index = 0;
    int coupling = +1;  // sign attached to the e0^k generator
};

// Unit data attached to a cusp with invariant f = b b'^{-1} at level n:
// o^x_C  = {(u,e) : u = 1 mod nf^{-1}, ue  = 1 mod f},
// o^x_Cb = {(u,e) : u = 1 mod nf^{-1}, ue in (Z/n)^x + f}.
struct CuspUnitData {
    Ideal f;          // b b'^{-1}, integral, divides n_ideal
    Ideal m1;         // n f^{-1}
    Int n = 1;        // exponent of b'/b, = Z cap f
    Int index_full = 1;      // [(o^x x o^x_{D+}) : o^x_C]
    Int index_full_bar = 1;  // [(o^x x o^x_{D+}) : o^x_Cbar]
    Int index_bar = 1;       // [o^x_Cbar : o^x_C] = #H_C
    std::vector<Int> H_C;    // subgroup of (Z/n)^x as sorted residues
    std::vector<Int> H_C1;   // same for the T_1 variant
    std::vector<UnitPair> o_C_gens;   // generators of o^x_C
    std::vector<UnitPair> o_C1_gens;  // generators of o^x_{C,1} (eps = 1)
    UnitGroupDescriptor o_C1_descr;   // o^x_{C,1} inside o^x
    UnitGroupDescriptor o_Cbar1_descr;
};

// pre: f integral and dividing n_ideal.
CuspUnitData cusp_unit_data(const Field& F, const Ideal& f, const Ideal& n_ideal, DFlag d);

// Direct membership tests from the defining congruences (no group machinery;
// used to cross-check the kernel computation).
bool in_o_C(const Field& F, const CuspUnitData& cd, const UnitPair& p);
bool in_o_Cbar(const Field& F, const CuspUnitData& cd, const UnitPair& p);

// Decompose a unit as +-e0^k by bounded exponent search (|k| <= bound);
// returns false if u is not of that shape within the bound.
bool decompose_unit(const Field& F, const FieldElement& e0, const FieldElement& u,
                    int& sign, long& k, long bound = 64);

// Generators of o^x x o^x_{D+} as abstract group Z/2 + Z (+ Z for ResGm).
std::vector<UnitPair> unit_group_generators(const Field& F, DFlag d);

} // namespace hc
