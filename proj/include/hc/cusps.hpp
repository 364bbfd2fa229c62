#pragma once

#include "hc/units.hpp"

#include <map>
#include <optional>
#include <vector>

namespace hc {

// Level data for Gamma_1^D(c, n): polarization module c, level ideal n
// (coprime to 6*disc, norm > 1), and the auxiliary group D.
struct LevelContext {
    Field field;
    Ideal c;
    Ideal n_ideal;
    DFlag d_flag = DFlag::Gm;
    FieldElement y0;   // o = n + y0*c, y0 in c^{-1}
    long budget = 1000000;  // primitive-vector enumeration budget

    LevelContext(Field F, Ideal c_, Ideal n_, DFlag d);
};

// 2x2 matrix of field elements, rows (a b; c d).
struct Mat2 {
    FieldElement a, b, c, d;
};

// true iff m lies in Gamma_1^D(c,n): entries in (o, c*; cdn, o),
// det in o^x_+ cap D, d = 1 mod n.
bool gamma_membership(const Field& F, const Mat2& m, const LevelContext& ctx);

// The invariants of the (R,n)-cusp defined by the pair (a,c).
struct CuspRecord {
    FieldElement a, c;            // defining column, (a,c) != (0,0)
    Ideal b;                      // a*o + c*c_ideal^*
    Ideal b_prime;                // a*o + c*(c_ideal*n)^*
    Ideal X;                      // c_ideal * b * b'
    Int n = 1;                    // exponent of b'/b
    bool ramified = false;
    CuspUnitData unit_data;
    FieldElement gamma_b, gamma_d;  // completion to gamma = (a, gamma_b; c, gamma_d), det 1
};

CuspRecord cusp_invariants(const FieldElement& a, const FieldElement& c,
                           const LevelContext& ctx);

enum class Variant { Pointes, Composantes };

struct Orbit {
    long rep_index = 0;   // smallest vector index in the orbit
    long size = 0;
    Ideal b_prime;
};

struct OrbitEnumeration {
    long primitive_count = 0;
    std::vector<Orbit> orbits;               // ordered by rep_index
    std::map<Ideal, Int> counts_by_bprime;   // orbit counts bucketed by b'
};

// The o/n-module n^{-1}L/L, L = b + a^*, coordinatized as (o/n)^2 through
// local generators h_b of n^{-1}b/b and h_a of n^{-1}a*/a*. The group of
// Prop. 3.1(v)/(vi) acts by (x,y) |-> (u e x, u^{-1} y), (x,y) |-> (x, y + t x)
// for t running over (c b^2)^* mod n, and for composantes (x,y) |-> (ax, y),
// a in (Z/n)^x.
class CuspModule {
public:
    // generator_choice selects among admissible local generators (the
    // bucketed counts must not depend on it; tested as an invariant).
    CuspModule(const LevelContext& ctx, const Ideal& b, int generator_choice = 0);

    long module_size() const { return N_ * N_; }
    long residue_size() const { return N_; }
    const FieldElement& gen_b() const { return h_b_; }
    const FieldElement& gen_a() const { return h_a_; }

    bool primitive(long v) const;
    Ideal bprime_of(long v) const;

    OrbitEnumeration enumerate(Variant variant) const;

    // coordinates of the level vector attached to a cusp over the same b
    long vector_of(const CuspRecord& cusp) const;

    // BFS path between two vectors under the variant's group; the witness
    // collects the unit part and the (Z/n)^x scalar along the path.
    struct PathWitness {
        FieldElement u, eps;
        Int h = 1;  // residue mod the bucket exponent n
    };
    std::optional<PathWitness> find_path(long from, long to, Variant variant) const;

private:
    struct Gen {
        long alpha, beta, gamma;  // residue indices: (x,y) -> (ax, by + cx)
        FieldElement u, eps;      // unit payload (identity for shears/scalings)
        Int abar = 1;             // rational scalar payload
    };

    const LevelContext* ctx_;
    Ideal b_, a_star_;
    Ideal n_ideal_;
    ResidueRing R_;
    long N_;
    // int64 mirrors of the residue ring for the hot loop
    long long rA_, rB_, rC_, tw_, nw_;
    FieldElement h_b_, h_a_;
    std::vector<Gen> unit_gens_, shear_gens_, scale_gens_;
    std::vector<std::vector<char>> in_prime_;  // per prime of n, per residue

    long reduce64(long long x, long long y) const;
    long mul_res(long e1, long e2) const;
    long add_res(long e1, long e2) const;
    long apply(const Gen& g, long v) const;
    void build_generators();
    std::vector<const Gen*> gens_for(Variant variant) const;
};

// Orbit counts bucketed by b', computed by exhaustive orbit enumeration.
OrbitEnumeration enumerate_cusps_bruteforce(const LevelContext& ctx, const Ideal& b,
                                            Variant variant, int generator_choice = 0);

// Closed-form counts of Prop. 3.1(v)/(vi): for each divisor f | n
// (b' = f^{-1} b), phi(f) phi(n f^{-1}) / [(o^x x o^x_{D+}) : o^x_C]
// resp. the composante version with #(Z/n)^x [(...) : o^x_Cbar].
std::map<Ideal, Int> cusp_count_formula(const LevelContext& ctx, const Ideal& b,
                                        Variant variant);

enum class IsoOutcome { No, Yes, Indeterminate };

struct IsoWitness {
    FieldElement xi;       // ideal transport b2 = xi^{-1} b1
    FieldElement u, eps;   // unit part of the path
    Int h = 1;             // (Z/n)^x scalar
};

struct IsoResult {
    IsoOutcome outcome = IsoOutcome::No;
    std::optional<IsoWitness> witness;
};

// Decides whether two cusps lie in isomorphic (R,n)-composantes, with a
// bounded search for the principal transport between their b-ideals.
// Budget exhaustion in that search yields Indeterminate, never "no".
IsoResult component_isomorphic(const LevelContext& ctx, const CuspRecord& c1,
                               const CuspRecord& c2, long xi_budget = 512);

} // namespace hc
