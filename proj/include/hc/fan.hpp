#pragma once

#include "hc/ideal.hpp"

#include <array>
#include <vector>

namespace hc {

using RayCoord = std::array<Int, 2>;  // coordinates in the chosen Z-basis

// A rational polyhedral cone in the rank-2 lattice X*, spanned by one or
// two primitive rays (rank-0 cones do not occur as stored data).
struct Cone2 {
    std::vector<RayCoord> rays;  // 1 or 2 entries, primitive

    bool rank2() const { return rays.size() == 2; }
};

Int cone_det(const Cone2& c);
bool cone_smooth(const Cone2& c);

// A complete fan of X*_+ modulo the unit action, stored as an ordered
// cycle of cone representatives: consecutive cones share a ray and the
// unit translate of the first ray closes the cycle.
struct Fan {
    int degree = 2;
    Ideal Xstar;                       // the ambient lattice
    FieldElement basis1, basis2;       // its Z-basis (coordinates refer to it)
    FieldElement unit;                 // the acting totally positive unit u^2 e
    std::array<std::array<Int, 2>, 2> unit_matrix{};  // action on coordinates
    std::vector<Cone2> cones;          // ordered representatives
};

struct AdmissibleReport {
    bool complete = false;
    bool smooth = false;
    bool unit_stable = false;
    bool finite_orbits = false;
    long representative_count = 0;

    bool all() const { return complete && smooth && unit_stable && finite_orbits; }
};

enum class FanMode { Hull, HullSmooth };

// Lower convex hull fan of X*_+ between a canonical base vertex and its
// unit translate; in HullSmooth mode every cone is refined to |det| = 1
// by inserting its Hilbert-basis rays.
Fan build_admissible_fan(const Field& F, const Ideal& X, const FieldElement& unit_gen,
                         FanMode mode, long box_limit = 4096);

AdmissibleReport check_admissible(const Field& F, const Fan& fan);

// Hilbert basis of the monoid cone(r1,r2) cap Z^2 (standard coordinates).
std::vector<RayCoord> hilbert_basis_primal(const RayCoord& r1, const RayCoord& r2);

// Hilbert basis of the chart monoid X cap dual(cone): the coordinates of X
// are taken in the trace-dual basis, making the pairing the standard dot.
std::vector<RayCoord> hilbert_basis(const Cone2& cone);

// Subdivision of a cone along its Hilbert-basis rays; all pieces smooth.
std::vector<Cone2> refine_cone(const Cone2& cone);

// q-parameter pairing: alpha*beta as an element of X; throws
// lattice_violation_error if the product escapes X.
FieldElement pairing(const Field& F, const FieldElement& alpha, const FieldElement& beta,
                     const Ideal& X);

// [phi] in c_+ ? (phi must lie in c; throws otherwise)
bool polarization_check(const Field& F, const FieldElement& phi_elt, const Ideal& c);

// One degree-1 generator of the graded ring attached to (beta, alpha):
// exponent ([phi]b + a)b and character 2[phi]b + a.
struct GradedGenerator {
    FieldElement beta, alpha;
    FieldElement q_exponent;   // element of X
    FieldElement character;    // element of a
    int degree = 1;
    bool positive = true;      // q_exponent in X_+ u {0}
};

// pre: star symmetric, contains 0 and a Z-basis of a_ideal; a*b inside X.
std::vector<GradedGenerator> mumford_generators(const Field& F, const FieldElement& phi_elt,
                                                const Ideal& a_ideal, const Ideal& b_ideal,
                                                const Ideal& X,
                                                const std::vector<FieldElement>& star,
                                                long beta_bound);

struct IntegralityScale {
    Int n = 1;
    long box = 0;  // the certificate is only valid on this coordinate box
};

// least n >= 1 with (n*phi*beta + alpha)*beta in X_+ u {0} for all nonzero
// beta of the box; box-certified only.
IntegralityScale integrality_scale(const Field& F, const FieldElement& alpha,
                                   const FieldElement& phi_elt, const Ideal& b_ideal,
                                   const Ideal& X, long box);

// Orders in the two n-torsion sequences: (a/na)(1), n^{-1}b/b, b'/b,
// the middle term, and the order of the isogeny target's n-torsion.
struct TorsionStructure {
    Int a_part, b_part, bprime_part;
    Int middle;          // = a_part * b_part
    Int isogeny_target;  // = middle / bprime_part
};

TorsionStructure torsion_structure(const Field& F, const Ideal& a_ideal, const Ideal& b,
                                   const Ideal& b_prime, const Ideal& n_ideal);

// coordinates of a field element in the basis of lat (must be integral
// for lattice members; throws otherwise)
RayCoord lattice_coords(const Field& F, const Ideal& lat, const FieldElement& e);
FieldElement lattice_elem(const Field& F, const Ideal& lat, const RayCoord& c);

} // namespace hc
