#pragma once

#include <string>
#include <vector>

#include "propcalc/endmap.hpp"
#include "propcalc/frob.hpp"

namespace propcalc {

// Finite-dimensional graded Frobenius algebra over Q, the computational model
// of a closed manifold's cohomology ring. Strict data carries a nondegenerate
// pairing and derives the coproduct from it; lax data (resolution-target
// fixtures) states the coproduct and counit verbatim and skips the axioms.
struct FrobAlgebra {
    int n = 0;            // structural degree (top dimension)
    GradedSpace space;
    int unit = -1;        // basis index of the unit
    MultiMap mult;        // (2,1), degree 0
    MultiMap pairing;     // (2,0), degree -n; may be absent in lax data
    MultiMap coprod;      // (1,2), degree n
    MultiMap counit;      // (1,0), degree -n
    MultiMap unit_map;    // (0,1), degree 0
    MultiMap diff;        // (1,1), degree +1; zero map when absent
    bool strict = true;
    bool has_pairing = true;

    // target adjustment for resolution fixtures: add coeff to the image of
    // the (j,k,genus) class on the named basis tuples
    struct Perturb {
        int j, k, genus;
        std::vector<std::string> outs, ins;
        Rational coeff;
    };
    std::vector<Perturb> perturbs;
};

FrobAlgebra parse_alg(const std::string& text);
FrobAlgebra load_alg(const std::string& path);

// all structural axioms, exactly: commutativity, associativity, unit,
// pairing symmetry/invariance/nondegeneracy, co-versions with their
// degree-dependent signs, the three Frobenius forms, the defining
// adjunction, and d*d = 0 when a differential is present
void validate_frobenius(const FrobAlgebra& a);

// solve <<delta(x), b (x) c>> = <x, b*c> for delta, per basis element
MultiMap coproduct_from_pairing(const GradedSpace& space, int n, const MultiMap& mult,
                                const MultiMap& pairing);

// decoration -> image table for evaluate_graph
std::map<std::string, MultiMap> generator_images(const FrobAlgebra& a);

// canonical realizer of the genus-g operation with j inputs and k outputs:
// product comb, g handle loops, coproduct comb; (1,1,0) is the identity
MultiMap genus_operation(const FrobAlgebra& a, int j, int k, int genus);

// evaluate every enumerated generator graph realizing (j,k,genus) and demand
// agreement with the canonical realizer; returns how many graphs were checked.
// Odd structural degree restricts to counit-free graphs in canonical leg
// order (output legs carry the sign character there).
int check_operation_well_defined(const FrobAlgebra& a, int j, int k, int genus,
                                 int max_vertices);

// top-class coefficient of the handle operator on the unit; asserted equal to
// the alternating sum of graded dimensions
Rational euler_check(const FrobAlgebra& a);

// Frobenius structure on the graded dual, product transposed from the
// coproduct with Koszul/shift signs, unit = the counit functional
FrobAlgebra dualize(const FrobAlgebra& a);

// matrix of the pairing isomorphism x -> <x, .> from a to dualize(a):
// column i holds the dual-basis coordinates of the image of basis element i
Matrix poincare_iso(const FrobAlgebra& a);

// full duality audit: dual passes validate_frobenius, the pairing iso
// intertwines all genus operations with j+k <= max_jk and genus <= max_g,
// and the double dual has the original structure constants
void check_duality(const FrobAlgebra& a, int max_jk, int max_g);

} // namespace propcalc
