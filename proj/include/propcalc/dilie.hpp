// Lie dialgebra targets: a bracket and a cobracket where the cobracket is a
// module map over the adjoint action. Provides the Killing-form construction
// of the cobracket, exact relation checking, componentwise tensor (Hadamard)
// comparison against the genus-zero coalgebra sectors, and the induced
// structure on algebra (x) Lie tensor products.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "propcalc/endmap.hpp"
#include "propcalc/frobalg.hpp"

namespace propcalc {

// structure constants c[i][j][k] with [e_i, e_j] = sum_k c[i][j][k] e_k
struct LieAlgebraData {
    int dim = 0;
    std::vector<std::string> names;
    std::vector<std::vector<std::vector<Rational>>> c;
};

// text format: "dim <d>", "basis <name>" lines, then "bracket <a> <b> <dst>
// <coeff>" triples. Each bracket line sets one orientation; the reverse is
// implied with the opposite sign.
LieAlgebraData parse_lie(const std::string& text);
LieAlgebraData load_lie(const std::string& path);

// antisymmetry and the Jacobi identity on every basis triple
void validate_lie(const LieAlgebraData& l);

// K[a][b] = trace(ad_a ad_b); also checks symmetry and the invariance
// K([a,b],c) = K(a,[b,c]) on every basis triple
Matrix killing_form(const LieAlgebraData& l);

struct DiLieData {
    GradedSpace space;
    MultiMap bracket;   // (2,1), degree 0
    MultiMap cobracket; // (1,2), degree n
    int n = 0;
};

// raise both outputs and lower the input of the bracket with the Killing
// pairing: delta_k^{ij} = sum Kinv[i][a] Kinv[j][b] K[k][c] c[a][b][c].
// Throws math_error when the form is degenerate (not semisimple).
DiLieData cobracket_from_killing(const LieAlgebraData& l);

// max |entry| of each relation defect map, keyed by relation name:
// bracket_antisym, jacobi, cobracket_coantisym, co_jacobi, module
struct RelationDefects {
    std::map<std::string, Rational> defects;
    bool all_zero() const;
};

// evaluates the graded relations exactly: bracket antisymmetry and Jacobi,
// cobracket co-antisymmetry and co-Jacobi, and the module compatibility
// cobracket([x,y]) = (-1)^{n|x|} x . cobracket(y) with the adjoint action
// extended to the tensor square by derivation
RelationDefects dilie_relations_check(const DiLieData& d);

// one arity sector of the dialgebra properad, computed from the presentation
// by enumerating generator-decorated trees modulo the relation span
struct SectorInfo {
    int dim = 0;       // trees minus relation rank
    int degree = 0;    // every basis tree has k-1 cobrackets, degree n(k-1)
    int trees = 0;     // distinct decorated trees spanning the sector
    int rank = 0;      // rank of the relation matrix
};

// j inputs, k outputs, cobracket degree n (n must be even; odd degrees would
// need an orientation on the vertex set). Sectors j+k > 6 are refused.
SectorInfo dilie_component(int j, int k, int n);

struct HadamardReport {
    std::vector<std::string> lines;
    bool ok = false;
};

// componentwise tensor check: the one-dimensional genus-zero coalgebra sector
// of degree n times the dialgebra sector of degree 0 must equal the dialgebra
// sector of degree n, in both dimension and degree, for all j+k <= max_total
HadamardReport hadamard_check(int n, int max_total = 5);

struct TensorReport {
    DiLieData data;
    RelationDefects defects;
    bool strict = false; // no differential on the algebra side
};

// bracket mult (x) bracket and cobracket coprod (x) cobracket on the tensor
// of a Frobenius algebra with a semisimple Lie algebra; with no differential
// every dialgebra relation holds exactly and the defect table is zero
TensorReport tensor_action(const FrobAlgebra& a, const LieAlgebraData& l);

} // namespace propcalc
