#pragma once

#include <map>
#include <string>
#include <vector>

#include "propcalc/barcobar.hpp"
#include "propcalc/frobalg.hpp"

namespace propcalc {

// Weight-by-weight extension of a properad morphism from the graph
// resolution into the endomorphism properad of a finite complex. Images
// are stored per canonical labeled bar graph; the arity window widens at
// lower weights because splittings of a small-boundary graph can have
// wide cross bundles (bounded by the genus cap), and the genus cap is
// derived from the degree window of the target, beyond which every
// component of End(V) is zero.
struct PartialMorphism {
    GradedSpace space;
    MultiMap dV;   // (1,1), degree +1
    int n = 0;     // structural degree, must be even
    int max_weight = 0;
    int max_arity = 0;   // j + k cap for reported obstructions
    int genus_cap = 0;
    std::map<std::string, MultiMap> images;
    std::map<std::string, BarGraph> graphs;   // same keys, for the audit
    int current_weight = 0;
};

struct ObstructionReport {
    BarGraph x;
    int weight = 0;
    MultiMap cycle;
    bool filled = false;
    MultiMap filler;
    // nonzero residue of the cycle modulo boundaries, one line per entry;
    // empty when filled
    std::vector<std::string> homology_class;
};

// Weight-one assignments from the algebra data: the canonical genus
// operation of every corolla in the closed arity window plus any perturb
// entries. Every image must be a chain map of the corolla's degree;
// violations are rejected with the offending commutator spelled out.
PartialMorphism init_weight_zero(const FrobAlgebra& a, int max_weight,
                                 int max_arity);

// c(x) = phi(contraction terms of x) + wired composites of phi over the
// splitting terms of x. Hard-asserts end_differential(c(x)) = 0.
MultiMap obstruction_cycle(const PartialMorphism& phi, const BarGraph& x);

// Solve end_differential(y) = c(x) for y in the component of x's degree
// (deterministic echelon solve, free variables zero). On success the
// filler is averaged over the leg stabilizer of x and propagated through
// the whole symmetric orbit; on failure the report carries the nonzero
// class of the cycle modulo boundaries.
ObstructionReport extend(PartialMorphism& phi, const BarGraph& x);

struct ResolutionResult {
    PartialMorphism phi;
    std::vector<ObstructionReport> reports;
    bool all_filled = true;
    bool audit_passed = false;
    std::vector<std::string> log;
};

// Iterate extend over canonical orbit representatives, weight 2 up to
// max_weight, arities j+k <= max_arity at the top weight (wider below, to
// close the evaluation window). Stops after the first weight level with
// an unfilled obstruction. Ends with a global chain-map audit of every
// assignment in the reported window.
ResolutionResult run_resolution(const FrobAlgebra& a, int max_weight,
                                int max_arity = 4);

} // namespace propcalc
