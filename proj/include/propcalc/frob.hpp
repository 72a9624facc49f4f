#pragma once

#include <string>
#include <vector>

#include "propcalc/graph.hpp"

namespace propcalc {

// One basis slot of the genus-graded bialgebra properad. j inputs, k outputs.
// For j,k >= 1 the component (j,k,genus) is one-dimensional and sits in
// degree (k-1+genus)*n. Components with j == 0 or k == 0 carry their degree
// verbatim; the valid degree ranges are {0,...,k*n} resp. {-j*n,...,0}.
struct FrobElem {
    int j = 0;
    int k = 0;
    int genus = 0; // loop genus accumulated by composition
    int deg = 0;   // total internal degree

    friend auto operator<=>(const FrobElem&, const FrobElem&) = default;
};

enum class FrobGen { product, unit, coproduct, counit };

// mu(2,1) deg 0, eta(0,1) deg 0, delta(1,2) deg n, eps(1,0) deg -n
FrobElem generator_elem(FrobGen g, int n);
Vertex generator_vertex(FrobGen g);
const char* generator_name(FrobGen g);
std::vector<Vertex> generator_vertices(); // all four

FrobElem frob_positive(int j, int k, int genus, int n);
FrobElem frob_boundary(int j, int k, int deg, int n);

int frob_degree(const FrobElem& e);

// whether the element sits inside the component table for parameter n
bool frob_in_range(const FrobElem& e, int n);

// identity of normal forms: positive components compare (j,k,genus),
// zero-arity components compare (j,k,deg)
bool frob_same_element(const FrobElem& a, const FrobElem& b);

std::string frob_str(const FrobElem& e);

// decoration round trip: "mu"/"eta"/"delta"/"eps" or "frob(j,k,genus,deg)"
std::string frob_decoration(const FrobElem& e);
FrobElem frob_from_decoration(const std::string& dec, int n);

// Full two-level composition: every output of every upper element is
// consumed by the lower element (sum of upper k's == lower j). Uppers with
// k == 0 are rejected (the two-level pattern would be disconnected).
// Arity, genus and degree bookkeeping are additive; for all-positive input
// the degree invariant is rechecked internally.
FrobElem frob_compose(const std::vector<FrobElem>& uppers, const FrobElem& lower, int n);

struct ReduceResult {
    FrobElem elem;
    bool in_range = true;
};

// Evaluate a generator-decorated graph (decorations mu/eta/delta/eps or
// frob(...)) to its normal form by pure counting: arities from the legs,
// genus from the loop count, degree additive over decorations.
ReduceResult reduce_graph(const DirectedGraph& g, int n);

// Contract the whole edge bundle between two adjacent vertices, composing
// their decorations. Port order of the merged vertex: upper's open ins then
// lower's, upper's remaining outs then lower's.
DirectedGraph contract_bundle(const DirectedGraph& g, int upper, int lower, int n);

// Explore every contraction order (memoized); throws math_error if two
// orders disagree, otherwise returns the common result. Checked against
// reduce_graph.
ReduceResult reduce_all_orders(const DirectedGraph& g, int n);

// All one-step relation rewrites applicable to g: input swaps at products,
// output swaps at coproducts, reassociations on product-product and
// coproduct-coproduct edges, the three-way bimodule exchange on
// product-into-coproduct edges, unit and counit splices. Each result is
// validated and must reduce to the same normal form; throws math_error
// otherwise. Returns the number of rewrites exercised (splices that would
// leave a bare wire are skipped).
int verify_presentation_on(const DirectedGraph& g, int n);

// every connected generator graph with at most max_vertices vertices,
// canonical leg order, any leg counts
std::vector<DirectedGraph> enumerate_generator_graphs(int max_vertices);

// symmetry character of the one-dimensional components: trivial on input
// permutations, sign^n on output permutations
int frob_character(const std::vector<int>& sigma_in, const std::vector<int>& tau_out, int n);

} // namespace propcalc
