#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "propcalc/rational.hpp"

namespace propcalc {

// Decoration of one graph vertex: the (j,k,genus) component of the
// genus-graded properad, positive arities only. Internal degree is
// (k-1+genus)*n, even whenever n is even; the sign calculus in this
// module assumes even n throughout (only parity of the suspension
// markers matters then).
struct BarVertex {
    int j = 1;
    int k = 1;
    int g = 0;
    friend auto operator<=>(const BarVertex&, const BarVertex&) = default;
};

// Connected directed acyclic multigraph with decorated vertices and
// labeled boundary legs. Edges run tail -> head (an output port of the
// tail feeds an input port of the head); parallel edges form a bundle.
// Ports of a vertex are interchangeable at even n, so edges and legs
// are recorded at vertex resolution.
struct BarGraph {
    std::vector<BarVertex> verts;
    std::vector<std::array<int, 2>> edges; // sorted multiset of (tail, head)
    std::vector<int> in_legs;              // global input slot -> vertex
    std::vector<int> out_legs;             // global output slot -> vertex

    int weight() const { return (int)verts.size(); }
    // sum of decoration degrees minus one per vertex (suspension shift -1)
    int degree(int n) const;
    void validate() const;
    std::string serialize() const;
    friend auto operator<=>(const BarGraph&, const BarGraph&) = default;
};

// Orientation-normalized graph: sign 0 means the class vanishes (some
// automorphism permutes the odd vertex markers oddly).
struct SignedBar {
    BarGraph graph;
    int sign = 1;
};
SignedBar canonical_bar(const BarGraph& g);

// One basis term of the two-level construction: an outer composition
// pattern whose slots carry bar graphs. Flattened form: all inner
// vertices in one list, part_of marks the outer slot of each; edges
// within a part are internal to its bar graph, edges across parts are
// outer edges. Each part contributes one more odd marker (shift +1).
struct NestedTerm {
    std::vector<BarVertex> verts;
    std::vector<int> part_of;
    int parts = 1;
    std::vector<std::array<int, 2>> edges;
    std::vector<int> in_legs;
    std::vector<int> out_legs;

    int weight() const { return (int)verts.size(); }
    int degree(int n) const; // sum deg - weight + parts
    // decoration genus plus first Betti number of the total graph;
    // conserved by both differentials
    int total_genus() const;
    void validate() const;
    std::string serialize() const;
    friend auto operator<=>(const NestedTerm&, const NestedTerm&) = default;
};

struct CanonNested {
    NestedTerm term;
    int sign = 1; // 0 when the class vanishes
};
CanonNested canonical_nested(const NestedTerm& t);

NestedTerm single_part(const BarGraph& g);
BarGraph as_bar(const NestedTerm& t); // requires parts == 1

// Linear combination of canonical terms keyed by serialization.
struct CobarElement {
    std::map<std::string, std::pair<NestedTerm, Rational>> terms;

    void add(const NestedTerm& t, const Rational& coeff); // canonicalizes
    bool is_zero() const { return terms.empty(); }
    CobarElement scaled(const Rational& c) const;
    friend bool operator==(const CobarElement&, const CobarElement&);
};

// Contraction part of the differential: for every admissible adjacent
// pair inside one part, contract the whole edge bundle and compose the
// decorations ((ju+jv-r, ku+kv-r, gu+gv+r-1) along an r-edge bundle).
// A pair is admissible when no other directed path joins it inside the
// part. Lowers weight by one, keeps parts.
CobarElement bar_part(const NestedTerm& t, const Rational& coeff);

// Splitting part: for every part and every direction-respecting
// 2-coloring with connected color classes, divide the part in two.
// Keeps weight, raises parts by one. Carries a global -1 relative to
// the contraction part so that, for a morphism into a target properad,
// composite images cancel contraction images.
CobarElement cobar_part(const NestedTerm& t, const Rational& coeff);

// Sum of the two graph parts; the decoration properad carries no
// internal differential here, so there is no third term. Degree +1,
// squares to zero (checked exhaustively in the tests within bounds).
CobarElement total_differential(const CobarElement& x);

// Single-graph contraction differential, signed canonical output.
std::vector<std::pair<BarGraph, Rational>> bar_differential(const BarGraph& g);

// Boundary leg relabeling: new output slot i attaches where old slot
// sigma[i] did, new input slot i where old tau[i] did.
SignedBar leg_act(const BarGraph& g, const std::vector<int>& sigma_out,
                  const std::vector<int>& tau_in);

// Minimal representative of the boundary-relabeling orbit, with the
// relabeling (sigma, tau) and sign s such that leg_act(g, sigma, tau)
// equals s times the representative.
struct OrbitRep {
    BarGraph rep;
    std::vector<int> sigma_out;
    std::vector<int> tau_in;
    int sign = 1;
};
OrbitRep leg_orbit_rep(const BarGraph& g);

// All canonical nonvanishing basis terms with the given boundary arity,
// total weight <= max_weight and total genus <= max_genus. The caps are
// stable under both differentials (weight only drops, genus is
// conserved), so the span is closed under total_differential.
std::vector<NestedTerm> enumerate_cobar_basis(int j, int k, int max_weight,
                                              int max_genus);
// the one-part elements of the same range, as bar graphs
std::vector<BarGraph> enumerate_bar_graphs(int j, int k, int max_weight,
                                           int max_genus);

// Finite chunk of the complex: basis, degrees for the given even n, and
// the sparse matrix of the total differential. Closure of the caps
// means no image escapes; the degree window reported is simply the full
// range present.
struct TruncatedComplex {
    std::vector<NestedTerm> basis;
    std::vector<int> degrees;
    std::map<std::pair<int, int>, Rational> dmat; // (target, source) -> coeff
    int deg_lo = 0;
    int deg_hi = 0;
};
TruncatedComplex truncated_complex(int j, int k, int max_weight, int max_genus,
                                   int n);

} // namespace propcalc
