#pragma once

#include <map>
#include <string>
#include <vector>

#include "propcalc/graph.hpp"
#include "propcalc/linalg.hpp"

namespace propcalc {

// lexicographic indexing of tensor power bases, first factor most significant
class TensorIndexer {
  public:
    TensorIndexer(int dim, int power);
    long size() const { return size_; }
    std::vector<int> tuple(long idx) const;
    long index(const std::vector<int>& t) const;

  private:
    int dim_, power_;
    long size_;
};

// Sparse multilinear operation V^{(x)j} -> V^{(x)k} of fixed internal
// degree, exact entries, keyed by (output tuple index, input tuple index).
class MultiMap {
  public:
    MultiMap() = default;
    MultiMap(GradedSpace space, int j, int k, int degree);

    const GradedSpace& space() const { return space_; }
    int j() const { return j_; }
    int k() const { return k_; }
    int degree() const { return degree_; }

    int tuple_degree(const std::vector<int>& t) const;
    std::vector<int> in_tuple(long idx) const;
    std::vector<int> out_tuple(long idx) const;
    long in_size() const;
    long out_size() const;

    void set_entry(long out_idx, long in_idx, const Rational& v);
    void add_entry(long out_idx, long in_idx, const Rational& v);
    Rational entry(long out_idx, long in_idx) const;
    const std::map<std::pair<long, long>, Rational>& entries() const { return entries_; }

    bool is_zero() const { return entries_.empty(); }
    MultiMap scaled(const Rational& c) const;

    static MultiMap identity(const GradedSpace& space, int arity);

    friend MultiMap operator+(const MultiMap& a, const MultiMap& b);
    friend MultiMap operator-(const MultiMap& a, const MultiMap& b);
    friend bool operator==(const MultiMap& a, const MultiMap& b) {
        return a.j_ == b.j_ && a.k_ == b.k_ && a.degree_ == b.degree_ &&
               a.space_ == b.space_ && a.entries_ == b.entries_;
    }

  private:
    GradedSpace space_;
    int j_ = 0, k_ = 0, degree_ = 0;
    std::map<std::pair<long, long>, Rational> entries_;
};

// (f1 (x) f2 (x) ... ) with Koszul signs: applying fi to the i-th input
// block costs (-1)^{deg(fi) * (deg of blocks 1..i-1)}
MultiMap tensor_of(const std::vector<MultiMap>& fs);

// outer after inner; inner.k must equal outer.j
MultiMap compose_maps(const MultiMap& outer, const MultiMap& inner);

// graded permutation operator on V^{(x)m}: factor i moves to slot perm[i]
MultiMap perm_operator(const GradedSpace& space, const std::vector<int>& perm);

// full two-level composite: lower after the tensor of the uppers
MultiMap end_compose(const std::vector<MultiMap>& uppers, const MultiMap& lower);

// Evaluate a wired composition pattern: vertices looked up by decoration in
// images, processed in deterministic topological order with explicit graded
// permutations routing wires. Leg order of the result follows the graph's
// global leg lists.
MultiMap evaluate_graph(const DirectedGraph& g, const std::map<std::string, MultiMap>& images);

// commutator with the target differential: d o f - (-1)^{deg f} f o d
MultiMap end_differential(const MultiMap& f, const MultiMap& dV);

// permutation action on inputs and outputs: P(sigma_out) o f o P(tau_in)
MultiMap sym_act(const std::vector<int>& sigma_out, const MultiMap& f,
                 const std::vector<int>& tau_in);

} // namespace propcalc
