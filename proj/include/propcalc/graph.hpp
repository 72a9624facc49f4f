#pragma once

#include <compare>
#include <string>
#include <vector>

#include "propcalc/errors.hpp"

namespace propcalc {

// Connected directed acyclic multigraphs with ordered ports and ordered
// global legs. The substrate for everything graph-shaped: generator
// expressions, bar-side pieces, two-level composition patterns.

struct Vertex {
    std::string decoration;
    int in_arity = 0;
    int out_arity = 0;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

struct PortRef {
    int vertex = 0;
    int port = 0;
    friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

// src is an out-port of src.vertex, dst an in-port of dst.vertex
struct GraphEdge {
    PortRef src;
    PortRef dst;
    friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

class DirectedGraph {
  public:
    DirectedGraph() = default;

    int add_vertex(const std::string& decoration, int in_arity, int out_arity);
    void add_edge(PortRef src, PortRef dst);
    void set_inputs(std::vector<PortRef> ports);   // global input legs, in slot order
    void set_outputs(std::vector<PortRef> ports);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const std::vector<PortRef>& inputs() const { return inputs_; }
    const std::vector<PortRef>& outputs() const { return outputs_; }

    int n_vertices() const { return static_cast<int>(vertices_.size()); }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    int n_inputs() const { return static_cast<int>(inputs_.size()); }
    int n_outputs() const { return static_cast<int>(outputs_.size()); }

    // full structural validation: ports covered exactly once, indices in
    // range, acyclic, connected; throws input_error with a reason
    void validate() const;

    // first Betti number e - v + 1 of the underlying connected multigraph
    int loop_genus() const;

    bool is_acyclic() const;
    bool is_connected() const;

    // vertex indices in a deterministic topological order (Kahn's algorithm,
    // smallest ready index first)
    std::vector<int> topo_order() const;

    // perm[i] = new index of old vertex i; legs keep their slot order
    DirectedGraph relabeled(const std::vector<int>& perm) const;

    // line format, bit-exact round trip:
    //   v0:mu(2,1)
    //   e:0.0->1.0
    //   in:0.0,0.1
    //   out:1.0
    std::string serialize() const;
    static DirectedGraph parse(const std::string& text);

    // lexicographically minimal serialization over vertex relabelings that
    // keep the decorated vertex list sorted; legs and ports are never moved
    DirectedGraph canonical_form() const;
    std::string canonical_string() const;
    // all relabelings realizing the canonical form (the automorphism data)
    std::vector<std::vector<int>> canonical_perms() const;

    friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
        return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ &&
               a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_;
    }

  private:
    std::vector<Vertex> vertices_;
    std::vector<GraphEdge> edges_; // kept sorted
    std::vector<PortRef> inputs_;
    std::vector<PortRef> outputs_;
};

// Two-level composition data: every output of every upper graph is matched
// with exactly one input leg of the lower graph.
struct GraftingPattern {
    std::vector<DirectedGraph> uppers;
    DirectedGraph lower;
    // matching[t] = lower input slot receiving concatenated upper output t
    std::vector<int> matching;
};

// glue along the pattern; throws input_error if the pattern is not a
// bijection or the result fails validation (e.g. disconnected)
DirectedGraph graft(const GraftingPattern& p);

// All valid connected DAGs with the given leg counts built from the given
// decorated vertex types (each type usable any number of times), up to
// vertex relabeling. Legs attach in canonical sorted port order unless
// all_leg_orders is set, in which case every leg ordering is listed.
// Deterministic output, sorted by serialization.
std::vector<DirectedGraph> enumerate_graphs(int j, int k, int max_vertices,
                                            const std::vector<Vertex>& types,
                                            bool all_leg_orders = false);

// same, but with unconstrained leg counts (canonical leg order only)
std::vector<DirectedGraph> enumerate_graphs_all(int max_vertices,
                                                const std::vector<Vertex>& types);

} // namespace propcalc
