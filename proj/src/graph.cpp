#include "propcalc/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace propcalc {

namespace {

bool decoration_ok(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c == ':' || c == '>' || c == '\n' || c == ' ' || c == '\t') return false;
    return true;
}

} // namespace

int DirectedGraph::add_vertex(const std::string& decoration, int in_arity, int out_arity) {
    if (!decoration_ok(decoration))
        throw input_error("graph: bad decoration '" + decoration + "'");
    if (in_arity < 0 || out_arity < 0) throw input_error("graph: negative arity");
    vertices_.push_back({decoration, in_arity, out_arity});
    return n_vertices() - 1;
}

void DirectedGraph::add_edge(PortRef src, PortRef dst) {
    GraphEdge e{src, dst};
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e);
}

void DirectedGraph::set_inputs(std::vector<PortRef> ports) { inputs_ = std::move(ports); }
void DirectedGraph::set_outputs(std::vector<PortRef> ports) { outputs_ = std::move(ports); }

void DirectedGraph::validate() const {
    if (vertices_.empty()) throw input_error("graph: no vertices");
    for (const auto& v : vertices_) {
        if (!decoration_ok(v.decoration)) throw input_error("graph: bad decoration");
        if (v.in_arity < 0 || v.out_arity < 0) throw input_error("graph: negative arity");
    }
    auto check_port = [&](PortRef p, bool in_side) {
        if (p.vertex < 0 || p.vertex >= n_vertices())
            throw input_error("graph: port references missing vertex");
        int ar = in_side ? vertices_[p.vertex].in_arity : vertices_[p.vertex].out_arity;
        if (p.port < 0 || p.port >= ar) throw input_error("graph: port index out of range");
    };
    std::map<PortRef, int> in_used, out_used;
    for (const auto& e : edges_) {
        check_port(e.src, false);
        check_port(e.dst, true);
        ++out_used[e.src];
        ++in_used[e.dst];
    }
    for (const auto& p : inputs_) {
        check_port(p, true);
        ++in_used[p];
    }
    for (const auto& p : outputs_) {
        check_port(p, false);
        ++out_used[p];
    }
    for (int v = 0; v < n_vertices(); ++v) {
        for (int p = 0; p < vertices_[v].in_arity; ++p)
            if (in_used[{v, p}] != 1)
                throw input_error("graph: in-port not covered exactly once");
        for (int p = 0; p < vertices_[v].out_arity; ++p)
            if (out_used[{v, p}] != 1)
                throw input_error("graph: out-port not covered exactly once");
    }
    if (!is_acyclic()) throw input_error("graph: directed cycle");
    if (!is_connected()) throw input_error("graph: not connected");
}

bool DirectedGraph::is_acyclic() const {
    return static_cast<int>(topo_order().size()) == n_vertices();
}

bool DirectedGraph::is_connected() const {
    if (vertices_.empty()) return false;
    std::vector<char> seen(n_vertices(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& e : edges_) {
            int other = -1;
            if (e.src.vertex == v) other = e.dst.vertex;
            if (e.dst.vertex == v) other = e.src.vertex;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::vector<int> DirectedGraph::topo_order() const {
    std::vector<int> indeg(n_vertices(), 0);
    for (const auto& e : edges_) ++indeg[e.dst.vertex];
    std::set<int> ready;
    for (int v = 0; v < n_vertices(); ++v)
        if (indeg[v] == 0) ready.insert(v);
    std::vector<int> order;
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (const auto& e : edges_)
            if (e.src.vertex == v && --indeg[e.dst.vertex] == 0) ready.insert(e.dst.vertex);
    }
    return order;
}

int DirectedGraph::loop_genus() const {
    return n_edges() - n_vertices() + 1;
}

DirectedGraph DirectedGraph::relabeled(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != n_vertices())
        throw input_error("graph: relabel size mismatch");
    DirectedGraph g;
    g.vertices_.resize(vertices_.size());
    for (int i = 0; i < n_vertices(); ++i) g.vertices_[perm[i]] = vertices_[i];
    auto remap = [&](PortRef p) { return PortRef{perm[p.vertex], p.port}; };
    for (const auto& e : edges_) g.edges_.push_back({remap(e.src), remap(e.dst)});
    std::sort(g.edges_.begin(), g.edges_.end());
    for (const auto& p : inputs_) g.inputs_.push_back(remap(p));
    for (const auto& p : outputs_) g.outputs_.push_back(remap(p));
    return g;
}

std::string DirectedGraph::serialize() const {
    std::ostringstream os;
    for (int i = 0; i < n_vertices(); ++i)
        os << "v" << i << ":" << vertices_[i].decoration << "(" << vertices_[i].in_arity
           << "," << vertices_[i].out_arity << ")\n";
    for (const auto& e : edges_)
        os << "e:" << e.src.vertex << "." << e.src.port << "->" << e.dst.vertex << "."
           << e.dst.port << "\n";
    auto legs = [&os](const char* tag, const std::vector<PortRef>& ps) {
        os << tag << ":";
        for (size_t i = 0; i < ps.size(); ++i) {
            if (i) os << ",";
            os << ps[i].vertex << "." << ps[i].port;
        }
        os << "\n";
    };
    legs("in", inputs_);
    legs("out", outputs_);
    return os.str();
}

namespace {

int parse_int(const std::string& s, size_t& pos) {
    size_t start = pos;
    if (pos < s.size() && s[pos] == '-') ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw input_error("graph parse: expected integer in '" + s + "'");
    return std::stoi(s.substr(start, pos - start));
}

PortRef parse_port(const std::string& s, size_t& pos) {
    PortRef p;
    p.vertex = parse_int(s, pos);
    if (pos >= s.size() || s[pos] != '.') throw input_error("graph parse: expected '.' in '" + s + "'");
    ++pos;
    p.port = parse_int(s, pos);
    return p;
}

} // namespace

DirectedGraph DirectedGraph::parse(const std::string& text) {
    DirectedGraph g;
    std::istringstream is(text);
    std::string line;
    int stage = 0; // 0 vertices, 1 edges, 2 in seen, 3 out seen
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == 'v' && line.size() > 1 && line[1] >= '0' && line[1] <= '9') {
            if (stage != 0) throw input_error("graph parse: vertex line out of order");
            size_t pos = 1;
            int idx = parse_int(line, pos);
            if (idx != g.n_vertices()) throw input_error("graph parse: bad vertex index");
            if (pos >= line.size() || line[pos] != ':')
                throw input_error("graph parse: missing ':' in vertex line");
            ++pos;
            size_t open = line.rfind('(');
            if (open == std::string::npos || open <= pos)
                throw input_error("graph parse: missing arity in vertex line");
            std::string dec = line.substr(pos, open - pos);
            size_t q = open + 1;
            int ia = parse_int(line, q);
            if (q >= line.size() || line[q] != ',') throw input_error("graph parse: bad arity");
            ++q;
            int oa = parse_int(line, q);
            if (q + 1 != line.size() || line[q] != ')')
                throw input_error("graph parse: bad arity terminator");
            g.add_vertex(dec, ia, oa);
        } else if (line.rfind("e:", 0) == 0) {
            if (stage > 1) throw input_error("graph parse: edge line out of order");
            stage = 1;
            size_t pos = 2;
            PortRef src = parse_port(line, pos);
            if (line.compare(pos, 2, "->") != 0) throw input_error("graph parse: bad edge arrow");
            pos += 2;
            PortRef dst = parse_port(line, pos);
            if (pos != line.size()) throw input_error("graph parse: trailing junk in edge");
            g.add_edge(src, dst);
        } else if (line.rfind("in:", 0) == 0 || line.rfind("out:", 0) == 0) {
            bool is_in = line[0] == 'i';
            if (is_in && stage >= 2) throw input_error("graph parse: duplicate in line");
            if (!is_in && stage != 2) throw input_error("graph parse: out line before in line");
            stage = is_in ? 2 : 3;
            size_t pos = is_in ? 3 : 4;
            std::vector<PortRef> ports;
            if (pos < line.size()) {
                while (true) {
                    ports.push_back(parse_port(line, pos));
                    if (pos == line.size()) break;
                    if (line[pos] != ',') throw input_error("graph parse: bad leg separator");
                    ++pos;
                }
            }
            if (is_in)
                g.set_inputs(std::move(ports));
            else
                g.set_outputs(std::move(ports));
        } else {
            throw input_error("graph parse: unrecognized line '" + line + "'");
        }
    }
    if (stage != 3) throw input_error("graph parse: missing in/out lines");
    g.validate();
    return g;
}

namespace {

// permutations of each decoration class, vertices pre-sorted by class
struct ClassPermIter {
    std::vector<std::vector<int>> groups; // original indices per class
    std::vector<int> starts;              // position offset per class
};

ClassPermIter make_class_groups(const std::vector<Vertex>& vs) {
    std::vector<int> idx(vs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vs[a] < vs[b]; });
    ClassPermIter out;
    int pos = 0;
    for (size_t i = 0; i < idx.size();) {
        size_t j = i;
        while (j < idx.size() && vs[idx[j]] == vs[idx[i]]) ++j;
        out.groups.emplace_back(idx.begin() + i, idx.begin() + j);
        out.starts.push_back(pos);
        pos += static_cast<int>(j - i);
        i = j;
    }
    return out;
}

} // namespace

std::vector<std::vector<int>> DirectedGraph::canonical_perms() const {
    ClassPermIter cp = make_class_groups(vertices_);
    long total = 1;
    for (auto& g : cp.groups) {
        long f = 1;
        for (size_t i = 2; i <= g.size(); ++i) f *= static_cast<long>(i);
        total *= f;
        if (total > 2000000) throw resource_error("graph: canonical form search too large");
    }
    std::string best;
    std::vector<std::vector<int>> best_perms;
    // odometer over per-class permutations
    std::vector<std::vector<int>> current;
    for (auto& g : cp.groups) {
        std::vector<int> base = g;
        std::sort(base.begin(), base.end());
        current.push_back(base);
    }
    std::vector<int> perm(n_vertices());
    while (true) {
        for (size_t c = 0; c < current.size(); ++c)
            for (size_t t = 0; t < current[c].size(); ++t)
                perm[current[c][t]] = cp.starts[c] + static_cast<int>(t);
        std::string s = relabeled(perm).serialize();
        if (best.empty() || s < best) {
            best = s;
            best_perms.clear();
            best_perms.push_back(perm);
        } else if (s == best) {
            best_perms.push_back(perm);
        }
        // advance odometer
        size_t c = 0;
        while (c < current.size() && !std::next_permutation(current[c].begin(), current[c].end()))
            ++c;
        if (c == current.size()) break;
    }
    return best_perms;
}

DirectedGraph DirectedGraph::canonical_form() const {
    return relabeled(canonical_perms().front());
}

std::string DirectedGraph::canonical_string() const {
    return canonical_form().serialize();
}

DirectedGraph graft(const GraftingPattern& p) {
    int total_up_out = 0;
    for (const auto& u : p.uppers) total_up_out += u.n_outputs();
    if (static_cast<int>(p.matching.size()) != total_up_out)
        throw input_error("graft: matching size must equal total upper outputs");
    if (total_up_out != p.lower.n_inputs())
        throw input_error("graft: upper outputs must equal lower inputs");
    std::vector<bool> hit(p.lower.n_inputs(), false);
    for (int t : p.matching) {
        if (t < 0 || t >= p.lower.n_inputs() || hit[t])
            throw input_error("graft: matching is not a bijection");
        hit[t] = true;
    }

    DirectedGraph g;
    std::vector<int> offset;
    for (const auto& u : p.uppers) {
        offset.push_back(g.n_vertices());
        for (const auto& v : u.vertices()) g.add_vertex(v.decoration, v.in_arity, v.out_arity);
    }
    int lower_off = g.n_vertices();
    for (const auto& v : p.lower.vertices()) g.add_vertex(v.decoration, v.in_arity, v.out_arity);

    std::vector<PortRef> new_inputs;
    for (size_t ui = 0; ui < p.uppers.size(); ++ui) {
        const auto& u = p.uppers[ui];
        auto shift = [&](PortRef q) { return PortRef{q.vertex + offset[ui], q.port}; };
        for (const auto& e : u.edges()) g.add_edge(shift(e.src), shift(e.dst));
        for (const auto& q : u.inputs()) new_inputs.push_back(shift(q));
    }
    auto shift_low = [&](PortRef q) { return PortRef{q.vertex + lower_off, q.port}; };
    for (const auto& e : p.lower.edges()) g.add_edge(shift_low(e.src), shift_low(e.dst));

    int t = 0;
    for (size_t ui = 0; ui < p.uppers.size(); ++ui) {
        for (const auto& q : p.uppers[ui].outputs()) {
            PortRef src{q.vertex + offset[ui], q.port};
            PortRef dst = shift_low(p.lower.inputs()[p.matching[t]]);
            g.add_edge(src, dst);
            ++t;
        }
    }

    g.set_inputs(new_inputs);
    std::vector<PortRef> new_outputs;
    for (const auto& q : p.lower.outputs()) new_outputs.push_back(shift_low(q));
    g.set_outputs(new_outputs);
    g.validate();
    return g;
}

namespace {

struct EnumState {
    const std::vector<Vertex>* types = nullptr;
    int j = 0, k = 0; // -1, -1: unconstrained leg counts
    std::set<std::string> found;
};

// all out-ports in lex order for the fixed vertex list
void enumerate_matchings(const std::vector<Vertex>& vs, int target_edges, EnumState& st) {
    std::vector<PortRef> out_ports, in_ports;
    for (int v = 0; v < static_cast<int>(vs.size()); ++v) {
        for (int p = 0; p < vs[v].out_arity; ++p) out_ports.push_back({v, p});
        for (int p = 0; p < vs[v].in_arity; ++p) in_ports.push_back({v, p});
    }
    std::vector<int> match(out_ports.size(), -1); // index into in_ports or -1
    std::vector<bool> in_taken(in_ports.size(), false);

    auto emit = [&]() {
        DirectedGraph g;
        for (const auto& v : vs) g.add_vertex(v.decoration, v.in_arity, v.out_arity);
        for (size_t o = 0; o < out_ports.size(); ++o)
            if (match[o] >= 0) g.add_edge(out_ports[o], in_ports[match[o]]);
        if (!g.is_acyclic() || !g.is_connected()) return;
        std::vector<PortRef> ins, outs;
        for (size_t i = 0; i < in_ports.size(); ++i)
            if (!in_taken[i]) ins.push_back(in_ports[i]);
        for (size_t o = 0; o < out_ports.size(); ++o)
            if (match[o] < 0) outs.push_back(out_ports[o]);
        g.set_inputs(ins);
        g.set_outputs(outs);
        g.validate();
        st.found.insert(g.canonical_string());
    };

    // choose which out-ports carry edges and where they go; a negative
    // target means any number of edges is acceptable
    auto rec = [&](auto&& self, size_t o, int edges_left) -> void {
        int remaining = static_cast<int>(out_ports.size() - o);
        if (edges_left > remaining) return;
        if (o == out_ports.size()) {
            if (edges_left <= 0) emit();
            return;
        }
        // leave as global output
        if (edges_left < 0 || remaining > edges_left) {
            self(self, o + 1, edges_left);
        }
        if (edges_left != 0) {
            for (size_t i = 0; i < in_ports.size(); ++i) {
                if (in_taken[i] || in_ports[i].vertex == out_ports[o].vertex) continue;
                in_taken[i] = true;
                match[o] = static_cast<int>(i);
                self(self, o + 1, edges_left < 0 ? edges_left : edges_left - 1);
                match[o] = -1;
                in_taken[i] = false;
            }
        }
    };
    rec(rec, 0, target_edges);
}

void enumerate_multisets(std::vector<Vertex>& vs, int next_type, int slots_left, EnumState& st) {
    if (slots_left == 0) {
        if (st.j < 0) {
            enumerate_matchings(vs, -1, st);
            return;
        }
        int n_in = 0, n_out = 0;
        for (const auto& v : vs) {
            n_in += v.in_arity;
            n_out += v.out_arity;
        }
        int e = n_in - st.j;
        if (e < 0 || n_out - e != st.k) return;
        if (e < static_cast<int>(vs.size()) - 1) return; // cannot be connected
        enumerate_matchings(vs, e, st);
        return;
    }
    for (int t = next_type; t < static_cast<int>(st.types->size()); ++t) {
        vs.push_back((*st.types)[t]);
        enumerate_multisets(vs, t, slots_left - 1, st);
        vs.pop_back();
    }
}

} // namespace

std::vector<DirectedGraph> enumerate_graphs_all(int max_vertices,
                                                const std::vector<Vertex>& types) {
    if (max_vertices < 1) throw input_error("enumerate: bad bounds");
    EnumState st;
    st.types = &types;
    st.j = st.k = -1;
    for (int n = 1; n <= max_vertices; ++n) {
        std::vector<Vertex> vs;
        enumerate_multisets(vs, 0, n, st);
    }
    std::vector<DirectedGraph> out;
    for (const auto& s : st.found) out.push_back(DirectedGraph::parse(s));
    return out;
}

std::vector<DirectedGraph> enumerate_graphs(int j, int k, int max_vertices,
                                            const std::vector<Vertex>& types,
                                            bool all_leg_orders) {
    if (j < 0 || k < 0 || max_vertices < 1) throw input_error("enumerate: bad bounds");
    EnumState st;
    st.types = &types;
    st.j = j;
    st.k = k;
    for (int n = 1; n <= max_vertices; ++n) {
        std::vector<Vertex> vs;
        enumerate_multisets(vs, 0, n, st);
    }
    std::set<std::string> final_set;
    if (!all_leg_orders) {
        final_set = std::move(st.found);
    } else {
        for (const auto& s : st.found) {
            DirectedGraph g = DirectedGraph::parse(s);
            std::vector<int> pi(g.n_inputs()), po(g.n_outputs());
            std::iota(pi.begin(), pi.end(), 0);
            do {
                std::iota(po.begin(), po.end(), 0);
                do {
                    DirectedGraph h = g;
                    std::vector<PortRef> ins, outs;
                    for (int t : pi) ins.push_back(g.inputs()[t]);
                    for (int t : po) outs.push_back(g.outputs()[t]);
                    h.set_inputs(ins);
                    h.set_outputs(outs);
                    final_set.insert(h.canonical_string());
                } while (std::next_permutation(po.begin(), po.end()));
            } while (std::next_permutation(pi.begin(), pi.end()));
        }
    }
    std::vector<DirectedGraph> out;
    for (const auto& s : final_set) out.push_back(DirectedGraph::parse(s));
    return out;
}

} // namespace propcalc
