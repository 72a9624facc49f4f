#include "propcalc/endmap.hpp"

#include <algorithm>

namespace propcalc {

TensorIndexer::TensorIndexer(int dim, int power) : dim_(dim), power_(power) {
    if (dim < 1 || power < 0) throw input_error("tensor indexer: bad shape");
    size_ = 1;
    for (int i = 0; i < power; ++i) {
        size_ *= dim_;
        if (size_ > 100000000L) throw resource_error("tensor indexer: power too large");
    }
}

std::vector<int> TensorIndexer::tuple(long idx) const {
    if (idx < 0 || idx >= size_) throw input_error("tensor indexer: index out of range");
    std::vector<int> t(power_);
    for (int i = power_ - 1; i >= 0; --i) {
        t[i] = static_cast<int>(idx % dim_);
        idx /= dim_;
    }
    return t;
}

long TensorIndexer::index(const std::vector<int>& t) const {
    if (static_cast<int>(t.size()) != power_) throw input_error("tensor indexer: bad tuple");
    long idx = 0;
    for (int x : t) {
        if (x < 0 || x >= dim_) throw input_error("tensor indexer: entry out of range");
        idx = idx * dim_ + x;
    }
    return idx;
}

MultiMap::MultiMap(GradedSpace space, int j, int k, int degree)
    : space_(std::move(space)), j_(j), k_(k), degree_(degree) {
    if (j < 0 || k < 0) throw input_error("multimap: negative arity");
    if (space_.dim() == 0) throw input_error("multimap: empty space");
}

int MultiMap::tuple_degree(const std::vector<int>& t) const {
    int d = 0;
    for (int x : t) d += space_.degree(x);
    return d;
}

std::vector<int> MultiMap::in_tuple(long idx) const {
    return TensorIndexer(space_.dim(), j_).tuple(idx);
}
std::vector<int> MultiMap::out_tuple(long idx) const {
    return TensorIndexer(space_.dim(), k_).tuple(idx);
}
long MultiMap::in_size() const { return TensorIndexer(space_.dim(), j_).size(); }
long MultiMap::out_size() const { return TensorIndexer(space_.dim(), k_).size(); }

void MultiMap::set_entry(long out_idx, long in_idx, const Rational& v) {
    if (tuple_degree(out_tuple(out_idx)) != tuple_degree(in_tuple(in_idx)) + degree_)
        throw input_error("multimap: entry violates degree homogeneity");
    if (v.is_zero())
        entries_.erase({out_idx, in_idx});
    else
        entries_[{out_idx, in_idx}] = v;
}

void MultiMap::add_entry(long out_idx, long in_idx, const Rational& v) {
    set_entry(out_idx, in_idx, entry(out_idx, in_idx) + v);
}

Rational MultiMap::entry(long out_idx, long in_idx) const {
    auto it = entries_.find({out_idx, in_idx});
    return it == entries_.end() ? Rational(0) : it->second;
}

MultiMap MultiMap::scaled(const Rational& c) const {
    MultiMap out(space_, j_, k_, degree_);
    if (c.is_zero()) return out;
    for (const auto& [key, v] : entries_) out.entries_[key] = v * c;
    return out;
}

MultiMap MultiMap::identity(const GradedSpace& space, int arity) {
    MultiMap out(space, arity, arity, 0);
    TensorIndexer ix(space.dim(), arity);
    for (long t = 0; t < ix.size(); ++t) out.entries_[{t, t}] = Rational(1);
    return out;
}

MultiMap operator+(const MultiMap& a, const MultiMap& b) {
    if (!(a.space_ == b.space_) || a.j_ != b.j_ || a.k_ != b.k_ || a.degree_ != b.degree_)
        throw input_error("multimap: sum shape mismatch");
    MultiMap out = a;
    for (const auto& [key, v] : b.entries_) out.add_entry(key.first, key.second, v);
    return out;
}

MultiMap operator-(const MultiMap& a, const MultiMap& b) {
    return a + b.scaled(Rational(-1));
}

MultiMap tensor_of(const std::vector<MultiMap>& fs) {
    if (fs.empty()) throw input_error("tensor: no factors");
    MultiMap acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) {
        const MultiMap& f = acc;
        const MultiMap& g = fs[i];
        if (!(f.space() == g.space())) throw input_error("tensor: space mismatch");
        MultiMap out(f.space(), f.j() + g.j(), f.k() + g.k(), f.degree() + g.degree());
        TensorIndexer in_ix(out.space().dim(), out.j());
        TensorIndexer out_ix(out.space().dim(), out.k());
        for (const auto& [kf, vf] : f.entries()) {
            std::vector<int> fin = f.in_tuple(kf.second);
            std::vector<int> fout = f.out_tuple(kf.first);
            int sgn = koszul_sign(g.degree() * f.tuple_degree(fin));
            for (const auto& [kg, vg] : g.entries()) {
                std::vector<int> gin = g.in_tuple(kg.second);
                std::vector<int> gout = g.out_tuple(kg.first);
                std::vector<int> in = fin, outt = fout;
                in.insert(in.end(), gin.begin(), gin.end());
                outt.insert(outt.end(), gout.begin(), gout.end());
                out.add_entry(out_ix.index(outt), in_ix.index(in), vf * vg * Rational(sgn));
            }
        }
        acc = std::move(out);
    }
    return acc;
}

MultiMap compose_maps(const MultiMap& outer, const MultiMap& inner) {
    if (!(outer.space() == inner.space())) throw input_error("compose: space mismatch");
    if (outer.j() != inner.k()) throw input_error("compose: arity mismatch");
    MultiMap out(outer.space(), inner.j(), outer.k(), outer.degree() + inner.degree());
    // group inner entries by output index for the middle sum
    std::map<long, std::vector<std::pair<long, Rational>>> by_mid;
    for (const auto& [key, v] : inner.entries()) by_mid[key.first].push_back({key.second, v});
    for (const auto& [key, vo] : outer.entries()) {
        auto it = by_mid.find(key.second);
        if (it == by_mid.end()) continue;
        for (const auto& [in_idx, vi] : it->second) out.add_entry(key.first, in_idx, vo * vi);
    }
    return out;
}

MultiMap perm_operator(const GradedSpace& space, const std::vector<int>& perm) {
    int m = static_cast<int>(perm.size());
    std::vector<bool> seen(m, false);
    for (int p : perm) {
        if (p < 0 || p >= m || seen[p]) throw input_error("perm operator: not a permutation");
        seen[p] = true;
    }
    MultiMap out(space, m, m, 0);
    TensorIndexer ix(space.dim(), m);
    for (long t = 0; t < ix.size(); ++t) {
        std::vector<int> in = ix.tuple(t);
        std::vector<int> outt(m);
        std::vector<int> degs(m);
        for (int i = 0; i < m; ++i) {
            outt[perm[i]] = in[i];
            degs[i] = space.degree(in[i]);
        }
        out.add_entry(ix.index(outt), t, Rational(graded_perm_sign(degs, perm)));
    }
    return out;
}

MultiMap end_compose(const std::vector<MultiMap>& uppers, const MultiMap& lower) {
    return compose_maps(lower, tensor_of(uppers));
}

MultiMap evaluate_graph(const DirectedGraph& g, const std::map<std::string, MultiMap>& images) {
    g.validate();
    if (images.empty()) throw input_error("evaluate: no images");
    const GradedSpace& space = images.begin()->second.space();

    auto image_of = [&](const std::string& dec) -> const MultiMap& {
        auto it = images.find(dec);
        if (it == images.end()) throw input_error("evaluate: no image for '" + dec + "'");
        if (!(it->second.space() == space)) throw input_error("evaluate: image space mismatch");
        return it->second;
    };

    // source lookup for in-ports
    std::map<PortRef, PortRef> edge_src;  // in-port -> out-port
    std::map<PortRef, int> slot_of_in;    // in-port -> global input slot
    for (const auto& e : g.edges()) edge_src[e.dst] = e.src;
    for (int s = 0; s < g.n_inputs(); ++s) slot_of_in[g.inputs()[s]] = s;

    // frontier wires are out-ports of already-processed vertices or global
    // input pass-through markers (slot id encoded as vertex -1)
    std::vector<PortRef> frontier;
    std::vector<int> consumed_slots; // global slots in consumption order
    MultiMap state(space, 0, 0, 0);
    state.set_entry(0, 0, Rational(1));

    for (int v : g.topo_order()) {
        const Vertex& vx = g.vertices()[v];
        const MultiMap& mv = image_of(vx.decoration);
        if (mv.j() != vx.in_arity || mv.k() != vx.out_arity)
            throw input_error("evaluate: image arity mismatch for '" + vx.decoration + "'");

        // wires feeding this vertex, in port order
        std::vector<PortRef> feeds;
        for (int p = 0; p < vx.in_arity; ++p) {
            PortRef ip{v, p};
            auto eit = edge_src.find(ip);
            if (eit != edge_src.end()) {
                feeds.push_back(eit->second);
            } else {
                int slot = slot_of_in.at(ip);
                // append the fresh global input as an identity factor
                state = tensor_of({state, MultiMap::identity(space, 1)});
                frontier.push_back(PortRef{-1, slot});
                consumed_slots.push_back(slot);
                feeds.push_back(PortRef{-1, slot});
            }
        }

        // route the feeding wires to the tail of the frontier, in order
        int m = static_cast<int>(frontier.size());
        std::vector<int> is_feed(m, -1);
        for (size_t t = 0; t < feeds.size(); ++t) {
            auto it = std::find(frontier.begin(), frontier.end(), feeds[t]);
            if (it == frontier.end()) throw input_error("evaluate: wire not on frontier");
            is_feed[it - frontier.begin()] = static_cast<int>(t);
        }
        int rest = m - static_cast<int>(feeds.size());
        std::vector<int> perm(m);
        int nr = 0;
        for (int i = 0; i < m; ++i)
            if (is_feed[i] < 0) perm[i] = nr++;
        for (int i = 0; i < m; ++i)
            if (is_feed[i] >= 0) perm[i] = rest + is_feed[i];
        std::vector<PortRef> new_frontier(m);
        for (int i = 0; i < m; ++i) new_frontier[perm[i]] = frontier[i];
        state = compose_maps(perm_operator(space, perm), state);

        // apply the vertex map to the tail
        std::vector<MultiMap> parts;
        parts.push_back(MultiMap::identity(space, rest));
        parts.push_back(mv);
        state = compose_maps(tensor_of(parts), state);
        frontier.assign(new_frontier.begin(), new_frontier.begin() + rest);
        for (int p = 0; p < vx.out_arity; ++p) frontier.push_back({v, p});
    }

    // route frontier to global output order
    if (frontier.size() != g.outputs().size())
        throw input_error("evaluate: frontier does not match outputs");
    std::vector<int> out_perm(frontier.size());
    for (size_t i = 0; i < frontier.size(); ++i) {
        auto it = std::find(g.outputs().begin(), g.outputs().end(), frontier[i]);
        if (it == g.outputs().end()) throw input_error("evaluate: stray frontier wire");
        out_perm[i] = static_cast<int>(it - g.outputs().begin());
    }
    state = compose_maps(perm_operator(space, out_perm), state);

    // align the input side with global slot order: precompose with the
    // operator sending the standard order to consumption order
    std::vector<int> in_perm(consumed_slots.size());
    for (size_t t = 0; t < consumed_slots.size(); ++t) in_perm[consumed_slots[t]] = static_cast<int>(t);
    state = compose_maps(state, perm_operator(space, in_perm));
    return state;
}

MultiMap end_differential(const MultiMap& f, const MultiMap& dV) {
    if (!(dV.space() == f.space()) || dV.j() != 1 || dV.k() != 1)
        throw input_error("end differential: dV must be a (1,1) operator");
    auto power_diff = [&](int m) {
        MultiMap acc(f.space(), m, m, dV.degree());
        for (int i = 0; i < m; ++i) {
            std::vector<MultiMap> parts;
            if (i > 0) parts.push_back(MultiMap::identity(f.space(), i));
            parts.push_back(dV);
            if (m - 1 - i > 0) parts.push_back(MultiMap::identity(f.space(), m - 1 - i));
            acc = acc + tensor_of(parts);
        }
        return acc;
    };
    MultiMap left = compose_maps(power_diff(f.k()), f);
    MultiMap right = compose_maps(f, power_diff(f.j()));
    return left - right.scaled(Rational(koszul_sign(f.degree())));
}

MultiMap sym_act(const std::vector<int>& sigma_out, const MultiMap& f,
                 const std::vector<int>& tau_in) {
    if (static_cast<int>(sigma_out.size()) != f.k() ||
        static_cast<int>(tau_in.size()) != f.j())
        throw input_error("sym act: permutation size mismatch");
    MultiMap out = f;
    if (f.k() > 0) out = compose_maps(perm_operator(f.space(), sigma_out), out);
    if (f.j() > 0) out = compose_maps(out, perm_operator(f.space(), tau_in));
    return out;
}

} // namespace propcalc
