#include "propcalc/barcobar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "propcalc/errors.hpp"

namespace propcalc {

namespace {

// Orientation bookkeeping. Every part and every vertex carries one odd
// marker; an element is stored against the reference word (part marker,
// then its vertex markers, part by part). Operations shuffle markers to
// the front, which costs the sign of the shuffle.
using Key = std::pair<int, int>; // (0, part id) or (1, vertex id)
using Word = std::vector<Key>;

int perm_sign_between(const Word& a, const Word& b) {
    std::map<Key, int> pos;
    for (int i = 0; i < (int)a.size(); ++i) pos[a[i]] = i;
    std::vector<int> p(b.size());
    for (int i = 0; i < (int)b.size(); ++i) p[i] = pos.at(b[i]);
    int inv = 0;
    for (int i = 0; i < (int)p.size(); ++i)
        for (int l = i + 1; l < (int)p.size(); ++l)
            if (p[i] > p[l]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

Word word_of(const NestedTerm& t) {
    Word w;
    for (int p = 0; p < t.parts; ++p) {
        w.push_back({0, p});
        for (int v = 0; v < (int)t.verts.size(); ++v)
            if (t.part_of[v] == p) w.push_back({1, v});
    }
    return w;
}

bool connected_on(int nverts, const std::vector<std::array<int, 2>>& edges,
                  const std::vector<int>& keep) {
    int start = -1, count = 0;
    for (int v = 0; v < nverts; ++v)
        if (keep[v]) {
            if (start < 0) start = v;
            ++count;
        }
    if (count == 0) return false;
    std::vector<int> seen(nverts, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& e : edges) {
            int o = -1;
            if (e[0] == v && keep[e[1]]) o = e[1];
            else if (e[1] == v && keep[e[0]]) o = e[0];
            if (o >= 0 && !seen[o]) {
                seen[o] = 1;
                ++reached;
                stack.push_back(o);
            }
        }
    }
    return reached == count;
}

bool acyclic(int nverts, const std::vector<std::array<int, 2>>& edges) {
    std::set<std::array<int, 2>> arcs(edges.begin(), edges.end());
    std::vector<int> indeg(nverts, 0);
    for (const auto& e : arcs) indeg[e[1]]++;
    std::vector<int> q;
    for (int v = 0; v < nverts; ++v)
        if (indeg[v] == 0) q.push_back(v);
    int done = 0;
    while (!q.empty()) {
        int v = q.back();
        q.pop_back();
        ++done;
        for (const auto& e : arcs)
            if (e[0] == v && --indeg[e[1]] == 0) q.push_back(e[1]);
    }
    return done == nverts;
}

int deco_degree(const BarVertex& v, int n) { return (v.k - 1 + v.g) * n; }

// Minimize the serialization over all relabelings (part order times
// vertex order inside each part); the sign carries the input word to
// the reference word of the winner. Two winning relabelings with
// opposite signs mean the class is its own negative.
CanonNested canonicalize(const NestedTerm& t, const Word& raw) {
    int nv = t.weight();
    std::vector<std::vector<int>> members(t.parts);
    for (int v = 0; v < nv; ++v) members[t.part_of[v]].push_back(v);
    std::vector<int> part_order(t.parts);
    std::iota(part_order.begin(), part_order.end(), 0);
    std::string best;
    NestedTerm best_term;
    std::set<int> best_signs;
    do {
        std::vector<std::vector<int>> vperm = members;
        while (true) {
            std::vector<int> new_of_vert(nv, -1);
            NestedTerm cand;
            cand.parts = t.parts;
            Word target;
            int cursor = 0;
            for (int np = 0; np < t.parts; ++np) {
                int op = part_order[np];
                target.push_back({0, op});
                for (int ov : vperm[op]) {
                    new_of_vert[ov] = cursor++;
                    cand.verts.push_back(t.verts[ov]);
                    cand.part_of.push_back(np);
                    target.push_back({1, ov});
                }
            }
            for (const auto& e : t.edges)
                cand.edges.push_back({new_of_vert[e[0]], new_of_vert[e[1]]});
            std::sort(cand.edges.begin(), cand.edges.end());
            for (int v : t.in_legs) cand.in_legs.push_back(new_of_vert[v]);
            for (int v : t.out_legs) cand.out_legs.push_back(new_of_vert[v]);
            std::string ser = cand.serialize();
            int sgn = perm_sign_between(raw, target);
            if (best.empty() || ser < best) {
                best = ser;
                best_term = cand;
                best_signs = {sgn};
            } else if (ser == best) {
                best_signs.insert(sgn);
            }
            int p = t.parts - 1;
            for (; p >= 0; --p)
                if (std::next_permutation(vperm[p].begin(), vperm[p].end()))
                    break;
            if (p < 0) break;
        }
    } while (std::next_permutation(part_order.begin(), part_order.end()));
    if (best_signs.size() > 1) return {best_term, 0};
    return {best_term, *best_signs.begin()};
}

void add_term(CobarElement& out, const NestedTerm& t, const Word& w,
              const Rational& coeff) {
    if (coeff == Rational(0)) return;
    CanonNested c = canonicalize(t, w);
    if (c.sign == 0) return;
    Rational val = coeff * Rational(c.sign);
    std::string key = c.term.serialize();
    auto it = out.terms.find(key);
    if (it == out.terms.end()) {
        out.terms.emplace(key, std::make_pair(c.term, val));
    } else {
        it->second.second = it->second.second + val;
        if (it->second.second == Rational(0)) out.terms.erase(it);
    }
}

} // namespace

int BarGraph::degree(int n) const {
    int d = 0;
    for (const auto& v : verts) d += deco_degree(v, n);
    return d - weight();
}

void BarGraph::validate() const { single_part(*this).validate(); }

std::string BarGraph::serialize() const { return single_part(*this).serialize(); }

int NestedTerm::degree(int n) const {
    int d = 0;
    for (const auto& v : verts) d += deco_degree(v, n);
    return d - weight() + parts;
}

int NestedTerm::total_genus() const {
    int g = 0;
    for (const auto& v : verts) g += v.g;
    return g + (int)edges.size() - weight() + 1;
}

void NestedTerm::validate() const {
    int nv = weight();
    if (nv == 0) throw input_error("empty graph");
    if ((int)part_of.size() != nv) throw input_error("part table size mismatch");
    if (parts < 1) throw input_error("no parts");
    std::vector<int> used(parts, 0);
    for (int p : part_of) {
        if (p < 0 || p >= parts) throw input_error("part id out of range");
        used[p] = 1;
    }
    for (int u : used)
        if (!u) throw input_error("empty part");
    std::vector<int> indeg(nv, 0), outdeg(nv, 0), inleg(nv, 0), outleg(nv, 0);
    for (const auto& e : edges) {
        if (e[0] < 0 || e[0] >= nv || e[1] < 0 || e[1] >= nv)
            throw input_error("edge endpoint out of range");
        if (e[0] == e[1]) throw input_error("self loop");
        outdeg[e[0]]++;
        indeg[e[1]]++;
    }
    for (int v : in_legs) {
        if (v < 0 || v >= nv) throw input_error("input leg out of range");
        inleg[v]++;
    }
    for (int v : out_legs) {
        if (v < 0 || v >= nv) throw input_error("output leg out of range");
        outleg[v]++;
    }
    for (int v = 0; v < nv; ++v) {
        const auto& d = verts[v];
        if (d.j < 1 || d.k < 1 || d.g < 0) throw input_error("invalid decoration");
        if (indeg[v] + inleg[v] != d.j) throw input_error("input port count mismatch");
        if (outdeg[v] + outleg[v] != d.k) throw input_error("output port count mismatch");
    }
    std::vector<int> all(nv, 1);
    if (!connected_on(nv, edges, all)) throw input_error("graph not connected");
    if (!acyclic(nv, edges)) throw input_error("directed cycle");
    for (int p = 0; p < parts; ++p) {
        std::vector<int> keep(nv, 0);
        for (int v = 0; v < nv; ++v) keep[v] = part_of[v] == p ? 1 : 0;
        std::vector<std::array<int, 2>> inner;
        for (const auto& e : edges)
            if (part_of[e[0]] == p && part_of[e[1]] == p) inner.push_back(e);
        if (!connected_on(nv, inner, keep)) throw input_error("part not connected");
    }
    std::vector<std::array<int, 2>> outer;
    for (const auto& e : edges)
        if (part_of[e[0]] != part_of[e[1]])
            outer.push_back({part_of[e[0]], part_of[e[1]]});
    if (!acyclic(parts, outer)) throw input_error("outer pattern has a cycle");
}

std::string NestedTerm::serialize() const {
    std::string s = "m" + std::to_string(parts) + ";p";
    for (int p : part_of) s += std::to_string(p) + ",";
    s += ";d";
    for (const auto& v : verts)
        s += std::to_string(v.j) + "." + std::to_string(v.k) + "." +
             std::to_string(v.g) + ",";
    s += ";e";
    auto es = edges;
    std::sort(es.begin(), es.end());
    for (const auto& e : es)
        s += std::to_string(e[0]) + ">" + std::to_string(e[1]) + ",";
    s += ";i";
    for (int v : in_legs) s += std::to_string(v) + ",";
    s += ";o";
    for (int v : out_legs) s += std::to_string(v) + ",";
    return s;
}

CanonNested canonical_nested(const NestedTerm& t) {
    return canonicalize(t, word_of(t));
}

SignedBar canonical_bar(const BarGraph& g) {
    CanonNested c = canonical_nested(single_part(g));
    return {as_bar(c.term), c.sign};
}

NestedTerm single_part(const BarGraph& g) {
    NestedTerm t;
    t.verts = g.verts;
    t.part_of.assign(g.verts.size(), 0);
    t.parts = 1;
    t.edges = g.edges;
    t.in_legs = g.in_legs;
    t.out_legs = g.out_legs;
    return t;
}

BarGraph as_bar(const NestedTerm& t) {
    if (t.parts != 1) throw input_error("not a one-part term");
    BarGraph g;
    g.verts = t.verts;
    g.edges = t.edges;
    g.in_legs = t.in_legs;
    g.out_legs = t.out_legs;
    return g;
}

void CobarElement::add(const NestedTerm& t, const Rational& coeff) {
    add_term(*this, t, word_of(t), coeff);
}

CobarElement CobarElement::scaled(const Rational& c) const {
    CobarElement out;
    if (c == Rational(0)) return out;
    for (const auto& [key, tc] : terms)
        out.terms.emplace(key, std::make_pair(tc.first, tc.second * c));
    return out;
}

bool operator==(const CobarElement& a, const CobarElement& b) {
    if (a.terms.size() != b.terms.size()) return false;
    auto it = a.terms.begin();
    auto jt = b.terms.begin();
    for (; it != a.terms.end(); ++it, ++jt) {
        if (it->first != jt->first) return false;
        if (!(it->second.second == jt->second.second)) return false;
    }
    return true;
}

CobarElement bar_part(const NestedTerm& t, const Rational& coeff) {
    CobarElement out;
    Word w = word_of(t);
    int nv = t.weight();
    std::set<std::array<int, 2>> pairs;
    for (const auto& e : t.edges)
        if (t.part_of[e[0]] == t.part_of[e[1]]) pairs.insert(e);
    for (const auto& pr : pairs) {
        int u = pr[0], v = pr[1], p = t.part_of[u];
        // composing along the bundle must not close a directed loop
        std::vector<int> stack{u}, seen(nv, 0);
        seen[u] = 1;
        bool alt = false;
        while (!stack.empty() && !alt) {
            int x = stack.back();
            stack.pop_back();
            for (const auto& e : t.edges) {
                if (e[0] != x || t.part_of[e[1]] != p) continue;
                if (x == u && e[1] == v) continue;
                if (e[1] == v) {
                    alt = true;
                    break;
                }
                if (!seen[e[1]]) {
                    seen[e[1]] = 1;
                    stack.push_back(e[1]);
                }
            }
        }
        if (alt) continue;
        int r = (int)std::count(t.edges.begin(), t.edges.end(), pr);
        NestedTerm s;
        s.parts = t.parts;
        std::vector<int> newid(nv, -1);
        int cursor = 0;
        for (int x = 0; x < nv; ++x) {
            if (x == v) continue;
            newid[x] = cursor++;
            s.verts.push_back(t.verts[x]);
            s.part_of.push_back(t.part_of[x]);
        }
        int z = newid[u];
        const BarVertex& du = t.verts[u];
        const BarVertex& dv = t.verts[v];
        s.verts[z] = {du.j + dv.j - r, du.k + dv.k - r, du.g + dv.g + r - 1};
        for (const auto& e : t.edges) {
            if (e[0] == u && e[1] == v) continue;
            int a = e[0] == v ? u : e[0];
            int b = e[1] == v ? u : e[1];
            s.edges.push_back({newid[a], newid[b]});
        }
        std::sort(s.edges.begin(), s.edges.end());
        for (int x : t.in_legs) s.in_legs.push_back(newid[x == v ? u : x]);
        for (int x : t.out_legs) s.out_legs.push_back(newid[x == v ? u : x]);
        // tail marker to the front, head marker behind it, then fuse
        Word moved{{1, u}, {1, v}};
        for (const auto& kk : w)
            if (!(kk == Key{1, u}) && !(kk == Key{1, v})) moved.push_back(kk);
        int sgn = perm_sign_between(w, moved);
        Word raw{{1, z}};
        for (size_t i = 2; i < moved.size(); ++i) {
            Key kk = moved[i];
            if (kk.first == 1) kk.second = newid[kk.second];
            raw.push_back(kk);
        }
        add_term(out, s, raw, coeff * Rational(sgn));
    }
    return out;
}

CobarElement cobar_part(const NestedTerm& t, const Rational& coeff) {
    CobarElement out;
    Word w = word_of(t);
    int nv = t.weight();
    for (int p = 0; p < t.parts; ++p) {
        std::vector<int> mem;
        for (int v = 0; v < nv; ++v)
            if (t.part_of[v] == p) mem.push_back(v);
        int m = (int)mem.size();
        if (m < 2) continue;
        std::vector<std::array<int, 2>> inner;
        for (const auto& e : t.edges)
            if (t.part_of[e[0]] == p && t.part_of[e[1]] == p) inner.push_back(e);
        for (int mask = 1; mask < (1 << m) - 1; ++mask) {
            std::vector<int> color(nv, 0);
            for (int i = 0; i < m; ++i) color[mem[i]] = (mask >> i & 1) ? 1 : 2;
            bool ok = true;
            for (const auto& e : inner)
                if (color[e[0]] == 2 && color[e[1]] == 1) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            std::vector<int> keep1(nv, 0), keep2(nv, 0);
            for (int v : mem) (color[v] == 1 ? keep1 : keep2)[v] = 1;
            std::vector<std::array<int, 2>> e1, e2;
            for (const auto& e : inner) {
                if (color[e[0]] == 1 && color[e[1]] == 1) e1.push_back(e);
                if (color[e[0]] == 2 && color[e[1]] == 2) e2.push_back(e);
            }
            if (!connected_on(nv, e1, keep1) || !connected_on(nv, e2, keep2))
                continue;
            NestedTerm s = t;
            s.parts = t.parts + 1;
            for (int v : mem)
                if (color[v] == 2) s.part_of[v] = t.parts;
            Word moved{{0, p}};
            for (const auto& kk : w)
                if (!(kk == Key{0, p})) moved.push_back(kk);
            int sgn = perm_sign_between(w, moved);
            Word raw{{0, p}, {0, t.parts}};
            for (size_t i = 1; i < moved.size(); ++i) raw.push_back(moved[i]);
            // global -1 on every splitting term: with it, images of
            // composites cancel images of contractions for a morphism
            // into a target properad (the two-vertex product pattern
            // maps to -m(m ox id) + m(m ox id) = 0 instead of -2 of it)
            add_term(out, s, raw, coeff * Rational(-sgn));
        }
    }
    return out;
}

CobarElement total_differential(const CobarElement& x) {
    CobarElement out;
    for (const auto& [key, tc] : x.terms) {
        CobarElement a = bar_part(tc.first, tc.second);
        for (const auto& [k2, t2] : a.terms) add_term(out, t2.first, word_of(t2.first), t2.second);
        CobarElement b = cobar_part(tc.first, tc.second);
        for (const auto& [k2, t2] : b.terms) add_term(out, t2.first, word_of(t2.first), t2.second);
    }
    return out;
}

std::vector<std::pair<BarGraph, Rational>> bar_differential(const BarGraph& g) {
    CobarElement e = bar_part(single_part(g), Rational(1));
    std::vector<std::pair<BarGraph, Rational>> out;
    for (const auto& [key, tc] : e.terms)
        out.emplace_back(as_bar(tc.first), tc.second);
    return out;
}

namespace {

bool is_perm(const std::vector<int>& p, int m) {
    if ((int)p.size() != m) return false;
    std::vector<int> seen(m, 0);
    for (int v : p) {
        if (v < 0 || v >= m || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

} // namespace

SignedBar leg_act(const BarGraph& g, const std::vector<int>& sigma_out,
                  const std::vector<int>& tau_in) {
    if (!is_perm(sigma_out, (int)g.out_legs.size()))
        throw input_error("bad output relabeling");
    if (!is_perm(tau_in, (int)g.in_legs.size()))
        throw input_error("bad input relabeling");
    BarGraph h = g;
    for (int i = 0; i < (int)g.out_legs.size(); ++i)
        h.out_legs[i] = g.out_legs[sigma_out[i]];
    for (int i = 0; i < (int)g.in_legs.size(); ++i)
        h.in_legs[i] = g.in_legs[tau_in[i]];
    return canonical_bar(h);
}

OrbitRep leg_orbit_rep(const BarGraph& g) {
    int j = (int)g.in_legs.size(), k = (int)g.out_legs.size();
    std::vector<int> sigma(k), tau(j);
    std::iota(sigma.begin(), sigma.end(), 0);
    OrbitRep best;
    std::string best_ser;
    do {
        std::iota(tau.begin(), tau.end(), 0);
        do {
            SignedBar sb = leg_act(g, sigma, tau);
            std::string ser = sb.graph.serialize();
            if (best_ser.empty() || ser < best_ser) {
                best_ser = ser;
                best = {sb.graph, sigma, tau, sb.sign};
            }
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

std::vector<NestedTerm> enumerate_cobar_basis(int j, int k, int max_weight,
                                              int max_genus) {
    if (j < 1 || k < 1) throw input_error("boundary arity must be positive");
    if (max_weight < 1 || max_genus < 0)
        throw input_error("bad enumeration bounds");
    std::map<std::string, NestedTerm> seen;
    for (int w = 1; w <= max_weight; ++w) {
        std::vector<std::array<int, 2>> arcs;
        for (int a = 0; a < w; ++a)
            for (int b = 0; b < w; ++b)
                if (a != b) arcs.push_back({a, b});
        int emax = max_genus + w - 1;
        std::vector<int> mult(arcs.size(), 0);
        std::function<void(int, int)> rec = [&](int idx, int used) {
            if (idx < (int)arcs.size()) {
                for (int c = 0; used + c <= emax; ++c) {
                    mult[idx] = c;
                    rec(idx + 1, used + c);
                }
                mult[idx] = 0;
                return;
            }
            std::vector<std::array<int, 2>> edges;
            for (size_t a = 0; a < arcs.size(); ++a)
                for (int c = 0; c < mult[a]; ++c) edges.push_back(arcs[a]);
            std::vector<int> all(w, 1);
            if (!connected_on(w, edges, all)) return;
            if (!acyclic(w, edges)) return;
            int loops = (int)edges.size() - w + 1;
            int gbudget = max_genus - loops;
            if (gbudget < 0) return;
            std::vector<int> indeg(w, 0), outdeg(w, 0);
            for (const auto& e : edges) {
                outdeg[e[0]]++;
                indeg[e[1]]++;
            }
            // all placements of the labeled boundary legs
            std::vector<int> fin(j, 0), fout(k, 0);
            auto next_fn = [w](std::vector<int>& f) {
                for (int i = (int)f.size() - 1; i >= 0; --i) {
                    if (++f[i] < w) return true;
                    f[i] = 0;
                }
                return false;
            };
            do {
                std::fill(fout.begin(), fout.end(), 0);
                do {
                    std::vector<int> inleg(w, 0), outleg(w, 0);
                    for (int v : fin) inleg[v]++;
                    for (int v : fout) outleg[v]++;
                    bool arity_ok = true;
                    for (int v = 0; v < w; ++v)
                        if (indeg[v] + inleg[v] < 1 || outdeg[v] + outleg[v] < 1)
                            arity_ok = false;
                    if (!arity_ok) continue;
                    // distribute the genus budget over the vertices
                    std::vector<int> gv(w, 0);
                    std::function<void(int, int)> grec = [&](int idx, int left) {
                        if (idx == w) {
                            // set partitions by restricted growth strings
                            std::vector<int> rgs(w, 0);
                            std::function<void(int, int)> prec = [&](int pos,
                                                                    int mx) {
                                if (pos == w) {
                                    int parts = mx + 1;
                                    NestedTerm t;
                                    t.parts = parts;
                                    t.part_of = rgs;
                                    for (int v = 0; v < w; ++v)
                                        t.verts.push_back(
                                            {indeg[v] + inleg[v],
                                             outdeg[v] + outleg[v], gv[v]});
                                    t.edges = edges;
                                    std::sort(t.edges.begin(), t.edges.end());
                                    t.in_legs = fin;
                                    t.out_legs = fout;
                                    // part connectivity and outer acyclicity
                                    for (int p = 0; p < parts; ++p) {
                                        std::vector<int> keep(w, 0);
                                        for (int v = 0; v < w; ++v)
                                            keep[v] = rgs[v] == p ? 1 : 0;
                                        std::vector<std::array<int, 2>> inner;
                                        for (const auto& e : t.edges)
                                            if (rgs[e[0]] == p && rgs[e[1]] == p)
                                                inner.push_back(e);
                                        if (!connected_on(w, inner, keep))
                                            return;
                                    }
                                    std::vector<std::array<int, 2>> outer;
                                    for (const auto& e : t.edges)
                                        if (rgs[e[0]] != rgs[e[1]])
                                            outer.push_back(
                                                {rgs[e[0]], rgs[e[1]]});
                                    if (!acyclic(parts, outer)) return;
                                    CanonNested c = canonical_nested(t);
                                    if (c.sign == 0) return;
                                    seen.emplace(c.term.serialize(), c.term);
                                    return;
                                }
                                for (int a = 0; a <= mx + 1; ++a) {
                                    rgs[pos] = a;
                                    prec(pos + 1, std::max(mx, a));
                                }
                            };
                            prec(1, 0);
                            return;
                        }
                        for (int a = 0; a <= left; ++a) {
                            gv[idx] = a;
                            grec(idx + 1, left - a);
                        }
                    };
                    grec(0, gbudget);
                } while (next_fn(fout));
            } while (next_fn(fin));
        };
        rec(0, 0);
    }
    std::vector<NestedTerm> out;
    for (const auto& [key, t] : seen) out.push_back(t);
    return out;
}

std::vector<BarGraph> enumerate_bar_graphs(int j, int k, int max_weight,
                                           int max_genus) {
    std::vector<BarGraph> out;
    for (const auto& t : enumerate_cobar_basis(j, k, max_weight, max_genus))
        if (t.parts == 1) out.push_back(as_bar(t));
    return out;
}

TruncatedComplex truncated_complex(int j, int k, int max_weight, int max_genus,
                                   int n) {
    if (n % 2 != 0)
        throw input_error("graph differential needs an even degree parameter");
    TruncatedComplex tc;
    tc.basis = enumerate_cobar_basis(j, k, max_weight, max_genus);
    std::map<std::string, int> index;
    for (int i = 0; i < (int)tc.basis.size(); ++i)
        index[tc.basis[i].serialize()] = i;
    bool first = true;
    for (int i = 0; i < (int)tc.basis.size(); ++i) {
        int d = tc.basis[i].degree(n);
        tc.degrees.push_back(d);
        if (first || d < tc.deg_lo) tc.deg_lo = d;
        if (first || d > tc.deg_hi) tc.deg_hi = d;
        first = false;
    }
    for (int src = 0; src < (int)tc.basis.size(); ++src) {
        CobarElement x;
        x.add(tc.basis[src], Rational(1));
        CobarElement dx = total_differential(x);
        for (const auto& [key, tcoeff] : dx.terms) {
            auto it = index.find(key);
            if (it == index.end())
                throw math_error("differential escaped the truncation");
            tc.dmat[{it->second, src}] = tcoeff.second;
        }
    }
    return tc;
}

} // namespace propcalc
