#include "propcalc/dilie.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "propcalc/errors.hpp"
#include "propcalc/frob.hpp"
#include "propcalc/linalg.hpp"

namespace propcalc {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

int parse_int(const std::string& s) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw input_error("lie data: bad integer '" + s + "'");
        return v;
    } catch (const input_error&) {
        throw;
    } catch (const std::exception&) {
        throw input_error("lie data: bad integer '" + s + "'");
    }
}

} // namespace

LieAlgebraData parse_lie(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = split_ws(line);
        if (!toks.empty()) rows.push_back(toks);
    }

    LieAlgebraData l;
    bool saw_dim = false;
    for (const auto& t : rows) {
        if (t[0] == "dim") {
            if (t.size() != 2 || saw_dim) throw input_error("lie data: bad dim line");
            l.dim = parse_int(t[1]);
            if (l.dim <= 0) throw input_error("lie data: dim must be positive");
            saw_dim = true;
        } else if (t[0] == "basis") {
            if (t.size() != 2) throw input_error("lie data: bad basis line");
            if (std::find(l.names.begin(), l.names.end(), t[1]) != l.names.end())
                throw input_error("lie data: duplicate basis name " + t[1]);
            l.names.push_back(t[1]);
        }
    }
    if (!saw_dim) throw input_error("lie data: missing dim");
    if ((int)l.names.size() != l.dim)
        throw input_error("lie data: basis count does not match dim");

    auto idx = [&](const std::string& name) {
        auto it = std::find(l.names.begin(), l.names.end(), name);
        if (it == l.names.end()) throw input_error("lie data: unknown basis name " + name);
        return (int)(it - l.names.begin());
    };

    l.c.assign(l.dim, std::vector<std::vector<Rational>>(
                          l.dim, std::vector<Rational>(l.dim)));
    for (const auto& t : rows) {
        if (t[0] == "dim" || t[0] == "basis") continue;
        if (t[0] == "bracket") {
            // one orientation per line; the reverse is implied
            if (t.size() != 5) throw input_error("lie data: bad bracket line");
            int a = idx(t[1]), b = idx(t[2]), k = idx(t[3]);
            Rational v = Rational::parse(t[4]);
            l.c[a][b][k] += v;
            l.c[b][a][k] -= v;
        } else {
            throw input_error("lie data: unknown directive " + t[0]);
        }
    }
    validate_lie(l);
    return l;
}

LieAlgebraData load_lie(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open lie data file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_lie(buf.str());
}

void validate_lie(const LieAlgebraData& l) {
    int d = l.dim;
    if (d <= 0 || (int)l.c.size() != d)
        throw input_error("lie data: structure constant table has wrong shape");
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int k = 0; k < d; ++k)
                if (l.c[a][b][k] != -l.c[b][a][k])
                    throw math_error("lie data: bracket is not antisymmetric");
    // [[a,b],c] + [[b,c],a] + [[c,a],b] = 0 componentwise
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            for (int cc = b + 1; cc < d; ++cc)
                for (int out = 0; out < d; ++out) {
                    Rational s;
                    for (int m = 0; m < d; ++m)
                        s += l.c[a][b][m] * l.c[m][cc][out] +
                             l.c[b][cc][m] * l.c[m][a][out] +
                             l.c[cc][a][m] * l.c[m][b][out];
                    if (s != Rational(0))
                        throw math_error("lie data: Jacobi identity fails");
                }
}

Matrix killing_form(const LieAlgebraData& l) {
    validate_lie(l);
    int d = l.dim;
    Matrix k(d, Vec(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Rational s;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) s += l.c[a][i][j] * l.c[b][j][i];
            k[a][b] = s;
        }
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (k[a][b] != k[b][a])
                throw math_error("Killing form is not symmetric");
    // K([a,b],c) = K(a,[b,c])
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int cc = 0; cc < d; ++cc) {
                Rational lhs, rhs;
                for (int m = 0; m < d; ++m) {
                    lhs += l.c[a][b][m] * k[m][cc];
                    rhs += l.c[b][cc][m] * k[a][m];
                }
                if (lhs != rhs) throw math_error("Killing form is not invariant");
            }
    return k;
}

DiLieData cobracket_from_killing(const LieAlgebraData& l) {
    Matrix k = killing_form(l);
    int d = l.dim;
    RrefResult r = rref(k);
    if ((int)r.pivot_cols.size() < d)
        throw math_error(
            "Killing form is degenerate; the cobracket construction needs a "
            "semisimple algebra");
    Matrix kinv(d, Vec(d));
    for (int col = 0; col < d; ++col) {
        Vec e(d);
        e[col] = Rational(1);
        auto sol = solve_linear(k, e);
        if (!sol) throw math_error("Killing form inversion failed");
        for (int row = 0; row < d; ++row) kinv[row][col] = (*sol)[row];
    }

    DiLieData out;
    out.n = 0;
    for (const auto& name : l.names) out.space.add_element(name, 0);
    TensorIndexer ix2(d, 2);
    out.bracket = MultiMap(out.space, 2, 1, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int m = 0; m < d; ++m)
                if (l.c[i][j][m] != Rational(0))
                    out.bracket.add_entry(m, ix2.index({i, j}), l.c[i][j][m]);
    out.cobracket = MultiMap(out.space, 1, 2, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int m = 0; m < d; ++m) {
                Rational v;
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        for (int cc = 0; cc < d; ++cc)
                            v += kinv[i][a] * kinv[j][b] * k[m][cc] * l.c[a][b][cc];
                if (v != Rational(0)) out.cobracket.add_entry(ix2.index({i, j}), m, v);
            }
    // the construction promises these hold; check rather than trust
    if (!dilie_relations_check(out).all_zero())
        throw math_error("Killing cobracket failed its relation audit");
    return out;
}

bool RelationDefects::all_zero() const {
    for (const auto& [name, v] : defects)
        if (v != Rational(0)) return false;
    return true;
}

RelationDefects dilie_relations_check(const DiLieData& d) {
    const GradedSpace& sp = d.space;
    MultiMap id = MultiMap::identity(sp, 1);
    const MultiMap& b = d.bracket;
    const MultiMap& del = d.cobracket;

    RelationDefects out;
    auto record = [&](const char* name, const MultiMap& defect) {
        Rational mx;
        for (const auto& [key, val] : defect.entries()) {
            Rational a = val < Rational(0) ? -val : val;
            if (mx < a) mx = a;
        }
        out.defects[name] = mx;
    };

    record("bracket_antisym", b + sym_act({0}, b, {1, 0}));
    MultiMap bb = compose_maps(b, tensor_of({b, id}));
    record("jacobi", bb + sym_act({0}, bb, {1, 2, 0}) + sym_act({0}, bb, {2, 0, 1}));

    record("cobracket_coantisym", del + sym_act({1, 0}, del, {0}));
    MultiMap dd = compose_maps(tensor_of({del, id}), del);
    record("co_jacobi", dd + sym_act({1, 2, 0}, dd, {0}) + sym_act({2, 0, 1}, dd, {0}));

    // x . (u (x) v) = [x,u] (x) v + (-1)^{|x||u|} u (x) [x,v]; the graded
    // signs ride on the permutation operator and the tensor calculus
    MultiMap act = tensor_of({b, id}) +
                   compose_maps(tensor_of({id, b}), perm_operator(sp, {1, 0, 2}));
    record("module", compose_maps(del, b) - compose_maps(act, tensor_of({id, del})));
    return out;
}

namespace {

// Decorated-tree span of one dialgebra sector. Vertices: a = j-1 brackets
// (2 in, 1 out) then c = k-1 cobrackets (1 in, 2 out), all ports ordered.
// A tree is the bijection sink slot -> source id, sinks listed vertex
// in-ports first then output legs, sources input legs first then vertex
// out-ports.
struct TreeSpec {
    int j, k, a, c;
    int n_sinks, n_sources;

    TreeSpec(int j_, int k_) : j(j_), k(k_), a(j_ - 1), c(k_ - 1) {
        n_sinks = 2 * a + c + k;
        n_sources = j + a + 2 * c;
    }
    int in_base(int v) const { return v < a ? 2 * v : 2 * a + (v - a); }
    int in_count(int v) const { return v < a ? 2 : 1; }
    int out_base(int v) const { return v < a ? j + v : j + a + 2 * (v - a); }
    int out_count(int v) const { return v < a ? 1 : 2; }
    int leg_base() const { return 2 * a + c; }
    // owning vertex of a source id, -1 for input legs
    int src_owner(int s) const {
        if (s < j) return -1;
        s -= j;
        return s < a ? s : a + (s - a) / 2;
    }
    int sink_owner(int slot) const {
        if (slot >= leg_base()) return -1;
        return slot < 2 * a ? slot / 2 : a + (slot - 2 * a);
    }
};

struct DsuSmall {
    std::vector<int> p;
    explicit DsuSmall(int n) : p(n) { for (int i = 0; i < n; ++i) p[i] = i; }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void join(int x, int y) { p[find(x)] = find(y); }
};

bool valid_tree(const TreeSpec& ts, const std::vector<int>& src) {
    int nv = ts.a + ts.c;
    if (nv == 0) return true; // the identity wire
    for (int slot = ts.leg_base(); slot < ts.n_sinks; ++slot)
        if (src[slot] < ts.j) return false; // leg-to-leg wire disconnects
    int edges = 0;
    DsuSmall dsu(nv);
    for (int slot = 0; slot < ts.leg_base(); ++slot) {
        int u = ts.src_owner(src[slot]);
        if (u < 0) continue;
        ++edges;
        dsu.join(u, ts.sink_owner(slot));
    }
    if (edges != nv - 1) return false;
    int root = dsu.find(0);
    for (int v = 1; v < nv; ++v)
        if (dsu.find(v) != root) return false;
    return true;
}

void permute_block(std::vector<int>& perm, int lo, int hi,
                   const std::function<void()>& fn) {
    std::sort(perm.begin() + lo, perm.begin() + hi);
    do {
        fn();
    } while (std::next_permutation(perm.begin() + lo, perm.begin() + hi));
}

std::string canon_key(const TreeSpec& ts, const std::vector<int>& src) {
    int nv = ts.a + ts.c;
    std::vector<int> vp(nv);
    for (int i = 0; i < nv; ++i) vp[i] = i;
    std::string best;
    std::vector<int> inv(nv), out(ts.n_sinks);
    auto consider = [&]() {
        for (int v = 0; v < nv; ++v) inv[vp[v]] = v;
        auto remap = [&](int s) {
            int u = ts.src_owner(s);
            if (u < 0) return s;
            return ts.out_base(vp[u]) + (s - ts.out_base(u));
        };
        for (int nvx = 0; nvx < nv; ++nvx) {
            int v = inv[nvx];
            for (int p = 0; p < ts.in_count(v); ++p)
                out[ts.in_base(nvx) + p] = remap(src[ts.in_base(v) + p]);
        }
        for (int slot = ts.leg_base(); slot < ts.n_sinks; ++slot)
            out[slot] = remap(src[slot]);
        std::string key;
        for (int v : out) {
            key += std::to_string(v);
            key += ',';
        }
        if (best.empty() || key < best) best = std::move(key);
    };
    permute_block(vp, 0, ts.a, [&]() { permute_block(vp, ts.a, nv, consider); });
    return best;
}

struct SectorCore {
    int trees = 0;
    int rank = 0;
};

SectorCore compute_sector(int j, int k) {
    TreeSpec ts(j, k);
    std::map<std::string, int> index_of;
    std::vector<std::vector<int>> basis;

    std::vector<int> sources(ts.n_sources);
    for (int i = 0; i < ts.n_sources; ++i) sources[i] = i;
    do {
        if (!valid_tree(ts, sources)) continue;
        std::string key = canon_key(ts, sources);
        if (index_of.emplace(key, (int)basis.size()).second) basis.push_back(sources);
    } while (std::next_permutation(sources.begin(), sources.end()));

    auto idx_of = [&](const std::vector<int>& src) {
        auto it = index_of.find(canon_key(ts, src));
        if (it == index_of.end())
            throw math_error("dialgebra sector rewiring left the tree span");
        return it->second;
    };

    std::set<std::vector<std::pair<int, Rational>>> rows;
    auto add_row = [&](std::map<int, Rational> entries) {
        std::vector<std::pair<int, Rational>> row;
        for (const auto& [i, v] : entries)
            if (v != Rational(0)) row.emplace_back(i, v);
        if (!row.empty()) rows.insert(std::move(row));
    };

    for (const auto& src : basis) {
        std::vector<int> pos(ts.n_sources);
        for (int slot = 0; slot < ts.n_sinks; ++slot) pos[src[slot]] = slot;
        int self = idx_of(src);

        for (int u = 0; u < ts.a; ++u) {
            // bracket inputs anticommute
            std::vector<int> t = src;
            std::swap(t[2 * u], t[2 * u + 1]);
            add_row({{self, Rational(1)}, {idx_of(t), Rational(1)}});
        }
        for (int v = ts.a; v < ts.a + ts.c; ++v) {
            // cobracket outputs anticommute: swap the two consumers
            int o1 = ts.out_base(v), o2 = o1 + 1;
            std::vector<int> t = src;
            std::swap(t[pos[o1]], t[pos[o2]]);
            add_row({{self, Rational(1)}, {idx_of(t), Rational(1)}});
        }
        for (int u = 0; u < ts.a; ++u) {
            int slot = pos[ts.j + u]; // consumer of u's output
            int v = ts.sink_owner(slot);
            if (v < 0) continue;
            if (v < ts.a) {
                // cyclic sum over the three hanging sources
                int p = slot - 2 * v;
                int zslot = 2 * v + (1 - p);
                int x = src[2 * u], y = src[2 * u + 1], z = src[zslot];
                std::vector<int> t2 = src, t3 = src;
                t2[2 * u] = y; t2[2 * u + 1] = z; t2[zslot] = x;
                t3[2 * u] = z; t3[2 * u + 1] = x; t3[zslot] = y;
                std::map<int, Rational> row;
                row[self] += Rational(1);
                row[idx_of(t2)] += Rational(1);
                row[idx_of(t3)] += Rational(1);
                add_row(std::move(row));
            } else {
                // a bracket output enters a cobracket: rewrite as the
                // adjoint action on the cobracket of the second input
                int y = src[2 * u + 1]; // the first input stays in place
                int o1 = ts.out_base(v), o2 = o1 + 1;
                std::vector<int> l1 = src, l2 = src;
                l1[slot] = y; l1[2 * u + 1] = o1; l1[pos[o1]] = ts.j + u;
                l2[slot] = y; l2[2 * u + 1] = o2; l2[pos[o2]] = ts.j + u;
                std::map<int, Rational> row;
                row[self] += Rational(1);
                row[idx_of(l1)] -= Rational(1);
                row[idx_of(l2)] -= Rational(1);
                add_row(std::move(row));
            }
        }
        for (int u = ts.a; u < ts.a + ts.c; ++u) {
            for (int oo = 0; oo < 2; ++oo) {
                int slot = pos[ts.out_base(u) + oo];
                int v = ts.sink_owner(slot);
                if (v < ts.a) continue; // legs and brackets: no site here
                // cyclic sum over the three hanging sinks
                int o_free = ts.out_base(u) + (1 - oo);
                int w1 = ts.out_base(v), w2 = w1 + 1;
                int s1 = pos[w1], s2 = pos[w2], s3 = pos[o_free];
                std::vector<int> t2 = src, t3 = src;
                t2[s1] = o_free; t2[s2] = w1; t2[s3] = w2;
                t3[s1] = w2; t3[s2] = o_free; t3[s3] = w1;
                std::map<int, Rational> row;
                row[self] += Rational(1);
                row[idx_of(t2)] += Rational(1);
                row[idx_of(t3)] += Rational(1);
                add_row(std::move(row));
            }
        }
    }

    Matrix m;
    for (const auto& row : rows) {
        Vec vec(basis.size());
        for (const auto& [i, v] : row) vec[i] = v;
        m.push_back(std::move(vec));
    }
    SectorCore core;
    core.trees = (int)basis.size();
    core.rank = m.empty() ? 0 : (int)rref(m).pivot_cols.size();
    return core;
}

} // namespace

SectorInfo dilie_component(int j, int k, int n) {
    if (j < 1 || k < 1)
        throw input_error("dialgebra sectors need at least one input and output");
    if (n % 2 != 0)
        throw input_error(
            "dialgebra sectors need an even cobracket degree; odd degrees "
            "would require an oriented vertex set");
    if (j + k > 6)
        throw resource_error("dialgebra sector enumeration is capped at j+k <= 6");
    SectorCore core = compute_sector(j, k);
    SectorInfo info;
    info.trees = core.trees;
    info.rank = core.rank;
    info.dim = core.trees - core.rank;
    info.degree = n * (k - 1);
    return info;
}

HadamardReport hadamard_check(int n, int max_total) {
    if (n % 2 != 0)
        throw input_error("the tensor comparison needs an even structural degree");
    if (max_total > 6)
        throw resource_error("the tensor comparison is capped at j+k <= 6");
    HadamardReport rep;
    rep.ok = true;
    for (int j = 1; j + 1 <= max_total; ++j) {
        for (int k = 1; j + k <= max_total; ++k) {
            FrobElem fe = frob_positive(j, k, 0, n);
            int fdeg = frob_degree(fe);
            SectorCore core = compute_sector(j, k);
            int dim = core.trees - core.rank;
            // degree-0 sector tensored against the one-dimensional
            // genus-zero component of degree fdeg
            int lhs_deg = fdeg + 0;
            int rhs_deg = n * (k - 1);
            bool ok = (lhs_deg == rhs_deg);
            std::ostringstream line;
            line << "(" << j << "," << k << "): 1 x dim " << dim << " deg " << fdeg
                 << "+0 -> dim " << dim << " deg " << rhs_deg
                 << (ok ? " ok" : " MISMATCH");
            rep.lines.push_back(line.str());
            rep.ok = rep.ok && ok;
        }
    }
    return rep;
}

TensorReport tensor_action(const FrobAlgebra& a, const LieAlgebraData& l) {
    DiLieData g = cobracket_from_killing(l);
    TensorReport rep;
    DiLieData& t = rep.data;
    t.n = a.n;
    for (long ai = 0; ai < a.space.dim(); ++ai)
        for (int xi = 0; xi < l.dim; ++xi)
            t.space.add_element(a.space.name(ai) + "*" + l.names[xi],
                                a.space.degree(ai));
    long dg = l.dim;
    auto pair_ix = [&](long am, long xm) { return am * dg + xm; };
    TensorIndexer tix2(t.space.dim(), 2);
    TensorIndexer aix2(a.space.dim(), 2);
    TensorIndexer gix2(l.dim, 2);

    // the Lie side sits in degree zero, so the interleaving collects no signs
    t.bracket = MultiMap(t.space, 2, 1, 0);
    for (const auto& [key, mv] : a.mult.entries()) {
        auto in = aix2.tuple(key.second);
        for (const auto& [gkey, gv] : g.bracket.entries()) {
            auto gin = gix2.tuple(gkey.second);
            t.bracket.add_entry(
                pair_ix(key.first, gkey.first),
                tix2.index({(int)pair_ix(in[0], gin[0]), (int)pair_ix(in[1], gin[1])}),
                mv * gv);
        }
    }
    t.cobracket = MultiMap(t.space, 1, 2, a.n);
    for (const auto& [key, cv] : a.coprod.entries()) {
        auto out = aix2.tuple(key.first);
        for (const auto& [gkey, gv] : g.cobracket.entries()) {
            auto gout = gix2.tuple(gkey.first);
            t.cobracket.add_entry(
                tix2.index({(int)pair_ix(out[0], gout[0]), (int)pair_ix(out[1], gout[1])}),
                pair_ix(key.second, gkey.second), cv * gv);
        }
    }
    rep.strict = a.diff.is_zero();
    rep.defects = dilie_relations_check(t);
    return rep;
}

} // namespace propcalc
