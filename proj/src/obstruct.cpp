#include "propcalc/obstruct.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "propcalc/endmap.hpp"
#include "propcalc/errors.hpp"

namespace propcalc {

namespace {

// degree of the generator s(x): bar degree plus the part marker
int generator_degree(const BarGraph& x, int n) { return x.degree(n) + 1; }

std::vector<int> inverse_perm(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (size_t i = 0; i < p.size(); ++i) inv[p[i]] = (int)i;
    return inv;
}

std::string tuple_name(const GradedSpace& s, const std::vector<int>& t) {
    std::string out;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) out += "|";
        out += s.name(t[i]);
    }
    return out;
}

std::string map_desc(const MultiMap& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, v] : f.entries()) {
        if (!first) os << " ";
        first = false;
        os << tuple_name(f.space(), f.out_tuple(key.first)) << "<-"
           << tuple_name(f.space(), f.in_tuple(key.second)) << ":" << v.str();
    }
    return os.str();
}

BarGraph corolla(int j, int k, int g) {
    BarGraph b;
    b.verts = {{j, k, g}};
    b.in_legs.assign(j, 0);
    b.out_legs.assign(k, 0);
    return b;
}

// Splittings of a graph in the reported window can carry cross bundles
// of up to genus_cap + 1 parallel edges, so their parts are wider by up
// to genus_cap; the assignment window grows by that much per level below
// the top weight to stay closed under composite evaluation.
int arity_cap(const PartialMorphism& phi, int w) {
    return phi.max_arity + (phi.max_weight - w) * phi.genus_cap;
}

// Largest genus whose sectors can meet the degree window of the target:
// a map out of a (j,k,g) generator of weight w lives in degrees
// [delta, delta+1] with delta = n(k-1+g) - w + 1, and the component of
// End(V) in that arity is zero outside [k*min - j*max, k*max - j*min].
// Sectors above the cap carry the zero map and contribute nothing.
int derive_genus_cap(const GradedSpace& space, int n, int max_weight,
                     int max_arity) {
    int lo_deg = space.degree(0), hi_deg = space.degree(0);
    for (int i = 1; i < space.dim(); ++i) {
        lo_deg = std::min(lo_deg, space.degree(i));
        hi_deg = std::max(hi_deg, space.degree(i));
    }
    int wide = max_arity + (max_weight - 1) * 12;
    int cap = 0;
    for (int g = 1; g <= 12; ++g) {
        bool rel = false;
        for (int w = 1; w <= max_weight && !rel; ++w)
            for (int j = 1; j < wide && !rel; ++j)
                for (int k = 1; j + k <= wide && !rel; ++k) {
                    int delta = n * (k - 1 + g) - w + 1;
                    int lo = k * lo_deg - j * hi_deg;
                    int hi = k * hi_deg - j * lo_deg;
                    if (delta + 1 >= lo && delta <= hi) rel = true;
                }
        if (rel) cap = g;
    }
    if (cap > 6)
        throw resource_error("genus window for this target is too wide");
    return cap;
}

// Image of a two-part splitting term: wire the two part images along the
// cross bundle and evaluate. The orientation word lists the parts in id
// order while the evaluation consumes them upstream first, so a swap
// costs the product of the generator degrees (degree parity equals
// marker parity at even n).
MultiMap composite_of_split(const PartialMorphism& phi, const NestedTerm& t) {
    int nv = t.weight();
    std::vector<std::array<int, 2>> cross;
    for (const auto& e : t.edges)
        if (t.part_of[e[0]] != t.part_of[e[1]]) cross.push_back(e);
    if (t.parts != 2 || cross.empty())
        throw math_error("split term must have two linked parts");
    int up = t.part_of[cross[0][0]];
    int down = 1 - up;
    int r = (int)cross.size();

    auto extract = [&](int p) {
        BarGraph b;
        std::vector<int> local(nv, -1);
        for (int v = 0; v < nv; ++v)
            if (t.part_of[v] == p) {
                local[v] = (int)b.verts.size();
                b.verts.push_back(t.verts[v]);
            }
        for (const auto& e : t.edges)
            if (t.part_of[e[0]] == p && t.part_of[e[1]] == p)
                b.edges.push_back({local[e[0]], local[e[1]]});
        for (int v : t.in_legs)
            if (t.part_of[v] == p) b.in_legs.push_back(local[v]);
        if (p == down)
            for (const auto& e : cross) b.in_legs.push_back(local[e[1]]);
        for (int v : t.out_legs)
            if (t.part_of[v] == p) b.out_legs.push_back(local[v]);
        if (p == up)
            for (const auto& e : cross) b.out_legs.push_back(local[e[0]]);
        return b;
    };
    auto image_of = [&](const BarGraph& b) {
        SignedBar sb = canonical_bar(b);
        if (sb.sign == 0) throw math_error("vanishing part in a split term");
        auto it = phi.images.find(sb.graph.serialize());
        if (it == phi.images.end())
            throw math_error("missing assignment for split part " +
                             sb.graph.serialize());
        return it->second.scaled(Rational(sb.sign));
    };

    BarGraph bu = extract(up), bd = extract(down);
    MultiMap fu = image_of(bu), fd = image_of(bd);
    int ku_g = fu.k() - r;   // global outputs of the upstream part
    int jd_g = fd.j() - r;   // global inputs of the downstream part

    DirectedGraph pat;
    pat.add_vertex("up", fu.j(), fu.k());
    pat.add_vertex("down", fd.j(), fd.k());
    for (int c = 0; c < r; ++c)
        pat.add_edge(PortRef{0, ku_g + c}, PortRef{1, jd_g + c});
    std::vector<PortRef> ins, outs;
    int urank = 0, drank = 0;
    for (int v : t.in_legs) {
        if (t.part_of[v] == up) ins.push_back(PortRef{0, urank++});
        else ins.push_back(PortRef{1, drank++});
    }
    urank = drank = 0;
    for (int v : t.out_legs) {
        if (t.part_of[v] == up) outs.push_back(PortRef{0, urank++});
        else outs.push_back(PortRef{1, drank++});
    }
    pat.set_inputs(ins);
    pat.set_outputs(outs);

    MultiMap out = evaluate_graph(pat, {{"up", fu}, {"down", fd}});
    if (up == 1) {
        int du = bu.degree(phi.n) + 1, dd = bd.degree(phi.n) + 1;
        out = out.scaled(Rational(koszul_sign(du * dd)));
    }
    return out;
}

// leg relabelings fixing the labeled graph, with their orientation signs
struct StabElem {
    std::vector<int> sigma, tau;
    int sign;
};

std::vector<StabElem> leg_stabilizer(const BarGraph& x) {
    int j = (int)x.in_legs.size(), k = (int)x.out_legs.size();
    std::vector<int> sigma(k), tau(j);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<StabElem> out;
    do {
        std::iota(tau.begin(), tau.end(), 0);
        do {
            SignedBar sb = leg_act(x, sigma, tau);
            if (sb.graph == x) out.push_back({sigma, tau, sb.sign});
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

// relabeled copies of x get the transported image s * P(sigma^-1) y P(tau)
void assign_orbit(PartialMorphism& phi, const BarGraph& x, const MultiMap& y) {
    int j = (int)x.in_legs.size(), k = (int)x.out_legs.size();
    std::vector<int> sigma(k), tau(j);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        std::iota(tau.begin(), tau.end(), 0);
        do {
            SignedBar sb = leg_act(x, sigma, tau);
            if (sb.sign == 0)
                throw math_error("orbit of a basis class hit a vanishing graph");
            MultiMap img =
                sym_act(inverse_perm(sigma), y, tau).scaled(Rational(sb.sign));
            std::string key = sb.graph.serialize();
            auto it = phi.images.find(key);
            if (it == phi.images.end()) {
                phi.images.emplace(key, std::move(img));
                phi.graphs.emplace(key, sb.graph);
            } else if (!(it->second == img)) {
                throw math_error("equivariance propagation mismatch at " + key);
            }
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
}

} // namespace

PartialMorphism init_weight_zero(const FrobAlgebra& a, int max_weight,
                                 int max_arity) {
    if (a.n <= 0 || a.n % 2 != 0)
        throw input_error("resolution morphisms need even positive degree data");
    if (max_weight < 1 || max_arity < 2)
        throw input_error("weight and arity windows must be positive");
    if (max_weight > 3 || max_arity > 4)
        throw resource_error("weight/arity window beyond supported bounds");

    PartialMorphism phi;
    phi.space = a.space;
    phi.dV = a.diff;
    phi.n = a.n;
    phi.max_weight = max_weight;
    phi.max_arity = max_arity;
    phi.genus_cap = derive_genus_cap(a.space, a.n, max_weight, max_arity);

    int dim = a.space.dim();
    int top = arity_cap(phi, 1);
    for (int j = 1; j < top; ++j)
        for (int k = 1; j + k <= top; ++k)
            for (int g = 0; g <= phi.genus_cap; ++g) {
                MultiMap img = genus_operation(a, j, k, g);
                TensorIndexer in_ix(dim, j), out_ix(dim, k);
                for (const auto& p : a.perturbs) {
                    if (p.j != j || p.k != k || p.genus != g) continue;
                    std::vector<int> oi, ii;
                    int dsum = 0;
                    for (const auto& nm : p.outs) {
                        oi.push_back(a.space.index(nm));
                        dsum += a.space.degree(oi.back());
                    }
                    for (const auto& nm : p.ins) {
                        ii.push_back(a.space.index(nm));
                        dsum -= a.space.degree(ii.back());
                    }
                    if (dsum != img.degree())
                        throw input_error("perturb entry degree mismatch at (" +
                                          std::to_string(j) + "," +
                                          std::to_string(k) + "," +
                                          std::to_string(g) + ")");
                    img.add_entry(out_ix.index(oi), in_ix.index(ii), p.coeff);
                }
                std::string where = "(" + std::to_string(j) + "," +
                                    std::to_string(k) + "," + std::to_string(g) +
                                    ") corolla";
                MultiMap comm = end_differential(img, a.diff);
                if (!comm.is_zero())
                    throw math_error("weight-one image of the " + where +
                                     " fails the chain condition; commutator " +
                                     map_desc(comm));
                // legs of one vertex are interchangeable, so the image must
                // be invariant under boundary permutations
                for (int s = 0; s + 1 < k; ++s) {
                    std::vector<int> sig(k), id_in(j);
                    std::iota(sig.begin(), sig.end(), 0);
                    std::iota(id_in.begin(), id_in.end(), 0);
                    std::swap(sig[s], sig[s + 1]);
                    if (!(sym_act(sig, img, id_in) == img))
                        throw math_error("weight-one image of the " + where +
                                         " is not output-symmetric");
                }
                for (int s = 0; s + 1 < j; ++s) {
                    std::vector<int> id_out(k), tu(j);
                    std::iota(id_out.begin(), id_out.end(), 0);
                    std::iota(tu.begin(), tu.end(), 0);
                    std::swap(tu[s], tu[s + 1]);
                    if (!(sym_act(id_out, img, tu) == img))
                        throw math_error("weight-one image of the " + where +
                                         " is not input-symmetric");
                }
                BarGraph x = corolla(j, k, g);
                std::string key = x.serialize();
                phi.images.emplace(key, std::move(img));
                phi.graphs.emplace(key, x);
            }
    phi.current_weight = 1;
    return phi;
}

MultiMap obstruction_cycle(const PartialMorphism& phi, const BarGraph& x) {
    int j = (int)x.in_legs.size(), k = (int)x.out_legs.size();
    MultiMap c(phi.space, j, k, generator_degree(x, phi.n) + 1);
    NestedTerm nx = single_part(x);
    for (const auto& [key, tc] : bar_part(nx, Rational(1)).terms) {
        auto it = phi.images.find(key);
        if (it == phi.images.end())
            throw math_error("missing assignment for " + key);
        c = c + it->second.scaled(tc.second);
    }
    for (const auto& [key, tc] : cobar_part(nx, Rational(1)).terms)
        c = c + composite_of_split(phi, tc.first).scaled(tc.second);
    if (!end_differential(c, phi.dV).is_zero())
        throw math_error("obstruction fails the cycle check for " +
                         x.serialize());
    return c;
}

ObstructionReport extend(PartialMorphism& phi, const BarGraph& x) {
    ObstructionReport rep;
    rep.x = x;
    rep.weight = x.weight();
    rep.cycle = obstruction_cycle(phi, x);

    int j = (int)x.in_legs.size(), k = (int)x.out_legs.size();
    int delta = generator_degree(x, phi.n);
    MultiMap y(phi.space, j, k, delta);

    if (rep.cycle.is_zero()) {
        // canonical echelon solution of the homogeneous system
        rep.filled = true;
    } else {
        int dim = phi.space.dim();
        TensorIndexer in_ix(dim, j), out_ix(dim, k);
        std::vector<int> ideg(in_ix.size()), odeg(out_ix.size());
        for (long i = 0; i < in_ix.size(); ++i)
            ideg[i] = y.tuple_degree(in_ix.tuple(i));
        for (long o = 0; o < out_ix.size(); ++o)
            odeg[o] = y.tuple_degree(out_ix.tuple(o));
        std::vector<std::pair<long, long>> vars;
        for (long o = 0; o < out_ix.size(); ++o)
            for (long i = 0; i < in_ix.size(); ++i)
                if (odeg[o] - ideg[i] == delta) vars.push_back({o, i});

        // columns of the commutator, via the one-sided power differentials
        MultiMap dk(phi.space, k, k, phi.dV.degree());
        for (int s = 0; s < k; ++s) {
            std::vector<MultiMap> parts;
            if (s > 0) parts.push_back(MultiMap::identity(phi.space, s));
            parts.push_back(phi.dV);
            if (k - 1 - s > 0)
                parts.push_back(MultiMap::identity(phi.space, k - 1 - s));
            dk = dk + tensor_of(parts);
        }
        MultiMap dj(phi.space, j, j, phi.dV.degree());
        for (int s = 0; s < j; ++s) {
            std::vector<MultiMap> parts;
            if (s > 0) parts.push_back(MultiMap::identity(phi.space, s));
            parts.push_back(phi.dV);
            if (j - 1 - s > 0)
                parts.push_back(MultiMap::identity(phi.space, j - 1 - s));
            dj = dj + tensor_of(parts);
        }
        std::map<long, std::vector<std::pair<long, Rational>>> dk_by_in,
            dj_by_out;
        for (const auto& [kk, v] : dk.entries())
            dk_by_in[kk.second].push_back({kk.first, v});
        for (const auto& [kk, v] : dj.entries())
            dj_by_out[kk.first].push_back({kk.second, v});
        Rational rsign(-koszul_sign(delta));

        std::vector<std::map<std::pair<long, long>, Rational>> cols(vars.size());
        std::map<std::pair<long, long>, int> row_of;
        auto touch = [&](const std::pair<long, long>& key) {
            row_of.emplace(key, 0);
        };
        for (size_t v = 0; v < vars.size(); ++v) {
            auto [o, i] = vars[v];
            auto dit = dk_by_in.find(o);
            if (dit != dk_by_in.end())
                for (const auto& [m, val] : dit->second) {
                    cols[v][{m, i}] = cols[v][{m, i}] + val;
                    touch({m, i});
                }
            auto rit = dj_by_out.find(i);
            if (rit != dj_by_out.end())
                for (const auto& [i2, val] : rit->second) {
                    cols[v][{o, i2}] = cols[v][{o, i2}] + val * rsign;
                    touch({o, i2});
                }
            // chance cancellation keeps zero entries harmless in the matrix
        }
        for (const auto& [kk, v] : rep.cycle.entries()) touch(kk);
        int nr = 0;
        for (auto& [kk, idx] : row_of) idx = nr++;

        Matrix A(nr, Vec(vars.size(), Rational(0)));
        for (size_t v = 0; v < vars.size(); ++v)
            for (const auto& [kk, val] : cols[v]) A[row_of[kk]][v] = val;
        Vec b(nr, Rational(0));
        for (const auto& [kk, v] : rep.cycle.entries()) b[row_of[kk]] = v;

        auto sol = solve_linear(A, b);
        if (sol) {
            for (size_t v = 0; v < vars.size(); ++v)
                if (!((*sol)[v] == Rational(0)))
                    y.add_entry(vars[v].first, vars[v].second, (*sol)[v]);
            // average over the leg stabilizer so orbit transport is
            // consistent; the cycle is invariant, so this still solves
            auto stab = leg_stabilizer(x);
            if (stab.size() > 1 && !y.is_zero()) {
                MultiMap acc(phi.space, j, k, delta);
                for (const auto& st : stab)
                    acc = acc + sym_act(inverse_perm(st.sigma), y, st.tau)
                                    .scaled(Rational(st.sign));
                y = acc.scaled(Rational(1) / Rational((long)stab.size()));
            }
            if (!(end_differential(y, phi.dV) == rep.cycle))
                throw math_error("averaged filler stopped solving at " +
                                 x.serialize());
            rep.filled = true;
        } else {
            // residue of the cycle modulo the image of the commutator
            RrefResult rr = rref([&] {
                Matrix rows;
                for (size_t v = 0; v < vars.size(); ++v) {
                    Vec row(nr, Rational(0));
                    for (const auto& [kk, val] : cols[v])
                        row[row_of[kk]] = val;
                    rows.push_back(std::move(row));
                }
                return rows;
            }());
            Vec res = b;
            for (size_t rix = 0; rix < rr.pivot_cols.size(); ++rix) {
                int p = rr.pivot_cols[rix];
                if (res[p] == Rational(0)) continue;
                Rational f = res[p] / rr.mat[rix][p];
                for (int cix = 0; cix < nr; ++cix)
                    res[cix] = res[cix] - f * rr.mat[rix][cix];
            }
            for (const auto& [kk, idx] : row_of) {
                if (res[idx] == Rational(0)) continue;
                rep.homology_class.push_back(
                    tuple_name(phi.space, y.out_tuple(kk.first)) + "<-" +
                    tuple_name(phi.space, y.in_tuple(kk.second)) + ":" +
                    res[idx].str());
            }
            rep.filled = false;
        }
    }

    rep.filler = y;
    if (rep.filled) assign_orbit(phi, x, y);
    return rep;
}

ResolutionResult run_resolution(const FrobAlgebra& a, int max_weight,
                                int max_arity) {
    ResolutionResult res;
    res.phi = init_weight_zero(a, max_weight, max_arity);
    PartialMorphism& phi = res.phi;
    res.log.push_back("target: dim " + std::to_string(a.space.dim()) +
                      " degree " + std::to_string(a.n) + " weight<=" +
                      std::to_string(max_weight) + " arity<=" +
                      std::to_string(max_arity) + " genus<=" +
                      std::to_string(phi.genus_cap));
    res.log.push_back("weight 1: " + std::to_string(phi.images.size()) +
                      " corolla images assigned");

    for (int w = 2; w <= max_weight; ++w) {
        int cap = arity_cap(phi, w);
        std::map<std::string, BarGraph> reps;
        for (int j = 1; j < cap; ++j)
            for (int k = 1; j + k <= cap; ++k)
                for (const BarGraph& g :
                     enumerate_bar_graphs(j, k, w, phi.genus_cap)) {
                    if (g.weight() != w) continue;
                    OrbitRep orep = leg_orbit_rep(g);
                    reps.emplace(orep.rep.serialize(), orep.rep);
                }
        bool level_ok = true;
        for (const auto& [key, x] : reps) {
            ObstructionReport r = extend(phi, x);
            res.log.push_back("w=" + std::to_string(w) + " x=" + key +
                              " cycle=" + map_desc(r.cycle) +
                              " filled=" + (r.filled ? "yes" : "no") +
                              " filler=" + map_desc(r.filler));
            if (!r.filled) {
                level_ok = false;
                for (const auto& l : r.homology_class)
                    res.log.push_back("  class " + l);
            }
            res.reports.push_back(std::move(r));
        }
        phi.current_weight = w;
        res.log.push_back("weight " + std::to_string(w) + ": " +
                          std::to_string(reps.size()) + " orbit classes, " +
                          (level_ok ? "all filled" : "unfilled obstruction"));
        if (!level_ok) {
            res.all_filled = false;
            break;
        }
    }

    if (res.all_filled) {
        // recompute the chain identity for every assignment in the
        // reported window; wider assignments were verified when solved
        bool ok = true;
        int checked = 0;
        for (const auto& [key, g] : phi.graphs) {
            if ((int)(g.in_legs.size() + g.out_legs.size()) > phi.max_arity)
                continue;
            MultiMap lhs = end_differential(phi.images.at(key), phi.dV);
            MultiMap rhs = obstruction_cycle(phi, g);
            if (!(lhs == rhs)) {
                ok = false;
                res.log.push_back("audit mismatch at " + key);
                break;
            }
            ++checked;
        }
        res.audit_passed = ok;
        res.log.push_back(ok ? "audit: " + std::to_string(checked) +
                                   " assignments verified"
                             : "audit: FAILED");
    } else {
        res.audit_passed = false;
        res.log.push_back("halted before the top weight; see reports");
    }
    return res;
}

} // namespace propcalc
