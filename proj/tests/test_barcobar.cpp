#include "doctest.h"

#include <map>
#include <string>
#include <vector>

#include "propcalc/barcobar.hpp"
#include "propcalc/errors.hpp"
#include "propcalc/frob.hpp"
#include "propcalc/graph.hpp"

using namespace propcalc;

namespace {

NestedTerm mk(std::vector<BarVertex> verts, std::vector<int> part_of, int parts,
              std::vector<std::array<int, 2>> edges, std::vector<int> in_legs,
              std::vector<int> out_legs) {
    NestedTerm t;
    t.verts = std::move(verts);
    t.part_of = std::move(part_of);
    t.parts = parts;
    t.edges = std::move(edges);
    t.in_legs = std::move(in_legs);
    t.out_legs = std::move(out_legs);
    return t;
}

BarGraph mkbar(std::vector<BarVertex> verts,
               std::vector<std::array<int, 2>> edges, std::vector<int> in_legs,
               std::vector<int> out_legs) {
    BarGraph g;
    g.verts = std::move(verts);
    g.edges = std::move(edges);
    g.in_legs = std::move(in_legs);
    g.out_legs = std::move(out_legs);
    return g;
}

// product feeding product, one part: arity (3,1)
NestedTerm mu_over_mu() {
    return mk({{2, 1, 0}, {2, 1, 0}}, {0, 0}, 1, {{0, 1}}, {0, 0, 1}, {1});
}

// coproduct feeding product along both strands, one part: arity (1,1)
NestedTerm theta() {
    return mk({{1, 2, 0}, {2, 1, 0}}, {0, 0}, 1, {{0, 1}, {0, 1}}, {0}, {1});
}

CobarElement elem(const NestedTerm& t) {
    CobarElement x;
    x.add(t, Rational(1));
    return x;
}

CobarElement apply_d(const CobarElement& x) {
    CobarElement out;
    for (const auto& [key, tc] : x.terms) {
        CobarElement p = bar_part(tc.first, tc.second);
        for (const auto& [k2, t2] : p.terms) out.add(t2.first, t2.second);
    }
    return out;
}

CobarElement apply_s(const CobarElement& x) {
    CobarElement out;
    for (const auto& [key, tc] : x.terms) {
        CobarElement p = cobar_part(tc.first, tc.second);
        for (const auto& [k2, t2] : p.terms) out.add(t2.first, t2.second);
    }
    return out;
}

CobarElement plus(const CobarElement& a, const CobarElement& b) {
    CobarElement out;
    for (const auto& [key, tc] : a.terms) out.add(tc.first, tc.second);
    for (const auto& [key, tc] : b.terms) out.add(tc.first, tc.second);
    return out;
}

std::map<std::string, Rational> as_map(
    const std::vector<std::pair<BarGraph, Rational>>& terms) {
    std::map<std::string, Rational> out;
    for (const auto& [g, c] : terms) out[g.serialize()] = c;
    return out;
}

} // namespace

TEST_SUITE("barcobar") {

TEST_CASE("degrees count coproducts and handles minus inner vertices") {
    BarGraph mu = mkbar({{2, 1, 0}}, {}, {0, 0}, {0});
    CHECK(mu.degree(2) == -1);
    CHECK(single_part(mu).degree(2) == 0);
    CHECK(theta().degree(2) == 1);
    CHECK(mu_over_mu().degree(2) == -1);
    // one-vertex term of any decoration sits in its decoration degree
    NestedTerm c = mk({{1, 1, 2}}, {0}, 1, {}, {0}, {0});
    CHECK(c.degree(2) == 4);
    CHECK(c.degree(4) == 8);
    CHECK(c.total_genus() == 2);
    CHECK(theta().total_genus() == 1);
}

TEST_CASE("decoration fusion agrees with graph reduction") {
    CobarElement dx = apply_d(elem(mu_over_mu()));
    REQUIRE(dx.terms.size() == 1);
    const NestedTerm& t = dx.terms.begin()->second.first;
    REQUIRE(t.weight() == 1);
    DirectedGraph tree;
    tree.add_vertex("mu", 2, 1);
    tree.add_vertex("mu", 2, 1);
    tree.add_edge({0, 0}, {1, 0});
    tree.set_inputs({{0, 0}, {0, 1}, {1, 1}});
    tree.set_outputs({{1, 0}});
    FrobElem composed = reduce_graph(tree, 2).elem;
    CHECK(t.verts[0].j == composed.j);
    CHECK(t.verts[0].k == composed.k);
    CHECK(t.verts[0].g == composed.genus);
    CHECK((t.verts[0].k - 1 + t.verts[0].g) * 2 == composed.deg);

    CobarElement dth = apply_d(elem(theta()));
    REQUIRE(dth.terms.size() == 1);
    const NestedTerm& h = dth.terms.begin()->second.first;
    DirectedGraph band;
    band.add_vertex("delta", 1, 2);
    band.add_vertex("mu", 2, 1);
    band.add_edge({0, 0}, {1, 0});
    band.add_edge({0, 1}, {1, 1});
    band.set_inputs({{0, 0}});
    band.set_outputs({{1, 0}});
    FrobElem handle = reduce_graph(band, 2).elem;
    CHECK(handle.genus == 1);
    CHECK(h.verts[0].j == handle.j);
    CHECK(h.verts[0].k == handle.k);
    CHECK(h.verts[0].g == handle.genus);
}

TEST_CASE("contraction of the two-product tree is minus the fused corolla") {
    CobarElement expected;
    expected.add(mk({{3, 1, 0}}, {0}, 1, {}, {0, 0, 0}, {0}), Rational(-1));
    CHECK(apply_d(elem(mu_over_mu())) == expected);
}

TEST_CASE("splitting the two-product tree is plus the two-part term") {
    CobarElement expected;
    expected.add(mk({{2, 1, 0}, {2, 1, 0}}, {0, 1}, 2, {{0, 1}}, {0, 0, 1}, {1}),
                 Rational(1));
    CHECK(apply_s(elem(mu_over_mu())) == expected);
}

TEST_CASE("the double strand contracts to minus a handle and splits once") {
    CobarElement dth = apply_d(elem(theta()));
    CobarElement expected_d;
    expected_d.add(mk({{1, 1, 1}}, {0}, 1, {}, {0}, {0}), Rational(-1));
    CHECK(dth == expected_d);

    CobarElement sth = apply_s(elem(theta()));
    CobarElement expected_s;
    expected_s.add(mk({{1, 2, 0}, {2, 1, 0}}, {0, 1}, 2, {{0, 1}, {0, 1}}, {0},
                      {1}),
                   Rational(1));
    CHECK(sth == expected_s);
}

TEST_CASE("one-vertex terms are closed") {
    for (int g = 0; g <= 2; ++g) {
        NestedTerm c = mk({{2, 3, g}}, {0}, 1, {}, {0, 0}, {0, 0, 0});
        CHECK(apply_d(elem(c)).is_zero());
        CHECK(apply_s(elem(c)).is_zero());
        CHECK(total_differential(elem(c)).is_zero());
    }
}

TEST_CASE("contractions that would close a directed loop are skipped") {
    // direct strand shadowed by a two-step path: only the two short
    // strands may contract; with a genus marker on the middle vertex the
    // two admissible contractions give distinct graphs
    NestedTerm tri = mk({{1, 2, 0}, {1, 1, 1}, {2, 1, 0}}, {0, 0, 0}, 1,
                        {{0, 1}, {0, 2}, {1, 2}}, {0}, {2});
    tri.validate();
    CobarElement dtri = apply_d(elem(tri));
    CHECK(dtri.terms.size() == 2);
    for (const auto& [key, tc] : dtri.terms) {
        tc.first.validate();
        CHECK(tc.first.weight() == 2);
        CHECK(tc.first.total_genus() == tri.total_genus());
    }
    // with equal strand decorations the two contractions land on the
    // same graph with opposite orientations and cancel
    NestedTerm flat = mk({{1, 2, 0}, {1, 1, 0}, {2, 1, 0}}, {0, 0, 0}, 1,
                         {{0, 1}, {0, 2}, {1, 2}}, {0}, {2});
    CHECK(apply_d(elem(flat)).is_zero());
}

TEST_CASE("vertex listing order is an orientation") {
    NestedTerm t1 = theta();
    // same graph, vertices listed the other way round
    NestedTerm t2 = mk({{2, 1, 0}, {1, 2, 0}}, {0, 0}, 1, {{1, 0}, {1, 0}}, {1},
                       {0});
    CanonNested c1 = canonical_nested(t1);
    CanonNested c2 = canonical_nested(t2);
    CHECK(c1.term.serialize() == c2.term.serialize());
    CHECK(c1.sign == -c2.sign);
    CobarElement x;
    x.add(t1, Rational(1));
    x.add(t2, Rational(1));
    CHECK(x.is_zero());
    CobarElement y;
    y.add(t1, Rational(1));
    y.add(t2, Rational(-1));
    CHECK(y.terms.size() == 1);
}

TEST_CASE("a graph with an odd symmetry is its own negative") {
    // two parallel unary strands between a coproduct and a product
    BarGraph diamond =
        mkbar({{1, 2, 0}, {1, 1, 0}, {1, 1, 0}, {2, 1, 0}},
              {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, {0}, {3});
    diamond.validate();
    CHECK(canonical_bar(diamond).sign == 0);
    CobarElement x;
    x.add(single_part(diamond), Rational(5));
    CHECK(x.is_zero());
    // the theta and the chain have no such symmetry
    CHECK(canonical_bar(as_bar(theta())).sign != 0);
    CHECK(canonical_bar(as_bar(mu_over_mu())).sign != 0);
}

TEST_CASE("invalid structures are rejected") {
    // directed loop
    NestedTerm loop = mk({{1, 1, 0}, {1, 1, 0}}, {0, 0}, 1, {{0, 1}, {1, 0}},
                         {}, {});
    CHECK_THROWS_AS(loop.validate(), input_error);
    // port count off
    NestedTerm bad = mk({{2, 1, 0}}, {0}, 1, {}, {0}, {0});
    CHECK_THROWS_AS(bad.validate(), input_error);
    // part split across two components: the two strands share a part but
    // no inner edge joins them
    NestedTerm split = mk({{1, 1, 0}, {1, 2, 0}, {1, 1, 0}}, {0, 1, 0}, 2,
                          {{1, 0}, {1, 2}}, {1}, {0, 2});
    CHECK_THROWS_AS(split.validate(), input_error);
    // outer pattern cyclic even though the total graph is not
    NestedTerm outer = mk({{1, 1, 0}, {2, 1, 0}, {1, 2, 0}}, {0, 1, 1}, 2,
                          {{0, 1}, {2, 0}, {2, 1}}, {2}, {1});
    CHECK_THROWS_AS(outer.validate(), input_error);
    // counts must have positive arities
    CHECK_THROWS_AS(enumerate_cobar_basis(0, 1, 2, 2), input_error);
}

TEST_CASE("leg relabeling acts with the orientation sign") {
    // two unary strands into a product; swapping the inputs swaps the
    // strand vertices, an odd move
    BarGraph v = mkbar({{1, 1, 0}, {1, 1, 0}, {2, 1, 0}}, {{0, 2}, {1, 2}},
                       {0, 1}, {2});
    SignedBar id_form = canonical_bar(v);
    REQUIRE(id_form.sign != 0);
    SignedBar swapped = leg_act(v, {0}, {1, 0});
    CHECK(swapped.graph.serialize() == id_form.graph.serialize());
    CHECK(swapped.sign == -id_form.sign);

    OrbitRep rep = leg_orbit_rep(v);
    SignedBar back = leg_act(v, rep.sigma_out, rep.tau_in);
    CHECK(back.graph.serialize() == rep.rep.serialize());
    CHECK(back.sign == rep.sign);
    CHECK(rep.rep.serialize() <= id_form.graph.serialize());
}

TEST_CASE("contraction commutes with leg relabeling") {
    BarGraph g = as_bar(mu_over_mu());
    std::vector<std::vector<int>> taus = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0},
                                          {1, 2, 0}};
    for (const auto& tau : taus) {
        SignedBar acted = leg_act(g, {0}, tau);
        REQUIRE(acted.sign != 0);
        // differential of the acted graph
        auto lhs = as_map(bar_differential(acted.graph));
        for (auto& [key, c] : lhs) c = c * Rational(acted.sign);
        // acted differential of the graph
        std::map<std::string, Rational> rhs;
        for (const auto& [h, c] : bar_differential(g)) {
            SignedBar moved = leg_act(h, {0}, tau);
            if (moved.sign == 0) continue;
            auto it = rhs.find(moved.graph.serialize());
            Rational add = c * Rational(moved.sign);
            if (it == rhs.end())
                rhs[moved.graph.serialize()] = add;
            else
                it->second = it->second + add;
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("enumeration counts on small windows") {
    CHECK(enumerate_cobar_basis(1, 1, 1, 2).size() == 3);
    CHECK(enumerate_cobar_basis(1, 1, 2, 2).size() == 23);
    CHECK(enumerate_cobar_basis(2, 1, 2, 2).size() == 63);
    // every enumerated term validates, canonical, within caps
    for (const auto& t : enumerate_cobar_basis(2, 1, 2, 2)) {
        t.validate();
        CHECK(t.total_genus() <= 2);
        CHECK(t.weight() <= 2);
        CHECK(t.in_legs.size() == 2);
        CHECK(t.out_legs.size() == 1);
        CanonNested c = canonical_nested(t);
        CHECK(c.sign == 1);
        CHECK(c.term.serialize() == t.serialize());
    }
}

TEST_CASE("squared differentials vanish across the audit window") {
    std::vector<std::pair<int, int>> shapes = {{1, 1}, {1, 2}, {2, 1},
                                               {1, 3}, {3, 1}, {2, 2}};
    for (auto [j, k] : shapes) {
        auto basis = enumerate_cobar_basis(j, k, 3, 2);
        CHECK(basis.size() > 0);
        for (const auto& t : basis) {
            CobarElement x = elem(t);
            CobarElement dx = apply_d(x);
            CobarElement sx = apply_s(x);
            // degree, genus and shape bookkeeping of every term
            for (const auto& [key, tc] : dx.terms) {
                CHECK(tc.first.weight() == t.weight() - 1);
                CHECK(tc.first.parts == t.parts);
                CHECK(tc.first.total_genus() == t.total_genus());
                CHECK(tc.first.degree(2) == t.degree(2) + 1);
            }
            for (const auto& [key, tc] : sx.terms) {
                CHECK(tc.first.weight() == t.weight());
                CHECK(tc.first.parts == t.parts + 1);
                CHECK(tc.first.total_genus() == t.total_genus());
                CHECK(tc.first.degree(2) == t.degree(2) + 1);
            }
            CHECK(apply_d(dx).is_zero());
            CHECK(apply_s(sx).is_zero());
            CHECK(plus(apply_s(dx), apply_d(sx)).is_zero());
        }
    }
}

TEST_CASE("total differential is the sum of its two parts") {
    CobarElement x = elem(theta());
    CHECK(total_differential(x) == plus(apply_d(x), apply_s(x)));
    CobarElement y = elem(mu_over_mu());
    CHECK(total_differential(y) == plus(apply_d(y), apply_s(y)));
}

TEST_CASE("truncated complex squares to zero") {
    CHECK_THROWS_AS(truncated_complex(1, 1, 2, 2, 3), input_error);

    TruncatedComplex small = truncated_complex(1, 1, 1, 2, 2);
    CHECK(small.basis.size() == 3);
    CHECK(small.dmat.empty());

    for (auto [j, k, w] : std::vector<std::array<int, 3>>{{2, 1, 2}, {1, 1, 3}}) {
        TruncatedComplex tc = truncated_complex(j, k, w, 2, 2);
        if (j == 2 && w == 2) CHECK(tc.basis.size() == 63);
        // matrix square vanishes entrywise
        std::map<std::pair<int, int>, Rational> sq;
        for (const auto& [ik, v] : tc.dmat)
            for (const auto& [kj, w2] : tc.dmat) {
                if (ik.second != kj.first) continue;
                std::pair<int, int> pos{ik.first, kj.second};
                auto it = sq.find(pos);
                if (it == sq.end())
                    sq[pos] = v * w2;
                else
                    it->second = it->second + v * w2;
            }
        for (const auto& [pos, v] : sq) CHECK(v == Rational(0));
        // every degree sits inside the reported window
        for (size_t i = 0; i < tc.basis.size(); ++i) {
            CHECK(tc.degrees[i] == tc.basis[i].degree(2));
            CHECK(tc.degrees[i] >= tc.deg_lo);
            CHECK(tc.degrees[i] <= tc.deg_hi);
        }
    }
}

} // TEST_SUITE
