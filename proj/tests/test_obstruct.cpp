#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "propcalc/endmap.hpp"
#include "propcalc/errors.hpp"
#include "propcalc/obstruct.hpp"

using namespace propcalc;

namespace {

std::string data_path(const char* name) {
    return std::string(PROPCALC_DATA_DIR) + "/" + name;
}

BarGraph corolla(int j, int k, int g) {
    BarGraph b;
    b.verts = {{j, k, g}};
    b.in_legs.assign(j, 0);
    b.out_legs.assign(k, 0);
    return b;
}

BarGraph mk(std::vector<BarVertex> verts, std::vector<std::array<int, 2>> edges,
            std::vector<int> in_legs, std::vector<int> out_legs) {
    BarGraph g;
    g.verts = std::move(verts);
    g.edges = std::move(edges);
    g.in_legs = std::move(in_legs);
    g.out_legs = std::move(out_legs);
    return g;
}

} // namespace

TEST_SUITE("obstruct") {

TEST_CASE("weight-one table covers the widened window") {
    FrobAlgebra s2 = load_alg(data_path("s2.alg"));
    PartialMorphism phi = init_weight_zero(s2, 3, 4);
    CHECK(phi.genus_cap == 2);
    CHECK(phi.current_weight == 1);
    // top weight keeps j+k <= 4; each level below widens by the genus cap
    int count = 0;
    for (int j = 1; j < 8; ++j)
        for (int k = 1; j + k <= 8; ++k) count += 3;
    CHECK((int)phi.images.size() == count);
    CHECK(phi.images.at(corolla(1, 1, 0).serialize()) ==
          MultiMap::identity(s2.space, 1));
    CHECK(phi.images.at(corolla(2, 1, 0).serialize()) == s2.mult);
    for (const auto& [key, img] : phi.images) {
        const BarGraph& g = phi.graphs.at(key);
        CHECK(img.degree() ==
              s2.n * ((int)g.out_legs.size() - 1 + g.verts[0].g));
        CHECK(img.j() == (int)g.in_legs.size());
        CHECK(img.k() == (int)g.out_legs.size());
    }
}

TEST_CASE("images violating the chain or symmetry conditions are rejected") {
    // the strand product forgets the w2 entries, so d does not commute
    const char* bad_chain =
        "mode lax\nn 2\nbasis 1 0\nbasis v 2\nbasis w1 1\nbasis w2 2\n"
        "unit 1\ndiff w1 w2 1\n"
        "mult 1 1 1 1\nmult 1 v v 1\nmult v 1 v 1\n"
        "mult 1 w1 w1 1\nmult w1 1 w1 1\n"
        "coprod 1 1 v 1\ncoprod 1 v 1 1\ncoprod v v v 1\ncounit v 1\n";
    CHECK_THROWS_AS(init_weight_zero(parse_alg(bad_chain), 2, 4), math_error);

    // one-sided product: fine as a chain map, but legs of a vertex are
    // interchangeable, so asymmetric images cannot define a morphism
    const char* asym =
        "mode lax\nn 2\nbasis 1 0\nbasis v 2\nunit 1\n"
        "mult 1 1 1 1\nmult 1 v v 1\n"
        "coprod 1 1 v 1\ncoprod 1 v 1 1\ncoprod v v v 1\ncounit v 1\n";
    CHECK_THROWS_AS(init_weight_zero(parse_alg(asym), 2, 4), math_error);
}

TEST_CASE("window bounds and degree parity are enforced") {
    FrobAlgebra s2 = load_alg(data_path("s2.alg"));
    CHECK_THROWS_AS(run_resolution(s2, 4), resource_error);
    CHECK_THROWS_AS(init_weight_zero(s2, 2, 5), resource_error);
    FrobAlgebra s3 = load_alg(data_path("s3.alg"));
    CHECK_THROWS_AS(init_weight_zero(s3, 2, 4), input_error);
}

TEST_CASE("perturb entries add to the matching corolla image") {
    const char* txt =
        "mode lax\nn 2\nbasis 1 0\nbasis v 2\nunit 1\n"
        "mult 1 1 1 1\nmult 1 v v 1\nmult v 1 v 1\n"
        "coprod 1 1 v 1\ncoprod 1 v 1 1\ncoprod v v v 1\ncounit v 1\n"
        "perturb 2 1 0 v 1,v 1/2\nperturb 2 1 0 v v,1 1/2\n";
    FrobAlgebra a = parse_alg(txt);
    PartialMorphism phi = init_weight_zero(a, 2, 4);
    TensorIndexer ix2(a.space.dim(), 2);
    int i1 = a.space.index("1"), iv = a.space.index("v");
    MultiMap expect = a.mult;
    expect.add_entry(iv, ix2.index({i1, iv}), Rational::parse("1/2"));
    expect.add_entry(iv, ix2.index({iv, i1}), Rational::parse("1/2"));
    CHECK(phi.images.at(corolla(2, 1, 0).serialize()) == expect);
}

TEST_CASE("strict sphere cycles vanish where the calibration demands") {
    FrobAlgebra s2 = load_alg(data_path("s2.alg"));
    PartialMorphism phi = init_weight_zero(s2, 3, 4);
    BarGraph assoc =
        canonical_bar(mk({{2, 1, 0}, {2, 1, 0}}, {{0, 1}}, {0, 0, 1}, {1}))
            .graph;
    CHECK(obstruction_cycle(phi, assoc).is_zero());
    // loop class: the contraction gives the handle corolla, the splitting
    // composes coproduct into product; with the split sign they cancel
    BarGraph theta =
        canonical_bar(mk({{1, 2, 0}, {2, 1, 0}}, {{0, 1}, {0, 1}}, {0}, {1}))
            .graph;
    CHECK(obstruction_cycle(phi, theta).is_zero());
}

TEST_CASE("missing lower assignments are flagged, not guessed") {
    FrobAlgebra s2 = load_alg(data_path("s2.alg"));
    PartialMorphism phi = init_weight_zero(s2, 2, 4);
    BarGraph chain3 = canonical_bar(mk({{2, 1, 0}, {2, 1, 0}, {2, 1, 0}},
                                       {{0, 1}, {1, 2}}, {0, 0, 1, 2}, {2}))
                          .graph;
    CHECK_THROWS_AS(obstruction_cycle(phi, chain3), math_error);
}

TEST_CASE("sphere resolution fills everything with zero fillers") {
    FrobAlgebra s2 = load_alg(data_path("s2.alg"));
    ResolutionResult r = run_resolution(s2, 3);
    CHECK(r.all_filled);
    CHECK(r.audit_passed);
    CHECK(!r.reports.empty());
    bool w2 = false, w3 = false;
    for (const auto& rep : r.reports) {
        CHECK(rep.filled);
        CHECK(rep.cycle.is_zero());
        CHECK(rep.filler.is_zero());
        CHECK(rep.homology_class.empty());
        if (rep.weight == 2) w2 = true;
        if (rep.weight == 3) w3 = true;
    }
    CHECK(w2);
    CHECK(w3);
    ResolutionResult again = run_resolution(s2, 3);
    CHECK(again.log == r.log);
}

TEST_CASE("torus resolution fills everything with zero fillers") {
    FrobAlgebra t2 = load_alg(data_path("t2.alg"));
    ResolutionResult r = run_resolution(t2, 3);
    CHECK(r.all_filled);
    CHECK(r.audit_passed);
    for (const auto& rep : r.reports) {
        CHECK(rep.filled);
        CHECK(rep.filler.is_zero());
    }
}

TEST_CASE("exact defect fixture needs a nonzero filler and passes the audit") {
    FrobAlgebra fix = load_alg(data_path("fixtures/s2_exact_defect.alg"));
    validate_frobenius(fix);
    ResolutionResult r = run_resolution(fix, 3);
    CHECK(r.all_filled);
    CHECK(r.audit_passed);
    int first_nonzero_weight = 0;
    for (const auto& rep : r.reports) {
        CHECK(rep.filled);
        CHECK(rep.homology_class.empty());
        if (!rep.filler.is_zero() && first_nonzero_weight == 0) {
            first_nonzero_weight = rep.weight;
            CHECK(!rep.cycle.is_zero());
        }
    }
    CHECK(first_nonzero_weight == 2);
}

TEST_CASE("broken fixture stops with a nonzero class at weight two") {
    FrobAlgebra fix = load_alg(data_path("fixtures/s2_broken.alg"));
    ResolutionResult r = run_resolution(fix, 3);
    CHECK(!r.all_filled);
    CHECK(!r.audit_passed);
    bool found = false;
    for (const auto& rep : r.reports) {
        CHECK(rep.weight == 2);
        if (!rep.filled) {
            found = true;
            CHECK(!rep.cycle.is_zero());
            CHECK(!rep.homology_class.empty());
        }
    }
    CHECK(found);
}

TEST_CASE("assignments transport along boundary relabelings") {
    FrobAlgebra fix = load_alg(data_path("fixtures/s2_exact_defect.alg"));
    ResolutionResult r = run_resolution(fix, 2);
    const PartialMorphism& phi = r.phi;
    REQUIRE(r.all_filled);
    int checked = 0, nonzero = 0;
    for (const auto& [key, g] : phi.graphs) {
        if (g.weight() != 2) continue;
        int j = (int)g.in_legs.size(), k = (int)g.out_legs.size();
        if (j + k > 4) continue;
        const MultiMap& img = phi.images.at(key);
        if (!img.is_zero()) ++nonzero;
        std::vector<int> sigma(k), tau(j);
        std::iota(sigma.begin(), sigma.end(), 0);
        do {
            std::iota(tau.begin(), tau.end(), 0);
            do {
                SignedBar sb = leg_act(g, sigma, tau);
                std::vector<int> inv(k);
                for (int i = 0; i < k; ++i) inv[sigma[i]] = i;
                MultiMap expect =
                    sym_act(inv, img, tau).scaled(Rational(sb.sign));
                CHECK(phi.images.at(sb.graph.serialize()) == expect);
                ++checked;
            } while (std::next_permutation(tau.begin(), tau.end()));
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    CHECK(checked > 0);
    CHECK(nonzero > 0);
}

} // TEST_SUITE
