// Acceptance gate. Each check prints exactly one PASS/FAIL line; the binary
// exits nonzero if any check fails. Every check recomputes its claim from
// the public API, no cached values.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "propcalc/barcobar.hpp"
#include "propcalc/dilie.hpp"
#include "propcalc/errors.hpp"
#include "propcalc/frob.hpp"
#include "propcalc/frobalg.hpp"
#include "propcalc/graph.hpp"
#include "propcalc/obstruct.hpp"

using namespace propcalc;

namespace {

std::string data_path(const std::string& name) {
    return std::string(PROPCALC_DATA_DIR) + "/" + name;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome fail(const std::string& why) { return {false, why}; }
Outcome ok(const std::string& what) { return {true, what}; }

// 1: each (j,k) component holds one basis element per genus, in degree
// (k-1+g)n, and nothing in any other degree
Outcome degree_bands() {
    long checked = 0;
    for (int n = 1; n <= 3; ++n)
        for (int j = 1; j <= 4; ++j)
            for (int k = 1; k <= 4; ++k) {
                for (int g = 0; g <= 3; ++g) {
                    FrobElem e = frob_positive(j, k, g, n);
                    if (frob_degree(e) != (k - 1) * n + g * n)
                        return fail("wrong degree at " + frob_str(e));
                    ++checked;
                }
                for (int d = 0; d <= (k + 6) * n; ++d)
                    for (int g = 0; g <= 6; ++g) {
                        bool band = (d == (k - 1 + g) * n);
                        if (frob_in_range(FrobElem{j, k, g, d}, n) != band) {
                            std::ostringstream os;
                            os << "band mismatch at j=" << j << " k=" << k
                               << " g=" << g << " d=" << d << " n=" << n;
                            return fail(os.str());
                        }
                    }
            }
    return ok(std::to_string(checked) + " components, degree bands exact");
}

// 2: the genus of a glued graph is the sum of the part genera plus the
// connecting edges minus the number of upper parts
Outcome graft_genus() {
    std::vector<std::vector<std::vector<DirectedGraph>>> by_v_outs(5);
    for (int v = 1; v <= 4; ++v) {
        auto gs = enumerate_graphs_all(v, generator_vertices());
        by_v_outs[v].resize(9);
        for (auto& g : gs)
            if (g.n_vertices() == v && g.n_outputs() <= 8)
                by_v_outs[v][g.n_outputs()].push_back(g);
    }
    long accepted = 0;
    std::string bad;
    std::vector<const DirectedGraph*> tuple;
    std::function<void(int, int, const DirectedGraph&)> build =
        [&](int v_budget, int outs_needed, const DirectedGraph& lower) {
            if (!bad.empty()) return;
            if (outs_needed == 0) {
                int jl = lower.n_inputs();
                std::vector<int> perm(jl);
                std::iota(perm.begin(), perm.end(), 0);
                do {
                    GraftingPattern p;
                    for (auto* u : tuple) p.uppers.push_back(*u);
                    p.lower = lower;
                    p.matching = perm;
                    DirectedGraph glued = graft(p);
                    int expect = lower.loop_genus() + jl - (int)tuple.size();
                    for (auto* u : tuple) expect += u->loop_genus();
                    if (glued.loop_genus() != expect) {
                        bad = "genus mismatch on a " +
                              std::to_string(glued.n_vertices()) + "-vertex glue";
                        return;
                    }
                    ++accepted;
                } while (std::next_permutation(perm.begin(), perm.end()));
                return;
            }
            for (int v = 1; v <= v_budget; ++v)
                for (int k = 1; k <= outs_needed; ++k)
                    for (const auto& g : by_v_outs[v][k]) {
                        tuple.push_back(&g);
                        build(v_budget - v, outs_needed - k, lower);
                        tuple.pop_back();
                    }
        };
    for (int vl = 1; vl <= 4; ++vl)
        for (const auto& outs : by_v_outs[vl])
            for (const auto& lower : outs) {
                if (lower.n_inputs() == 0) continue;
                build(5 - vl, lower.n_inputs(), lower);
            }
    if (!bad.empty()) return fail(bad);
    return ok(std::to_string(accepted) + " grafting patterns, formula exact");
}

// 3: every generator-decorated graph up to five vertices reduces to the
// same normal form under every admissible contraction order
Outcome confluence() {
    auto graphs = enumerate_generator_graphs(5);
    for (const auto& g : graphs) {
        ReduceResult r = reduce_all_orders(g, 2); // throws on any disagreement
        (void)r;
    }
    return ok(std::to_string(graphs.size()) + " graphs, all orders agree");
}

// 4: the square of the two-part differential vanishes on the whole
// truncated basis, arity j+k <= 4, weight <= 3, conserved genus <= 2
Outcome dsq_zero() {
    long basis_total = 0;
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k + j <= 4; ++k) {
            TruncatedComplex tc = truncated_complex(j, k, 3, 2, 2);
            basis_total += (long)tc.basis.size();
            std::map<int, std::map<int, Rational>> by_source;
            for (const auto& [key, c] : tc.dmat) by_source[key.second][key.first] = c;
            for (const auto& [src, col] : by_source) {
                std::map<int, Rational> sq;
                for (const auto& [mid, c1] : col) {
                    auto it = by_source.find(mid);
                    if (it == by_source.end()) continue;
                    for (const auto& [dst, c2] : it->second) sq[dst] += c1 * c2;
                }
                for (const auto& [dst, c] : sq)
                    if (c != Rational(0)) {
                        std::ostringstream os;
                        os << "d^2 != 0 from basis element " << tc.basis[src].serialize()
                           << " at (" << j << "," << k << ")";
                        return fail(os.str());
                    }
            }
        }
    return ok("square zero on " + std::to_string(basis_total) + " basis elements");
}

// 5: the handle operator on the unit carries the Euler characteristic as
// its top-class coefficient, for all four shipped algebras
Outcome euler_numbers() {
    const std::vector<std::pair<std::string, Rational>> expected = {
        {"s2", Rational(2)}, {"t2", Rational(0)}, {"s3", Rational(0)}, {"cp2", Rational(3)}};
    std::ostringstream seen;
    for (const auto& [name, want] : expected) {
        FrobAlgebra a = load_alg(data_path(name + ".alg"));
        Rational chi = euler_check(a);
        if (chi != want)
            return fail(name + ": chi = " + chi.str() + ", expected " + want.str());
        MultiMap handle = genus_operation(a, 1, 1, 1);
        int top = -1;
        for (int i = 0; i < a.space.dim(); ++i)
            if (a.space.degree(i) == a.n) {
                if (top >= 0) return fail(name + ": top class not unique");
                top = i;
            }
        if (top < 0) return fail(name + ": no top class");
        if (handle.entry(top, a.unit) != chi)
            return fail(name + ": handle coefficient " +
                        handle.entry(top, a.unit).str() + " != chi " + chi.str());
        seen << " " << name << "=" << chi.str();
    }
    return ok("chi" + seen.str() + ", top-class coefficients agree");
}

// 6: strict targets resolve through weight 3 with every filler zero
Outcome strict_resolutions() {
    for (const std::string name : {"s2", "t2"}) {
        FrobAlgebra a = load_alg(data_path(name + ".alg"));
        ResolutionResult res = run_resolution(a, 3);
        if (!res.all_filled) return fail(name + ": unfilled obstruction");
        if (!res.audit_passed) return fail(name + ": audit failed");
        for (const auto& rep : res.reports)
            if (!rep.filler.is_zero())
                return fail(name + ": nonzero filler at weight " +
                            std::to_string(rep.weight));
    }
    return ok("s2 and t2 resolve through weight 3, all fillers zero");
}

// 7: the perturbed target needs (and finds) a nonzero filler; the broken
// target stops at weight 2 with a nonzero obstruction class
Outcome perturbed_targets() {
    FrobAlgebra good = load_alg(data_path("fixtures/s2_exact_defect.alg"));
    ResolutionResult res = run_resolution(good, 3);
    if (!res.all_filled) return fail("perturbed: unfilled obstruction");
    if (!res.audit_passed) return fail("perturbed: audit failed");
    int nonzero = 0;
    for (const auto& rep : res.reports)
        if (!rep.filler.is_zero()) ++nonzero;
    if (nonzero == 0) return fail("perturbed: all fillers zero");

    FrobAlgebra broken = load_alg(data_path("fixtures/s2_broken.alg"));
    ResolutionResult bad = run_resolution(broken, 3);
    if (bad.all_filled) return fail("broken: resolved but should obstruct");
    bool classed = false;
    for (const auto& rep : bad.reports) {
        if (rep.filled) continue;
        if (rep.weight != 2)
            return fail("broken: obstruction at weight " + std::to_string(rep.weight) +
                        ", expected 2");
        if (rep.cycle.is_zero() || rep.homology_class.empty())
            return fail("broken: obstruction without a nonzero class");
        classed = true;
    }
    if (!classed) return fail("broken: no unfilled report");
    return ok(std::to_string(nonzero) + " nonzero fillers found; broken target "
              "obstructs at weight 2 with a nonzero class");
}

// 8: the Killing construction satisfies every relation on semisimple
// inputs and rejects a degenerate form
Outcome killing_cobrackets() {
    for (const std::string name : {"sl2", "so3"}) {
        LieAlgebraData l = load_lie(data_path(name + ".lie"));
        DiLieData d = cobracket_from_killing(l);
        RelationDefects rd = dilie_relations_check(d);
        for (const std::string key :
             {"co_jacobi", "cobracket_coantisym", "module"}) {
            auto it = rd.defects.find(key);
            if (it == rd.defects.end()) return fail(name + ": missing defect " + key);
            if (it->second != Rational(0))
                return fail(name + ": nonzero " + key + " defect " + it->second.str());
        }
        if (!rd.all_zero()) return fail(name + ": nonzero defect");
    }
    try {
        cobracket_from_killing(load_lie(data_path("heisenberg3.lie")));
        return fail("heisenberg3: degenerate form not rejected");
    } catch (const math_error& e) {
        if (std::string(e.what()).find("degenerate") == std::string::npos)
            return fail("heisenberg3: unexpected rejection: " + std::string(e.what()));
    }
    return ok("sl2 and so3 defect-free; heisenberg3 rejected as degenerate");
}

// 9: dimensions and degrees of the componentwise tensor match sector by
// sector through total arity 5
Outcome tensor_components() {
    HadamardReport rep = hadamard_check(2, 5);
    if (!rep.ok) {
        for (const auto& line : rep.lines)
            if (line.find("MISMATCH") != std::string::npos) return fail(line);
        return fail("mismatch without a line");
    }
    if (rep.lines.size() != 10)
        return fail("expected 10 sectors, saw " + std::to_string(rep.lines.size()));
    return ok("10 sectors match in dimension and degree");
}

// 10: duals validate and the pairing isomorphism intertwines every genus
// operation with j+k <= 4, genus <= 2
Outcome duality() {
    for (const std::string name : {"s2", "t2", "s3", "cp2"}) {
        FrobAlgebra a = load_alg(data_path(name + ".alg"));
        try {
            check_duality(a, 4, 2);
        } catch (const std::exception& e) {
            return fail(name + ": " + std::string(e.what()));
        }
    }
    return ok("four duals validate; pairing intertwines all windowed operations");
}

} // namespace

int main() {
    struct Row {
        const char* name;
        Outcome (*fn)();
    };
    const std::vector<Row> rows = {
        {"component degree bands", degree_bands},
        {"grafted graph genus", graft_genus},
        {"reduction confluence", confluence},
        {"differential squares to zero", dsq_zero},
        {"handle operator Euler numbers", euler_numbers},
        {"strict target resolutions", strict_resolutions},
        {"perturbed and broken targets", perturbed_targets},
        {"Killing cobracket relations", killing_cobrackets},
        {"componentwise tensor", tensor_components},
        {"duality intertwining", duality},
    };
    int passed = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            o = rows[i].fn();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        std::ostringstream line;
        line << "[" << (i + 1 < 10 ? " " : "") << i + 1 << "] "
             << (o.pass ? "PASS" : "FAIL") << "  " << rows[i].name << ": " << o.detail
             << "  (" << std::fixed << std::setprecision(1) << dt.count() << "s)";
        std::cout << line.str() << std::endl;
        if (o.pass) ++passed;
    }
    std::cout << "acceptance: " << passed << "/" << rows.size() << " passed"
              << std::endl;
    return passed == (int)rows.size() ? 0 : 1;
}
