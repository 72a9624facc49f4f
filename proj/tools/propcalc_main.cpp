// Command-line driver. Every subcommand prints a deterministic report;
// structured mode is line-delimited with a versioned header so runs can
// be diffed byte for byte.
//
// exit codes: 0 success, 1 mathematical failure, 2 bad input, 3 resource bound

#include <fstream>
#include <iostream>
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

const char* usage_text =
    "usage: propcalc <subcommand> [args] [flags]\n"
    "\n"
    "subcommands:\n"
    "  reduce <graph-file>          normal form of a generator-decorated graph\n"
    "  compose <upper>... <lower>   reduce each file, compose uppers into the lower\n"
    "  dsq <j> <k>                  square-zero audit of the graph differential\n"
    "  resolve <algebra-file>       weight-by-weight obstruction run\n"
    "  euler <algebra-file>         Euler characteristic from the handle operator\n"
    "  dualize <algebra-file>       dual algebra, printed in the input grammar\n"
    "  dilie <lie-file>             Killing cobracket and its relation defects\n"
    "  tensor-check [max-total]     componentwise tensor comparison (default 5)\n"
    "  graphs <j> <k>               generator-graph enumeration\n"
    "\n"
    "flags:\n"
    "  --n <int>            structural degree (default 2)\n"
    "  --max-weight <int>   weight bound (default 2)\n"
    "  --max-vertices <int> vertex bound (default 3)\n"
    "  --format <mode>      human or structured (default human)\n";

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> args; // positional, flags stripped
    int n = 2;
    int max_weight = 2;
    int max_vertices = 3;
    bool structured = false;
};

int parse_int_arg(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw input_error("");
        return v;
    } catch (const std::exception&) {
        throw input_error("expected an integer for " + what + ", got '" + s + "'");
    }
}

RunConfig parse_args(int argc, char** argv) {
    RunConfig cfg;
    if (argc < 2) throw input_error("missing subcommand");
    cfg.subcommand = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string a = argv[i];
        auto need_value = [&](const char* flag) -> std::string {
            if (i + 1 >= argc) throw input_error(std::string(flag) + " needs a value");
            return argv[++i];
        };
        if (a == "--n") {
            cfg.n = parse_int_arg(need_value("--n"), "--n");
        } else if (a == "--max-weight") {
            cfg.max_weight = parse_int_arg(need_value("--max-weight"), "--max-weight");
        } else if (a == "--max-vertices") {
            cfg.max_vertices = parse_int_arg(need_value("--max-vertices"), "--max-vertices");
        } else if (a == "--format") {
            std::string v = need_value("--format");
            if (v == "structured") cfg.structured = true;
            else if (v == "human") cfg.structured = false;
            else throw input_error("--format must be human or structured");
        } else if (!a.empty() && a[0] == '-') {
            throw input_error("unknown flag '" + a + "'");
        } else {
            cfg.args.push_back(a);
        }
    }
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void header(const RunConfig& cfg, const char* comment_prefix = "") {
    if (cfg.structured)
        std::cout << comment_prefix << "propcalc-report v1 " << cfg.subcommand << "\n";
}

std::string one_line(std::string s) {
    for (auto& c : s)
        if (c == '\n') c = ';';
    return s;
}

void want_args(const RunConfig& cfg, size_t lo, size_t hi) {
    if (cfg.args.size() < lo || cfg.args.size() > hi)
        throw input_error("wrong argument count for '" + cfg.subcommand + "'");
}

void print_elem(const RunConfig& cfg, const ReduceResult& r) {
    if (cfg.structured) {
        std::cout << "elem j=" << r.elem.j << " k=" << r.elem.k
                  << " genus=" << r.elem.genus << " deg=" << r.elem.deg
                  << " in_range=" << (r.in_range ? 1 : 0) << "\n";
    } else if (r.in_range) {
        std::cout << "normal form: " << frob_str(r.elem) << "\n";
    } else {
        std::cout << "normal form: " << frob_str(r.elem) << " (out of range, zero)\n";
    }
}

int cmd_reduce(const RunConfig& cfg) {
    want_args(cfg, 1, 1);
    DirectedGraph g = DirectedGraph::parse(read_file(cfg.args[0]));
    g.validate();
    ReduceResult r = reduce_graph(g, cfg.n);
    header(cfg);
    print_elem(cfg, r);
    return 0;
}

int cmd_compose(const RunConfig& cfg) {
    want_args(cfg, 2, 8);
    std::vector<FrobElem> uppers;
    bool in_range = true;
    for (size_t i = 0; i + 1 < cfg.args.size(); ++i) {
        DirectedGraph g = DirectedGraph::parse(read_file(cfg.args[i]));
        g.validate();
        ReduceResult r = reduce_graph(g, cfg.n);
        uppers.push_back(r.elem);
        in_range = in_range && r.in_range;
    }
    DirectedGraph gl = DirectedGraph::parse(read_file(cfg.args.back()));
    gl.validate();
    ReduceResult lower = reduce_graph(gl, cfg.n);
    in_range = in_range && lower.in_range;
    ReduceResult r;
    r.elem = frob_compose(uppers, lower.elem, cfg.n);
    r.in_range = in_range && frob_in_range(r.elem, cfg.n);
    header(cfg);
    print_elem(cfg, r);
    return 0;
}

int cmd_dsq(const RunConfig& cfg) {
    want_args(cfg, 2, 2);
    int j = parse_int_arg(cfg.args[0], "j");
    int k = parse_int_arg(cfg.args[1], "k");
    if (j < 1 || k < 1) throw input_error("j and k must be positive");
    if (j + k > 6) throw resource_error("arity window j+k <= 6 exceeded");
    if (cfg.max_weight > 4) throw resource_error("weight bound <= 4 exceeded");
    // genus cap 2: beyond it every class leaves the audited degree window
    TruncatedComplex tc = truncated_complex(j, k, cfg.max_weight, 2, cfg.n);

    // d^2 as a sparse matrix product, column by column
    std::map<int, std::map<int, Rational>> by_source;
    for (const auto& [key, c] : tc.dmat) by_source[key.second][key.first] = c;
    std::vector<int> failing;
    for (const auto& [src, col] : by_source) {
        std::map<int, Rational> sq;
        for (const auto& [mid, c1] : col) {
            auto it = by_source.find(mid);
            if (it == by_source.end()) continue;
            for (const auto& [dst, c2] : it->second) sq[dst] += c1 * c2;
        }
        for (const auto& [dst, c] : sq)
            if (c != Rational(0)) {
                failing.push_back(src);
                break;
            }
    }
    header(cfg);
    if (cfg.structured) {
        std::cout << "basis count=" << tc.basis.size() << "\n";
        for (int s : failing) std::cout << "fail x=" << tc.basis[s].serialize() << "\n";
        std::cout << "dsq pass=" << (failing.empty() ? 1 : 0) << "\n";
    } else {
        std::cout << "basis " << tc.basis.size() << "\n";
        std::cout << "d^2 = 0: " << (failing.empty() ? "PASS" : "FAIL") << "\n";
    }
    return failing.empty() ? 0 : 1;
}

int cmd_resolve(const RunConfig& cfg) {
    want_args(cfg, 1, 1);
    FrobAlgebra a = load_alg(cfg.args[0]);
    ResolutionResult res = run_resolution(a, cfg.max_weight);
    header(cfg);
    if (cfg.structured) {
        for (const auto& rep : res.reports) {
            std::cout << "obstruction weight=" << rep.weight
                      << " filled=" << (rep.filled ? 1 : 0)
                      << " filler=" << (rep.filler.is_zero() ? "zero" : "nonzero")
                      << " x=" << one_line(rep.x.serialize()) << "\n";
            for (const auto& line : rep.homology_class)
                std::cout << "class " << one_line(line) << "\n";
        }
        std::cout << "summary all_filled=" << (res.all_filled ? 1 : 0)
                  << " audit=" << (res.audit_passed ? 1 : 0) << "\n";
    } else {
        for (const auto& line : res.log) std::cout << line << "\n";
        for (const auto& rep : res.reports) {
            if (rep.filled) continue;
            std::cout << "unfilled obstruction at weight " << rep.weight << ": "
                      << one_line(rep.x.serialize()) << "\n";
            for (const auto& line : rep.homology_class)
                std::cout << "  class " << one_line(line) << "\n";
        }
        std::cout << "all filled: " << (res.all_filled ? "yes" : "no") << "\n";
        std::cout << "audit: " << (res.audit_passed ? "PASS" : "FAIL") << "\n";
    }
    return (res.all_filled && res.audit_passed) ? 0 : 1;
}

int cmd_euler(const RunConfig& cfg) {
    want_args(cfg, 1, 1);
    FrobAlgebra a = load_alg(cfg.args[0]);
    Rational chi = euler_check(a);
    header(cfg);
    std::cout << "chi = " << chi.str() << "\n";
    return 0;
}

int cmd_dualize(const RunConfig& cfg) {
    want_args(cfg, 1, 1);
    FrobAlgebra a = load_alg(cfg.args[0]);
    FrobAlgebra d = dualize(a);
    header(cfg, "# ");
    int dim = d.space.dim();
    TensorIndexer ix2(dim, 2);
    std::cout << "mode strict\n";
    std::cout << "n " << d.n << "\n";
    for (int i = 0; i < dim; ++i)
        std::cout << "basis " << d.space.name(i) << " " << d.space.degree(i) << "\n";
    std::cout << "unit " << d.space.name(d.unit) << "\n";
    for (const auto& [key, c] : d.mult.entries()) {
        auto in = ix2.tuple(key.second);
        std::cout << "mult " << d.space.name(in[0]) << " " << d.space.name(in[1])
                  << " " << d.space.name(static_cast<int>(key.first)) << " "
                  << c.str() << "\n";
    }
    for (const auto& [key, c] : d.pairing.entries()) {
        auto in = ix2.tuple(key.second);
        std::cout << "pair " << d.space.name(in[0]) << " " << d.space.name(in[1])
                  << " " << c.str() << "\n";
    }
    return 0;
}

int cmd_dilie(const RunConfig& cfg) {
    want_args(cfg, 1, 1);
    LieAlgebraData l = load_lie(cfg.args[0]);
    DiLieData d = cobracket_from_killing(l);
    RelationDefects rd = dilie_relations_check(d);
    header(cfg);
    if (cfg.structured) {
        std::cout << "algebra dim=" << l.dim << "\n";
        for (const auto& [name, v] : rd.defects)
            std::cout << "defect name=" << name << " value=" << v.str() << "\n";
        std::cout << "relations pass=" << (rd.all_zero() ? 1 : 0) << "\n";
    } else {
        std::cout << "dim " << l.dim << "\n";
        for (const auto& [name, v] : rd.defects)
            std::cout << "defect " << name << ": " << v.str() << "\n";
        std::cout << "relations: " << (rd.all_zero() ? "PASS" : "FAIL") << "\n";
    }
    return rd.all_zero() ? 0 : 1;
}

int cmd_tensor_check(const RunConfig& cfg) {
    want_args(cfg, 0, 1);
    int max_total = cfg.args.empty() ? 5 : parse_int_arg(cfg.args[0], "max-total");
    HadamardReport rep = hadamard_check(cfg.n, max_total);
    header(cfg);
    for (const auto& line : rep.lines)
        std::cout << (cfg.structured ? "sector " : "") << line << "\n";
    if (cfg.structured)
        std::cout << "tensor pass=" << (rep.ok ? 1 : 0) << "\n";
    else
        std::cout << "tensor check: " << (rep.ok ? "PASS" : "FAIL") << "\n";
    return rep.ok ? 0 : 1;
}

int cmd_graphs(const RunConfig& cfg) {
    want_args(cfg, 2, 2);
    int j = parse_int_arg(cfg.args[0], "j");
    int k = parse_int_arg(cfg.args[1], "k");
    if (j < 0 || k < 0) throw input_error("j and k must be nonnegative");
    if (cfg.max_vertices > 5) throw resource_error("vertex bound <= 5 exceeded");
    auto graphs = enumerate_graphs(j, k, cfg.max_vertices, generator_vertices());
    header(cfg);
    if (cfg.structured) {
        for (const auto& g : graphs) std::cout << "graph x=" << one_line(g.serialize()) << "\n";
        std::cout << "count n=" << graphs.size() << "\n";
    } else {
        std::cout << "count: " << graphs.size() << "\n";
        for (const auto& g : graphs) std::cout << "\n" << g.serialize() << "\n";
    }
    return 0;
}

int dispatch(const RunConfig& cfg) {
    if (cfg.subcommand == "reduce") return cmd_reduce(cfg);
    if (cfg.subcommand == "compose") return cmd_compose(cfg);
    if (cfg.subcommand == "dsq") return cmd_dsq(cfg);
    if (cfg.subcommand == "resolve") return cmd_resolve(cfg);
    if (cfg.subcommand == "euler") return cmd_euler(cfg);
    if (cfg.subcommand == "dualize") return cmd_dualize(cfg);
    if (cfg.subcommand == "dilie") return cmd_dilie(cfg);
    if (cfg.subcommand == "tensor-check") return cmd_tensor_check(cfg);
    if (cfg.subcommand == "graphs") return cmd_graphs(cfg);
    if (cfg.subcommand == "help" || cfg.subcommand == "--help") {
        std::cout << usage_text;
        return 0;
    }
    throw input_error("unknown subcommand '" + cfg.subcommand + "'");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(parse_args(argc, argv));
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (argc < 2) std::cerr << "\n" << usage_text;
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const math_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
