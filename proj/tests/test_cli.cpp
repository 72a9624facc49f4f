#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "propcalc/frobalg.hpp"

// drives the installed binary end to end through std::system

namespace {

struct RunOut {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunOut run_cli(const std::string& args) {
    std::string out_path = "/tmp/propcalc_cli_out.txt";
    std::string err_path = "/tmp/propcalc_cli_err.txt";
    std::string cmd = std::string(PROPCALC_CLI_PATH) + " " + args + " > " + out_path +
                      " 2> " + err_path;
    int status = std::system(cmd.c_str());
    RunOut r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string data_path(const std::string& name) {
    return std::string(PROPCALC_DATA_DIR) + "/" + name;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("reduce prints the normal form") {
    RunOut r = run_cli("reduce " + data_path("graphs/mu.graph"));
    CHECK(r.code == 0);
    CHECK(r.out == "normal form: (2,1) genus 0 deg 0\n");

    // the two sides of the product/coproduct exchange reduce identically
    RunOut left = run_cli("reduce " + data_path("graphs/frob_left.graph"));
    RunOut right = run_cli("reduce " + data_path("graphs/frob_right.graph"));
    CHECK(left.code == 0);
    CHECK(left.out == right.out);
    CHECK(left.out == "normal form: (2,2) genus 0 deg 2\n");

    // structural degree flows through --n
    RunOut n4 = run_cli("reduce " + data_path("graphs/frob_left.graph") + " --n 4");
    CHECK(n4.out == "normal form: (2,2) genus 0 deg 4\n");
}

TEST_CASE("reduce rejects malformed graphs with a port diagnostic") {
    RunOut r = run_cli("reduce " + data_path("graphs/dangling.graph"));
    CHECK(r.code == 2);
    CHECK(r.err.find("port") != std::string::npos);

    RunOut missing = run_cli("reduce /nonexistent/x.graph");
    CHECK(missing.code == 2);
}

TEST_CASE("compose grafts uppers into the lower graph") {
    std::string mu = data_path("graphs/mu.graph");
    std::string delta = data_path("graphs/delta.graph");
    RunOut r = run_cli("compose " + mu + " " + delta);
    CHECK(r.code == 0);
    CHECK(r.out == "normal form: (2,2) genus 0 deg 2\n");

    RunOut comb = run_cli("compose " + mu + " " + mu + " " + mu);
    CHECK(comb.code == 0);
    CHECK(comb.out == "normal form: (4,1) genus 0 deg 0\n");

    RunOut bad = run_cli("compose " + mu + " " + mu);
    CHECK(bad.code == 2);
}

TEST_CASE("dsq audits the square of the differential") {
    RunOut r = run_cli("dsq 1 1 --max-weight 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("d^2 = 0: PASS") != std::string::npos);

    RunOut s = run_cli("dsq 2 1 --max-weight 2 --format structured");
    CHECK(s.code == 0);
    CHECK(s.out.find("propcalc-report v1 dsq") == 0);
    CHECK(s.out.find("dsq pass=1") != std::string::npos);

    RunOut big = run_cli("dsq 4 4 --max-weight 3");
    CHECK(big.code == 3);
    RunOut deep = run_cli("dsq 1 1 --max-weight 9");
    CHECK(deep.code == 3);
    RunOut bad = run_cli("dsq 0 1");
    CHECK(bad.code == 2);
}

TEST_CASE("resolve reports fillers and the audit") {
    RunOut r = run_cli("resolve " + data_path("s2.alg") + " --max-weight 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("all filled: yes") != std::string::npos);
    CHECK(r.out.find("audit: PASS") != std::string::npos);

    RunOut s = run_cli("resolve " + data_path("fixtures/s2_exact_defect.alg") +
                       " --max-weight 2 --format structured");
    CHECK(s.code == 0);
    CHECK(s.out.find("filler=nonzero") != std::string::npos);
    CHECK(s.out.find("summary all_filled=1 audit=1") != std::string::npos);

    RunOut broken = run_cli("resolve " + data_path("fixtures/s2_broken.alg") +
                            " --max-weight 2");
    CHECK(broken.code == 1);
    CHECK(broken.out.find("unfilled obstruction at weight 2") != std::string::npos);
    CHECK(broken.out.find("all filled: no") != std::string::npos);
}

TEST_CASE("structured output is byte-identical across runs") {
    std::string args = "resolve " + data_path("fixtures/s2_exact_defect.alg") +
                       " --max-weight 2 --format structured";
    RunOut a = run_cli(args);
    RunOut b = run_cli(args);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    RunOut g1 = run_cli("graphs 2 2 --max-vertices 3 --format structured");
    RunOut g2 = run_cli("graphs 2 2 --max-vertices 3 --format structured");
    CHECK(g1.out == g2.out);
}

TEST_CASE("euler prints the characteristic") {
    RunOut s2 = run_cli("euler " + data_path("s2.alg"));
    CHECK(s2.code == 0);
    CHECK(s2.out == "chi = 2\n");
    RunOut cp2 = run_cli("euler " + data_path("cp2.alg"));
    CHECK(cp2.out == "chi = 3\n");
    RunOut t2 = run_cli("euler " + data_path("t2.alg"));
    CHECK(t2.out == "chi = 0\n");
}

TEST_CASE("dualize emits the dual algebra in the input grammar") {
    RunOut r = run_cli("dualize " + data_path("s2.alg"));
    CHECK(r.code == 0);
    // the dump must load and validate as a strict Frobenius algebra
    propcalc::FrobAlgebra d = propcalc::parse_alg(r.out);
    propcalc::validate_frobenius(d);
    CHECK(d.n == 2);
    CHECK(d.space.dim() == 2);
    CHECK(r.out.find("basis 1* 2") != std::string::npos);
    CHECK(r.out.find("unit v*") != std::string::npos);
}

TEST_CASE("dilie reports relation defects") {
    RunOut r = run_cli("dilie " + data_path("sl2.lie"));
    CHECK(r.code == 0);
    CHECK(r.out.find("relations: PASS") != std::string::npos);
    CHECK(r.out.find("defect module: 0") != std::string::npos);

    RunOut h = run_cli("dilie " + data_path("heisenberg3.lie"));
    CHECK(h.code == 1);
    CHECK(h.err.find("degenerate") != std::string::npos);
}

TEST_CASE("tensor-check compares the componentwise tensor") {
    RunOut r = run_cli("tensor-check 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("tensor check: PASS") != std::string::npos);
}

TEST_CASE("graphs enumerates generator graphs") {
    RunOut r = run_cli("graphs 2 1 --max-vertices 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("count: ") == 0);
    CHECK(r.out.find("v0:mu(2,1)") != std::string::npos);

    RunOut wide = run_cli("graphs 2 1 --max-vertices 9");
    CHECK(wide.code == 3);
}

TEST_CASE("argument errors exit with code 2") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("reduce").code == 2);
    CHECK(run_cli("dsq 1 1 --max-weight x").code == 2);
    CHECK(run_cli("dsq 1 1 --format yaml").code == 2);
    CHECK(run_cli("help").code == 0);
}

}
