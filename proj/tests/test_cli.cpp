// End-to-end checks of the command-line tool: exit codes, format flags,
// determinism, environment handling. Usage: test_cli <path-to-cli>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cbkp/serialize.hpp"
#include "proc.hpp"

using namespace cbkp;
using cbkp::test::run;

namespace {

std::string g_cli;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::cout << (ok ? "ok" : "FAILED") << " - " << what << std::endl;
    if (!ok) ++g_failures;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-cli>\n";
        return 2;
    }
    g_cli = argv[1];

    auto rel = run(g_cli + " relations 1");
    check(rel.exit_code == 0, "relations exits 0");
    check(rel.output.find("d2(v0) = d1(u)") != std::string::npos, "relations lists d2(v0)");
    check(rel.output.find("d1(w0) = d2(u)") != std::string::npos, "relations lists d1(w0)");

    auto rel2 = run(g_cli + " relations 1");
    check(rel.output == rel2.output, "output is byte-deterministic");

    auto latex = run(g_cli + " relations 0 --format latex");
    check(latex.exit_code == 0 && latex.output.find("\\partial_2(v_{0})") != std::string::npos,
          "latex format");

    auto opA = run(g_cli + " operator A 1 0");
    check(opA.exit_code == 0 && opA.output == "d1\n", "operator A 1 0 is the derivation");

    auto opJ = run(g_cli + " operator A 2 1 --format json");
    check(opJ.exit_code == 0, "operator json exits 0");
    try {
        PsiDO a21 = psido_from_json(json::parse(opJ.output));
        check(a21.orientation() == Orientation::d2 && coeff_at(a21, 3) == DiffPoly::one(),
              "operator json parses");
        check(coeff_at(a21, 1) == Scalar(3) * DiffPoly::w(0), "operator json coefficient");
    } catch (const std::exception& e) {
        check(false, std::string("operator json parse: ") + e.what());
    }

    auto flow = run(g_cli + " flow 1 1 u");
    check(flow.exit_code == 0 && flow.output.find("d1^3(u)") != std::string::npos,
          "flow 1 1 u prints the third-order evolution");

    auto flow0 = run(g_cli + " flow 1 0 u");
    check(flow0.exit_code == 0 && flow0.output == "d1(u)\n", "flow 1 0 u identifies with d1");

    auto badgen = run(g_cli + " flow 1 1 q3");
    check(badgen.exit_code == 3, "unknown generator is a usage error");

    auto badsub = run(g_cli + " operator C 1 1");
    check(badsub.exit_code == 3, "unknown operator kind is a usage error");

    auto badsuite = run(g_cli + " verify nonsense");
    check(badsuite.exit_code == 3, "unknown suite is a usage error");

    auto nv = run(g_cli + " nv --depth 4");
    check(nv.exit_code == 0 && nv.output.find("nv_recovery") != std::string::npos,
          "nv alias runs the recovery check");

    auto pinned = run(g_cli + " verify lemmas --depth 0");
    check(pinned.exit_code == 2, "lemma suite at pinned depth 0 reports insufficient precision");

    auto deep = run(g_cli + " verify tau --depth 4");
    check(deep.exit_code == 0, "tau suite at depth 4 passes");

    auto out_file = run(g_cli + " relations 0 --out /tmp/cbkp_rel.txt");
    check(out_file.exit_code == 0, "--out exits 0");
    {
        std::ifstream f("/tmp/cbkp_rel.txt");
        std::stringstream ss;
        ss << f.rdbuf();
        check(ss.str().find("d2(v0) = d1(u)") != std::string::npos, "--out writes the output");
    }

    auto env_low = run("CBKP_DEPTH=0 " + g_cli + " relations 2");
    check(env_low.exit_code == 2, "environment depth caps the relations index");

    auto flag_wins = run("CBKP_DEPTH=0 " + g_cli + " relations 2 --depth 3");
    check(flag_wins.exit_code == 0, "explicit flag overrides the environment");

    auto env_bad = run("CBKP_DEPTH=xyz " + g_cli + " relations 1");
    check(env_bad.exit_code == 3, "malformed environment depth is a usage error");

    auto props = run(g_cli + " verify properties --seed 42");
    check(props.exit_code == 0, "property suite accepts a seed");

    auto json_suite = run(g_cli + " verify nv --depth 3 --format json");
    check(json_suite.exit_code == 0, "json suite output exits 0");
    try {
        json arr = json::parse(json_suite.output);
        check(arr.is_array() && arr.size() == 1 && arr.at(0).at("status") == "pass",
              "json suite output parses");
    } catch (const std::exception& e) {
        check(false, std::string("json suite parse: ") + e.what());
    }

    if (g_failures == 0) {
        std::cout << "all cli checks passed" << std::endl;
        return 0;
    }
    std::cout << g_failures << " cli checks failed" << std::endl;
    return 1;
}
