// Command-line front end: derives relations, operators and flows of the
// coupled hierarchy and runs the verification suites.
//
// Exit codes: 0 ok, 1 verification fail, 2 insufficient precision,
// 3 usage error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cbkp/cbkp.hpp"

namespace {

enum class Format { text, json_fmt, latex };

struct Config {
    unsigned depth = 6;
    bool depth_explicit = false;
    Format format = Format::text;
    std::string out_path;
    std::uint64_t seed = 0;
};

int emit(const Config& cfg, const std::string& body) {
    if (cfg.out_path.empty()) {
        std::cout << body;
        if (!body.empty() && body.back() != '\n') std::cout << '\n';
        return 0;
    }
    std::ofstream f(cfg.out_path);
    if (!f) {
        std::cerr << "cannot open " << cfg.out_path << " for writing\n";
        return 3;
    }
    f << body;
    if (!body.empty() && body.back() != '\n') f << '\n';
    return 0;
}

std::string render(const Config& cfg, const cbkp::DiffPoly& p) {
    switch (cfg.format) {
        case Format::json_fmt: return cbkp::to_json(p).dump(2);
        case Format::latex: return cbkp::to_latex(p);
        default: return cbkp::to_text(p);
    }
}

std::string render(const Config& cfg, const cbkp::PsiDO& p) {
    switch (cfg.format) {
        case Format::json_fmt: return cbkp::to_json(p).dump(2);
        case Format::latex: return cbkp::to_latex(p);
        default: return cbkp::to_text(p);
    }
}

int cmd_relations(const Config& cfg, unsigned max_index) {
    if (max_index > cfg.depth) {
        std::cerr << "relations: index " << max_index << " exceeds depth " << cfg.depth << "\n";
        return 2;
    }
    cbkp::RelationTable table = cbkp::build_relation_table(cfg.depth);
    if (cfg.format == Format::json_fmt) {
        cbkp::json dv = cbkp::json::array(), dw = cbkp::json::array();
        for (unsigned m = 0; m <= max_index; ++m) {
            dv.push_back(cbkp::to_json(table.dv(m)));
            dw.push_back(cbkp::to_json(table.dw(m)));
        }
        return emit(cfg, cbkp::json{{"depth", cfg.depth}, {"maxIndex", max_index},
                                    {"dv", dv}, {"dw", dw}}
                             .dump(2));
    }
    std::ostringstream os;
    for (unsigned m = 0; m <= max_index; ++m) {
        if (cfg.format == Format::latex)
            os << "\\partial_2(v_{" << m << "}) = " << cbkp::to_latex(table.dv(m)) << "\n";
        else
            os << "d2(v" << m << ") = " << cbkp::to_text(table.dv(m)) << "\n";
    }
    for (unsigned l = 0; l <= max_index; ++l) {
        if (cfg.format == Format::latex)
            os << "\\partial_1(w_{" << l << "}) = " << cbkp::to_latex(table.dw(l)) << "\n";
        else
            os << "d1(w" << l << ") = " << cbkp::to_text(table.dw(l)) << "\n";
    }
    return emit(cfg, os.str());
}

int cmd_operator(const Config& cfg, const std::string& kind, int i, unsigned n) {
    cbkp::RelationTable table = cbkp::build_relation_table(cfg.depth);
    cbkp::PsiDO op = kind == "A" ? cbkp::compute_A(i, n, cfg.depth, table)
                                 : cbkp::compute_B(i, n, cfg.depth, table);
    return emit(cfg, render(cfg, op));
}

int cmd_flow(const Config& cfg, const std::string& which, unsigned n, const std::string& gen) {
    cbkp::GenKind kind;
    std::uint32_t index = 0;
    if (gen == "u") {
        kind = cbkp::GenKind::U;
    } else if (gen.size() >= 2 && (gen[0] == 'v' || gen[0] == 'w')) {
        kind = gen[0] == 'v' ? cbkp::GenKind::V : cbkp::GenKind::W;
        index = static_cast<std::uint32_t>(std::stoul(gen.substr(1)));
    } else {
        std::cerr << "flow: unknown generator '" << gen << "' (expected u, v<m> or w<l>)\n";
        return 3;
    }
    cbkp::RelationTable table = cbkp::build_relation_table(cfg.depth);
    cbkp::DiffPoly value;
    if (which == "reduced") {
        value = cbkp::reduced_flow(n, kind, index, cfg.depth, table);
    } else {
        value = cbkp::flow_on_generator(std::stoi(which), n, kind, index, cfg.depth, table);
    }
    return emit(cfg, render(cfg, value));
}

std::string report_table(const std::vector<cbkp::CheckReport>& reports) {
    std::ostringstream os;
    std::size_t idw = 16;
    for (const auto& r : reports) idw = std::max(idw, r.check_id.size());
    for (const auto& r : reports) {
        os << std::left << std::setw(static_cast<int>(idw) + 2) << r.check_id
           << std::setw(28) << cbkp::to_string(r.status) << std::right << std::fixed
           << std::setprecision(1) << std::setw(9) << r.elapsed_ms << " ms  "
           << r.params.dump();
        if (r.retried_from) os << "  (retried from K=" << *r.retried_from << ")";
        os << "\n";
    }
    int pass = 0, fail = 0, insuff = 0;
    for (const auto& r : reports) {
        if (r.status == cbkp::CheckStatus::pass) ++pass;
        if (r.status == cbkp::CheckStatus::fail) ++fail;
        if (r.status == cbkp::CheckStatus::insufficient_precision) ++insuff;
    }
    os << reports.size() << " checks: " << pass << " passed, " << fail << " failed, " << insuff
       << " insufficient precision\n";
    return os.str();
}

int cmd_verify(const Config& cfg, const std::string& suite_name) {
    auto suite = cbkp::suite_from_string(suite_name);
    if (!suite) {
        std::cerr << "verify: unknown suite '" << suite_name << "'\n";
        return 3;
    }
    cbkp::SuiteOptions opt;
    opt.depth = cfg.depth;
    opt.seed = cfg.seed;
    // An explicitly pinned depth is a hard cap: no silent retry deeper.
    opt.retry_deeper = !cfg.depth_explicit;
    cbkp::Workspace ws;
    std::vector<cbkp::CheckReport> reports = cbkp::run_suite(ws, *suite, opt);
    std::string body;
    if (cfg.format == Format::json_fmt) {
        cbkp::json arr = cbkp::json::array();
        for (const auto& r : reports) arr.push_back(cbkp::to_json(r));
        body = arr.dump(2);
    } else {
        body = report_table(reports);
    }
    const int rc = emit(cfg, body);
    if (rc != 0) return rc;
    return cbkp::suite_exit_code(reports);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled BKP hierarchy engine"};
    app.require_subcommand(1);

    Config cfg;
    if (const char* env = std::getenv("CBKP_DEPTH")) {
        try {
            cfg.depth = static_cast<unsigned>(std::stoul(env));
        } catch (...) {
            std::cerr << "invalid CBKP_DEPTH value '" << env << "'\n";
            return 3;
        }
    }

    std::string format = "text";
    std::string out_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--depth", cfg.depth, "series truncation depth K")
            ->check(CLI::NonNegativeNumber)
            ->each([&](const std::string&) { cfg.depth_explicit = true; });
        sub->add_option("--format", format, "output format: text|json|latex");
        sub->add_option("--out", out_path, "write output to a file");
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    };

    auto* rel = app.add_subcommand("relations", "rewriting rules d2(v_m), d1(w_l)");
    unsigned max_index = 1;
    rel->add_option("maxIndex", max_index, "largest generator index")->required();
    add_common(rel);

    auto* oper = app.add_subcommand("operator", "an A or B operator of the hierarchy");
    std::string op_kind;
    int op_i = 1;
    unsigned op_n = 0;
    oper->add_option("kind", op_kind, "A or B")->required()->check(CLI::IsMember({"A", "B"}));
    oper->add_option("i", op_i, "side index, 1 or 2")->required()->check(CLI::IsMember({1, 2}));
    oper->add_option("n", op_n, "flow level")->required();
    add_common(oper);

    auto* flow = app.add_subcommand("flow", "evolution of a generator under d/dt_{i,n}");
    std::string flow_which, flow_gen;
    unsigned flow_n = 0;
    flow->add_option("i", flow_which, "1, 2 or reduced")
        ->required()
        ->check(CLI::IsMember({"1", "2", "reduced"}));
    flow->add_option("n", flow_n, "flow level")->required();
    flow->add_option("gen", flow_gen, "generator: u, v<m> or w<l>")->required();
    add_common(flow);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    verify->add_option("suite", suite, "all|lemmas|theorem|tau|nv|properties");
    add_common(verify);

    auto* nv = app.add_subcommand("nv", "alias for: verify nv");
    add_common(nv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 3;
    }

    if (format == "json")
        cfg.format = Format::json_fmt;
    else if (format == "latex")
        cfg.format = Format::latex;
    else if (format != "text") {
        std::cerr << "unknown format '" << format << "'\n";
        return 3;
    }
    cfg.out_path = out_path;

    try {
        if (rel->parsed()) return cmd_relations(cfg, max_index);
        if (oper->parsed()) return cmd_operator(cfg, op_kind, op_i, op_n);
        if (flow->parsed()) return cmd_flow(cfg, flow_which, flow_n, flow_gen);
        if (verify->parsed()) return cmd_verify(cfg, suite);
        if (nv->parsed()) return cmd_verify(cfg, "nv");
    } catch (const cbkp::InsufficientPrecision& e) {
        std::cerr << "insufficient precision: " << e.what() << "\n";
        return 2;
    } catch (const cbkp::DepthExceeded& e) {
        std::cerr << "insufficient precision: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 3;
}
