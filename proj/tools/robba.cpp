// Command-line front end: reads a JSON job, runs one pipeline, writes a JSON
// report with sorted keys. Verdicts exit 0; failures map to nonzero codes.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "padic/job.hpp"

namespace {

struct Options {
    std::string input;
    std::string out;
    long prec = -1;
    long trunc = -1;
    long level = -1;
    long override_M = -1;
    std::string tail_window;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--input", opt.input, "job JSON file (default: stdin)");
    cmd->add_option("--out", opt.out, "report file (default: stdout)");
    cmd->add_option("--prec", opt.prec, "reported precision in base-p digits");
    cmd->add_option("--trunc", opt.trunc, "series truncation degree");
    cmd->add_option("--level", opt.level, "tower level s");
    cmd->add_option("--override-M", opt.override_M, "raise the block twist top index");
    cmd->add_option("--tail-window", opt.tail_window, "growth tail fraction, e.g. 1/2");
}

int run_one(const std::string& command, const Options& opt) {
    nlohmann::json raw;
    try {
        if (opt.input.empty()) {
            std::stringstream ss;
            ss << std::cin.rdbuf();
            raw = nlohmann::json::parse(ss.str());
        } else {
            std::ifstream in(opt.input);
            if (!in) {
                std::cerr << "cannot open " << opt.input << "\n";
                return 2;
            }
            raw = nlohmann::json::parse(in);
        }
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "{\"error\":{\"code\":\"ParseError\",\"message\":\"" << e.what()
                  << "\"}}\n";
        return 2;
    }
    if (opt.prec >= 0) raw["precision"] = opt.prec;
    if (opt.trunc >= 0) raw["truncation"] = opt.trunc;
    if (opt.level >= 0) raw["level"] = opt.level;
    if (opt.override_M >= 0) raw["override_M"] = opt.override_M;
    if (!opt.tail_window.empty()) raw["tail_window"] = opt.tail_window;

    padic::RunResult res = padic::run(command, raw);
    std::string text = res.report.dump(2) + "\n";
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.out);
        f << text;
    }
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-one p-adic differential operators over Lubin-Tate towers"};
    app.require_subcommand(1);
    Options opt;

    std::string picked;
    auto plain = [&](const std::string& name, const std::string& help) {
        CLI::App* c = app.add_subcommand(name, help);
        add_common(c, opt);
        c->callback([&picked, name]() { picked = name; });
        return c;
    };

    plain("solvable", "solvability criterion, blocks and irregularity");
    plain("irregularity", "irregularity of a solvable operator");
    plain("decompose", "co-monomial decomposition of a Witt vector over Laurent series");
    plain("classify", "isomorphism-class key");
    plain("radius", "radius of convergence estimate at rho = p^-r");
    plain("ah-exp", "universal Artin-Hasse exponential over exact rationals");
    plain("pi-exp", "pi-exponential e_d(lambda, T)");
    plain("theta-eval", "theta series evaluated at T = 1");

    CLI::App* witt = app.add_subcommand("witt", "Witt vector operations");
    witt->require_subcommand(1);
    for (const char* sub : {"add", "mul", "ghost", "unghost", "frob", "versch"}) {
        CLI::App* c = witt->add_subcommand(sub, "");
        add_common(c, opt);
        c->callback([&picked, sub]() { picked = std::string("witt-") + sub; });
    }
    CLI::App* lt = app.add_subcommand("lt", "Lubin-Tate operations");
    lt->require_subcommand(1);
    for (const char* sub : {"validate", "group-law", "bracket", "torsion", "iso"}) {
        CLI::App* c = lt->add_subcommand(sub, "");
        add_common(c, opt);
        c->callback([&picked, sub]() { picked = std::string("lt-") + sub; });
    }

    CLI11_PARSE(app, argc, argv);
    return run_one(picked, opt);
}
