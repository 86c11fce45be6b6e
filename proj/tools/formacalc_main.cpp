// formacalc: exact calculus on coordinate formal manifolds.
//
//   formacalc run <script> [--seed N] [--order R] [--max-degree D] [--json out.json]
//   formacalc check <suite...> --space n,k [--order R] [--samples S] [--seed N] [--json out.json]
//   formacalc repl

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "formacalc/formacalc.hpp"

namespace {

using namespace formacalc;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("FORMACALC_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring malformed FORMACALC_SEED\n";
        }
    }
    return 1;
}

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(2);
    }
    out << j.dump(2) << "\n";
}

void print_statement_line(const Json& entry) {
    std::string kind = entry.value("kind", "");
    if (entry.contains("error")) {
        std::cout << "[" << entry["error"]["code"].get<std::string>() << "] "
                  << entry["error"]["message"].get<std::string>() << "\n";
        return;
    }
    if (kind == "space") {
        const Json& s = entry["space"];
        std::cout << "space (" << s["n"] << ", " << s["k"] << ", order=" << s["order"] << ")\n";
    } else if (kind == "let") {
        std::cout << "let " << entry["name"].get<std::string>() << " : "
                  << entry["type"].get<std::string>() << "\n";
    } else if (kind == "print") {
        std::cout << entry["text"].get<std::string>() << "\n";
    } else if (kind == "check") {
        std::cout << (entry["pass"].get<bool>() ? "PASS" : "FAIL") << " "
                  << entry["suite"].get<std::string>() << " samples=" << entry["samples"]
                  << " (" << entry["wall_ms"] << " ms)";
        if (entry.contains("detail")) std::cout << " -- " << entry["detail"].get<std::string>();
        std::cout << "\n";
    }
}

int report_exit_code(const Json& report) { return report.value("ok", false) ? 0 : 1; }

int cmd_run(const std::string& path, script::InterpConfig cfg, const std::string& json_out) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Json report = script::run_script_text(buf.str(), cfg);
    if (report.contains("error"))
        std::cout << "[" << report["error"]["code"].get<std::string>() << "] "
                  << report["error"]["message"].get<std::string>() << "\n";
    for (const Json& entry : report["statements"]) print_statement_line(entry);
    if (!json_out.empty()) write_json(json_out, report);
    return report_exit_code(report);
}

int cmd_check(const std::vector<std::string>& words, const std::string& space_arg, int order,
              int samples, std::uint64_t seed, const std::string& json_out) {
    std::string suite;
    for (std::size_t i = 0; i < words.size(); ++i) suite += (i ? " " : "") + words[i];
    int n = 0, k = 0;
    if (std::sscanf(space_arg.c_str(), "%d,%d", &n, &k) != 2) {
        std::cerr << "error: --space wants n,k\n";
        return 2;
    }
    try {
        CheckResult res = run_check_suite(suite, Space(n, k, order), samples, seed);
        Json j;
        j["tool"] = "formacalc";
        j["seed"] = seed;
        j["suite"] = res.suite;
        j["space"] = to_json(res.space);
        j["samples"] = res.samples;
        j["pass"] = res.pass;
        if (!res.detail.empty()) j["detail"] = res.detail;
        j["wall_ms"] = res.wall_ms;
        if (suite == "poincare omega" || suite == "poincare dual") {
            // The homotopy suites carry a full per-degree certificate.
            j["certificate"] = to_json(certify_strong_exactness(
                suite == "poincare omega" ? "omega" : "dual", Space(n, k, order), samples, seed));
        }
        std::cout << (res.pass ? "PASS" : "FAIL") << " " << res.suite << " space=(" << n << "," << k
                  << ") order=" << order << " samples=" << res.samples << " (" << res.wall_ms
                  << " ms)";
        if (!res.detail.empty()) std::cout << " -- " << res.detail;
        std::cout << "\n";
        if (!json_out.empty()) write_json(json_out, j);
        return res.pass ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "[" << e.code() << "] " << e.what() << "\n";
        return 2;
    }
}

int cmd_repl(script::InterpConfig cfg) {
    script::Interp interp(cfg);
    std::string line;
    std::cout << "formacalc repl -- statements end with ';', empty line quits\n";
    while (true) {
        std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        if (line.empty()) break;
        try {
            script::Parser parser(line);
            script::Statement st = parser.parse_statement();
            Json entry = interp.run_one(st);
            print_statement_line(entry);
        } catch (const Error& e) {
            std::cout << "[" << e.code() << "] " << e.what() << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact calculus on coordinate formal manifolds"};
    app.require_subcommand(1);

    std::string script_path, json_out, space_arg = "1,1";
    std::vector<std::string> suite_words;
    long long seed = static_cast<long long>(default_seed());
    int order = 4, samples = 20, max_degree = 2;

    CLI::App* run = app.add_subcommand("run", "execute a script file");
    run->add_option("script", script_path, "script path")->required();
    run->add_option("--seed", seed, "random seed for check statements");
    run->add_option("--order", order, "default y-truncation order");
    run->add_option("--max-degree", max_degree, "generator degree bound for checks");
    run->add_option("--json", json_out, "write the machine-readable report here");

    CLI::App* check = app.add_subcommand("check", "run one identity suite");
    check->add_option("suite", suite_words, "suite name (may be several words)")->required();
    check->add_option("--space", space_arg, "n,k");
    check->add_option("--order", order, "y-truncation order");
    check->add_option("--samples", samples, "sample count");
    check->add_option("--seed", seed, "random seed");
    check->add_option("--json", json_out, "write the machine-readable report here");

    CLI::App* repl = app.add_subcommand("repl", "line-oriented interactive mode");
    repl->add_option("--seed", seed, "random seed for check statements");
    repl->add_option("--order", order, "default y-truncation order");

    CLI11_PARSE(app, argc, argv);

    formacalc::script::InterpConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.default_order = order;
    cfg.default_samples = samples;
    cfg.limits.max_xdeg = static_cast<unsigned>(max_degree);

    if (run->parsed()) return cmd_run(script_path, cfg, json_out);
    if (check->parsed())
        return cmd_check(suite_words, space_arg, order, samples, cfg.seed, json_out);
    return cmd_repl(cfg);
}
