#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "formacalc/script/interp.hpp"

using namespace formacalc;
using namespace formacalc::script;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json strip_wall(Json j) {
    if (j.is_object()) {
        j.erase("wall_ms");
        for (auto& [k, v] : j.items()) v = strip_wall(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_wall(v);
    }
    return j;
}

std::string error_code_of(const std::string& text) {
    InterpConfig cfg;
    Json report = run_script_text(text, cfg);
    if (report.contains("error")) return report["error"]["code"];
    for (const Json& st : report["statements"])
        if (st.contains("error")) return st["error"]["code"];
    return "";
}

} // namespace

TEST_CASE("lexing and parsing") {
    SECTION("positions on syntax errors") {
        try {
            Parser p("let f = d(x1;");
            p.parse_script();
            FAIL("expected a syntax error");
        } catch (const Error& e) {
            REQUIRE(e.code() == "E_SYNTAX");
            REQUIRE(std::string(e.what()).find("1:13") != std::string::npos);
        }
    }

    SECTION("caret disambiguation") {
        Parser p("let v = a ^^ b ^ 2;");
        Script s = p.parse_script();
        REQUIRE(s.statements.size() == 1);
        REQUIRE(print_statement(s.statements[0]) == "let v = a ^^ b ^ 2;");
    }

    SECTION("comments and whitespace are skipped") {
        Parser p("// leading comment\nspace (1, 0, 2); // trailing\nprint 1;\n");
        REQUIRE(p.parse_script().statements.size() == 2);
    }

    SECTION("morphism literal round trips") {
        std::string text = "let m = morphism src = (1, 1, 4) dst = (1, 0) { x'1 = x1 + y1; };";
        Parser p(text);
        Script s = p.parse_script();
        REQUIRE(print_statement(s.statements[0]) == text);
    }

    SECTION("check statements with multi-word suites") {
        Parser p("check poincare omega space = (2, 1) order = 3 samples = 50;");
        Script s = p.parse_script();
        REQUIRE(s.statements[0].name == "poincare omega");
        REQUIRE(s.statements[0].samples == 50);
        REQUIRE(print_statement(s.statements[0]) ==
                "check poincare omega space = (2, 1) order = 3 samples = 50;");
    }
}

TEST_CASE("parse-print-parse is a fixed point on the corpus") {
    std::filesystem::path dir(CORPUS_DIR);
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".fc") continue;
        ++count;
        std::string text = slurp(entry.path());
        Script s1 = Parser(text).parse_script();
        std::string p1 = print_script(s1);
        Script s2 = Parser(p1).parse_script();
        std::string p2 = print_script(s2);
        INFO(entry.path().filename().string());
        REQUIRE(p1 == p2);
    }
    REQUIRE(count >= 50);
}

TEST_CASE("reports are deterministic for a fixed (script, seed)") {
    std::filesystem::path dir(CORPUS_DIR);
    int checked = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".fc") continue;
        if (++checked > 8) break;
        std::string text = slurp(entry.path());
        InterpConfig cfg;
        cfg.seed = 42;
        Json a = strip_wall(run_script_text(text, cfg));
        Json b = strip_wall(run_script_text(text, cfg));
        INFO(entry.path().filename().string());
        REQUIRE(a == b);
    }
}

TEST_CASE("spec surface examples") {
    InterpConfig cfg;

    SECTION("let binds a function and d applies the coordinate formula") {
        Json r = run_script_text("space (1, 1, 4);\n"
                                 "let f = x1^2 * y1;\n"
                                 "print d(f);\n",
                                 cfg);
        REQUIRE(r["ok"].get<bool>());
        REQUIRE(r["statements"][1]["type"] == "function");
        std::string text = r["statements"][2]["text"];
        REQUIRE(text.find("dx1") != std::string::npos);
        REQUIRE(text.find("dy1") != std::string::npos);
    }

    SECTION("pairing example evaluates to 6") {
        Json r = run_script_text(
            "space (1, 1, 4);\nprint pair(3 * y1^2, density(bump(0, 1, norm) * ystar1^2));\n", cfg);
        REQUIRE(r["ok"].get<bool>());
        REQUIRE(r["statements"][1]["value"]["value"]["num"] == "6");
    }

    SECTION("bindings-only script gives an empty-results report with exit ok") {
        Json r = run_script_text("space (1, 0, 2);\nlet f = x1;\n", cfg);
        REQUIRE(r["ok"].get<bool>());
    }

    SECTION("failing check does not abort subsequent statements") {
        // An impossible bump makes the first statement fail; later ones run.
        Json r = run_script_text("space (1, 0, 2);\nprint pair(1, density(bump(1, 1)));\nprint 7;\n",
                                 cfg);
        REQUIRE(!r["ok"].get<bool>());
        REQUIRE(r["statements"][1].contains("error"));
        REQUIRE(r["statements"][2]["text"] == "7");
    }
}

TEST_CASE("negative corpus exercises distinct error codes") {
    std::filesystem::path dir(std::filesystem::path(CORPUS_DIR).parent_path() / "corpus_bad");
    std::set<std::string> codes;
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".fc") continue;
        ++count;
        std::string text = slurp(entry.path());
        std::string first = text.substr(0, text.find('\n'));
        std::string expect = first.substr(first.find("E_"));
        INFO(entry.path().filename().string());
        REQUIRE(error_code_of(text) == expect);
        codes.insert(expect);
    }
    REQUIRE(count >= 10);
    REQUIRE(codes.size() >= 7); // E_SYNTAX, E_UNBOUND, E_TYPE, E_SPACE, E_DEGREE, E_DIM, E_TRUNC, E_DOMAIN
}

TEST_CASE("repl-style single statements") {
    InterpConfig cfg;
    Interp interp(cfg);
    Json a = interp.run_one(Parser("space (1, 0, 3);").parse_statement());
    REQUIRE(a["kind"] == "space");
    Json b = interp.run_one(Parser("let f = x1 + 1;").parse_statement());
    REQUIRE(b["type"] == "function");
    Json c = interp.run_one(Parser("print value(f, 4);").parse_statement());
    REQUIRE(c["text"] == "5");
}
