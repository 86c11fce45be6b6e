#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "formacalc/error.hpp"

namespace formacalc::script {

struct Pos {
    int line = 0;
    int col = 0;
};

[[noreturn]] inline void syntax_error(Pos p, const std::string& msg) {
    throw Error("E_SYNTAX", msg + " at " + std::to_string(p.line) + ":" + std::to_string(p.col));
}

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class Tok {
    End, Int, Ident,
    LParen, RParen, LBrace, RBrace, Comma, Semi, Eq,
    Plus, Minus, Star, Slash, Caret, DblCaret, Hash,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Pos pos;
};

class Lexer {
public:
    explicit Lexer(std::string src) : src_(std::move(src)) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_space();
        cur_.pos = {line_, col_};
        if (i_ >= src_.size()) {
            cur_ = {Tok::End, "", cur_.pos};
            return;
        }
        char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) num += take();
            cur_ = {Tok::Int, num, cur_.pos};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_' ||
                    src_[i_] == '\''))
                id += take();
            cur_ = {Tok::Ident, id, cur_.pos};
            return;
        }
        switch (c) {
            case '(': cur_ = {Tok::LParen, "(", cur_.pos}; break;
            case ')': cur_ = {Tok::RParen, ")", cur_.pos}; break;
            case '{': cur_ = {Tok::LBrace, "{", cur_.pos}; break;
            case '}': cur_ = {Tok::RBrace, "}", cur_.pos}; break;
            case ',': cur_ = {Tok::Comma, ",", cur_.pos}; break;
            case ';': cur_ = {Tok::Semi, ";", cur_.pos}; break;
            case '=': cur_ = {Tok::Eq, "=", cur_.pos}; break;
            case '+': cur_ = {Tok::Plus, "+", cur_.pos}; break;
            case '-': cur_ = {Tok::Minus, "-", cur_.pos}; break;
            case '*': cur_ = {Tok::Star, "*", cur_.pos}; break;
            case '/': cur_ = {Tok::Slash, "/", cur_.pos}; break;
            case '#': cur_ = {Tok::Hash, "#", cur_.pos}; break;
            case '^':
                take();
                if (i_ < src_.size() && src_[i_] == '^') {
                    cur_ = {Tok::DblCaret, "^^", cur_.pos};
                    take();
                } else {
                    cur_ = {Tok::Caret, "^", cur_.pos};
                }
                return;
            default:
                syntax_error(cur_.pos, std::string("unexpected character '") + c + "'");
        }
        take();
    }

    char take() {
        char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') take();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                break;
            }
        }
    }

    std::string src_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

// ---------------------------------------------------------------------------
// Expressions and statements
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Int, Ident, Unary, Binary, Call, Tuple, Pullback, Morphism };

    Kind kind;
    Pos pos;
    // Int
    std::string literal;
    // Ident / Call name / Unary-Binary operator spelling ("-", "+", "*", "/", "^", "^^")
    std::string name;
    // children: Unary[0]; Binary[0,1]; Call args; Tuple elements; Pullback[0]=morphism,[1]=arg
    std::vector<ExprPtr> args;
    // Morphism literal payload
    std::vector<int> src_space, dst_space; // (n,k[,order])
    std::vector<std::pair<std::string, ExprPtr>> assigns;
};

inline ExprPtr make_int(Pos p, std::string lit) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Int;
    e->pos = p;
    e->literal = std::move(lit);
    return e;
}

inline ExprPtr make_ident(Pos p, std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Ident;
    e->pos = p;
    e->name = std::move(name);
    return e;
}

inline ExprPtr make_node(Expr::Kind k, Pos p, std::string name, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->pos = p;
    e->name = std::move(name);
    e->args = std::move(args);
    return e;
}

struct Statement {
    enum class Kind { SpaceDecl, Let, Print, Check };

    Kind kind;
    Pos pos;
    std::vector<int> space; // SpaceDecl: (n,k[,order]); Check: optional space
    std::string name;       // Let binder or Check suite name
    ExprPtr expr;           // Let / Print
    // Check parameters.
    bool has_space = false;
    long order = -1, samples = -1, seed = -1;
};

struct Script {
    std::vector<Statement> statements;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string src) : lex_(std::move(src)) {}

    Script parse_script() {
        Script s;
        while (lex_.peek().kind != Tok::End) s.statements.push_back(parse_statement());
        return s;
    }

    Statement parse_statement() {
        Token t = lex_.peek();
        if (t.kind != Tok::Ident) syntax_error(t.pos, "expected a statement keyword");
        if (t.text == "space") return parse_space_decl();
        if (t.text == "let") return parse_let();
        if (t.text == "print") return parse_print();
        if (t.text == "check") return parse_check();
        syntax_error(t.pos, "unknown statement '" + t.text + "'");
    }

private:
    Token expect(Tok k, const char* what) {
        Token t = lex_.next();
        if (t.kind != k) syntax_error(t.pos, std::string("expected ") + what);
        return t;
    }

    long expect_int() {
        bool neg = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            neg = true;
        }
        Token t = expect(Tok::Int, "an integer");
        long v = std::stol(t.text);
        return neg ? -v : v;
    }

    std::vector<int> parse_space_tuple() {
        expect(Tok::LParen, "'('");
        std::vector<int> dims;
        dims.push_back(static_cast<int>(expect_int()));
        expect(Tok::Comma, "','");
        dims.push_back(static_cast<int>(expect_int()));
        if (lex_.peek().kind == Tok::Comma) {
            lex_.next();
            dims.push_back(static_cast<int>(expect_int()));
        }
        expect(Tok::RParen, "')'");
        return dims;
    }

    Statement parse_space_decl() {
        Statement s;
        s.kind = Statement::Kind::SpaceDecl;
        s.pos = lex_.next().pos; // 'space'
        s.space = parse_space_tuple();
        expect(Tok::Semi, "';'");
        return s;
    }

    Statement parse_let() {
        Statement s;
        s.kind = Statement::Kind::Let;
        s.pos = lex_.next().pos; // 'let'
        s.name = expect(Tok::Ident, "an identifier").text;
        expect(Tok::Eq, "'='");
        s.expr = parse_expr();
        expect(Tok::Semi, "';'");
        return s;
    }

    Statement parse_print() {
        Statement s;
        s.kind = Statement::Kind::Print;
        s.pos = lex_.next().pos; // 'print'
        s.expr = parse_expr();
        expect(Tok::Semi, "';'");
        return s;
    }

    Statement parse_check() {
        Statement s;
        s.kind = Statement::Kind::Check;
        s.pos = lex_.next().pos; // 'check'
        // Suite name: identifiers up to the first key=value pair or ';'.
        std::vector<std::string> words;
        while (lex_.peek().kind == Tok::Ident) {
            std::string w = lex_.peek().text;
            if ((w == "space" || w == "order" || w == "samples" || w == "seed")) break;
            words.push_back(w);
            lex_.next();
        }
        if (words.empty()) syntax_error(s.pos, "check needs a suite name");
        for (std::size_t i = 0; i < words.size(); ++i) s.name += (i ? " " : "") + words[i];
        while (lex_.peek().kind == Tok::Ident) {
            std::string key = lex_.next().text;
            expect(Tok::Eq, "'='");
            if (key == "space") {
                s.space = parse_space_tuple();
                s.has_space = true;
            } else if (key == "order") {
                s.order = expect_int();
            } else if (key == "samples") {
                s.samples = expect_int();
            } else if (key == "seed") {
                s.seed = expect_int();
            } else {
                syntax_error(s.pos, "unknown check parameter '" + key + "'");
            }
        }
        expect(Tok::Semi, "';'");
        return s;
    }

public:
    ExprPtr parse_expr() { return parse_add(); }

private:
    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            Token op = lex_.next();
            ExprPtr rhs = parse_mul();
            lhs = make_node(Expr::Kind::Binary, op.pos, op.text, {lhs, rhs});
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            Token op = lex_.next();
            ExprPtr rhs = parse_unary();
            lhs = make_node(Expr::Kind::Binary, op.pos, op.text, {lhs, rhs});
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (lex_.peek().kind == Tok::Minus) {
            Token op = lex_.next();
            return make_node(Expr::Kind::Unary, op.pos, "-", {parse_unary()});
        }
        return parse_wedgepow();
    }

    ExprPtr parse_wedgepow() {
        ExprPtr lhs = parse_postfix();
        while (lex_.peek().kind == Tok::Caret || lex_.peek().kind == Tok::DblCaret) {
            Token op = lex_.next();
            ExprPtr rhs = parse_postfix();
            lhs = make_node(Expr::Kind::Binary, op.pos, op.text, {lhs, rhs});
        }
        return lhs;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_atom();
        while (lex_.peek().kind == Tok::Hash) {
            Token op = lex_.next();
            expect(Tok::LParen, "'(' after '#'");
            ExprPtr arg = parse_expr();
            expect(Tok::RParen, "')'");
            e = make_node(Expr::Kind::Pullback, op.pos, "#", {e, arg});
        }
        return e;
    }

    ExprPtr parse_atom() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Tok::Int:
                lex_.next();
                return make_int(t.pos, t.text);
            case Tok::LParen: {
                lex_.next();
                std::vector<ExprPtr> elems{parse_expr()};
                while (lex_.peek().kind == Tok::Comma) {
                    lex_.next();
                    elems.push_back(parse_expr());
                }
                expect(Tok::RParen, "')'");
                if (elems.size() == 1) return elems[0];
                return make_node(Expr::Kind::Tuple, t.pos, "", std::move(elems));
            }
            case Tok::Ident: {
                if (t.text == "morphism") return parse_morphism();
                lex_.next();
                if (lex_.peek().kind == Tok::LParen) {
                    lex_.next();
                    std::vector<ExprPtr> args;
                    if (lex_.peek().kind != Tok::RParen) {
                        args.push_back(parse_expr());
                        while (lex_.peek().kind == Tok::Comma) {
                            lex_.next();
                            args.push_back(parse_expr());
                        }
                    }
                    expect(Tok::RParen, "')'");
                    return make_node(Expr::Kind::Call, t.pos, t.text, std::move(args));
                }
                return make_ident(t.pos, t.text);
            }
            default:
                syntax_error(t.pos, "expected an expression");
        }
    }

    ExprPtr parse_morphism() {
        Token kw = lex_.next(); // 'morphism'
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Morphism;
        e->pos = kw.pos;
        e->name = "morphism";
        Token k1 = expect(Tok::Ident, "'src'");
        if (k1.text != "src") syntax_error(k1.pos, "expected 'src'");
        expect(Tok::Eq, "'='");
        e->src_space = parse_space_tuple();
        Token k2 = expect(Tok::Ident, "'dst'");
        if (k2.text != "dst") syntax_error(k2.pos, "expected 'dst'");
        expect(Tok::Eq, "'='");
        e->dst_space = parse_space_tuple();
        expect(Tok::LBrace, "'{'");
        while (lex_.peek().kind != Tok::RBrace) {
            Token name = expect(Tok::Ident, "a pullback target like x'1");
            expect(Tok::Eq, "'='");
            ExprPtr rhs = parse_expr();
            expect(Tok::Semi, "';'");
            e->assigns.emplace_back(name.text, rhs);
        }
        expect(Tok::RBrace, "'}'");
        return e;
    }

    Lexer lex_;
};

// ---------------------------------------------------------------------------
// Canonical printer (the parse -> print -> parse fixed point)
// ---------------------------------------------------------------------------

inline int precedence(const Expr& e) {
    if (e.kind == Expr::Kind::Binary) {
        if (e.name == "+" || e.name == "-") return 1;
        if (e.name == "*" || e.name == "/") return 2;
        return 4; // ^ and ^^
    }
    if (e.kind == Expr::Kind::Unary) return 3;
    return 5;
}

inline std::string print_expr(const Expr& e) {
    auto wrap = [&](const Expr& child, bool strict) {
        std::string s = print_expr(child);
        int pc = precedence(child), pe = precedence(e);
        if (pc < pe || (strict && pc == pe)) return "(" + s + ")";
        return s;
    };
    switch (e.kind) {
        case Expr::Kind::Int:
            return e.literal;
        case Expr::Kind::Ident:
            return e.name;
        case Expr::Kind::Unary:
            return "-" + wrap(*e.args[0], false);
        case Expr::Kind::Binary:
            return wrap(*e.args[0], false) + " " + e.name + " " + wrap(*e.args[1], true);
        case Expr::Kind::Call: {
            std::string s = e.name + "(";
            for (std::size_t i = 0; i < e.args.size(); ++i)
                s += (i ? ", " : "") + print_expr(*e.args[i]);
            return s + ")";
        }
        case Expr::Kind::Tuple: {
            std::string s = "(";
            for (std::size_t i = 0; i < e.args.size(); ++i)
                s += (i ? ", " : "") + print_expr(*e.args[i]);
            return s + ")";
        }
        case Expr::Kind::Pullback:
            return wrap(*e.args[0], false) + "#(" + print_expr(*e.args[1]) + ")";
        case Expr::Kind::Morphism: {
            auto dims = [](const std::vector<int>& d) {
                std::string s = "(";
                for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + std::to_string(d[i]);
                return s + ")";
            };
            std::string s = "morphism src = " + dims(e.src_space) + " dst = " + dims(e.dst_space) + " { ";
            for (const auto& [name, rhs] : e.assigns) s += name + " = " + print_expr(*rhs) + "; ";
            return s + "}";
        }
    }
    return {};
}

inline std::string print_statement(const Statement& s) {
    auto dims = [](const std::vector<int>& d) {
        std::string out = "(";
        for (std::size_t i = 0; i < d.size(); ++i) out += (i ? ", " : "") + std::to_string(d[i]);
        return out + ")";
    };
    switch (s.kind) {
        case Statement::Kind::SpaceDecl:
            return "space " + dims(s.space) + ";";
        case Statement::Kind::Let:
            return "let " + s.name + " = " + print_expr(*s.expr) + ";";
        case Statement::Kind::Print:
            return "print " + print_expr(*s.expr) + ";";
        case Statement::Kind::Check: {
            std::string out = "check " + s.name;
            if (s.has_space) out += " space = " + dims(s.space);
            if (s.order >= 0) out += " order = " + std::to_string(s.order);
            if (s.samples >= 0) out += " samples = " + std::to_string(s.samples);
            if (s.seed >= 0) out += " seed = " + std::to_string(s.seed);
            return out + ";";
        }
    }
    return {};
}

inline std::string print_script(const Script& s) {
    std::string out;
    for (const auto& st : s.statements) out += print_statement(st) + "\n";
    return out;
}

} // namespace formacalc::script
