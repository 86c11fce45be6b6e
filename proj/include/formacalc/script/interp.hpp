#pragma once

#include <optional>
#include <variant>

#include "formacalc/json_io.hpp"
#include "formacalc/script/ast.hpp"
#include "formacalc/suites.hpp"

namespace formacalc::script {

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

/// Star-tuple basis marker built from dxstar/dystar tokens; becomes a dual
/// form once multiplied by a density.
struct StarBasis {
    Space space;
    OrderedTuple I, J;
    int sign = 1;
};

/// Density factor under construction inside density(...): a product of 1-D
/// profiles (one per axis, in order of appearance) and a y* monomial.
struct DensityBuilder {
    Rational weight = 1;
    std::vector<PiecewisePoly> factors;
    MultiIndex ystar{std::vector<unsigned>{}};
};

struct Value {
    std::variant<Rational, FormalFunction, Form, DualForm, Density, Morphism, Jet,
                 StarBasis, DensityBuilder, std::vector<Rational>>
        v;

    const char* type_name() const {
        static const char* names[] = {"scalar", "function", "form",   "dualform", "density",
                                      "morphism", "jet",     "starbasis", "densityfactor", "point"};
        return names[v.index()];
    }
};

template <class T>
const T* get_if(const Value& val) {
    return std::get_if<T>(&val.v);
}

// ---------------------------------------------------------------------------
// Value text rendering (canonical, human-facing)
// ---------------------------------------------------------------------------

inline std::string render(const Rational& r) { return to_string(r); }

inline std::string render_monomial(const Poly::Terms::value_type& term, const MultiIndex& J) {
    std::string s;
    const auto& [I, c] = term;
    bool unitc = (c == 1) && !(I.is_zero() && J.is_zero());
    if (!unitc) s += to_string(c);
    for (std::size_t v = 0; v < I.size(); ++v)
        for (unsigned e = 0; e < 1 && I[v] > 0; ++e) {
            if (!s.empty()) s += " * ";
            s += "x" + std::to_string(v + 1);
            if (I[v] > 1) s += " ^ " + std::to_string(I[v]);
            break;
        }
    // The loop above appends each variable once with its power.
    for (std::size_t v = 0; v < J.size(); ++v) {
        if (J[v] == 0) continue;
        if (!s.empty()) s += " * ";
        s += "y" + std::to_string(v + 1);
        if (J[v] > 1) s += " ^ " + std::to_string(J[v]);
    }
    return s.empty() ? "1" : s;
}

inline std::string render(const FormalFunction& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (const auto& [J, p] : f.coeffs())
        for (const auto& term : p.terms()) {
            if (!s.empty()) s += " + ";
            s += render_monomial(term, J);
        }
    return s;
}

inline std::string render(const Form& w) {
    if (w.is_zero()) return "0";
    std::string s;
    for (const auto& [key, f] : w.terms()) {
        if (!s.empty()) s += " + ";
        std::string basis;
        for (std::size_t t = 0; t < key.first.size(); ++t)
            basis += (basis.empty() ? "" : " ^^ ") + std::string("dx") + std::to_string(key.first[t]);
        for (std::size_t t = 0; t < key.second.size(); ++t)
            basis += (basis.empty() ? "" : " ^^ ") + std::string("dy") + std::to_string(key.second[t]);
        std::string coeff = render(f);
        if (basis.empty()) {
            s += coeff;
        } else if (coeff == "1") {
            s += basis;
        } else {
            s += "(" + coeff + ") * " + basis;
        }
    }
    return s;
}

inline std::string render(const Value& val) {
    if (auto* r = get_if<Rational>(val)) return render(*r);
    if (auto* f = get_if<FormalFunction>(val)) return render(*f);
    if (auto* w = get_if<Form>(val)) return render(*w);
    if (auto* d = get_if<DualForm>(val)) return to_json(*d).dump();
    if (auto* d = get_if<Density>(val)) return to_json(*d).dump();
    if (auto* m = get_if<Morphism>(val)) return to_json(*m).dump();
    if (auto* j = get_if<Jet>(val)) return to_json(*j).dump();
    return std::string("<") + val.type_name() + ">";
}

inline Json value_json(const Value& val) {
    Json j;
    j["type"] = val.type_name();
    if (auto* r = get_if<Rational>(val))
        j["value"] = to_json(*r);
    else if (auto* f = get_if<FormalFunction>(val))
        j["value"] = to_json(*f);
    else if (auto* w = get_if<Form>(val))
        j["value"] = to_json(*w);
    else if (auto* d = get_if<DualForm>(val))
        j["value"] = to_json(*d);
    else if (auto* d = get_if<Density>(val))
        j["value"] = to_json(*d);
    else if (auto* m = get_if<Morphism>(val))
        j["value"] = to_json(*m);
    else if (auto* jt = get_if<Jet>(val))
        j["value"] = to_json(*jt);
    return j;
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

struct InterpConfig {
    std::uint64_t seed = 1;
    int default_order = 4;
    int default_samples = 20;
    CheckLimits limits;
};

class Interp {
public:
    explicit Interp(InterpConfig cfg) : cfg_(cfg) {}

    const std::optional<Space>& ambient() const { return ambient_; }

    /// Execute a parsed script; returns the machine-readable report. Errors
    /// in one statement are recorded and execution continues.
    Json run(const Script& script) {
        Json stmts = Json::array();
        bool all_ok = true;
        bool checks_ok = true;
        for (std::size_t i = 0; i < script.statements.size(); ++i) {
            const Statement& st = script.statements[i];
            Json entry;
            entry["index"] = i;
            entry["line"] = st.pos.line;
            try {
                exec(st, entry, checks_ok);
            } catch (const Error& e) {
                entry["error"] = {{"code", e.code()}, {"message", e.what()}};
                all_ok = false;
            }
            stmts.push_back(std::move(entry));
        }
        Json report;
        report["tool"] = "formacalc";
        report["seed"] = cfg_.seed;
        report["statements"] = std::move(stmts);
        report["ok"] = all_ok && checks_ok;
        return report;
    }

    /// REPL entry: evaluate a single statement, returning its report entry.
    Json run_one(const Statement& st) {
        Json entry;
        bool checks_ok = true;
        exec(st, entry, checks_ok);
        return entry;
    }

    Value eval_expr(const Expr& e) { return eval(e); }

private:
    void exec(const Statement& st, Json& entry, bool& checks_ok) {
        switch (st.kind) {
            case Statement::Kind::SpaceDecl: {
                ambient_ = to_space(st.space, st.pos);
                entry["kind"] = "space";
                entry["space"] = to_json(*ambient_);
                break;
            }
            case Statement::Kind::Let: {
                require(!is_reserved(st.name), "E_SYNTAX",
                        "'" + st.name + "' is reserved" + at(st.pos));
                Value v = eval(*st.expr);
                entry["kind"] = "let";
                entry["name"] = st.name;
                entry["type"] = v.type_name();
                bindings_.insert_or_assign(st.name, std::move(v));
                break;
            }
            case Statement::Kind::Print: {
                Value v = eval(*st.expr);
                entry["kind"] = "print";
                entry["text"] = render(v);
                entry["value"] = value_json(v);
                break;
            }
            case Statement::Kind::Check: {
                Space s = st.has_space
                              ? Space(st.space[0], st.space[1],
                                      st.order >= 0 ? static_cast<int>(st.order)
                                                    : (st.space.size() > 2 ? st.space[2]
                                                                           : cfg_.default_order))
                              : need_ambient(st.pos);
                if (st.order >= 0) s.order = static_cast<int>(st.order);
                int samples = st.samples >= 0 ? static_cast<int>(st.samples) : cfg_.default_samples;
                std::uint64_t seed = st.seed >= 0 ? static_cast<std::uint64_t>(st.seed) : cfg_.seed;
                CheckResult res = run_check_suite(st.name, s, samples, seed, cfg_.limits);
                entry["kind"] = "check";
                entry["suite"] = res.suite;
                entry["space"] = to_json(res.space);
                entry["samples"] = res.samples;
                entry["pass"] = res.pass;
                if (!res.detail.empty()) entry["detail"] = res.detail;
                entry["wall_ms"] = res.wall_ms;
                if (!res.pass) checks_ok = false;
                break;
            }
        }
    }

    static std::string at(Pos p) {
        return " at " + std::to_string(p.line) + ":" + std::to_string(p.col);
    }

    Space to_space(const std::vector<int>& dims, Pos pos) const {
        require(dims.size() >= 2, "E_SYNTAX", "space needs (n, k[, order])" + at(pos));
        return Space(dims[0], dims[1], dims.size() > 2 ? dims[2] : cfg_.default_order);
    }

    Space need_ambient(Pos pos) const {
        require(ambient_.has_value(), "E_SPACE", "no ambient space declared" + at(pos));
        return *ambient_;
    }

    static bool parse_indexed(const std::string& name, const char* prefix, int& idx) {
        std::size_t len = std::string(prefix).size();
        if (name.size() <= len || name.compare(0, len, prefix) != 0) return false;
        for (std::size_t i = len; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
        idx = std::stoi(name.substr(len));
        return true;
    }

    static bool is_reserved(const std::string& name) {
        int idx;
        return parse_indexed(name, "x", idx) || parse_indexed(name, "y", idx) ||
               parse_indexed(name, "dx", idx) || parse_indexed(name, "dy", idx) ||
               parse_indexed(name, "dxstar", idx) || parse_indexed(name, "dystar", idx) ||
               parse_indexed(name, "ystar", idx);
    }

    // -- expression evaluation ------------------------------------------------

    Value eval(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Int:
                return {Rational(Integer(e.literal))};
            case Expr::Kind::Ident:
                return eval_ident(e);
            case Expr::Kind::Unary:
                return negate(eval(*e.args[0]), e.pos);
            case Expr::Kind::Binary:
                return eval_binary(e);
            case Expr::Kind::Call:
                return eval_call(e);
            case Expr::Kind::Tuple: {
                std::vector<Rational> pt;
                for (const auto& a : e.args) {
                    Value v = eval(*a);
                    auto* r = get_if<Rational>(v);
                    require(r, "E_TYPE", "tuple entries must be scalars" + at(e.pos));
                    pt.push_back(*r);
                }
                return {std::move(pt)};
            }
            case Expr::Kind::Pullback:
                return eval_pullback(e);
            case Expr::Kind::Morphism:
                return eval_morphism(e);
        }
        fail("E_INTERNAL", "unhandled expression node");
    }

    Value eval_ident(const Expr& e) {
        auto it = bindings_.find(e.name);
        if (it != bindings_.end()) return it->second;
        int idx;
        if (parse_indexed(e.name, "dxstar", idx)) {
            Space s = need_ambient(e.pos);
            require(idx >= 1 && idx <= s.n, "E_DIM", "dxstar index out of range" + at(e.pos));
            return {StarBasis{s, OrderedTuple{idx}, OrderedTuple{}, 1}};
        }
        if (parse_indexed(e.name, "dystar", idx)) {
            Space s = need_ambient(e.pos);
            require(idx >= 1 && idx <= s.k, "E_DIM", "dystar index out of range" + at(e.pos));
            return {StarBasis{s, OrderedTuple{}, OrderedTuple{idx}, 1}};
        }
        if (parse_indexed(e.name, "ystar", idx)) {
            Space s = need_ambient(e.pos);
            require(idx >= 1 && idx <= s.k, "E_DIM", "ystar index out of range" + at(e.pos));
            DensityBuilder b;
            b.ystar = MultiIndex(static_cast<std::size_t>(s.k));
            b.ystar[idx - 1] = 1;
            return {std::move(b)};
        }
        if (parse_indexed(e.name, "dx", idx)) return {Form::dx(need_ambient(e.pos), idx)};
        if (parse_indexed(e.name, "dy", idx)) return {Form::dy(need_ambient(e.pos), idx)};
        if (parse_indexed(e.name, "x", idx)) return {FormalFunction::x(need_ambient(e.pos), idx)};
        if (parse_indexed(e.name, "y", idx)) return {FormalFunction::y(need_ambient(e.pos), idx)};
        fail("E_UNBOUND", "unbound identifier '" + e.name + "'" + at(e.pos));
    }

    Value negate(Value v, Pos pos) {
        if (auto* r = get_if<Rational>(v)) return {-*r};
        if (auto* f = get_if<FormalFunction>(v)) return {-*f};
        if (auto* w = get_if<Form>(v)) return {-*w};
        if (auto* d = get_if<DualForm>(v)) return {-*d};
        if (auto* d = get_if<Density>(v)) return {-*d};
        if (auto* b = get_if<DensityBuilder>(v)) {
            DensityBuilder r = *b;
            r.weight = -r.weight;
            return {std::move(r)};
        }
        fail("E_TYPE", std::string("cannot negate a ") + v.type_name() + at(pos));
    }

    FormalFunction as_function(const Value& v, Pos pos) {
        if (auto* f = get_if<FormalFunction>(v)) return *f;
        if (auto* r = get_if<Rational>(v)) return FormalFunction::constant(need_ambient(pos), *r);
        fail("E_TYPE", std::string("expected a function, got ") + v.type_name() + at(pos));
    }

    Form as_form(const Value& v, Pos pos) {
        if (auto* w = get_if<Form>(v)) return *w;
        if (auto* f = get_if<FormalFunction>(v)) return Form::from_function(*f);
        if (auto* r = get_if<Rational>(v))
            return Form::from_function(FormalFunction::constant(need_ambient(pos), *r));
        fail("E_TYPE", std::string("expected a form, got ") + v.type_name() + at(pos));
    }

    Value eval_binary(const Expr& e) {
        const std::string& op = e.name;
        Value a = eval(*e.args[0]);
        Value b = eval(*e.args[1]);
        if (op == "+" || op == "-") return add_like(std::move(a), std::move(b), op == "-", e.pos);
        if (op == "*") return mul(std::move(a), std::move(b), e.pos);
        if (op == "/") {
            auto* ra = get_if<Rational>(a);
            auto* rb = get_if<Rational>(b);
            require(ra && rb, "E_TYPE", "'/' needs scalar operands" + at(e.pos));
            require(*rb != 0, "E_DOMAIN", "division by zero" + at(e.pos));
            return {*ra / *rb};
        }
        if (op == "^" || op == "^^") return caret(std::move(a), std::move(b), op == "^^", e.pos);
        fail("E_INTERNAL", "unknown operator " + op);
    }

    Value add_like(Value a, Value b, bool subtract, Pos pos) {
        if (get_if<DensityBuilder>(a) || get_if<DensityBuilder>(b)) {
            Density da = finalize_density(a, pos), db = finalize_density(b, pos);
            return {subtract ? da - db : da + db};
        }
        if (get_if<Rational>(a) && get_if<Rational>(b)) {
            const Rational &ra = *get_if<Rational>(a), &rb = *get_if<Rational>(b);
            return {subtract ? Rational(ra - rb) : Rational(ra + rb)};
        }
        if (get_if<Form>(a) || get_if<Form>(b)) {
            Form fa = as_form(a, pos), fb = as_form(b, pos);
            return {subtract ? fa - fb : fa + fb};
        }
        if (get_if<FormalFunction>(a) || get_if<FormalFunction>(b)) {
            FormalFunction fa = as_function(a, pos), fb = as_function(b, pos);
            return {subtract ? fa - fb : fa + fb};
        }
        if (get_if<DualForm>(a) && get_if<DualForm>(b)) {
            const DualForm &da = *get_if<DualForm>(a), &db = *get_if<DualForm>(b);
            return {subtract ? da - db : da + db};
        }
        if (get_if<Density>(a) && get_if<Density>(b)) {
            const Density &da = *get_if<Density>(a), &db = *get_if<Density>(b);
            return {subtract ? da - db : da + db};
        }
        fail("E_TYPE", std::string("cannot add ") + a.type_name() + " and " + b.type_name() + at(pos));
    }

    Value mul(Value a, Value b, Pos pos) {
        // Star-basis products turn densities into dual forms.
        if (auto* sb = get_if<StarBasis>(b)) {
            if (auto* d = get_if<Density>(a)) return {to_dualform(*d, *sb)};
            if (get_if<DensityBuilder>(a)) return {to_dualform(finalize_density(a, pos), *sb)};
        }
        if (auto* sa = get_if<StarBasis>(a)) {
            if (auto* d = get_if<Density>(b)) return {to_dualform(*d, *sa)};
            if (get_if<DensityBuilder>(b)) return {to_dualform(finalize_density(b, pos), *sa)};
        }
        if (auto* ba = get_if<DensityBuilder>(a)) {
            if (auto* bb = get_if<DensityBuilder>(b)) {
                DensityBuilder r = *ba;
                r.weight *= bb->weight;
                r.factors.insert(r.factors.end(), bb->factors.begin(), bb->factors.end());
                MultiIndex L(std::max(r.ystar.size(), bb->ystar.size()));
                for (std::size_t i = 0; i < L.size(); ++i)
                    L[i] = (i < r.ystar.size() ? r.ystar[i] : 0u) +
                           (i < bb->ystar.size() ? bb->ystar[i] : 0u);
                r.ystar = L;
                return {std::move(r)};
            }
            if (auto* rb = get_if<Rational>(b)) {
                DensityBuilder r = *ba;
                r.weight *= *rb;
                return {std::move(r)};
            }
        }
        if (auto* bb = get_if<DensityBuilder>(b)) {
            if (auto* ra = get_if<Rational>(a)) {
                DensityBuilder r = *bb;
                r.weight *= *ra;
                return {std::move(r)};
            }
        }
        if (auto* ra = get_if<Rational>(a)) {
            if (auto* rb = get_if<Rational>(b)) return {*ra * *rb};
            if (auto* f = get_if<FormalFunction>(b)) return {*ra * *f};
            if (auto* w = get_if<Form>(b)) return {*ra * *w};
            if (auto* d = get_if<DualForm>(b)) return {*ra * *d};
            if (auto* d = get_if<Density>(b)) return {*ra * *d};
        }
        if (auto* rb = get_if<Rational>(b)) {
            if (auto* f = get_if<FormalFunction>(a)) return {*rb * *f};
            if (auto* w = get_if<Form>(a)) return {*rb * *w};
            if (auto* d = get_if<DualForm>(a)) return {*rb * *d};
            if (auto* d = get_if<Density>(a)) return {*rb * *d};
        }
        if (get_if<FormalFunction>(a) && get_if<FormalFunction>(b))
            return {*get_if<FormalFunction>(a) * *get_if<FormalFunction>(b)};
        if (get_if<FormalFunction>(a) && get_if<Form>(b))
            return {*get_if<FormalFunction>(a) * *get_if<Form>(b)};
        if (get_if<Form>(a) && get_if<FormalFunction>(b))
            return {*get_if<FormalFunction>(b) * *get_if<Form>(a)};
        if (get_if<Form>(a) && get_if<Form>(b))
            fail("E_TYPE", "use '^^' to multiply forms" + at(pos));
        fail("E_TYPE",
             std::string("cannot multiply ") + a.type_name() + " and " + b.type_name() + at(pos));
    }

    Value caret(Value a, Value b, bool force_wedge, Pos pos) {
        bool formish = force_wedge || get_if<Form>(a) || get_if<Form>(b) || get_if<StarBasis>(a) ||
                       get_if<StarBasis>(b);
        if (formish) {
            if (get_if<StarBasis>(a) && get_if<StarBasis>(b)) {
                const StarBasis &sa = *get_if<StarBasis>(a), &sb = *get_if<StarBasis>(b);
                require_same_space(sa.space, sb.space);
                BlockMerge bm = merge_basis(sa.I, sa.J, sb.I, sb.J);
                require(bm.sign != 0, "E_DEGREE", "repeated star index" + at(pos));
                return {StarBasis{sa.space, bm.xs, bm.ys, sa.sign * sb.sign * bm.sign}};
            }
            return {wedge(as_form(a, pos), as_form(b, pos))};
        }
        auto* rb = get_if<Rational>(b);
        require(rb && denominator(*rb) == 1 && *rb >= 0, "E_TYPE",
                "power needs a nonnegative integer exponent" + at(pos));
        unsigned exp = static_cast<unsigned>(numerator(*rb).convert_to<unsigned long>());
        if (auto* ra = get_if<Rational>(a)) return {pow(*ra, exp)};
        if (auto* f = get_if<FormalFunction>(a)) return {f->pow(exp)};
        if (auto* db = get_if<DensityBuilder>(a)) {
            DensityBuilder unit;
            unit.ystar = MultiIndex(db->ystar.size());
            Value cur{unit};
            for (unsigned i = 0; i < exp; ++i) cur = mul(cur, Value{*db}, pos);
            return cur;
        }
        fail("E_TYPE", std::string("cannot raise a ") + a.type_name() + " to a power" + at(pos));
    }

    Density finalize_density(const Value& v, Pos pos) {
        if (auto* d = get_if<Density>(v)) return *d;
        DensityBuilder scalar_builder;
        const DensityBuilder* b = get_if<DensityBuilder>(v);
        if (!b) {
            // A bare scalar is a density on spaces with no x axes.
            auto* r = get_if<Rational>(v);
            require(r, "E_TYPE", std::string("expected a density, got ") + v.type_name() + at(pos));
            scalar_builder.weight = *r;
            b = &scalar_builder;
        }
        Space s = need_ambient(pos);
        require(static_cast<int>(b->factors.size()) == s.n, "E_DIM",
                "density needs one 1-D factor per x axis" + at(pos));
        MultiIndex L(static_cast<std::size_t>(s.k));
        for (std::size_t i = 0; i < b->ystar.size() && i < L.size(); ++i) L[i] = b->ystar[i];
        for (std::size_t i = L.size(); i < b->ystar.size(); ++i)
            require(b->ystar[i] == 0, "E_DIM", "ystar index out of range" + at(pos));
        return Density::from_tensor(s, TensorDensity::product(b->factors, b->weight), L);
    }

    DualForm to_dualform(const Density& d, const StarBasis& sb) {
        require_same_space(d.space(), sb.space);
        int degree = sb.space.n + sb.space.k - static_cast<int>(sb.I.size() + sb.J.size());
        DualForm w(sb.space, degree);
        w.add_term(sb.I, sb.J, Rational(sb.sign) * d);
        return w;
    }

    Value eval_pullback(const Expr& e) {
        Value m = eval(*e.args[0]);
        auto* phi = get_if<Morphism>(m);
        require(phi, "E_TYPE", "'#' needs a morphism on the left" + at(e.pos));
        return apply_pullback(*phi, *e.args[1], e.pos);
    }

    /// The argument of a pullback is elaborated on the morphism's target, so
    /// free coordinate tokens mean target coordinates.
    Value apply_pullback(const Morphism& phi, const Expr& arg_expr, Pos pos) {
        std::optional<Space> saved = ambient_;
        ambient_ = phi.target();
        Value arg;
        try {
            arg = eval(arg_expr);
        } catch (...) {
            ambient_ = saved;
            throw;
        }
        ambient_ = saved;
        if (auto* w = get_if<Form>(arg)) return {pullback_form(phi, *w)};
        return {phi.pullback(as_function(arg, pos))};
    }

    Value eval_morphism(const Expr& e) {
        Space src = to_space(e.src_space, e.pos);
        Space dst(e.dst_space[0], e.dst_space[1], e.dst_space.size() > 2 ? e.dst_space[2] : src.order);
        std::vector<FormalFunction> xs(dst.n, FormalFunction(src));
        std::vector<FormalFunction> ys(dst.k, FormalFunction(src));
        std::vector<bool> seen_x(dst.n, false), seen_y(dst.k, false);
        std::optional<Space> saved = ambient_;
        ambient_ = src;
        for (const auto& [name, rhs] : e.assigns) {
            int idx;
            if (parse_indexed(name, "x'", idx)) {
                require(idx >= 1 && idx <= dst.n, "E_DIM", "x' index out of range" + at(e.pos));
                xs[idx - 1] = as_function(eval(*rhs), e.pos);
                seen_x[idx - 1] = true;
            } else if (parse_indexed(name, "y'", idx)) {
                require(idx >= 1 && idx <= dst.k, "E_DIM", "y' index out of range" + at(e.pos));
                ys[idx - 1] = as_function(eval(*rhs), e.pos);
                seen_y[idx - 1] = true;
            } else {
                ambient_ = saved;
                fail("E_SYNTAX", "morphism assigns x'<i> or y'<j>, got '" + name + "'" + at(e.pos));
            }
        }
        ambient_ = saved;
        for (int i = 0; i < dst.n; ++i)
            require(seen_x[i], "E_SYNTAX", "missing x'" + std::to_string(i + 1) + at(e.pos));
        for (int j = 0; j < dst.k; ++j)
            require(seen_y[j], "E_SYNTAX", "missing y'" + std::to_string(j + 1) + at(e.pos));
        return {Morphism(src, dst, std::move(xs), std::move(ys))};
    }

    std::vector<Rational> as_point(const Value& v, int n, Pos pos) {
        if (auto* pt = get_if<std::vector<Rational>>(v)) {
            require(static_cast<int>(pt->size()) == n, "E_DIM", "point has wrong dimension" + at(pos));
            return *pt;
        }
        if (auto* r = get_if<Rational>(v)) {
            require(n == 1, "E_DIM", "point has wrong dimension" + at(pos));
            return {*r};
        }
        fail("E_TYPE", "expected a point" + at(pos));
    }

    long as_int(const Value& v, Pos pos) {
        auto* r = get_if<Rational>(v);
        require(r && denominator(*r) == 1, "E_TYPE", "expected an integer" + at(pos));
        return r->convert_to<long>();
    }

    Value eval_call(const Expr& e) {
        const std::string& fn = e.name;
        auto arity = [&](std::size_t lo, std::size_t hi) {
            require(e.args.size() >= lo && e.args.size() <= hi, "E_TYPE",
                    fn + " takes " + std::to_string(lo) +
                        (hi != lo ? ".." + std::to_string(hi) : "") + " arguments" + at(e.pos));
        };
        if (fn == "d") {
            arity(1, 1);
            return {as_form(eval(*e.args[0]), e.pos).d()};
        }
        if (fn == "wedge") {
            arity(2, 2);
            return {wedge(as_form(eval(*e.args[0]), e.pos), as_form(eval(*e.args[1]), e.pos))};
        }
        if (fn == "pair") {
            arity(2, 2);
            Value a = eval(*e.args[0]);
            Value b = eval(*e.args[1]);
            if (get_if<Density>(b) || get_if<DensityBuilder>(b))
                return {pair_density(as_function(a, e.pos), finalize_density(b, e.pos))};
            auto* eta = get_if<DualForm>(b);
            require(eta, "E_TYPE", "pair needs a density or dual form on the right" + at(e.pos));
            return {pair_dualform(as_form(a, e.pos), *eta)};
        }
        if (fn == "kunneth") {
            arity(2, 2);
            return {kunneth(as_form(eval(*e.args[0]), e.pos), as_form(eval(*e.args[1]), e.pos))};
        }
        if (fn == "boxtimes") {
            arity(2, 2);
            auto a = eval(*e.args[0]);
            auto b = eval(*e.args[1]);
            auto* da = get_if<DualForm>(a);
            auto* db = get_if<DualForm>(b);
            require(da && db, "E_TYPE", "boxtimes needs dual forms" + at(e.pos));
            return {boxtimes(*da, *db)};
        }
        if (fn == "jet") {
            arity(3, 3);
            FormalFunction f = as_function(eval(*e.args[0]), e.pos);
            auto pt = as_point(eval(*e.args[1]), f.space().n, e.pos);
            long r = as_int(eval(*e.args[2]), e.pos);
            return {jet_of(f, pt, static_cast<int>(r))};
        }
        if (fn == "value") {
            arity(2, 2);
            FormalFunction f = as_function(eval(*e.args[0]), e.pos);
            auto pt = as_point(eval(*e.args[1]), f.space().n, e.pos);
            return {f.value(pt)};
        }
        if (fn == "invert") {
            arity(3, 3);
            FormalFunction f = as_function(eval(*e.args[0]), e.pos);
            auto pt = as_point(eval(*e.args[1]), f.space().n, e.pos);
            long r = as_int(eval(*e.args[2]), e.pos);
            return {ff_invert(f, pt, static_cast<int>(r))};
        }
        if (fn == "bump") {
            arity(2, 3);
            Value a = eval(*e.args[0]);
            Value b = eval(*e.args[1]);
            bool norm = false;
            if (e.args.size() == 3) {
                auto* id = e.args[2].get();
                require(id->kind == Expr::Kind::Ident && id->name == "norm", "E_TYPE",
                        "third bump argument must be 'norm'" + at(e.pos));
                norm = true;
            }
            auto* ra = get_if<Rational>(a);
            auto* rb = get_if<Rational>(b);
            require(ra && rb, "E_TYPE", "bump needs scalar endpoints" + at(e.pos));
            DensityBuilder builder;
            builder.factors.push_back(bump(*ra, *rb, norm));
            if (ambient_) builder.ystar = MultiIndex(static_cast<std::size_t>(ambient_->k));
            return {std::move(builder)};
        }
        if (fn == "density") {
            arity(1, 1);
            return {finalize_density(eval(*e.args[0]), e.pos)};
        }
        if (fn == "zeta") {
            arity(1, 1);
            Value a = eval(*e.args[0]);
            auto* eta = get_if<DualForm>(a);
            require(eta, "E_TYPE", "zeta needs a dual form" + at(e.pos));
            return {zeta(*eta)};
        }
        if (fn == "radial_h") {
            arity(1, 1);
            return {radial_homotopy(as_form(eval(*e.args[0]), e.pos))};
        }
        if (fn == "formal_h") {
            arity(1, 1);
            return {formal_homotopy(as_form(eval(*e.args[0]), e.pos))};
        }
        if (fn == "cs_h") {
            arity(1, 1);
            Value a = eval(*e.args[0]);
            auto* eta = get_if<DualForm>(a);
            require(eta, "E_TYPE", "cs_h needs a dual form" + at(e.pos));
            return {cs_homotopy(*eta, CsConfig::standard(eta->space().n))};
        }
        if (fn == "partial_x") {
            arity(2, 2);
            long i = as_int(eval(*e.args[0]), e.pos);
            return {as_function(eval(*e.args[1]), e.pos).dx(static_cast<int>(i))};
        }
        if (fn == "partial_y") {
            arity(2, 2);
            long j = as_int(eval(*e.args[0]), e.pos);
            return {as_function(eval(*e.args[1]), e.pos).dy(static_cast<int>(j))};
        }
        if (fn == "pullback") {
            arity(2, 2);
            Value m = eval(*e.args[0]);
            auto* phi = get_if<Morphism>(m);
            require(phi, "E_TYPE", "pullback needs a morphism first" + at(e.pos));
            return apply_pullback(*phi, *e.args[1], e.pos);
        }
        fail("E_UNBOUND", "unknown function '" + fn + "'" + at(e.pos));
    }

    InterpConfig cfg_;
    std::optional<Space> ambient_;
    std::map<std::string, Value> bindings_;
};

/// Parse + run, catching syntax errors into the report shape.
inline Json run_script_text(const std::string& text, const InterpConfig& cfg) {
    try {
        Parser parser(text);
        Script script = parser.parse_script();
        Interp interp(cfg);
        return interp.run(script);
    } catch (const Error& e) {
        Json report;
        report["tool"] = "formacalc";
        report["seed"] = cfg.seed;
        report["statements"] = Json::array();
        report["error"] = {{"code", e.code()}, {"message", e.what()}};
        report["ok"] = false;
        return report;
    }
}

} // namespace formacalc::script
