#pragma once

#include <map>
#include <span>
#include <vector>

#include "formacalc/multiindex.hpp"

namespace formacalc {

/// Multivariate polynomial over Rational in a fixed number of variables.
/// Canonical form: graded-lex ordered terms, no zero coefficients stored.
/// This is the library's model of smooth coefficient functions.
class Poly {
public:
    using Terms = std::map<MultiIndex, Rational, GradedLexLess>;

    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const Rational& c) {
        Poly p(nvars);
        p.add_term(MultiIndex(nvars), c);
        return p;
    }

    static Poly variable(std::size_t nvars, std::size_t i) {
        require(i < nvars, "E_DIM", "variable index out of range");
        Poly p(nvars);
        p.add_term(MultiIndex::unit(nvars, i), 1);
        return p;
    }

    static Poly monomial(MultiIndex m, const Rational& c) {
        Poly p(m.size());
        p.add_term(std::move(m), c);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.order());
        return d;
    }

    Rational coeff(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(MultiIndex m, const Rational& c) {
        require(m.size() == nvars_, "E_DIM", "exponent vector has wrong length");
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Poly& operator+=(const Poly& o) {
        require(nvars_ == o.nvars_, "E_DIM", "polynomial variable counts differ");
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Poly& operator-=(const Poly& o) {
        require(nvars_ == o.nvars_, "E_DIM", "polynomial variable counts differ");
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        require(a.nvars_ == b.nvars_, "E_DIM", "polynomial variable counts differ");
        Poly r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma + mb, ca * cb);
        return r;
    }

    friend Poly operator*(const Rational& c, const Poly& p) {
        Poly r(p.nvars_);
        if (c == 0) return r;
        for (const auto& [m, pc] : p.terms_) r.terms_.emplace(m, c * pc);
        return r;
    }

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    Poly pow(unsigned e) const {
        Poly r = constant(nvars_, 1);
        Poly b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1u;
        }
        return r;
    }

    Poly derivative(std::size_t var) const {
        require(var < nvars_, "E_DIM", "variable index out of range");
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            MultiIndex d = m;
            d[var] -= 1;
            r.add_term(std::move(d), c * Rational(m[var]));
        }
        return r;
    }

    Poly derivative(const MultiIndex& I) const {
        Poly r = *this;
        for (std::size_t v = 0; v < I.size(); ++v)
            for (unsigned t = 0; t < I[v]; ++t) r = r.derivative(v);
        return r;
    }

    /// Evaluate in any commutative Rational-algebra: args are the images of
    /// the variables, `unit` the multiplicative identity of the target.
    template <class R>
    R eval(std::span<const R> args, const R& unit) const {
        require(args.size() == nvars_, "E_DIM", "evaluation point has wrong dimension");
        // Precompute powers per variable up to the degree that occurs.
        std::vector<unsigned> maxdeg(nvars_, 0);
        for (const auto& [m, c] : terms_)
            for (std::size_t v = 0; v < nvars_; ++v) maxdeg[v] = std::max(maxdeg[v], m[v]);
        std::vector<std::vector<R>> pow(nvars_);
        for (std::size_t v = 0; v < nvars_; ++v) {
            pow[v].push_back(unit);
            for (unsigned e = 1; e <= maxdeg[v]; ++e) pow[v].push_back(pow[v].back() * args[v]);
        }
        R acc = Rational(0) * unit;
        for (const auto& [m, c] : terms_) {
            R t = c * unit;
            for (std::size_t v = 0; v < nvars_; ++v)
                if (m[v] > 0) t = t * pow[v][m[v]];
            acc = acc + t;
        }
        return acc;
    }

    Rational eval(std::span<const Rational> point) const {
        return eval<Rational>(point, Rational(1));
    }

    /// Taylor shift: p(x) -> p(x + a), exact via binomial expansion.
    Poly shifted(std::span<const Rational> a) const {
        require(a.size() == nvars_, "E_DIM", "shift vector has wrong dimension");
        std::vector<Poly> args;
        args.reserve(nvars_);
        for (std::size_t v = 0; v < nvars_; ++v)
            args.push_back(variable(nvars_, v) + constant(nvars_, a[v]));
        return eval<Poly>(args, constant(nvars_, 1));
    }

    /// Reinterpret in a larger variable set, mapping variable v to v + offset.
    Poly embedded(std::size_t new_nvars, std::size_t offset) const {
        require(offset + nvars_ <= new_nvars, "E_DIM", "embedding does not fit");
        Poly r(new_nvars);
        for (const auto& [m, c] : terms_) {
            MultiIndex big(new_nvars);
            for (std::size_t v = 0; v < nvars_; ++v) big[offset + v] = m[v];
            r.terms_.emplace(std::move(big), c);
        }
        return r;
    }

private:
    std::size_t nvars_ = 0;
    Terms terms_;
};

/// Dense univariate polynomial; the coefficient model for piecewise pieces.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly constant(const Rational& v) { return UniPoly({v}); }
    static UniPoly x() { return UniPoly({Rational(0), Rational(1)}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    UniPoly operator-() const {
        UniPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return UniPoly(std::move(r));
    }

    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(r));
    }

    friend UniPoly operator*(const Rational& s, const UniPoly& p) {
        if (s == 0) return {};
        UniPoly r = p;
        for (auto& v : r.c_) v *= s;
        return r;
    }

    bool operator==(const UniPoly& o) const { return c_ == o.c_; }

    UniPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = Rational(i) * c_[i];
        return UniPoly(std::move(r));
    }

    /// Antiderivative with constant term 0.
    UniPoly antiderivative() const {
        if (is_zero()) return {};
        std::vector<Rational> r(c_.size() + 1, Rational(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + 1] = c_[i] / Rational(i + 1);
        return UniPoly(std::move(r));
    }

    Rational integral(const Rational& a, const Rational& b) const {
        UniPoly F = antiderivative();
        return F.eval(b) - F.eval(a);
    }

    /// p(alpha*x + beta).
    UniPoly compose_linear(const Rational& alpha, const Rational& beta) const {
        UniPoly lin({beta, alpha});
        UniPoly acc;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * lin + constant(c_[i]);
        return acc;
    }

    /// x^m * p, used for moments against densities.
    UniPoly times_power(unsigned m) const {
        if (is_zero()) return {};
        std::vector<Rational> r(c_.size() + m, Rational(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + m] = c_[i];
        return UniPoly(std::move(r));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

} // namespace formacalc
