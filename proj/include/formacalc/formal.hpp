#pragma once

#include <map>

#include "formacalc/poly.hpp"
#include "formacalc/space.hpp"

namespace formacalc {

/// Formal function on (R^n)^(k): a y-truncated series sum_J f_J y^J with
/// polynomial coefficients f_J in the x variables.
///
/// known_order tracks how much of the series is trustworthy: coefficients
/// with |J| <= known_order are exact, higher ones are not stored and are
/// semantically undefined. Every operation computes the tightest provable
/// known_order of its result and refuses to fabricate unknown coefficients.
class FormalFunction {
public:
    using Coeffs = std::map<MultiIndex, Poly, GradedLexLess>;

    explicit FormalFunction(Space space) : space_(space), known_order_(space.order) {}

    FormalFunction(Space space, int known_order) : space_(space), known_order_(known_order) {
        require(known_order_ >= 0 && known_order_ <= space.order, "E_TRUNC",
                "known_order outside [0, space.order]");
    }

    static FormalFunction constant(Space s, const Rational& c) {
        FormalFunction f(s);
        f.add_term(MultiIndex(static_cast<std::size_t>(s.k)), Poly::constant(s.n, c));
        return f;
    }

    static FormalFunction from_poly(Space s, const Poly& p) {
        require(p.nvars() == static_cast<std::size_t>(s.n), "E_DIM", "coefficient arity mismatch");
        FormalFunction f(s);
        f.add_term(MultiIndex(static_cast<std::size_t>(s.k)), p);
        return f;
    }

    static FormalFunction x(Space s, int i) {
        require(i >= 1 && i <= s.n, "E_DIM", "x index out of range");
        return from_poly(s, Poly::variable(s.n, static_cast<std::size_t>(i - 1)));
    }

    static FormalFunction y(Space s, int j) {
        require(j >= 1 && j <= s.k, "E_DIM", "y index out of range");
        require(s.order >= 1, "E_TRUNC", "order 0 space cannot hold y");
        FormalFunction f(s);
        f.add_term(MultiIndex::unit(static_cast<std::size_t>(s.k), static_cast<std::size_t>(j - 1)),
                   Poly::constant(s.n, 1));
        return f;
    }

    const Space& space() const { return space_; }
    int known_order() const { return known_order_; }
    const Coeffs& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Poly coeff(const MultiIndex& J) const {
        require(J.order() <= static_cast<unsigned>(known_order_), "E_TRUNC",
                "requested y-coefficient beyond known order");
        auto it = coeffs_.find(J);
        return it == coeffs_.end() ? Poly(space_.n) : it->second;
    }

    /// The J = 0 coefficient (the reduction to the underlying smooth model).
    Poly reduction() const {
        auto it = coeffs_.find(MultiIndex(static_cast<std::size_t>(space_.k)));
        return it == coeffs_.end() ? Poly(space_.n) : it->second;
    }

    bool has_zero_reduction() const { return reduction().is_zero(); }

    Rational value(std::span<const Rational> a) const {
        require(a.size() == static_cast<std::size_t>(space_.n), "E_DIM",
                "point has wrong dimension");
        return reduction().eval(a);
    }

    void add_term(MultiIndex J, const Poly& p) {
        require(J.size() == static_cast<std::size_t>(space_.k), "E_DIM", "y-exponent arity mismatch");
        require(p.nvars() == static_cast<std::size_t>(space_.n), "E_DIM", "coefficient arity mismatch");
        if (p.is_zero()) return;
        if (J.order() > static_cast<unsigned>(known_order_)) return; // beyond the stored window
        auto [it, inserted] = coeffs_.emplace(std::move(J), p);
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    /// Lower the known order, dropping now-untrusted coefficients.
    FormalFunction truncated(int new_known_order) const {
        FormalFunction r(space_, std::min(new_known_order, known_order_));
        for (const auto& [J, p] : coeffs_)
            if (J.order() <= static_cast<unsigned>(r.known_order_)) r.coeffs_.emplace(J, p);
        return r;
    }

    FormalFunction operator-() const {
        FormalFunction r(space_, known_order_);
        for (const auto& [J, p] : coeffs_) r.coeffs_.emplace(J, -p);
        return r;
    }

    friend FormalFunction operator+(const FormalFunction& a, const FormalFunction& b) {
        require_same_space(a.space_, b.space_);
        FormalFunction r(a.space_, std::min(a.known_order_, b.known_order_));
        for (const auto& [J, p] : a.coeffs_) r.add_term(J, p);
        for (const auto& [J, p] : b.coeffs_) r.add_term(J, p);
        return r;
    }

    friend FormalFunction operator-(const FormalFunction& a, const FormalFunction& b) {
        return a + (-b);
    }

    friend FormalFunction operator*(const FormalFunction& a, const FormalFunction& b) {
        require_same_space(a.space_, b.space_);
        FormalFunction r(a.space_, std::min(a.known_order_, b.known_order_));
        for (const auto& [Ja, pa] : a.coeffs_)
            for (const auto& [Jb, pb] : b.coeffs_) {
                MultiIndex J = Ja + Jb;
                if (J.order() > static_cast<unsigned>(r.known_order_)) continue;
                r.add_term(std::move(J), pa * pb);
            }
        return r;
    }

    friend FormalFunction operator*(const Rational& c, const FormalFunction& f) {
        FormalFunction r(f.space_, f.known_order_);
        if (c == 0) return r;
        for (const auto& [J, p] : f.coeffs_) r.coeffs_.emplace(J, c * p);
        return r;
    }

    bool operator==(const FormalFunction& o) const {
        return space_ == o.space_ && known_order_ == o.known_order_ && coeffs_ == o.coeffs_;
    }

    /// Equality of the stored coefficient data, ignoring known_order tags.
    bool same_series(const FormalFunction& o) const {
        return space_.same_shape(o.space_) && coeffs_ == o.coeffs_;
    }

    FormalFunction pow(unsigned e) const {
        FormalFunction r = constant(space_, 1).truncated(known_order_);
        FormalFunction b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1u;
        }
        return r;
    }

    /// d/dx_i; exact, known_order unchanged.
    FormalFunction dx(int i) const {
        require(i >= 1 && i <= space_.n, "E_DIM", "x index out of range");
        FormalFunction r(space_, known_order_);
        for (const auto& [J, p] : coeffs_) r.add_term(J, p.derivative(static_cast<std::size_t>(i - 1)));
        return r;
    }

    /// d/dy_j; a series known modulo (y)^{r+1} has derivative known modulo
    /// (y)^r, so known_order drops by one.
    FormalFunction dy(int j) const {
        require(j >= 1 && j <= space_.k, "E_DIM", "y index out of range");
        require(known_order_ >= 1, "E_TRUNC", "known_order exhausted by d/dy");
        FormalFunction r(space_, known_order_ - 1);
        for (const auto& [J, p] : coeffs_) {
            std::size_t jj = static_cast<std::size_t>(j - 1);
            if (J[jj] == 0) continue;
            MultiIndex J2 = J;
            J2[jj] -= 1;
            r.add_term(std::move(J2), Rational(J[jj]) * p);
        }
        return r;
    }

    FormalFunction derivative(const MultiIndex& I, const MultiIndex& J) const {
        FormalFunction r = *this;
        for (std::size_t v = 0; v < I.size(); ++v)
            for (unsigned t = 0; t < I[v]; ++t) r = r.dx(static_cast<int>(v) + 1);
        for (std::size_t v = 0; v < J.size(); ++v)
            for (unsigned t = 0; t < J[v]; ++t) r = r.dy(static_cast<int>(v) + 1);
        return r;
    }

    /// Largest |J| with a nonzero stored coefficient.
    unsigned y_degree() const {
        unsigned d = 0;
        for (const auto& [J, p] : coeffs_) d = std::max(d, J.order());
        return d;
    }

    unsigned x_degree() const {
        unsigned d = 0;
        for (const auto& [J, p] : coeffs_) d = std::max(d, p.total_degree());
        return d;
    }

private:
    Space space_;
    int known_order_;
    Coeffs coeffs_;
};

/// External product: f on (n1,k1) times g on (n2,k2) in the joined variable
/// set (n1+n2, k1+k2); factor-1 variables come first in both blocks.
inline FormalFunction external_product(const FormalFunction& f, const FormalFunction& g) {
    const Space& s1 = f.space();
    const Space& s2 = g.space();
    Space s3(s1.n + s2.n, s1.k + s2.k, std::min(s1.order, s2.order));
    FormalFunction r(s3, std::min(f.known_order(), g.known_order()));
    for (const auto& [J1, p1] : f.coeffs())
        for (const auto& [J2, p2] : g.coeffs()) {
            MultiIndex J(static_cast<std::size_t>(s3.k));
            for (std::size_t j = 0; j < J1.size(); ++j) J[j] = J1[j];
            for (std::size_t j = 0; j < J2.size(); ++j) J[J1.size() + j] = J2[j];
            Poly p = p1.embedded(static_cast<std::size_t>(s3.n), 0) *
                     p2.embedded(static_cast<std::size_t>(s3.n), static_cast<std::size_t>(s1.n));
            r.add_term(std::move(J), p);
        }
    return r;
}

} // namespace formacalc
