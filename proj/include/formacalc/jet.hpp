#pragma once

#include <map>
#include <utility>
#include <vector>

#include "formacalc/formal.hpp"

namespace formacalc {

using IdxPair = std::pair<MultiIndex, MultiIndex>;

struct IdxPairLess {
    bool operator()(const IdxPair& a, const IdxPair& b) const {
        unsigned oa = a.first.order() + a.second.order();
        unsigned ob = b.first.order() + b.second.order();
        if (oa != ob) return oa < ob;
        GradedLexLess less;
        if (!(a.first == b.first)) return less(a.first, b.first);
        return less(a.second, b.second);
    }
};

/// Element of the truncated stalk O_a/m_a^r in the monomial basis
/// {(x-a)^I y^J : |I|+|J| < r}.
class Jet {
public:
    Jet(Space space, std::vector<Rational> basepoint, int jet_order)
        : space_(space), a_(std::move(basepoint)), r_(jet_order) {
        require(a_.size() == static_cast<std::size_t>(space.n), "E_DIM", "basepoint has wrong dimension");
        require(r_ >= 0, "E_DIM", "jet order must be nonnegative");
    }

    const Space& space() const { return space_; }
    const std::vector<Rational>& basepoint() const { return a_; }
    int jet_order() const { return r_; }
    const std::map<IdxPair, Rational, IdxPairLess>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    Rational coeff(const MultiIndex& I, const MultiIndex& J) const {
        auto it = c_.find({I, J});
        return it == c_.end() ? Rational(0) : it->second;
    }

    void add_term(MultiIndex I, MultiIndex J, const Rational& v) {
        require(I.size() == static_cast<std::size_t>(space_.n) &&
                    J.size() == static_cast<std::size_t>(space_.k),
                "E_DIM", "jet index arity mismatch");
        if (v == 0) return;
        if (I.order() + J.order() >= static_cast<unsigned>(r_)) return; // modulo m_a^r
        auto [it, ins] = c_.emplace(IdxPair{std::move(I), std::move(J)}, v);
        if (!ins) {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
    }

    Jet operator-() const {
        Jet r = *this;
        for (auto& [k, v] : r.c_) v = -v;
        return r;
    }

    friend Jet operator+(Jet a, const Jet& b) {
        require_same_space(a.space_, b.space_);
        require(a.a_ == b.a_ && a.r_ == b.r_, "E_SPACE", "jet basepoint/order mismatch");
        for (const auto& [k, v] : b.c_) a.add_term(k.first, k.second, v);
        return a;
    }

    friend Jet operator-(Jet a, const Jet& b) { return a + (-b); }

    friend Jet operator*(const Rational& s, Jet j) {
        if (s == 0) return Jet(j.space_, j.a_, j.r_);
        for (auto& [k, v] : j.c_) v *= s;
        return j;
    }

    /// Truncated product in O_a/m_a^r.
    friend Jet operator*(const Jet& a, const Jet& b) {
        require_same_space(a.space_, b.space_);
        require(a.a_ == b.a_ && a.r_ == b.r_, "E_SPACE", "jet basepoint/order mismatch");
        Jet r(a.space_, a.a_, a.r_);
        for (const auto& [ka, va] : a.c_)
            for (const auto& [kb, vb] : b.c_)
                r.add_term(ka.first + kb.first, ka.second + kb.second, va * vb);
        return r;
    }

    bool operator==(const Jet& o) const {
        return space_ == o.space_ && a_ == o.a_ && r_ == o.r_ && c_ == o.c_;
    }

    static std::size_t dimension(int n, int k, int r) {
        std::size_t d = 0;
        for (int t = 0; t < r; ++t)
            for_each_multiindex_of_order(static_cast<std::size_t>(n + k), static_cast<unsigned>(t),
                                         [&](const MultiIndex&) { ++d; });
        return d;
    }

private:
    Space space_;
    std::vector<Rational> a_;
    int r_;
    std::map<IdxPair, Rational, IdxPairLess> c_;
};

/// Coefficients of f in the basis {(x-a)^I y^J}, |I|+|J| < r; the Taylor
/// expansion around a with c_{I,J} = (1/I!) d_x^I(f_J)(a).
inline Jet jet_of(const FormalFunction& f, std::vector<Rational> a, int r) {
    require(r <= f.known_order() + 1, "E_TRUNC",
            "jet order needs y-coefficients beyond the known order");
    Jet jet(f.space(), std::move(a), r);
    std::span<const Rational> pt(jet.basepoint());
    for (const auto& [J, p] : f.coeffs()) {
        if (J.order() >= static_cast<unsigned>(r)) continue;
        // Taylor-shift the x-polynomial to the basepoint.
        std::vector<Rational> shift(jet.basepoint());
        Poly shifted = p.shifted(shift); // q(x) with p(x + a) = q(x), so p = q(x - a)
        for (const auto& [I, c] : shifted.terms()) jet.add_term(I, J, c);
    }
    return jet;
}

/// Expand a jet back into a formal function in plain coordinates.
inline FormalFunction jet_to_function(const Jet& j) {
    Space s = j.space();
    FormalFunction f(s, std::min(s.order, std::max(0, j.jet_order() - 1)));
    std::vector<Rational> neg;
    for (const auto& v : j.basepoint()) neg.push_back(-v);
    for (const auto& [key, c] : j.coeffs()) {
        // (x-a)^I expanded as a polynomial in x.
        Poly p = Poly::monomial(key.first, c).shifted(neg);
        f.add_term(key.second, p);
    }
    return f;
}

/// Stalk-level inverse: g with f*g == 1 modulo (x-a, y)^r, computed by the
/// geometric series on the Taylor expansion at `around`.
inline FormalFunction ff_invert(const FormalFunction& f, std::vector<Rational> around, int r) {
    require(r >= 1, "E_DIM", "jet order must be positive");
    require(r <= f.space().order + 1, "E_TRUNC", "jet order exceeds the space truncation");
    Rational c = f.value(around);
    require(c != 0, "E_DOMAIN", "not invertible in the stalk: value at basepoint is zero");
    Jet j = jet_of(f, around, r);
    // j = c(1 - u) with u having zero constant term; inverse = (1/c) sum u^m.
    Jet one(j.space(), j.basepoint(), r);
    one.add_term(MultiIndex(static_cast<std::size_t>(j.space().n)),
                 MultiIndex(static_cast<std::size_t>(j.space().k)), 1);
    Jet u = one - (Rational(1) / c) * j;
    Jet acc = one;
    Jet upow = one;
    for (int m = 1; m < r; ++m) {
        upow = upow * u;
        if (upow.is_zero()) break;
        acc = acc + upow;
    }
    return jet_to_function((Rational(1) / c) * acc);
}

/// Finite combination of Ev_a o d_x^I d_y^J: the distributions supported at
/// the point a.
class PointDistribution {
public:
    PointDistribution(Space space, std::vector<Rational> basepoint)
        : space_(space), a_(std::move(basepoint)) {
        require(a_.size() == static_cast<std::size_t>(space.n), "E_DIM",
                "basepoint has wrong dimension");
    }

    static PointDistribution dirac(Space s, std::vector<Rational> a) {
        PointDistribution d(s, std::move(a));
        d.add_term(MultiIndex(static_cast<std::size_t>(s.n)),
                   MultiIndex(static_cast<std::size_t>(s.k)), 1);
        return d;
    }

    const Space& space() const { return space_; }
    const std::vector<Rational>& basepoint() const { return a_; }
    const std::map<IdxPair, Rational, IdxPairLess>& terms() const { return c_; }

    void add_term(MultiIndex I, MultiIndex J, const Rational& v) {
        require(I.size() == static_cast<std::size_t>(space_.n) &&
                    J.size() == static_cast<std::size_t>(space_.k),
                "E_DIM", "index arity mismatch");
        if (v == 0) return;
        auto [it, ins] = c_.emplace(IdxPair{std::move(I), std::move(J)}, v);
        if (!ins) {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
    }

    /// sum c_{I,J} (d_x^I d_y^J f)(a).
    Rational pair(const FormalFunction& f) const {
        require_same_space(space_, f.space());
        Rational acc = 0;
        for (const auto& [key, c] : c_) {
            require(key.second.order() <= static_cast<unsigned>(f.known_order()), "E_TRUNC",
                    "known_order exhausted by point-distribution pairing");
            FormalFunction g = f.derivative(key.first, key.second);
            acc += c * g.value(a_);
        }
        return acc;
    }

private:
    Space space_;
    std::vector<Rational> a_;
    std::map<IdxPair, Rational, IdxPairLess> c_;
};

} // namespace formacalc
