#pragma once

#include "formacalc/formal.hpp"
#include "formacalc/tensor_density.hpp"

namespace formacalc {

/// Compactly supported formal density on (R^n)^(k): an element of
/// D_c(R^n)[y*_1..y*_k], stored as L -> tau_L with tau_L a TensorDensity.
class Density {
public:
    explicit Density(Space space) : space_(space) {}

    static Density from_tensor(Space s, const TensorDensity& t, MultiIndex L = {}) {
        if (L.size() == 0) L = MultiIndex(static_cast<std::size_t>(s.k));
        Density d(s);
        d.add_term(L, t);
        return d;
    }

    const Space& space() const { return space_; }
    const std::map<MultiIndex, TensorDensity, GradedLexLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const MultiIndex& L, const TensorDensity& t) {
        require(L.size() == static_cast<std::size_t>(space_.k), "E_DIM", "y* exponent arity mismatch");
        require(t.axes() == space_.n, "E_DIM", "density axis count mismatch");
        if (t.is_zero()) return;
        auto it = terms_.find(L);
        if (it == terms_.end())
            terms_.emplace(L, t);
        else
            it->second = it->second + t;
    }

    Density operator-() const {
        Density r(space_);
        for (const auto& [L, t] : terms_) r.terms_.emplace(L, -t);
        return r;
    }

    friend Density operator+(Density a, const Density& b) {
        require_same_space(a.space_, b.space_);
        for (const auto& [L, t] : b.terms_) a.add_term(L, t);
        return a;
    }

    friend Density operator-(Density a, const Density& b) { return a + (-b); }

    friend Density operator*(const Rational& s, const Density& d) {
        Density r(d.space_);
        if (s == 0) return r;
        for (const auto& [L, t] : d.terms_) r.terms_.emplace(L, s * t);
        return r;
    }

    /// Axis-i derivative of every tensor coefficient (the d_{x_i*} operator).
    Density dstar_x(int i) const {
        require(i >= 1 && i <= space_.n, "E_DIM", "axis out of range");
        Density r(space_);
        for (const auto& [L, t] : terms_) r.add_term(L, t.derivative(i - 1));
        return r;
    }

    /// Multiplication by y_j* (the m_{y_j*} operator).
    Density mstar_y(int j) const {
        require(j >= 1 && j <= space_.k, "E_DIM", "y* index out of range");
        Density r(space_);
        for (const auto& [L, t] : terms_) {
            MultiIndex L2 = L;
            L2[static_cast<std::size_t>(j - 1)] += 1;
            r.add_term(L2, t);
        }
        return r;
    }

    unsigned max_ystar_degree() const {
        unsigned d = 0;
        for (const auto& [L, t] : terms_) d = std::max(d, L.order());
        return d;
    }

    bool functionally_zero() const {
        for (const auto& [L, t] : terms_)
            if (!t.functionally_zero()) return false;
        return true;
    }

private:
    Space space_;
    std::map<MultiIndex, TensorDensity, GradedLexLess> terms_;
};

/// The pairing <f, eta> = sum_L L! Int f_L tau_L, exact.
inline Rational pair_density(const FormalFunction& f, const Density& eta) {
    require_same_space(f.space(), eta.space());
    Rational acc = 0;
    for (const auto& [L, t] : eta.terms()) {
        require(L.order() <= static_cast<unsigned>(f.known_order()), "E_TRUNC",
                "known_order exhausted by the density pairing");
        auto it = f.coeffs().find(L);
        if (it == f.coeffs().end()) continue;
        acc += Rational(L.index_factorial()) * t.integral_against(it->second);
    }
    return acc;
}

/// External product of densities on the joined space.
inline Density density_external_product(const Density& a, const Density& b) {
    const Space& s1 = a.space();
    const Space& s2 = b.space();
    Space s3(s1.n + s2.n, s1.k + s2.k, std::min(s1.order, s2.order));
    Density r(s3);
    for (const auto& [L1, t1] : a.terms())
        for (const auto& [L2, t2] : b.terms()) {
            MultiIndex L(static_cast<std::size_t>(s3.k));
            for (std::size_t j = 0; j < L1.size(); ++j) L[j] = L1[j];
            for (std::size_t j = 0; j < L2.size(); ++j) L[L1.size() + j] = L2[j];
            r.add_term(L, tensor(t1, t2));
        }
    return r;
}

} // namespace formacalc
