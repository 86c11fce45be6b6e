#pragma once

#include <vector>

#include "formacalc/piecewise.hpp"

namespace formacalc {

/// Compactly supported density on R^n, stored as a weighted sum of n-fold
/// tensor products of 1-D piecewise polynomials. With n = 0 a term is just
/// its weight, so the same type models the scalar densities of (R^0)^(k).
class TensorDensity {
public:
    struct Term {
        Rational weight;
        std::vector<PiecewisePoly> factors; // size == axes
    };

    TensorDensity() = default;
    explicit TensorDensity(int axes) : axes_(axes) {}

    static TensorDensity scalar(const Rational& w) {
        TensorDensity t(0);
        if (w != 0) t.terms_.push_back({w, {}});
        return t;
    }

    static TensorDensity product(std::vector<PiecewisePoly> factors, const Rational& w = 1) {
        TensorDensity t(static_cast<int>(factors.size()));
        if (w != 0) {
            for (const auto& f : factors)
                if (f.is_zero()) return t;
            t.terms_.push_back({w, std::move(factors)});
        }
        return t;
    }

    int axes() const { return axes_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Rational& w, std::vector<PiecewisePoly> factors) {
        require(static_cast<int>(factors.size()) == axes_, "E_DIM", "density term has wrong axis count");
        if (w == 0) return;
        for (const auto& f : factors)
            if (f.is_zero()) return;
        terms_.push_back({w, std::move(factors)});
    }

    TensorDensity operator-() const {
        TensorDensity r = *this;
        for (auto& t : r.terms_) t.weight = -t.weight;
        return r;
    }

    friend TensorDensity operator+(TensorDensity a, const TensorDensity& b) {
        require(a.axes_ == b.axes_, "E_DIM", "density axis counts differ");
        for (const auto& t : b.terms_) a.terms_.push_back(t);
        return a;
    }

    friend TensorDensity operator-(TensorDensity a, const TensorDensity& b) { return a + (-b); }

    friend TensorDensity operator*(const Rational& s, const TensorDensity& d) {
        TensorDensity r(d.axes_);
        if (s == 0) return r;
        r.terms_ = d.terms_;
        for (auto& t : r.terms_) t.weight *= s;
        return r;
    }

    TensorDensity derivative(int axis) const {
        require(axis >= 0 && axis < axes_, "E_DIM", "axis out of range");
        TensorDensity r(axes_);
        for (const auto& t : terms_) {
            std::vector<PiecewisePoly> f = t.factors;
            f[axis] = f[axis].derivative();
            r.add_term(t.weight, std::move(f));
        }
        return r;
    }

    Rational integral() const {
        Rational acc = 0;
        for (const auto& t : terms_) {
            Rational v = t.weight;
            for (const auto& f : t.factors) v *= f.integral();
            acc += v;
        }
        return acc;
    }

    /// Per-axis antiderivative pinned to 0 on the left. Compact support
    /// survives only when every factor along the axis has zero total
    /// integral (otherwise the cumulative has a constant tail and leaves
    /// this type), so that is required.
    TensorDensity cumulative_axis(int axis) const {
        require(axis >= 0 && axis < axes_, "E_DIM", "axis out of range");
        TensorDensity r(axes_);
        for (const auto& t : terms_) {
            require(t.factors[axis].integral() == 0, "E_DOMAIN",
                    "cumulative along an axis needs a mean-zero factor to stay compactly supported");
            std::vector<PiecewisePoly> f = t.factors;
            f[axis] = pp_cumulative_core(f[axis]);
            r.add_term(t.weight, std::move(f));
        }
        return r;
    }

    /// Exact integral of p(x_1..x_n) against the density; factorizes per axis.
    Rational integral_against(const Poly& p) const {
        require(static_cast<int>(p.nvars()) == axes_, "E_DIM", "test polynomial has wrong arity");
        Rational acc = 0;
        for (const auto& t : terms_) {
            for (const auto& [m, c] : p.terms()) {
                Rational v = t.weight * c;
                for (int a = 0; a < axes_ && v != 0; ++a) v *= t.factors[a].moment(m[a]);
                acc += v;
            }
        }
        return acc;
    }

    /// Tensor with another density on disjoint trailing axes.
    friend TensorDensity tensor(const TensorDensity& a, const TensorDensity& b) {
        TensorDensity r(a.axes_ + b.axes_);
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                std::vector<PiecewisePoly> f = ta.factors;
                f.insert(f.end(), tb.factors.begin(), tb.factors.end());
                r.terms_.push_back({ta.weight * tb.weight, std::move(f)});
            }
        return r;
    }

    /// Equality through the pairing is what matters; structural zero testing
    /// goes through moments. This checks exact vanishing as a functional on
    /// polynomials by expanding into a common grid per axis.
    bool functionally_zero(unsigned max_moment = 0) const;

private:
    int axes_ = 0;
    std::vector<Term> terms_;
};

/// Exact zero test. Axis counts 0 and 1 collapse to canonical forms; for
/// n >= 2 the sum of products is compared against zero cell by cell on the
/// common refined grid, pairing with the monomial basis x^e (e bounded by
/// the maximal piece degree per axis). On a single cell every factor is one
/// polynomial, so the pairing matrix is nondegenerate and the test is exact.
inline bool TensorDensity::functionally_zero(unsigned) const {
    if (terms_.empty()) return true;
    if (axes_ == 0) {
        Rational acc = 0;
        for (const auto& t : terms_) acc += t.weight;
        return acc == 0;
    }
    if (axes_ == 1) {
        PiecewisePoly acc;
        for (const auto& t : terms_) acc = acc + t.weight * t.factors[0];
        return acc.is_zero();
    }
    std::vector<std::vector<Rational>> grids(axes_);
    unsigned maxdeg = 0;
    for (const auto& t : terms_)
        for (int a = 0; a < axes_; ++a) {
            for (const auto& x : t.factors[a].breaks()) grids[a].push_back(x);
            for (const auto& p : t.factors[a].pieces())
                if (p.degree() > 0) maxdeg = std::max(maxdeg, static_cast<unsigned>(p.degree()));
        }
    for (auto& g : grids) {
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        if (g.size() < 2) return true; // no cells: all factors vanish
    }

    std::vector<std::size_t> cell(axes_, 0);
    std::vector<unsigned> expo(axes_, 0);

    auto moment_sum = [&]() {
        Rational acc = 0;
        for (const auto& t : terms_) {
            Rational v = t.weight;
            for (int ax = 0; ax < axes_ && v != 0; ++ax) {
                const Rational& lo = grids[ax][cell[ax]];
                const Rational& hi = grids[ax][cell[ax] + 1];
                UniPoly piece = t.factors[ax].piece_on_cell(lo, hi);
                v *= piece.times_power(expo[ax]).integral(lo, hi);
            }
            acc += v;
        }
        return acc;
    };

    std::function<bool(int)> over_expo = [&](int a) -> bool {
        if (a == axes_) return moment_sum() == 0;
        for (expo[a] = 0; expo[a] <= maxdeg; ++expo[a])
            if (!over_expo(a + 1)) return false;
        return true;
    };
    std::function<bool(int)> over_cells = [&](int a) -> bool {
        if (a == axes_) return over_expo(0);
        for (cell[a] = 0; cell[a] + 1 < grids[a].size(); ++cell[a])
            if (!over_cells(a + 1)) return false;
        return true;
    };
    return over_cells(0);
}

} // namespace formacalc
