#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "formacalc/poly.hpp"

namespace formacalc {

/// Compactly supported piecewise polynomial on the line: identically zero
/// outside [breaks.front(), breaks.back()], polynomial pieces[i] on
/// [breaks[i], breaks[i+1]]. Canonical form keeps strictly increasing
/// breakpoints, trims zero cells at both ends and merges adjacent equal
/// pieces, so equal functions have equal representations.
///
/// This is the density model: the derivative below is the piecewise
/// derivative. Identities that rely on integration by parts hold exactly on
/// continuous elements; the generators used by the test suites only produce
/// those.
class PiecewisePoly {
public:
    PiecewisePoly() = default;

    PiecewisePoly(std::vector<Rational> breaks, std::vector<UniPoly> pieces)
        : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
        require(breaks_.size() == pieces_.size() + 1 || (breaks_.empty() && pieces_.empty()),
                "E_DOMAIN", "piecewise polynomial needs one more breakpoint than pieces");
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
            require(breaks_[i] < breaks_[i + 1], "E_DOMAIN", "breakpoints must be strictly increasing");
        canonicalize();
    }

    static PiecewisePoly zero() { return {}; }

    /// Single polynomial piece on [a, b].
    static PiecewisePoly single(const Rational& a, const Rational& b, UniPoly p) {
        require(a < b, "E_DOMAIN", "degenerate interval");
        return PiecewisePoly({a, b}, {std::move(p)});
    }

    bool is_zero() const { return pieces_.empty(); }
    const std::vector<Rational>& breaks() const { return breaks_; }
    const std::vector<UniPoly>& pieces() const { return pieces_; }

    Rational support_lo() const { return is_zero() ? Rational(0) : breaks_.front(); }
    Rational support_hi() const { return is_zero() ? Rational(0) : breaks_.back(); }

    /// Value at x; at an interior breakpoint the right piece wins (the choice
    /// is irrelevant for all integral computations).
    Rational eval(const Rational& x) const {
        if (is_zero() || x < breaks_.front() || x > breaks_.back()) return 0;
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            if (x <= breaks_[i + 1]) {
                if (x < breaks_[i + 1] || i + 1 == pieces_.size()) return pieces_[i].eval(x);
            }
        return pieces_.back().eval(x);
    }

    PiecewisePoly operator-() const {
        PiecewisePoly r = *this;
        for (auto& p : r.pieces_) p = -p;
        return r;
    }

    friend PiecewisePoly operator*(const Rational& s, const PiecewisePoly& f) {
        if (s == 0) return {};
        PiecewisePoly r = f;
        for (auto& p : r.pieces_) p = s * p;
        return r;
    }

    friend PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b) {
        return combine(a, b, [](const UniPoly& x, const UniPoly& y) { return x + y; });
    }

    friend PiecewisePoly operator-(const PiecewisePoly& a, const PiecewisePoly& b) {
        return combine(a, b, [](const UniPoly& x, const UniPoly& y) { return x - y; });
    }

    friend PiecewisePoly operator*(const PiecewisePoly& a, const PiecewisePoly& b) {
        return combine(a, b, [](const UniPoly& x, const UniPoly& y) { return x * y; });
    }

    bool operator==(const PiecewisePoly& o) const {
        return breaks_ == o.breaks_ && pieces_ == o.pieces_;
    }

    /// Piecewise derivative (jumps at breakpoints are discarded).
    PiecewisePoly derivative() const {
        if (is_zero()) return {};
        std::vector<UniPoly> d;
        d.reserve(pieces_.size());
        for (const auto& p : pieces_) d.push_back(p.derivative());
        return PiecewisePoly(breaks_, std::move(d));
    }

    Rational integral() const {
        Rational acc = 0;
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            acc += pieces_[i].integral(breaks_[i], breaks_[i + 1]);
        return acc;
    }

    /// Exact moment: integral of x^m * f(x).
    Rational moment(unsigned m) const {
        Rational acc = 0;
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            acc += pieces_[i].times_power(m).integral(breaks_[i], breaks_[i + 1]);
        return acc;
    }

    /// Integral of q(x) * f(x) for a polynomial test function q.
    Rational integral_against(const UniPoly& q) const {
        Rational acc = 0;
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            acc += (q * pieces_[i]).integral(breaks_[i], breaks_[i + 1]);
        return acc;
    }

    bool is_continuous() const {
        if (is_zero()) return true;
        if (pieces_.front().eval(breaks_.front()) != 0) return false;
        if (pieces_.back().eval(breaks_.back()) != 0) return false;
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
            if (pieces_[i].eval(breaks_[i + 1]) != pieces_[i + 1].eval(breaks_[i + 1])) return false;
        return true;
    }

    /// The polynomial representing f on a cell [lo, hi] whose interior meets
    /// no breakpoint of f (zero when the cell lies outside the support).
    UniPoly piece_on_cell(const Rational& lo, const Rational& hi) const {
        return piece_on(lo, hi);
    }

private:
    template <class Op>
    static PiecewisePoly combine(const PiecewisePoly& a, const PiecewisePoly& b, Op op) {
        if (a.is_zero() && b.is_zero()) return {};
        std::set<Rational> grid;
        for (const auto& x : a.breaks_) grid.insert(x);
        for (const auto& x : b.breaks_) grid.insert(x);
        std::vector<Rational> breaks(grid.begin(), grid.end());
        std::vector<UniPoly> pieces;
        pieces.reserve(breaks.size() - 1);
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            pieces.push_back(op(a.piece_on(breaks[i], breaks[i + 1]), b.piece_on(breaks[i], breaks[i + 1])));
        return PiecewisePoly(std::move(breaks), std::move(pieces));
    }

    /// The polynomial representing f on [lo, hi]; requires that no breakpoint
    /// of f lies strictly inside (guaranteed on a refined grid).
    UniPoly piece_on(const Rational& lo, const Rational& hi) const {
        if (is_zero() || hi <= breaks_.front() || lo >= breaks_.back()) return {};
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            if (lo >= breaks_[i] && hi <= breaks_[i + 1]) return pieces_[i];
        fail("E_INTERNAL", "cell not aligned with piecewise grid");
    }

    void canonicalize() {
        // Trim zero cells at the ends.
        std::size_t lo = 0, hi = pieces_.size();
        while (lo < hi && pieces_[lo].is_zero()) ++lo;
        while (hi > lo && pieces_[hi - 1].is_zero()) --hi;
        if (lo == hi) {
            breaks_.clear();
            pieces_.clear();
            return;
        }
        std::vector<Rational> nb(breaks_.begin() + lo, breaks_.begin() + hi + 1);
        std::vector<UniPoly> np(pieces_.begin() + lo, pieces_.begin() + hi);
        // Merge adjacent cells carrying the same polynomial.
        std::vector<Rational> mb{nb.front()};
        std::vector<UniPoly> mp;
        for (std::size_t i = 0; i < np.size(); ++i) {
            if (!mp.empty() && mp.back() == np[i]) {
                mb.back() = nb[i + 1];
            } else {
                mp.push_back(np[i]);
                mb.push_back(nb[i + 1]);
            }
        }
        breaks_ = std::move(mb);
        pieces_ = std::move(mp);
    }

    friend class Cumulative;

    std::vector<Rational> breaks_;
    std::vector<UniPoly> pieces_;
};

/// a -> integral of f over (-inf, a]: zero left of the support, the running
/// antiderivative inside it, and the constant total integral to the right.
class Cumulative {
public:
    explicit Cumulative(const PiecewisePoly& f) : f_(f) {
        Rational acc = 0;
        for (std::size_t i = 0; i < f.pieces().size(); ++i) {
            UniPoly F = f.pieces()[i].antiderivative();
            // piece value at a = acc + F(a) - F(left endpoint)
            cells_.push_back(F + UniPoly::constant(acc - F.eval(f.breaks()[i])));
            acc += f.pieces()[i].integral(f.breaks()[i], f.breaks()[i + 1]);
        }
        tail_ = acc;
    }

    Rational tail() const { return tail_; }

    Rational eval(const Rational& a) const {
        if (f_.is_zero()) return 0;
        if (a <= f_.breaks().front()) return 0;
        if (a >= f_.breaks().back()) return tail_;
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (a <= f_.breaks()[i + 1]) return cells_[i].eval(a);
        return tail_;
    }

    /// Polynomial representation on a cell [lo, hi] that contains no
    /// breakpoint of f in its interior.
    UniPoly on_cell(const Rational& lo, const Rational& hi) const {
        if (f_.is_zero() || hi <= f_.support_lo()) return {};
        if (lo >= f_.support_hi()) return UniPoly::constant(tail_);
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (lo >= f_.breaks()[i] && hi <= f_.breaks()[i + 1]) return cells_[i];
        fail("E_INTERNAL", "cell not aligned with cumulative grid");
    }

    /// Materialize as a plain piecewise polynomial together with the tail;
    /// the core covers exactly the support of f.
    PiecewisePoly core() const {
        if (f_.is_zero()) return {};
        return PiecewisePoly(f_.breaks(), cells_);
    }

private:
    PiecewisePoly f_;
    std::vector<UniPoly> cells_;
    Rational tail_;
};

inline PiecewisePoly pp_cumulative_core(const PiecewisePoly& f) { return Cumulative(f).core(); }

/// (f1 (*) f2)(a) = Int f1 * Int_{-inf}^a f2 - Int f2 * Int_{-inf}^a f1.
/// Antisymmetric and compactly supported whenever f1, f2 are.
inline PiecewisePoly star(const PiecewisePoly& f1, const PiecewisePoly& f2) {
    if (f1.is_zero() || f2.is_zero()) return {};
    Cumulative F1(f1), F2(f2);
    Rational i1 = F1.tail(), i2 = F2.tail();
    std::set<Rational> grid;
    for (const auto& x : f1.breaks()) grid.insert(x);
    for (const auto& x : f2.breaks()) grid.insert(x);
    std::vector<Rational> breaks(grid.begin(), grid.end());
    std::vector<UniPoly> pieces;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        pieces.push_back(i1 * F2.on_cell(breaks[i], breaks[i + 1]) -
                         i2 * F1.on_cell(breaks[i], breaks[i + 1]));
    return PiecewisePoly(std::move(breaks), std::move(pieces));
}

/// C^1 bump supported exactly on [a, b]: the cubic ramp 3u^2 - 2u^3 rising on
/// [a, m] and falling on [m, b] with m the midpoint. Value and first
/// derivative vanish at a and b; the peak value is 1.
inline PiecewisePoly bump(const Rational& a, const Rational& b, bool normalize = false) {
    require(a < b, "E_DOMAIN", "degenerate bump interval");
    Rational m = (a + b) / 2;
    UniPoly s({Rational(0), Rational(0), Rational(3), Rational(-2)}); // 3u^2 - 2u^3
    // u = (x - a)/(m - a) on the way up, u = (b - x)/(b - m) on the way down.
    UniPoly up = s.compose_linear(Rational(1) / (m - a), -a / (m - a));
    UniPoly down = s.compose_linear(Rational(-1) / (b - m), b / (b - m));
    PiecewisePoly f({a, m, b}, {up, down});
    if (normalize) f = (Rational(1) / f.integral()) * f;
    return f;
}

} // namespace formacalc
