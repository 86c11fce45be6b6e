#pragma once

#include <map>
#include <utility>

#include "formacalc/morphism.hpp"

namespace formacalc {

using TuplePair = std::pair<OrderedTuple, OrderedTuple>;

struct TuplePairLess {
    bool operator()(const TuplePair& a, const TuplePair& b) const {
        if (!(a.first == b.first)) return a.first < b.first;
        return a.second < b.second;
    }
};

/// Differential form on (R^n)^(k) in coordinate normal form: a sum of
/// f_{I,J} dx_I dy_J over (I,J) in Lambda_{n,k}^r, with the dx block before
/// the dy block and each block ascending. All signs in the library derive
/// from this single convention.
///
/// Besides the per-coefficient known_order tags, the form carries its own
/// provable window. Coefficients that cancel to zero drop out of the term
/// map, and without the form-level window a zero result would overclaim
/// how far it is known; every operation therefore folds the windows of all
/// inputs it consumed into the result, and the y-part of d costs one order.
class Form {
public:
    Form(Space space, int degree) : space_(space), degree_(degree), window_(space.order) {
        require(degree_ >= 0, "E_DEGREE", "form degree must be nonnegative");
    }

    static Form from_function(const FormalFunction& f) {
        Form w(f.space(), 0);
        w.add_term(OrderedTuple{}, OrderedTuple{}, f);
        return w;
    }

    static Form dx(Space s, int i) {
        require(i >= 1 && i <= s.n, "E_DIM", "dx index out of range");
        Form w(s, 1);
        w.add_term(OrderedTuple{i}, OrderedTuple{}, FormalFunction::constant(s, 1));
        return w;
    }

    static Form dy(Space s, int j) {
        require(j >= 1 && j <= s.k, "E_DIM", "dy index out of range");
        Form w(s, 1);
        w.add_term(OrderedTuple{}, OrderedTuple{j}, FormalFunction::constant(s, 1));
        return w;
    }

    const Space& space() const { return space_; }
    int degree() const { return degree_; }
    const std::map<TuplePair, FormalFunction, TuplePairLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(OrderedTuple I, OrderedTuple J, const FormalFunction& f) {
        require(static_cast<int>(I.size() + J.size()) == degree_, "E_DEGREE",
                "basis element degree mismatch");
        require(I.within(space_.n) && J.within(space_.k), "E_DIM", "basis index out of range");
        require_same_space(space_, f.space());
        if (f.is_zero()) return;
        window_ = std::min(window_, f.known_order());
        auto key = TuplePair{std::move(I), std::move(J)};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), f);
        } else {
            FormalFunction s = it->second + f;
            if (s.is_zero())
                terms_.erase(it);
            else
                it->second = s;
        }
    }

    FormalFunction coeff(const OrderedTuple& I, const OrderedTuple& J) const {
        auto it = terms_.find({I, J});
        return it == terms_.end() ? FormalFunction(space_, space_.order) : it->second;
    }

    int window() const { return window_; }
    void set_window(int w) { window_ = std::min(window_, w); }

    Form operator-() const {
        Form r(space_, degree_);
        r.window_ = window_;
        for (const auto& [k, f] : terms_) r.terms_.emplace(k, -f);
        return r;
    }

    friend Form operator+(Form a, const Form& b) {
        require_same_space(a.space_, b.space_);
        require(a.degree_ == b.degree_, "E_DEGREE", "cannot add forms of different degrees");
        a.window_ = std::min(a.window_, b.window_);
        for (const auto& [k, f] : b.terms_) a.add_term(k.first, k.second, f);
        return a;
    }

    friend Form operator-(Form a, const Form& b) { return a + (-b); }

    friend Form operator*(const Rational& s, const Form& w) {
        Form r(w.space_, w.degree_);
        r.window_ = w.window_;
        if (s == 0) return r;
        for (const auto& [k, f] : w.terms_) r.terms_.emplace(k, s * f);
        return r;
    }

    friend Form operator*(const FormalFunction& g, const Form& w) {
        Form r(w.space_, w.degree_);
        r.window_ = std::min(w.window_, g.known_order());
        for (const auto& [k, f] : w.terms_) r.add_term(k.first, k.second, g * f);
        return r;
    }

    bool operator==(const Form& o) const {
        return space_ == o.space_ && degree_ == o.degree_ && terms_ == o.terms_;
    }

    /// Bilinear associative graded-commutative product; basis signs come
    /// from merging the (x-block, y-block) generator lists.
    friend Form wedge(const Form& a, const Form& b) {
        require_same_space(a.space_, b.space_);
        Form r(a.space_, a.degree_ + b.degree_);
        r.window_ = std::min(a.window_, b.window_);
        for (const auto& [ka, fa] : a.terms_)
            for (const auto& [kb, fb] : b.terms_) {
                BlockMerge bm = merge_basis(ka.first, ka.second, kb.first, kb.second);
                if (bm.sign == 0) continue;
                r.add_term(bm.xs, bm.ys, Rational(bm.sign) * (fa * fb));
            }
        return r;
    }

    /// Coordinate coboundary: d(f dx_I dy_J) =
    /// sum_i (d_{x_i} f) dx_i ^ dx_I dy_J + sum_j (d_{y_j} f) dy_j ^ dx_I dy_J.
    Form d() const {
        Form r(space_, degree_ + 1);
        r.window_ = (space_.k > 0) ? std::max(0, window_ - 1) : window_;
        for (const auto& [key, f] : terms_) {
            for (int i = 1; i <= space_.n; ++i) {
                FormalFunction df = f.dx(i);
                if (df.is_zero()) continue;
                MergeResult m = merge_tuples(OrderedTuple{i}, key.first);
                if (m.sign == 0) continue;
                r.add_term(m.merged, key.second, Rational(m.sign) * df);
            }
            for (int j = 1; j <= space_.k; ++j) {
                if (f.known_order() < 1) fail("E_TRUNC", "known_order exhausted by d");
                FormalFunction df = f.dy(j);
                if (df.is_zero()) continue;
                MergeResult m = merge_tuples(OrderedTuple{j}, key.second);
                if (m.sign == 0) continue;
                int sign = m.sign * ((key.first.size() % 2 == 0) ? 1 : -1); // dy_j passes dx_I
                r.add_term(key.first, m.merged, Rational(sign) * df);
            }
        }
        return r;
    }

    unsigned max_y_degree() const {
        unsigned d = 0;
        for (const auto& [k, f] : terms_) d = std::max(d, f.y_degree());
        return d;
    }

    int min_known_order() const {
        int ko = window_;
        for (const auto& [k, f] : terms_) ko = std::min(ko, f.known_order());
        return ko;
    }

private:
    Space space_;
    int degree_;
    int window_;
    std::map<TuplePair, FormalFunction, TuplePairLess> terms_;
};

/// phi-natural: pullback of forms, phi#(f dx'_I dy'_J) =
/// d(phi* x'_{i1}) ^ ... ^ d(phi* y'_{jt}) ^ phi*(f).
inline Form pullback_form(const Morphism& phi, const Form& w) {
    require(w.space().same_shape(phi.target()), "E_SPACE",
            "form pullback argument lives on the wrong space");
    Space s = phi.source();
    Form r(s, w.degree());
    r.set_window(std::min(w.window(), s.order));
    // d of the pullback of each target coordinate, cached.
    std::vector<Form> dxp, dyp;
    for (const auto& f : phi.x_pullbacks()) dxp.push_back(Form::from_function(f).d());
    for (const auto& f : phi.y_pullbacks()) dyp.push_back(Form::from_function(f).d());
    for (const auto& [key, f] : w.terms()) {
        Form acc = Form::from_function(phi.pullback(f));
        for (std::size_t t = key.second.size(); t-- > 0;) acc = wedge(dyp[key.second[t] - 1], acc);
        for (std::size_t t = key.first.size(); t-- > 0;) acc = wedge(dxp[key.first[t] - 1], acc);
        r = r + acc;
    }
    return r;
}

/// Kunneth product Psi(w1 (x) w2) on the product space: coefficients are
/// external products and the basis blocks concatenate with the sign
/// (-1)^{s1 t2} (s1 = |J1|, t2 = |I2|) from reordering into normal form.
inline Form kunneth(const Form& w1, const Form& w2) {
    const Space& s1 = w1.space();
    const Space& s2 = w2.space();
    Space s3(s1.n + s2.n, s1.k + s2.k, std::min(s1.order, s2.order));
    Form r(s3, w1.degree() + w2.degree());
    r.set_window(std::min(w1.window(), w2.window()));
    for (const auto& [k1, f1] : w1.terms())
        for (const auto& [k2, f2] : w2.terms()) {
            MergeResult mx = merge_tuples(k1.first, k2.first.shifted(s1.n));
            MergeResult my = merge_tuples(k1.second, k2.second.shifted(s1.k));
            // Disjoint by construction.
            int sign = ((k1.second.size() * k2.first.size()) % 2 == 0) ? 1 : -1;
            r.add_term(mx.merged, my.merged, Rational(sign) * external_product(f1, f2));
        }
    return r;
}

} // namespace formacalc
