#pragma once

#include <random>

#include "formacalc/jet.hpp"

namespace formacalc {

/// Differential operator in normal form: a finite sum
/// sum f_{I,J} o d_x^I d_y^J with formal-function coefficients. The normal
/// form is unique, so the order is read off as max |I|+|J|; the commutator
/// characterization of the order is available as a randomized certificate.
class DiffOp {
public:
    explicit DiffOp(Space space) : space_(space) {}

    static DiffOp identity(Space s) {
        DiffOp d(s);
        d.add_term(MultiIndex(static_cast<std::size_t>(s.n)),
                   MultiIndex(static_cast<std::size_t>(s.k)), FormalFunction::constant(s, 1));
        return d;
    }

    static DiffOp partial_x(Space s, int i) {
        DiffOp d(s);
        d.add_term(MultiIndex::unit(static_cast<std::size_t>(s.n), static_cast<std::size_t>(i - 1)),
                   MultiIndex(static_cast<std::size_t>(s.k)), FormalFunction::constant(s, 1));
        return d;
    }

    static DiffOp partial_y(Space s, int j) {
        DiffOp d(s);
        d.add_term(MultiIndex(static_cast<std::size_t>(s.n)),
                   MultiIndex::unit(static_cast<std::size_t>(s.k), static_cast<std::size_t>(j - 1)),
                   FormalFunction::constant(s, 1));
        return d;
    }

    const Space& space() const { return space_; }
    const std::map<IdxPair, FormalFunction, IdxPairLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(MultiIndex I, MultiIndex J, const FormalFunction& coeff) {
        require(I.size() == static_cast<std::size_t>(space_.n) &&
                    J.size() == static_cast<std::size_t>(space_.k),
                "E_DIM", "operator index arity mismatch");
        require_same_space(space_, coeff.space());
        if (coeff.is_zero()) return;
        auto key = IdxPair{std::move(I), std::move(J)};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), coeff);
        } else {
            FormalFunction s = it->second + coeff;
            if (s.is_zero())
                terms_.erase(it);
            else
                it->second = s;
        }
    }

    /// Order of the normal form: max |I|+|J| over nonzero terms (-1 for 0).
    int order() const {
        int o = -1;
        for (const auto& [key, c] : terms_)
            o = std::max(o, static_cast<int>(key.first.order() + key.second.order()));
        return o;
    }

    /// Largest |J| over the terms; the y-derivative budget apply() consumes.
    unsigned max_dy() const {
        unsigned m = 0;
        for (const auto& [key, c] : terms_) m = std::max(m, key.second.order());
        return m;
    }

    FormalFunction apply(const FormalFunction& f) const {
        require_same_space(space_, f.space());
        require(max_dy() <= static_cast<unsigned>(f.known_order()), "E_TRUNC",
                "known_order exhausted by the operator's y-derivatives");
        int ko = f.known_order() - static_cast<int>(max_dy());
        FormalFunction acc(space_, 0);
        bool first = true;
        for (const auto& [key, c] : terms_) {
            FormalFunction piece = c * f.derivative(key.first, key.second);
            piece = piece.truncated(ko);
            if (first) {
                acc = piece;
                first = false;
            } else {
                acc = acc + piece;
            }
        }
        return first ? FormalFunction(space_, std::min(ko, space_.order)) : acc;
    }

    DiffOp operator-() const {
        DiffOp r(space_);
        for (const auto& [key, c] : terms_) r.terms_.emplace(key, -c);
        return r;
    }

    friend DiffOp operator+(DiffOp a, const DiffOp& b) {
        require_same_space(a.space_, b.space_);
        for (const auto& [key, c] : b.terms_) a.add_term(key.first, key.second, c);
        return a;
    }

    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a + (-b); }

    friend DiffOp operator*(const Rational& s, const DiffOp& d) {
        DiffOp r(d.space_);
        if (s == 0) return r;
        for (const auto& [key, c] : d.terms_) r.terms_.emplace(key, s * c);
        return r;
    }

    /// [D, g] = D o m_g - m_g o D in normal form, via the Leibniz expansion
    /// d^I d^J(g u) = sum binom(I,A) binom(J,B) d^{I-A,J-B}(g) d^{A,B}(u).
    /// The (A,B) = (I,J) term cancels against m_g o D, so the order drops.
    DiffOp commutator_with_fn(const FormalFunction& g) const {
        require_same_space(space_, g.space());
        DiffOp r(space_);
        for (const auto& [key, c] : terms_) {
            const MultiIndex& I = key.first;
            const MultiIndex& J = key.second;
            for_each_multiindex_up_to(I.size(), I.order(), [&](const MultiIndex& A) {
                if (!A.divides(I)) return;
                for_each_multiindex_up_to(J.size(), J.order(), [&](const MultiIndex& B) {
                    if (!B.divides(J)) return;
                    if (A == I && B == J) return;
                    Rational factor(binomial(I, A) * binomial(J, B));
                    FormalFunction coeff = factor * (c * g.derivative(I - A, J - B));
                    r.add_term(A, B, coeff);
                });
            });
        }
        return r;
    }

private:
    Space space_;
    std::map<IdxPair, FormalFunction, IdxPairLess> terms_;
};

/// Order certificate: checks that every (r+1)-fold iterated commutator with
/// multiplication operators vanishes. Random trials sample the multipliers
/// from monomials of degree <= order+2; when the normal form exceeds r a
/// deterministic witness path (coordinates matching a maximal term, against
/// which a commutator can never cancel) is also walked, so the two readings
/// always agree unless the implementation itself is broken.
inline bool diffop_order_certificate(const DiffOp& D, int r, int trials, std::uint64_t seed = 1) {
    require(r >= 0, "E_DIM", "order bound must be nonnegative");
    bool by_normal_form = D.order() <= r;

    Space s = D.space();
    std::mt19937_64 rng(seed);
    unsigned maxdeg = static_cast<unsigned>(std::max(0, D.order()) + 2);
    std::vector<FormalFunction> pool;
    for_each_multiindex_up_to(static_cast<std::size_t>(s.n + s.k), maxdeg, [&](const MultiIndex& m) {
        MultiIndex I(static_cast<std::size_t>(s.n)), J(static_cast<std::size_t>(s.k));
        for (int v = 0; v < s.n; ++v) I[v] = m[v];
        for (int v = 0; v < s.k; ++v) J[v] = m[s.n + v];
        if (J.order() > static_cast<unsigned>(s.order)) return;
        Poly xpart = Poly::monomial(I, 1);
        FormalFunction f(s);
        f.add_term(J, xpart);
        pool.push_back(f);
    });

    bool by_commutators = true;
    for (int t = 0; t < trials && by_commutators; ++t) {
        DiffOp cur = D;
        for (int step = 0; step <= r && !cur.is_zero(); ++step)
            cur = cur.commutator_with_fn(pool[rng() % pool.size()]);
        if (!cur.is_zero()) by_commutators = false;
    }

    if (by_commutators && !by_normal_form) {
        // Walk the witness path: multiply by the coordinates of a maximal
        // term. Each step sends (I,J) to (I - e, J) with a positive factor
        // and distinct terms stay distinct, so the surviving term cannot
        // cancel and r+1 steps leave a nonzero operator.
        IdxPair top;
        int best = -1;
        for (const auto& [key, c] : D.terms()) {
            int o = static_cast<int>(key.first.order() + key.second.order());
            if (o > best) {
                best = o;
                top = key;
            }
        }
        std::vector<FormalFunction> path;
        for (int v = 0; v < s.n; ++v)
            for (unsigned t = 0; t < top.first[v]; ++t) path.push_back(FormalFunction::x(s, v + 1));
        for (int v = 0; v < s.k; ++v)
            for (unsigned t = 0; t < top.second[v]; ++t) path.push_back(FormalFunction::y(s, v + 1));
        DiffOp cur = D;
        for (int step = 0; step <= r; ++step) cur = cur.commutator_with_fn(path[step]);
        if (!cur.is_zero()) by_commutators = false;
    }

    require(by_normal_form == by_commutators, "E_INTERNAL",
            "normal-form order and commutator certificate disagree");
    return by_normal_form;
}

} // namespace formacalc
