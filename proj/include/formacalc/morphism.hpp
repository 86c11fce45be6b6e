#pragma once

#include <vector>

#include "formacalc/jet.hpp"

namespace formacalc {

/// Coordinate morphism (R^n)^(k) -> (R^m)^(l), given by its pullback data:
/// the images of the target coordinates x'_i (arbitrary real-type formal
/// functions on the source) and of the formal variables y'_j (formal
/// functions with identically zero reduction, the local-homomorphism
/// condition). Pullback data must be fully known to the source order.
class Morphism {
public:
    Morphism(Space source, Space target, std::vector<FormalFunction> x_pullbacks,
             std::vector<FormalFunction> y_pullbacks)
        : src_(source), tgt_(target), xp_(std::move(x_pullbacks)), yp_(std::move(y_pullbacks)) {
        require(xp_.size() == static_cast<std::size_t>(tgt_.n), "E_DIM",
                "morphism needs one x-pullback per target coordinate");
        require(yp_.size() == static_cast<std::size_t>(tgt_.k), "E_DIM",
                "morphism needs one y-pullback per target formal variable");
        for (const auto& f : xp_) {
            require_same_space(src_, f.space());
            require(f.known_order() == src_.order, "E_TRUNC", "pullback data must be fully known");
        }
        for (const auto& f : yp_) {
            require_same_space(src_, f.space());
            require(f.known_order() == src_.order, "E_TRUNC", "pullback data must be fully known");
            require(f.has_zero_reduction(), "E_DOMAIN",
                    "y-pullback must lie in the maximal ideal (zero reduction)");
        }
    }

    static Morphism identity(Space s) {
        std::vector<FormalFunction> xs, ys;
        for (int i = 1; i <= s.n; ++i) xs.push_back(FormalFunction::x(s, i));
        for (int j = 1; j <= s.k; ++j) ys.push_back(FormalFunction::y(s, j));
        return Morphism(s, s, std::move(xs), std::move(ys));
    }

    const Space& source() const { return src_; }
    const Space& target() const { return tgt_; }
    const std::vector<FormalFunction>& x_pullbacks() const { return xp_; }
    const std::vector<FormalFunction>& y_pullbacks() const { return yp_; }

    /// The reduced map: phi-bar(a) = (values of the x-pullbacks at a).
    std::vector<Rational> base_map(std::span<const Rational> a) const {
        std::vector<Rational> b;
        b.reserve(xp_.size());
        for (const auto& f : xp_) b.push_back(f.value(a));
        return b;
    }

    /// phi^*(g): substitute the pullback data into g. On polynomial data the
    /// Taylor formula collapses to exact substitution, and the y'-tail of g
    /// beyond its known order only touches y-degrees beyond the result's
    /// known order, so the bookkeeping is min(g.known_order, source order).
    FormalFunction pullback(const FormalFunction& g) const {
        require(g.space().same_shape(tgt_), "E_SPACE", "pullback argument lives on the wrong space");
        int ko = std::min(g.known_order(), src_.order);
        FormalFunction acc(src_, ko);
        // Cache powers of the y-pullbacks.
        std::vector<std::vector<FormalFunction>> ypow(yp_.size());
        for (const auto& [K, gK] : g.coeffs()) {
            FormalFunction term = gK.eval<FormalFunction>(xp_, FormalFunction::constant(src_, 1));
            for (std::size_t j = 0; j < yp_.size(); ++j) {
                unsigned e = K[j];
                if (e == 0) continue;
                auto& cache = ypow[j];
                if (cache.empty()) cache.push_back(yp_[j]);
                while (cache.size() < e) cache.push_back(cache.back() * yp_[j]);
                term = term * cache[e - 1];
            }
            acc = acc + term.truncated(ko);
        }
        return acc;
    }

    /// psi o phi, with phi applied first: the pullback tuples of psi are
    /// pulled back through phi.
    friend Morphism compose(const Morphism& psi, const Morphism& phi) {
        require(phi.tgt_.same_shape(psi.src_), "E_SPACE",
                "composition needs target(phi) = source(psi)");
        require(psi.src_.order >= phi.src_.order, "E_TRUNC",
                "composition would lose known-order on the pullback data");
        std::vector<FormalFunction> xs, ys;
        for (const auto& f : psi.xp_) xs.push_back(phi.pullback(f));
        for (const auto& f : psi.yp_) ys.push_back(phi.pullback(f));
        return Morphism(phi.src_, psi.tgt_, std::move(xs), std::move(ys));
    }

    /// Matrix of the induced local homomorphism on truncated stalks,
    /// Jet(target, phi-bar(a), r) -> Jet(source, a, r), columns indexed by
    /// the target monomial basis in the order of jet enumeration.
    struct JetMap {
        std::vector<IdxPair> target_basis;
        std::vector<IdxPair> source_basis;
        std::vector<std::vector<Rational>> matrix; // matrix[row][col]
    };

    JetMap jet_map(std::vector<Rational> a, int r) const {
        require(r <= src_.order + 1 && r <= tgt_.order + 1, "E_TRUNC",
                "jet order exceeds the truncation budget");
        std::vector<Rational> b = base_map(a);
        JetMap out;
        for (int t = 0; t < r; ++t)
            for_each_multiindex_of_order(static_cast<std::size_t>(tgt_.n + tgt_.k),
                                         static_cast<unsigned>(t), [&](const MultiIndex& m) {
                                             out.target_basis.push_back(split(m, tgt_));
                                         });
        for (int t = 0; t < r; ++t)
            for_each_multiindex_of_order(static_cast<std::size_t>(src_.n + src_.k),
                                         static_cast<unsigned>(t), [&](const MultiIndex& m) {
                                             out.source_basis.push_back(split(m, src_));
                                         });
        out.matrix.assign(out.source_basis.size(),
                          std::vector<Rational>(out.target_basis.size(), Rational(0)));
        for (std::size_t col = 0; col < out.target_basis.size(); ++col) {
            const auto& [I, J] = out.target_basis[col];
            // Expand (x'-b)^I y'^J as a formal function on the target.
            Jet e(tgt_, b, r);
            e.add_term(I, J, 1);
            FormalFunction pulled = pullback(jet_to_function(e));
            Jet jet = jet_of(pulled, a, r);
            for (std::size_t row = 0; row < out.source_basis.size(); ++row)
                out.matrix[row][col] = jet.coeff(out.source_basis[row].first, out.source_basis[row].second);
        }
        return out;
    }

private:
    static IdxPair split(const MultiIndex& m, const Space& s) {
        MultiIndex I(static_cast<std::size_t>(s.n)), J(static_cast<std::size_t>(s.k));
        for (int v = 0; v < s.n; ++v) I[v] = m[v];
        for (int v = 0; v < s.k; ++v) J[v] = m[s.n + v];
        return {I, J};
    }

    Space src_;
    Space tgt_;
    std::vector<FormalFunction> xp_;
    std::vector<FormalFunction> yp_;
};

} // namespace formacalc
