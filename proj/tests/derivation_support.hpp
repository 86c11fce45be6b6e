#pragma once

// Test-only machinery for exercising the intrinsic (derivation-based)
// definition of the coboundary against the coordinate formula. Brackets of
// general derivations live here on purpose: on coordinate derivations they
// vanish, which is why the library's coordinate d suffices.

#include "formacalc/form.hpp"

namespace formacalc {

/// Derivation X = sum a_i d_{x_i} + sum b_j d_{y_j} with formal-function
/// coefficients; used to exercise the intrinsic definition of d.
struct Derivation {
    Space space;
    std::vector<FormalFunction> ax; // size n
    std::vector<FormalFunction> by; // size k

    FormalFunction apply(const FormalFunction& f) const {
        FormalFunction acc(space, std::max(0, f.known_order() - 1));
        for (int i = 1; i <= space.n; ++i) acc = acc + ax[i - 1] * f.dx(i);
        for (int j = 1; j <= space.k; ++j) acc = acc + by[j - 1] * f.dy(j);
        return acc;
    }

    friend Derivation bracket(const Derivation& X, const Derivation& Y) {
        Derivation Z{X.space, {}, {}};
        for (int i = 1; i <= X.space.n; ++i) Z.ax.push_back(X.apply(Y.ax[i - 1]) - Y.apply(X.ax[i - 1]));
        for (int j = 1; j <= X.space.k; ++j) Z.by.push_back(X.apply(Y.by[j - 1]) - Y.apply(X.by[j - 1]));
        return Z;
    }

    /// Component along the basis covector dz_c (x's first, then y's).
    FormalFunction component(int c) const { return c <= space.n ? ax[c - 1] : by[c - space.n - 1]; }
};

/// Evaluate a form on derivations: (dz_{c1} ^ ... ^ dz_{cr})(X_1,..,X_r) is
/// the determinant of the component matrix.
inline FormalFunction eval_form(const Form& w, const std::vector<Derivation>& X) {
    require(static_cast<int>(X.size()) == w.degree(), "E_DEGREE",
            "evaluation needs one derivation per form degree");
    Space s = w.space();
    FormalFunction acc(s, s.order);
    for (const auto& [key, f] : w.terms()) {
        std::vector<int> c;
        for (std::size_t t = 0; t < key.first.size(); ++t) c.push_back(key.first[t]);
        for (std::size_t t = 0; t < key.second.size(); ++t) c.push_back(s.n + key.second[t]);
        // Leibniz expansion of det over permutations; degrees here are <= 3.
        std::vector<int> perm(c.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        FormalFunction det(s, s.order);
        do {
            int sgn = 1;
            for (std::size_t i = 0; i < perm.size(); ++i)
                for (std::size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) sgn = -sgn;
            FormalFunction prod = FormalFunction::constant(s, 1);
            for (std::size_t i = 0; i < perm.size(); ++i)
                prod = prod * X[perm[i]].component(c[i]);
            det = det + Rational(sgn) * prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
        acc = acc + f * det;
    }
    return acc;
}

} // namespace formacalc
