#pragma once

#include <random>

#include "formacalc/dual_form.hpp"
#include "formacalc/morphism.hpp"

namespace formacalc {

/// Seed-controlled generators for property runs. All randomness in the
/// library flows through this type, so every check is reproducible from
/// (script, seed).
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& engine() { return rng_; }

    long integer(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng_);
    }

    Rational rational(long max_abs = 6, long max_den = 4) {
        long num = integer(-max_abs, max_abs);
        long den = integer(1, max_den);
        return Rational(Integer(num), Integer(den));
    }

    Rational nonzero_rational(long max_abs = 6, long max_den = 4) {
        Rational r = rational(max_abs, max_den);
        return r == 0 ? Rational(1) : r;
    }

    MultiIndex multiindex(std::size_t nvars, unsigned max_total) {
        MultiIndex m(nvars);
        if (nvars == 0) return m;
        unsigned budget = static_cast<unsigned>(integer(0, max_total));
        for (unsigned t = 0; t < budget; ++t) m[static_cast<std::size_t>(integer(0, nvars - 1))] += 1;
        return m;
    }

    Poly poly(std::size_t nvars, unsigned max_deg, int nterms) {
        Poly p(nvars);
        for (int t = 0; t < nterms; ++t) p.add_term(multiindex(nvars, max_deg), rational());
        return p;
    }

    FormalFunction formal(Space s, unsigned max_xdeg, unsigned max_ydeg, int nterms) {
        FormalFunction f(s);
        max_ydeg = std::min(max_ydeg, static_cast<unsigned>(s.order));
        for (int t = 0; t < nterms; ++t) {
            MultiIndex J = multiindex(static_cast<std::size_t>(s.k), max_ydeg);
            f.add_term(J, poly(static_cast<std::size_t>(s.n), max_xdeg, 1));
        }
        return f;
    }

    Form form(Space s, int degree, unsigned max_xdeg, unsigned max_ydeg, int nterms) {
        Form w(s, degree);
        std::vector<TuplePair> basis;
        for_each_basis_pair(s.n, s.k, degree,
                            [&](const OrderedTuple& I, const OrderedTuple& J) { basis.push_back({I, J}); });
        if (basis.empty()) return w;
        for (int t = 0; t < nterms; ++t) {
            const TuplePair& key = basis[static_cast<std::size_t>(integer(0, basis.size() - 1))];
            w.add_term(key.first, key.second, formal(s, max_xdeg, max_ydeg, 2));
        }
        return w;
    }

    std::vector<Rational> point(int n, long max_abs = 3) {
        std::vector<Rational> a;
        for (int i = 0; i < n; ++i) a.push_back(rational(max_abs, 2));
        return a;
    }

    /// Continuous compactly supported piecewise polynomial: the cumulative of
    /// a mean-zero random piecewise polynomial. Continuity everywhere is what
    /// makes integration by parts boundary-free, which the dual-side
    /// identities rely on.
    PiecewisePoly smooth_pp(long span = 2, unsigned max_deg = 2, int npieces = 2) {
        Rational lo = rational(span, 2);
        std::vector<Rational> breaks{lo};
        for (int i = 0; i < npieces; ++i)
            breaks.push_back(breaks.back() + Rational(Integer(integer(1, 2)), Integer(integer(1, 2))));
        std::vector<UniPoly> pieces;
        for (int i = 0; i < npieces; ++i) {
            std::vector<Rational> c;
            for (unsigned d = 0; d <= max_deg; ++d) c.push_back(rational(3, 2));
            pieces.push_back(UniPoly(std::move(c)));
        }
        PiecewisePoly raw(std::move(breaks), std::move(pieces));
        if (raw.is_zero()) raw = bump(lo, lo + 1);
        Rational total = raw.integral();
        PiecewisePoly balanced = raw - total * bump(raw.support_lo(), raw.support_hi(), true);
        PiecewisePoly result = pp_cumulative_core(balanced);
        return result;
    }

    TensorDensity tensor_density(int axes, int nterms = 1) {
        TensorDensity t(axes);
        for (int q = 0; q < nterms; ++q) {
            std::vector<PiecewisePoly> factors;
            for (int a = 0; a < axes; ++a) factors.push_back(smooth_pp());
            t.add_term(nonzero_rational(), std::move(factors));
        }
        return t;
    }

    Density density(Space s, unsigned max_ystar, int nterms = 1) {
        Density d(s);
        for (int q = 0; q < nterms; ++q)
            d.add_term(multiindex(static_cast<std::size_t>(s.k), max_ystar), tensor_density(s.n));
        return d;
    }

    DualForm dual_form(Space s, int degree, unsigned max_ystar, int nterms = 1) {
        DualForm w(s, degree);
        std::vector<TuplePair> basis;
        for_each_basis_pair(s.n, s.k, s.n + s.k - degree,
                            [&](const OrderedTuple& I, const OrderedTuple& J) { basis.push_back({I, J}); });
        if (basis.empty()) return w;
        for (int t = 0; t < nterms; ++t) {
            const TuplePair& key = basis[static_cast<std::size_t>(integer(0, basis.size() - 1))];
            w.add_term(key.first, key.second, density(s, max_ystar));
        }
        return w;
    }

    /// Random coordinate morphism with polynomial pullback data.
    Morphism morphism(Space src, Space tgt, unsigned max_deg = 2) {
        std::vector<FormalFunction> xs, ys;
        for (int i = 0; i < tgt.n; ++i) xs.push_back(formal(src, max_deg, std::min(2, src.order), 2));
        for (int j = 0; j < tgt.k; ++j) {
            FormalFunction f = formal(src, max_deg, std::min(2, src.order), 2);
            // Force the reduction to zero: drop the J = 0 coefficient.
            FormalFunction g(src, f.known_order());
            for (const auto& [J, p] : f.coeffs())
                if (J.order() >= 1) g.add_term(J, p);
            if (g.has_zero_reduction() && g.is_zero() && src.k >= 1 && src.order >= 1)
                g = FormalFunction::y(src, 1);
            require(g.has_zero_reduction(), "E_INTERNAL", "generator produced nonzero reduction");
            ys.push_back(g);
        }
        return Morphism(src, tgt, std::move(xs), std::move(ys));
    }

private:
    std::mt19937_64 rng_;
};

} // namespace formacalc
