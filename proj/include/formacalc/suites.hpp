#pragma once

#include <chrono>

#include "formacalc/certify.hpp"

namespace formacalc {

/// Result of one named identity suite run; deterministic given the inputs
/// except for the wall time, which is reported but never compared.
struct CheckResult {
    std::string suite;
    Space space;
    int samples = 0;
    bool pass = false;
    std::string detail; // failure witness or summary counts
    long wall_ms = 0;
};

struct CheckLimits {
    unsigned max_xdeg = 2;
    int terms = 2;
};

namespace suites {

inline CheckResult run_ddzero(Space s, int samples, std::uint64_t seed, const CheckLimits& lim) {
    Gen gen(seed);
    CheckResult res{"ddzero", s, 0, true, "", 0};
    unsigned ydeg = s.k > 0 ? static_cast<unsigned>(std::max(0, s.order - 2)) : 0;
    for (int t = 0; t < samples && res.pass; ++t) {
        int r = static_cast<int>(gen.integer(0, s.n + s.k));
        Form w = gen.form(s, r, lim.max_xdeg, ydeg, lim.terms);
        ++res.samples;
        if (!w.d().d().is_zero()) {
            res.pass = false;
            res.detail = "d(d(w)) != 0 at degree " + std::to_string(r);
        }
    }
    return res;
}

inline CheckResult run_leibniz(Space s, int samples, std::uint64_t seed, const CheckLimits& lim) {
    Gen gen(seed);
    CheckResult res{"leibniz", s, 0, true, "", 0};
    unsigned ydeg = s.k > 0 ? static_cast<unsigned>(std::max(0, s.order - 2)) : 0;
    for (int t = 0; t < samples && res.pass; ++t) {
        int r = static_cast<int>(gen.integer(0, s.n + s.k));
        int q = static_cast<int>(gen.integer(0, s.n + s.k - r >= 0 ? s.n + s.k - r : 0));
        Form a = gen.form(s, r, lim.max_xdeg, ydeg, lim.terms);
        Form b = gen.form(s, q, lim.max_xdeg, ydeg, lim.terms);
        ++res.samples;
        Rational sign = (r % 2 == 0) ? 1 : -1;
        Form lhs = wedge(a, b).d();
        Form rhs = wedge(a.d(), b) + sign * wedge(a, b.d());
        if (!forms_match(lhs, rhs)) {
            res.pass = false;
            res.detail = "Leibniz residual at degrees (" + std::to_string(r) + "," + std::to_string(q) + ")";
        }
    }
    return res;
}

inline CheckResult run_poincare_omega(Space s, int samples, std::uint64_t seed) {
    HomotopyCertificate cert = certify_strong_exactness("omega", s, samples, seed);
    CheckResult res{"poincare omega", s, samples * static_cast<int>(cert.degrees.size()),
                    cert.passed(), "", 0};
    for (const auto& d : cert.degrees)
        if (!d.witness.empty()) res.detail = d.witness;
    if (!cert.augmentation_ok) res.detail = "augmentation retraction failed";
    return res;
}

inline CheckResult run_poincare_dual(Space s, int samples, std::uint64_t seed) {
    HomotopyCertificate cert = certify_strong_exactness("dual", s, samples, seed);
    CheckResult res{"poincare dual", s, samples * static_cast<int>(cert.degrees.size()),
                    cert.passed(), "", 0};
    for (const auto& d : cert.degrees)
        if (!d.witness.empty()) res.detail = d.witness;
    if (!cert.augmentation_ok) res.detail = "augmentation retraction failed";
    return res;
}

inline CheckResult run_adjointness(Space s, int samples, std::uint64_t seed, const CheckLimits& lim) {
    Gen gen(seed);
    CheckResult res{"adjointness", s, 0, true, "", 0};
    unsigned ystar = static_cast<unsigned>(std::max(0, s.order - 1));
    for (int t = 0; t < samples && res.pass; ++t) {
        int r = static_cast<int>(gen.integer(0, std::max(0, s.n + s.k - 1)));
        DualForm eta = gen.dual_form(s, r + 1, ystar);
        Form w = gen.form(s, r, lim.max_xdeg, std::max(0, s.order - 1), lim.terms);
        ++res.samples;
        Rational sign = ((r + 1) % 2 == 0) ? 1 : -1;
        if (pair_dualform(w, dual_d(eta)) != sign * pair_dualform(w.d(), eta)) {
            res.pass = false;
            res.detail = "adjointness residual at degree " + std::to_string(r);
        }
    }
    return res;
}

inline CheckResult run_kunneth(Space s1, Space s2, int samples, std::uint64_t seed,
                               const CheckLimits& lim) {
    Gen gen(seed);
    CheckResult res{"kunneth", Space(s1.n + s2.n, s1.k + s2.k, std::min(s1.order, s2.order)),
                    0, true, "", 0};
    // d-commutation on random pairs.
    for (int t = 0; t < samples && res.pass; ++t) {
        int r1 = static_cast<int>(gen.integer(0, s1.n + s1.k));
        int r2 = static_cast<int>(gen.integer(0, s2.n + s2.k));
        Form a = gen.form(s1, r1, lim.max_xdeg, std::max(0, s1.order - 2), lim.terms);
        Form b = gen.form(s2, r2, lim.max_xdeg, std::max(0, s2.order - 2), lim.terms);
        ++res.samples;
        Rational sign = (r1 % 2 == 0) ? 1 : -1;
        if (!forms_match(kunneth(a, b).d(), kunneth(a.d(), b) + sign * kunneth(a, b.d()))) {
            res.pass = false;
            res.detail = "Psi does not commute with d";
        }
    }
    // Graded dimension counts.
    if (res.pass) {
        for (int r = 0; r <= s1.n + s1.k + s2.n + s2.k && res.pass; ++r) {
            std::size_t sum = 0;
            for (int r1 = 0; r1 <= r; ++r1)
                sum += lambda_count(s1.n, s1.k, r1) * lambda_count(s2.n, s2.k, r - r1);
            if (sum != lambda_count(s1.n + s2.n, s1.k + s2.k, r)) {
                res.pass = false;
                res.detail = "graded dimension mismatch at degree " + std::to_string(r);
            }
        }
    }
    // Duality identity on random pairs.
    for (int t = 0; t < samples && res.pass; ++t) {
        int r1 = static_cast<int>(gen.integer(0, s1.n + s1.k));
        int r2 = static_cast<int>(gen.integer(0, s2.n + s2.k));
        Form a = gen.form(s1, r1, 1, 1, lim.terms);
        Form b = gen.form(s2, r2, 1, 1, lim.terms);
        DualForm ea = gen.dual_form(s1, r1, 1);
        DualForm eb = gen.dual_form(s2, r2, 1);
        ++res.samples;
        Rational sign = ((r1 * r2) % 2 == 0) ? 1 : -1;
        if (pair_dualform(kunneth(a, b), boxtimes(ea, eb)) !=
            sign * pair_dualform(a, ea) * pair_dualform(b, eb)) {
            res.pass = false;
            res.detail = "boxtimes duality residual";
        }
    }
    return res;
}

inline CheckResult run_pullback(Space src, Space tgt, int samples, std::uint64_t seed,
                                const CheckLimits& lim) {
    Gen gen(seed);
    CheckResult res{"pullback", src, 0, true, "", 0};
    for (int t = 0; t < samples && res.pass; ++t) {
        Morphism phi = gen.morphism(src, tgt, lim.max_xdeg);
        FormalFunction a = gen.formal(tgt, lim.max_xdeg, std::max(0, tgt.order - 2), lim.terms);
        FormalFunction b = gen.formal(tgt, lim.max_xdeg, std::max(0, tgt.order - 2), lim.terms);
        ++res.samples;
        if (phi.pullback(a * b) != phi.pullback(a) * phi.pullback(b) ||
            !(phi.pullback(FormalFunction::constant(tgt, 1)) == FormalFunction::constant(src, 1))) {
            res.pass = false;
            res.detail = "pullback is not a unital algebra homomorphism";
            break;
        }
        int r = static_cast<int>(gen.integer(0, tgt.n + tgt.k - 1 >= 0 ? tgt.n + tgt.k - 1 : 0));
        Form w = gen.form(tgt, r, lim.max_xdeg, std::max(0, tgt.order - 2), lim.terms);
        if (!forms_match(pullback_form(phi, w.d()), pullback_form(phi, w).d())) {
            res.pass = false;
            res.detail = "phi-natural does not commute with d";
            break;
        }
        Morphism psi = gen.morphism(tgt, Space(1, 0, tgt.order), lim.max_xdeg);
        FormalFunction g = gen.formal(psi.target(), lim.max_xdeg, 0, lim.terms);
        if (compose(psi, phi).pullback(g) != phi.pullback(psi.pullback(g))) {
            res.pass = false;
            res.detail = "contravariant functoriality residual";
        }
    }
    return res;
}

inline CheckResult run_jets(Space s, int max_total, std::uint64_t /*seed*/) {
    CheckResult res{"jets", s, 0, true, "", 0};
    std::vector<Rational> a;
    for (int i = 0; i < s.n; ++i) a.push_back(Rational(i) - Rational(1, 2));
    std::vector<Rational> neg;
    for (const auto& v : a) neg.push_back(-v);
    std::vector<IdxPair> basis;
    for (int t = 0; t < max_total; ++t)
        for_each_multiindex_of_order(static_cast<std::size_t>(s.n + s.k),
                                     static_cast<unsigned>(t), [&](const MultiIndex& m) {
                                         MultiIndex I(static_cast<std::size_t>(s.n)),
                                             J(static_cast<std::size_t>(s.k));
                                         for (int v = 0; v < s.n; ++v) I[v] = m[v];
                                         for (int v = 0; v < s.k; ++v) J[v] = m[s.n + v];
                                         basis.push_back({I, J});
                                     });
    for (const auto& row : basis) {
        for (const auto& col : basis) {
            if (col.second.order() > static_cast<unsigned>(s.order)) continue;
            PointDistribution d(s, a);
            d.add_term(row.first, row.second, 1);
            FormalFunction f(s);
            f.add_term(col.second, Poly::monomial(col.first, 1).shifted(neg));
            if (row.second.order() > static_cast<unsigned>(f.known_order())) continue;
            Rational got = d.pair(f);
            ++res.samples;
            Rational expect = 0;
            if (row.first == col.first && row.second == col.second)
                expect = Rational(row.first.index_factorial() * row.second.index_factorial());
            if (got != expect) {
                res.pass = false;
                res.detail = "pairing matrix is not diagonal with entries I!J!";
                return res;
            }
        }
    }
    // Jet-space dimension against direct enumeration.
    for (int r = 0; r <= max_total; ++r) {
        std::size_t count = 0;
        if (r > 0)
            for_each_multiindex_up_to(static_cast<std::size_t>(s.n + s.k),
                                      static_cast<unsigned>(r - 1), [&](const MultiIndex&) { ++count; });
        if (Jet::dimension(s.n, s.k, r) != count) {
            res.pass = false;
            res.detail = "jet dimension mismatch at order " + std::to_string(r);
            return res;
        }
    }
    return res;
}

inline CheckResult run_diffop(Space s, int samples, std::uint64_t seed, const CheckLimits& lim) {
    Gen gen(seed);
    CheckResult res{"diffop", s, 0, true, "", 0};
    // Commutator filtration.
    for (int t = 0; t < samples && res.pass; ++t) {
        DiffOp D(s);
        for (int q = 0; q < 2; ++q)
            D.add_term(gen.multiindex(static_cast<std::size_t>(s.n), 2),
                       gen.multiindex(static_cast<std::size_t>(s.k), std::min(2, s.order)),
                       gen.formal(s, lim.max_xdeg, std::max(0, s.order - 2), lim.terms));
        ++res.samples;
        if (D.order() < 1) continue;
        DiffOp c = D.commutator_with_fn(gen.formal(s, lim.max_xdeg, std::max(0, s.order - 2), lim.terms));
        if (c.order() > D.order() - 1) {
            res.pass = false;
            res.detail = "commutator did not drop the order";
        }
    }
    // Jet ideal drop, brute force for i + r <= 5.
    std::vector<Rational> a;
    for (int i = 0; i < s.n; ++i) a.push_back(Rational(1, 2));
    for (int r = 0; r <= 2 && res.pass; ++r)
        for (int i = 0; i + r <= 5 && res.pass; ++i) {
            DiffOp D(s);
            MultiIndex I = gen.multiindex(static_cast<std::size_t>(s.n), s.n > 0 ? r : 0);
            unsigned used = I.order();
            MultiIndex J(static_cast<std::size_t>(s.k));
            if (s.k > 0) J[0] = std::min<unsigned>(r - used, static_cast<unsigned>(s.order));
            D.add_term(I, J, gen.formal(s, 1, 0, 1));
            FormalFunction f = gen.formal(s, 1, 0, 1);
            for (int q = 0; q < i + r; ++q) {
                FormalFunction lin =
                    (s.n > 0 && (s.k == 0 || gen.integer(0, 1) == 0))
                        ? FormalFunction::x(s, 1) - FormalFunction::constant(s, a.empty() ? 0 : a[0])
                        : FormalFunction::y(s, 1);
                f = f * lin;
            }
            if (D.max_dy() > static_cast<unsigned>(f.known_order())) continue;
            FormalFunction Df = D.apply(f);
            if (i > Df.known_order() + 1) continue;
            ++res.samples;
            if (!jet_of(Df, a, i).is_zero()) {
                res.pass = false;
                res.detail = "jet ideal drop failed at (i,r)=(" + std::to_string(i) + "," +
                             std::to_string(r) + ")";
            }
        }
    return res;
}

} // namespace suites

/// Dispatch a named suite. Recognized names: ddzero, leibniz,
/// "poincare omega", "poincare dual", adjointness, kunneth, pullback, jets,
/// diffop. The kunneth and pullback suites split the given space into two
/// factors (first x axis and first y variable go to factor one).
inline CheckResult run_check_suite(const std::string& name, Space s, int samples,
                                   std::uint64_t seed, const CheckLimits& lim = {}) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    if (name == "ddzero") {
        res = suites::run_ddzero(s, samples, seed, lim);
    } else if (name == "leibniz") {
        res = suites::run_leibniz(s, samples, seed, lim);
    } else if (name == "poincare omega") {
        res = suites::run_poincare_omega(s, samples, seed);
    } else if (name == "poincare dual") {
        res = suites::run_poincare_dual(s, samples, seed);
    } else if (name == "adjointness") {
        res = suites::run_adjointness(s, samples, seed, lim);
    } else if (name == "kunneth") {
        Space s1(s.n > 0 ? 1 : 0, s.n > 0 ? 0 : std::min(1, s.k), s.order);
        Space s2(s.n - s1.n, s.k - s1.k, s.order);
        res = suites::run_kunneth(s1, s2, samples, seed, lim);
    } else if (name == "pullback") {
        Space tgt(std::max(1, s.n - 1), s.k, s.order);
        res = suites::run_pullback(s, tgt, samples, seed, lim);
    } else if (name == "jets") {
        res = suites::run_jets(s, 5, seed);
    } else if (name == "diffop") {
        res = suites::run_diffop(s, samples, seed, lim);
    } else {
        fail("E_DOMAIN", "unknown check suite: " + name);
    }
    auto t1 = std::chrono::steady_clock::now();
    res.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return res;
}

} // namespace formacalc
