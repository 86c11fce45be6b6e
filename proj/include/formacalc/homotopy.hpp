#pragma once

#include <functional>
#include <optional>
#include <string>

#include "formacalc/dual_form.hpp"

namespace formacalc {

// ---------------------------------------------------------------------------
// Function-coefficient (Omega) side
// ---------------------------------------------------------------------------

/// Augmentation g: value of the degree-0 part at the origin (x = 0, y = 0).
inline Rational omega_g(const Form& w) {
    if (w.degree() != 0) return 0;
    FormalFunction f = w.coeff(OrderedTuple{}, OrderedTuple{});
    std::vector<Rational> origin(static_cast<std::size_t>(w.space().n), Rational(0));
    return f.value(origin);
}

/// Constant embedding eps: a scalar as a degree-0 form.
inline Form omega_eps(Space s, const Rational& v) {
    Form w(s, 0);
    if (v != 0) w.add_term(OrderedTuple{}, OrderedTuple{}, FormalFunction::constant(s, v));
    return w;
}

/// The radial (cone) homotopy at the origin, treating x and y uniformly as
/// joint coordinates z:
///   K(f dz_{c1..cr}) = sum_j (-1)^{j-1} z_{cj} S_r(f) dz_{c1}..^{cj}..dz_{cr},
/// with S_r scaling a monomial of total degree m by 1/(m+r). Satisfies
/// dK + Kd = id - eps o g on polynomial data within the truncation budget.
inline Form radial_homotopy(const Form& w) {
    const Space& s = w.space();
    int r = w.degree();
    Form out(s, std::max(0, r - 1));
    out.set_window(w.window());
    if (r == 0) return out;
    for (const auto& [key, f] : w.terms()) {
        // S_r(f): per-monomial scaling by 1/(m + r).
        FormalFunction scaled(s, f.known_order());
        for (const auto& [J, p] : f.coeffs())
            for (const auto& [I, c] : p.terms()) {
                unsigned m = I.order() + J.order();
                scaled.add_term(J, Poly::monomial(I, c / Rational(m + static_cast<unsigned>(r))));
            }
        // Combined generator list: x indices then y indices (shifted by n).
        std::vector<int> gen;
        for (std::size_t t = 0; t < key.first.size(); ++t) gen.push_back(key.first[t]);
        for (std::size_t t = 0; t < key.second.size(); ++t) gen.push_back(s.n + key.second[t]);
        for (std::size_t j = 0; j < gen.size(); ++j) {
            int sign = (j % 2 == 0) ? 1 : -1;
            FormalFunction coeff = scaled;
            if (gen[j] <= s.n) {
                coeff = FormalFunction::x(s, gen[j]) * coeff;
            } else {
                require(coeff.y_degree() + 1 <= static_cast<unsigned>(s.order), "E_TRUNC",
                        "radial homotopy exceeds the y-truncation budget");
                coeff = FormalFunction::y(s, gen[j] - s.n) * coeff;
            }
            std::vector<int> xs, ys;
            for (std::size_t t = 0; t < gen.size(); ++t) {
                if (t == j) continue;
                if (gen[t] <= s.n)
                    xs.push_back(gen[t]);
                else
                    ys.push_back(gen[t] - s.n);
            }
            out.add_term(OrderedTuple(xs), OrderedTuple(ys), Rational(sign) * coeff);
        }
    }
    return out;
}

/// The explicit homotopy on (R^0)^(1): c_i y^i dy -> c_i/(i+1) y^{i+1}.
inline Form formal_homotopy(const Form& w) {
    const Space& s = w.space();
    require(s.n == 0 && s.k == 1, "E_SPACE", "formal homotopy lives on the (0,1) model");
    Form out(s, std::max(0, w.degree() - 1));
    out.set_window(w.window());
    if (w.degree() != 1) return out;
    FormalFunction f = w.coeff(OrderedTuple{}, OrderedTuple{1});
    FormalFunction lifted(s, f.known_order());
    for (const auto& [J, p] : f.coeffs()) {
        require(J.order() + 1 <= static_cast<unsigned>(s.order), "E_TRUNC",
                "formal homotopy exceeds the y-truncation budget");
        MultiIndex J2 = J;
        J2[0] += 1;
        lifted.add_term(J2, (Rational(1) / Rational(J.order() + 1)) * p);
    }
    out.add_term(OrderedTuple{}, OrderedTuple{}, lifted);
    return out;
}

/// Homotopy data for an augmented complex Omega^bullet with augmentation
/// g = evaluation at the origin and unit embedding eps. The contract is
/// d h + h d = id - eps o g in every degree.
struct FormHomotopy {
    Space space;
    std::function<Form(const Form&)> h;
};

inline FormHomotopy radial_homotopy_data(Space s) {
    return {s, [](const Form& w) { return radial_homotopy(w); }};
}

inline FormHomotopy formal_homotopy_data(Space s) {
    require(s.n == 0 && s.k == 1, "E_SPACE", "formal homotopy lives on the (0,1) model");
    return {s, [](const Form& w) { return formal_homotopy(w); }};
}

/// Compare forms on the provably known coefficient window.
inline bool forms_match(const Form& a, const Form& b) {
    if (!(a.space().same_shape(b.space())) || a.degree() != b.degree()) return false;
    int ko = std::min(a.min_known_order(), b.min_known_order());
    Form diff = a - b;
    for (const auto& [key, f] : diff.terms())
        if (!f.truncated(ko).is_zero()) return false;
    return true;
}

/// Checks the homotopy identity dh + hd = id - eps o g on one form. For a
/// degree-0 input the dh term lives in the (empty) degree -1 slot and drops.
inline bool omega_identity_holds(const FormHomotopy& H, const Form& w) {
    Form lhs = (w.degree() == 0) ? H.h(w.d()) : H.h(w).d() + H.h(w.d());
    Form rhs = (w.degree() == 0) ? w - omega_eps(w.space(), omega_g(w)) : w;
    return forms_match(lhs, rhs);
}

/// Split a form on a product space into pure Kunneth tensors: w =
/// sum Psi(w1 (x) w2) with monomial factors. Inverse of `kunneth` on bases.
struct KunnethSplit {
    Form w1, w2;
};

inline std::vector<KunnethSplit> kunneth_split(const Form& w, Space s1, Space s2) {
    const Space& s3 = w.space();
    require(s3.n == s1.n + s2.n && s3.k == s1.k + s2.k, "E_SPACE",
            "factor spaces do not partition the product space");
    std::vector<KunnethSplit> out;
    for (const auto& [key, f] : w.terms()) {
        std::vector<int> i1, i2, j1, j2;
        for (std::size_t t = 0; t < key.first.size(); ++t)
            (key.first[t] <= s1.n ? i1 : i2).push_back(key.first[t] <= s1.n ? key.first[t]
                                                                            : key.first[t] - s1.n);
        for (std::size_t t = 0; t < key.second.size(); ++t)
            (key.second[t] <= s1.k ? j1 : j2).push_back(key.second[t] <= s1.k ? key.second[t]
                                                                              : key.second[t] - s1.k);
        int sign = ((j1.size() * i2.size()) % 2 == 0) ? 1 : -1; // divide out the Kunneth sign
        for (const auto& [J, p] : f.coeffs())
            for (const auto& [I, c] : p.terms()) {
                MultiIndex I1(static_cast<std::size_t>(s1.n)), I2(static_cast<std::size_t>(s2.n));
                for (int v = 0; v < s1.n; ++v) I1[v] = I[v];
                for (int v = 0; v < s2.n; ++v) I2[v] = I[s1.n + v];
                MultiIndex J1(static_cast<std::size_t>(s1.k)), J2(static_cast<std::size_t>(s2.k));
                for (int v = 0; v < s1.k; ++v) J1[v] = J[v];
                for (int v = 0; v < s2.k; ++v) J2[v] = J[s1.k + v];
                Form w1(s1, static_cast<int>(i1.size() + j1.size()));
                FormalFunction f1(s1, std::min(f.known_order(), s1.order));
                f1.add_term(J1, Poly::monomial(I1, Rational(sign) * c));
                w1.add_term(OrderedTuple(i1), OrderedTuple(j1), f1);
                Form w2(s2, static_cast<int>(i2.size() + j2.size()));
                FormalFunction f2(s2, std::min(f.known_order(), s2.order));
                f2.add_term(J2, Poly::monomial(I2, 1));
                w2.add_term(OrderedTuple(i2), OrderedTuple(j2), f2);
                out.push_back({std::move(w1), std::move(w2)});
            }
    }
    return out;
}

/// Tensor composition of homotopies: on C1 (x) C2 with the graded tensor
/// differential, H = h1 (x) id + (eps1 g1) (x) h2. The projector factors
/// through degree 0, so the Koszul sign in the second term is always +1.
/// Inputs are validated on a few sampled forms before combining.
FormHomotopy tensor_homotopy(const FormHomotopy& A, const FormHomotopy& B,
                             const std::vector<Form>& validation_a = {},
                             const std::vector<Form>& validation_b = {});

inline FormHomotopy tensor_homotopy(const FormHomotopy& A, const FormHomotopy& B,
                                    const std::vector<Form>& validation_a,
                                    const std::vector<Form>& validation_b) {
    for (const Form& w : validation_a)
        require(omega_identity_holds(A, w), "E_DOMAIN",
                "left homotopy input fails its own identity");
    for (const Form& w : validation_b)
        require(omega_identity_holds(B, w), "E_DOMAIN",
                "right homotopy input fails its own identity");
    Space s1 = A.space, s2 = B.space;
    Space s3(s1.n + s2.n, s1.k + s2.k, std::min(s1.order, s2.order));
    auto h = [A, B, s1, s2, s3](const Form& w) {
        Form acc(s3, std::max(0, w.degree() - 1));
        acc.set_window(w.window());
        for (const KunnethSplit& t : kunneth_split(w, s1, s2)) {
            Form left = A.h(t.w1);
            if (!left.is_zero()) acc = acc + kunneth(left, t.w2);
            if (t.w1.degree() == 0) {
                Rational lambda = omega_g(t.w1);
                if (lambda != 0) {
                    Form right = B.h(t.w2);
                    if (!right.is_zero()) acc = acc + kunneth(omega_eps(s1, lambda), right);
                }
            }
        }
        return acc;
    };
    return {s3, h};
}

// ---------------------------------------------------------------------------
// Compactly supported (dual) side
// ---------------------------------------------------------------------------

/// Per-x-axis normalized bumps used by the alpha embedding and the 1-D
/// convolution homotopy.
struct CsConfig {
    std::vector<PiecewisePoly> bumps; // one per x axis, each with integral 1

    static CsConfig standard(int n) {
        CsConfig c;
        for (int i = 0; i < n; ++i) c.bumps.push_back(bump(0, 1, /*normalize=*/true));
        return c;
    }
};

inline void check_config(const CsConfig& cfg, const Space& s) {
    require(static_cast<int>(cfg.bumps.size()) == s.n, "E_DOMAIN",
            "cs homotopy needs one normalized bump per x axis");
    for (const auto& g : cfg.bumps)
        require(g.integral() == 1, "E_DOMAIN", "configured bump must have integral exactly 1");
}

/// alpha: lambda -> lambda * (g_1 (x) ... (x) g_n) (y*)^0 dx*_{1..n} dy*_{1..k}.
inline DualForm cs_alpha(Space s, const CsConfig& cfg, const Rational& lambda) {
    check_config(cfg, s);
    DualForm out(s, 0);
    if (lambda == 0) return out;
    std::vector<int> all_x, all_y;
    for (int i = 1; i <= s.n; ++i) all_x.push_back(i);
    for (int j = 1; j <= s.k; ++j) all_y.push_back(j);
    TensorDensity t = TensorDensity::product(cfg.bumps, lambda);
    out.add_term(OrderedTuple(all_x), OrderedTuple(all_y),
                 Density::from_tensor(s, t, MultiIndex(static_cast<std::size_t>(s.k))));
    return out;
}

/// The 1-D compactly supported homotopy on (1,0): on the degree-0 component
/// h(f dx*) = g (*) f (so that dual_d h + h dual_d = id - alpha zeta), zero
/// on the degree-1 component.
inline DualForm cs_homotopy_1d(const DualForm& eta, const PiecewisePoly& g) {
    const Space& s = eta.space();
    require(s.n == 1 && s.k == 0, "E_SPACE", "cs_homotopy_1d lives on the (1,0) model");
    require(g.integral() == 1, "E_DOMAIN", "homotopy bump must have integral exactly 1");
    DualForm out(s, eta.degree() + 1);
    if (eta.degree() != 0) return out;
    Density tau = eta.coeff(OrderedTuple{1}, OrderedTuple{});
    Density lifted(s);
    for (const auto& [L, t] : tau.terms()) {
        TensorDensity res(1);
        for (const auto& term : t.terms()) res.add_term(term.weight, {star(g, term.factors[0])});
        lifted.add_term(L, res);
    }
    out.add_term(OrderedTuple{}, OrderedTuple{}, lifted);
    return out;
}

/// The transpose of the formal homotopy on (0,1): on the degree-0 component
/// sum c_L (y*)^L dy* -> -sum_{L>=1} c_L (y*)^{L-1}, zero on degree 1.
inline DualForm dual_formal_homotopy(const DualForm& eta) {
    const Space& s = eta.space();
    require(s.n == 0 && s.k == 1, "E_SPACE", "dual formal homotopy lives on the (0,1) model");
    DualForm out(s, eta.degree() + 1);
    if (eta.degree() != 0) return out;
    Density tau = eta.coeff(OrderedTuple{}, OrderedTuple{1});
    Density lifted(s);
    for (const auto& [L, t] : tau.terms()) {
        if (L[0] == 0) continue;
        MultiIndex L2 = L;
        L2[0] -= 1;
        lifted.add_term(L2, -t);
    }
    out.add_term(OrderedTuple{}, OrderedTuple{}, lifted);
    return out;
}

namespace detail {

/// Decompose eta on (n,k) as a sum of pure boxtimes tensors with the first
/// x axis (or, when n = 0, the first formal variable) split off.
struct BoxSplit {
    DualForm a; // on the split-off factor
    DualForm b; // on the remainder, carries the sign and weight
};

inline long boxtimes_exponent(const Space& s1, int r1, long t1, const Space& s2, int r2, long t2) {
    return t2 * s1.k + static_cast<long>(s2.n) * r1 + static_cast<long>(s2.n) * t1 +
           static_cast<long>(r2) * s1.k + static_cast<long>(s1.n) * r2 +
           static_cast<long>(r1) * t2 + t1 * t2;
}

inline std::vector<BoxSplit> box_split_first(const DualForm& eta, Space sa, Space sb) {
    std::vector<BoxSplit> out;
    for (const auto& [key, tau] : eta.terms()) {
        for (const auto& [L, t] : tau.terms()) {
            for (const auto& term : t.terms()) {
                OrderedTuple Ia, Ib, Ja, Jb;
                MultiIndex La, Lb;
                TensorDensity ta(sa.n), tb(sb.n);
                if (sa.n == 1) {
                    std::vector<int> ia, ib;
                    for (std::size_t q = 0; q < key.first.size(); ++q)
                        (key.first[q] == 1 ? ia : ib).push_back(key.first[q] == 1 ? 1 : key.first[q] - 1);
                    Ia = OrderedTuple(ia);
                    Ib = OrderedTuple(ib);
                    Ja = OrderedTuple{};
                    Jb = key.second;
                    La = MultiIndex(std::size_t{0});
                    Lb = L;
                    ta.add_term(1, {term.factors[0]});
                    std::vector<PiecewisePoly> rest(term.factors.begin() + 1, term.factors.end());
                    tb.add_term(term.weight, std::move(rest));
                } else {
                    Ia = OrderedTuple{};
                    Ib = key.first;
                    std::vector<int> ja, jb;
                    for (std::size_t q = 0; q < key.second.size(); ++q)
                        (key.second[q] == 1 ? ja : jb).push_back(key.second[q] == 1 ? 1 : key.second[q] - 1);
                    Ja = OrderedTuple(ja);
                    Jb = OrderedTuple(jb);
                    La = MultiIndex{L[0]};
                    Lb = MultiIndex(static_cast<std::size_t>(sb.k));
                    for (int v = 0; v < sb.k; ++v) Lb[v] = L[v + 1];
                    ta = TensorDensity::scalar(1);
                    tb.add_term(term.weight, term.factors);
                }
                int ra = sa.n + sa.k - static_cast<int>(Ia.size() + Ja.size());
                int rb = sb.n + sb.k - static_cast<int>(Ib.size() + Jb.size());
                long t1 = sa.n - static_cast<long>(Ia.size());
                long t2 = sb.n - static_cast<long>(Ib.size());
                long aexp = boxtimes_exponent(sa, ra, t1, sb, rb, t2);
                Rational sgn = (aexp % 2 == 0) ? 1 : -1; // divide the boxtimes sign out
                DualForm da(sa, ra);
                da.add_term(Ia, Ja, Density::from_tensor(sa, ta, La));
                DualForm db(sb, rb);
                db.add_term(Ib, Jb, Density::from_tensor(sb, sgn * tb, Lb));
                out.push_back({std::move(da), std::move(db)});
            }
        }
    }
    return out;
}

} // namespace detail

/// Poincare homotopy for the full dual complex on (R^n)^(k):
/// dual_d o H + H o dual_d = id - alpha o zeta, built by tensoring the 1-D
/// convolution homotopies over the x axes with the transposed formal
/// homotopies over the y variables.
inline DualForm cs_homotopy(const DualForm& eta, const CsConfig& cfg) {
    const Space& s = eta.space();
    check_config(cfg, s);
    if (s.n == 0 && s.k == 0) return DualForm(s, eta.degree() + 1);
    Space sa = (s.n >= 1) ? Space(1, 0, s.order) : Space(0, 1, s.order);
    Space sb = (s.n >= 1) ? Space(s.n - 1, s.k, s.order) : Space(0, s.k - 1, s.order);
    CsConfig cfg_b;
    if (s.n >= 1) cfg_b.bumps.assign(cfg.bumps.begin() + 1, cfg.bumps.end());
    DualForm acc(s, eta.degree() + 1);
    for (const auto& split : detail::box_split_first(eta, sa, sb)) {
        DualForm ha = (s.n >= 1) ? cs_homotopy_1d(split.a, cfg.bumps[0]) : dual_formal_homotopy(split.a);
        if (!ha.is_zero()) acc = acc + boxtimes(ha, split.b);
        if (split.a.degree() == 0) {
            Rational lambda = zeta(split.a);
            if (lambda != 0) {
                DualForm hb = cs_homotopy(split.b, cfg_b);
                if (!hb.is_zero()) {
                    CsConfig cfg_a;
                    if (s.n >= 1) cfg_a.bumps.push_back(cfg.bumps[0]);
                    acc = acc + boxtimes(cs_alpha(sa, cfg_a, lambda), hb);
                }
            }
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// Record of an exactness certification run: per degree, whether the
/// homotopy identity and the strongness witness d o h o d = d held exactly
/// on every sample, with a witness description on failure.
struct HomotopyCertificate {
    std::string complex_id; // "omega" or "dual"
    Space space;
    int samples = 0;
    bool augmentation_ok = true; // eps = eps o g o eps (resp. alpha side)
    struct DegreeResult {
        int degree = 0;
        bool identity_ok = true;
        bool strongness_ok = true;
        std::string witness; // empty when ok
    };
    std::vector<DegreeResult> degrees;

    bool passed() const {
        if (!augmentation_ok) return false;
        for (const auto& d : degrees)
            if (!d.identity_ok || !d.strongness_ok) return false;
        return true;
    }
};

} // namespace formacalc
