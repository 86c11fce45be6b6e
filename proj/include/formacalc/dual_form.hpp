#pragma once

#include "formacalc/density.hpp"
#include "formacalc/form.hpp"

namespace formacalc {

/// Element of the dual de Rham complex D_c((R^n)^(k); Omega^{-r}): a
/// functional on degree-r forms, written sum tau dx*_I dy*_J with
/// |I| + |J| = n + k - r and density coefficients. The pairing against
/// f dx_{I'} dy_{J'} is <f, tau> times the wedge constant eps((I',J'),(I,J)).
class DualForm {
public:
    DualForm(Space space, int degree) : space_(space), degree_(degree) {
        require(degree_ >= -1, "E_DEGREE", "dual form degree out of range");
    }

    static DualForm zero(Space s, int degree) { return DualForm(s, degree); }

    const Space& space() const { return space_; }
    int degree() const { return degree_; }
    const std::map<TuplePair, Density, TuplePairLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int star_size() const { return space_.n + space_.k - degree_; }

    void add_term(OrderedTuple I, OrderedTuple J, const Density& tau) {
        require(static_cast<int>(I.size() + J.size()) == star_size(), "E_DEGREE",
                "star tuple size does not match the dual degree");
        require(I.within(space_.n) && J.within(space_.k), "E_DIM", "star index out of range");
        require_same_space(space_, tau.space());
        if (tau.is_zero()) return;
        auto key = TuplePair{std::move(I), std::move(J)};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), tau);
        } else {
            Density s = it->second + tau;
            if (s.is_zero())
                terms_.erase(it);
            else
                it->second = s;
        }
    }

    Density coeff(const OrderedTuple& I, const OrderedTuple& J) const {
        auto it = terms_.find({I, J});
        return it == terms_.end() ? Density(space_) : it->second;
    }

    DualForm operator-() const {
        DualForm r(space_, degree_);
        for (const auto& [k, t] : terms_) r.terms_.emplace(k, -t);
        return r;
    }

    friend DualForm operator+(DualForm a, const DualForm& b) {
        require_same_space(a.space_, b.space_);
        require(a.degree_ == b.degree_, "E_DEGREE", "cannot add dual forms of different degrees");
        for (const auto& [k, t] : b.terms_) a.add_term(k.first, k.second, t);
        return a;
    }

    friend DualForm operator-(DualForm a, const DualForm& b) { return a + (-b); }

    friend DualForm operator*(const Rational& s, const DualForm& w) {
        DualForm r(w.space_, w.degree_);
        if (s == 0) return r;
        for (const auto& [k, t] : w.terms_) r.terms_.emplace(k, s * t);
        return r;
    }

    /// Exact zero test through the density coefficients.
    bool functionally_zero() const {
        for (const auto& [k, t] : terms_)
            if (!t.functionally_zero()) return false;
        return true;
    }

private:
    Space space_;
    int degree_;
    std::map<TuplePair, Density, TuplePairLess> terms_;
};

/// <omega, eta> per the dual pairing; degrees must match.
inline Rational pair_dualform(const Form& omega, const DualForm& eta) {
    require_same_space(omega.space(), eta.space());
    require(omega.degree() == eta.degree(), "E_DEGREE",
            "pairing needs form degree equal to the dual-form degree");
    const Space& s = omega.space();
    Rational acc = 0;
    for (const auto& [kw, f] : omega.terms())
        for (const auto& [ke, tau] : eta.terms()) {
            int eps = eps_pair(kw.first, kw.second, ke.first, ke.second, s.n, s.k);
            if (eps == 0) continue;
            acc += Rational(eps) * pair_density(f, tau);
        }
    return acc;
}

/// Dual coboundary D_c(Omega^{r+1}) -> D_c(Omega^r). The basis signs are
/// computed from the adjointness requirement
///   <dual_d(eta), omega> = (-1)^{r+1} <eta, d(omega)>
/// by pairing against the complementary basis form, rather than read off a
/// printed formula; x-terms differentiate the density, y-terms multiply by
/// y_j*.
inline DualForm dual_d(const DualForm& eta) {
    const Space& s = eta.space();
    int r = eta.degree() - 1; // output degree
    DualForm out(s, r);
    if (r < 0) return out; // the complex ends at degree 0
    int rsign = (r % 2 == 0) ? 1 : -1; // (-1)^r
    for (const auto& [key, tau] : eta.terms()) {
        const OrderedTuple& I = key.first;
        const OrderedTuple& J = key.second;
        // x-direction: insert dx_i*, differentiate axis i.
        for (int i = 1; i <= s.n; ++i) {
            if (I.contains(i)) continue;
            MergeResult mi = merge_tuples(OrderedTuple{i}, I);
            OrderedTuple Iext = mi.merged;
            OrderedTuple Iprime = Iext.complement(s.n);
            OrderedTuple Jprime = J.complement(s.k);
            MergeResult mform = merge_tuples(OrderedTuple{i}, Iprime);
            int e1 = eps_pair(mform.merged, Jprime, I, J, s.n, s.k);
            int e2 = eps_pair(Iprime, Jprime, Iext, J, s.n, s.k);
            int c = rsign * mform.sign * e1 * e2;
            out.add_term(Iext, J, Rational(c) * tau.dstar_x(i));
        }
        // y-direction: insert dy_j*, multiply by y_j*.
        for (int j = 1; j <= s.k; ++j) {
            if (J.contains(j)) continue;
            MergeResult mj = merge_tuples(OrderedTuple{j}, J);
            OrderedTuple Jext = mj.merged;
            OrderedTuple Iprime = I.complement(s.n);
            OrderedTuple Jsecond = Jext.complement(s.k);
            MergeResult mform = merge_tuples(OrderedTuple{j}, Jsecond);
            int block = (Iprime.size() % 2 == 0) ? 1 : -1; // dy_j passes dx_{I'}
            int e1 = eps_pair(Iprime, mform.merged, I, J, s.n, s.k);
            int e2 = eps_pair(Iprime, Jsecond, I, Jext, s.n, s.k);
            int c = -rsign * block * mform.sign * e1 * e2; // (-1)^{r+1} = -(-1)^r
            out.add_term(I, Jext, Rational(c) * tau.mstar_y(j));
        }
    }
    return out;
}

/// Evaluation against the constant function 1: the integral of the L = 0
/// component of the full-star-tuple density.
inline Rational zeta(const DualForm& eta) {
    require(eta.degree() == 0, "E_DEGREE", "zeta is defined on dual degree 0");
    const Space& s = eta.space();
    std::vector<int> all_x, all_y;
    for (int i = 1; i <= s.n; ++i) all_x.push_back(i);
    for (int j = 1; j <= s.k; ++j) all_y.push_back(j);
    Density top = eta.coeff(OrderedTuple(all_x), OrderedTuple(all_y));
    auto it = top.terms().find(MultiIndex(static_cast<std::size_t>(s.k)));
    return it == top.terms().end() ? Rational(0) : it->second.integral();
}

/// eta1 boxtimes eta2 on the product space, with the explicit sign
/// (-1)^a, a = t2 k1 + n2 r1 + n2 t1 + r2 k1 + n1 r2 + r1 t2 + t1 t2
/// (t_i = n_i - |I_i|). Satisfies
/// <Psi(w1 (x) w2), eta1 boxtimes eta2> = (-1)^{r1 r2} <w1,eta1><w2,eta2>.
inline DualForm boxtimes(const DualForm& a, const DualForm& b) {
    const Space& s1 = a.space();
    const Space& s2 = b.space();
    Space s3(s1.n + s2.n, s1.k + s2.k, std::min(s1.order, s2.order));
    int r1 = a.degree(), r2 = b.degree();
    DualForm out(s3, r1 + r2);
    for (const auto& [k1, t1] : a.terms())
        for (const auto& [k2, t2] : b.terms()) {
            long t1x = static_cast<long>(s1.n) - static_cast<long>(k1.first.size());
            long t2x = static_cast<long>(s2.n) - static_cast<long>(k2.first.size());
            long aexp = t2x * s1.k + static_cast<long>(s2.n) * r1 + static_cast<long>(s2.n) * t1x +
                        static_cast<long>(r2) * s1.k + static_cast<long>(s1.n) * r2 +
                        static_cast<long>(r1) * t2x + t1x * t2x;
            int sign = (aexp % 2 == 0) ? 1 : -1;
            MergeResult mx = merge_tuples(k1.first, k2.first.shifted(s1.n));
            MergeResult my = merge_tuples(k1.second, k2.second.shifted(s1.k));
            out.add_term(mx.merged, my.merged, Rational(sign) * density_external_product(t1, t2));
        }
    return out;
}

} // namespace formacalc
