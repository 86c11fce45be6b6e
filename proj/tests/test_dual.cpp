#include <catch2/catch_amalgamated.hpp>

#include "formacalc/dual_form.hpp"
#include "formacalc/rng.hpp"

using namespace formacalc;

namespace {

// Exact rank over Q by Gaussian elimination; independent of the library.
std::size_t rank_of(std::vector<std::vector<Rational>> m) {
    std::size_t rank = 0;
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m[0].size();
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            Rational f = m[r][c] / m[rank][c];
            for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
        }
        ++rank;
    }
    return rank;
}

// All degree-r dual basis tuples on s, paired with per-slot distinct
// continuous densities so that pairings are generically nonzero.
std::vector<DualForm> dual_basis(Space s, int degree, unsigned max_ystar) {
    std::vector<DualForm> out;
    for_each_basis_pair(s.n, s.k, s.n + s.k - degree, [&](const OrderedTuple& I, const OrderedTuple& J) {
        for_each_multiindex_up_to(static_cast<std::size_t>(s.k), max_ystar, [&](const MultiIndex& L) {
            std::vector<PiecewisePoly> factors;
            for (int a = 0; a < s.n; ++a)
                factors.push_back(bump(Rational(a), Rational(a + 1)) * bump(Rational(a), Rational(a + 1)));
            DualForm w(s, degree);
            w.add_term(I, J, Density::from_tensor(s, TensorDensity::product(factors), L));
            out.push_back(w);
        });
    });
    return out;
}

std::vector<Form> form_basis(Space s, int degree, unsigned max_xdeg, unsigned max_ystar) {
    std::vector<Form> out;
    for_each_basis_pair(s.n, s.k, degree, [&](const OrderedTuple& I, const OrderedTuple& J) {
        for_each_multiindex_up_to(static_cast<std::size_t>(s.n), max_xdeg, [&](const MultiIndex& A) {
            for_each_multiindex_up_to(static_cast<std::size_t>(s.k), max_ystar, [&](const MultiIndex& B) {
                Form w(s, degree);
                FormalFunction f(s);
                f.add_term(B, Poly::monomial(A, 1));
                w.add_term(I, J, f);
                out.push_back(w);
            });
        });
    });
    return out;
}

} // namespace

TEST_CASE("pair_density") {
    SECTION("L! factor: <3y^2, tau (y*)^2> = 2! * 3 * Int tau") {
        Space s(1, 1, 4);
        PiecewisePoly tau = Rational(5) * bump(0, 1, true); // integral 5
        Density eta = Density::from_tensor(s, TensorDensity::product({tau}), MultiIndex{2});
        FormalFunction f = Rational(3) * FormalFunction::y(s, 1).pow(2);
        REQUIRE(pair_density(f, eta) == 30);
    }

    SECTION("unit pairs to the integral") {
        Space s(1, 1, 4);
        Gen gen(3);
        PiecewisePoly tau = gen.smooth_pp();
        Density eta = Density::from_tensor(s, TensorDensity::product({tau}));
        REQUIRE(pair_density(FormalFunction::constant(s, 1), eta) == tau.integral());
    }

    SECTION("no matching y-degree") {
        Space s(1, 1, 4);
        Density eta = Density::from_tensor(s, TensorDensity::product({bump(0, 1)}));
        REQUIRE(pair_density(FormalFunction::y(s, 1), eta) == 0);
    }

    SECTION("known_order exhaustion") {
        Space s(1, 1, 4);
        Density eta = Density::from_tensor(s, TensorDensity::product({bump(0, 1)}), MultiIndex{2});
        Gen gen(5);
        FormalFunction f = gen.formal(s, 1, 1, 2).truncated(1);
        REQUIRE_THROWS_AS(pair_density(f, eta), Error);
    }
}

TEST_CASE("pair_dualform") {
    SECTION("n=1, k=0 volume pairing") {
        Space s(1, 0, 2);
        Gen gen(7);
        PiecewisePoly tau = gen.smooth_pp();
        FormalFunction f = FormalFunction::from_poly(s, gen.poly(1, 3, 3));
        Form w = wedge(Form::from_function(f), Form::dx(s, 1));
        DualForm eta(s, 1);
        eta.add_term(OrderedTuple{}, OrderedTuple{},
                     Density::from_tensor(s, TensorDensity::product({tau})));
        REQUIRE(pair_dualform(w, eta) == tau.integral_against(f.reduction().eval<UniPoly>(
                                             std::vector<UniPoly>{UniPoly::x()}, UniPoly::constant(1))));
    }

    SECTION("repeated index pairs to zero") {
        Space s(2, 0, 2);
        DualForm eta(s, 1);
        eta.add_term(OrderedTuple{1}, OrderedTuple{},
                     Density::from_tensor(s, TensorDensity::product({bump(0, 1), bump(0, 1)})));
        Form w = Form::dx(s, 1);
        REQUIRE(pair_dualform(w, eta) == 0);
    }

    SECTION("n=2, k=0: <f dx2, tau dx1*> = -Int f tau") {
        Space s(2, 0, 2);
        PiecewisePoly b0 = bump(0, 1), b1 = bump(0, 2);
        Density tau = Density::from_tensor(s, TensorDensity::product({b0, b1}));
        DualForm eta(s, 1);
        eta.add_term(OrderedTuple{1}, OrderedTuple{}, tau);
        Form w = Form::dx(s, 2);
        Rational direct = b0.integral() * b1.integral();
        REQUIRE(pair_dualform(w, eta) == -direct);
    }

    SECTION("degree mismatch is rejected") {
        Space s(1, 1, 2);
        DualForm eta(s, 0);
        Form w = Form::dx(s, 1);
        REQUIRE_THROWS_AS(pair_dualform(w, eta), Error);
    }
}

TEST_CASE("dual coboundary") {
    SECTION("n=1, k=0: dual_d(tau) = tau' dx*") {
        Space s(1, 0, 2);
        Gen gen(11);
        PiecewisePoly tau = gen.smooth_pp();
        DualForm eta(s, 1);
        eta.add_term(OrderedTuple{}, OrderedTuple{},
                     Density::from_tensor(s, TensorDensity::product({tau})));
        DualForm got = dual_d(eta);
        // Pairing both sides against test functions: <d eta, f> = -<eta, df>.
        for (int t = 0; t < 10; ++t) {
            FormalFunction f = FormalFunction::from_poly(s, gen.poly(1, 3, 3));
            REQUIRE(pair_dualform(Form::from_function(f), got) ==
                    -pair_dualform(Form::from_function(f).d(), eta));
        }
        // And the explicit formula.
        Density expect = Density::from_tensor(s, TensorDensity::product({tau.derivative()}));
        REQUIRE((got.coeff(OrderedTuple{1}, OrderedTuple{}) - expect).functionally_zero());
    }

    SECTION("n=0, k=1: the y-side sign") {
        Space s(0, 1, 4);
        DualForm eta(s, 1); // tau (y*)^L with empty star tuple
        eta.add_term(OrderedTuple{}, OrderedTuple{},
                     Density::from_tensor(s, TensorDensity::scalar(1), MultiIndex{1}));
        DualForm got = dual_d(eta);
        // d((y*)^1) = -(y*)^2 dy*: check through the pairing with y^2.
        FormalFunction y2 = FormalFunction::y(s, 1).pow(2);
        Rational lhs = pair_dualform(Form::from_function(y2), got);
        Rational rhs = -pair_dualform(Form::from_function(y2).d(), eta);
        REQUIRE(lhs == rhs);
        REQUIRE(lhs == -2); // -(y*)^2 against y^2 gives -2!
    }

    SECTION("adjointness on random pairs") {
        Gen gen(13);
        for (int n = 0; n <= 2; ++n)
            for (int k = 0; n + k <= 3; ++k) {
                Space s(n, k, 4);
                for (int r = 0; r < n + k; ++r) {
                    for (int t = 0; t < 5; ++t) {
                        DualForm eta = gen.dual_form(s, r + 1, 2);
                        Form w = gen.form(s, r, 2, 2, 2);
                        Rational sign = ((r + 1) % 2 == 0) ? 1 : -1;
                        REQUIRE(pair_dualform(w, dual_d(eta)) ==
                                sign * pair_dualform(w.d(), eta));
                    }
                }
            }
    }

    SECTION("dual_d o dual_d = 0") {
        Gen gen(17);
        for (int n = 0; n <= 2; ++n)
            for (int k = 0; n + k <= 3; ++k) {
                Space s(n, k, 4);
                for (int r = 2; r <= n + k; ++r) {
                    DualForm eta = gen.dual_form(s, r, 2);
                    REQUIRE(dual_d(dual_d(eta)).functionally_zero());
                }
            }
    }
}

TEST_CASE("zeta") {
    SECTION("normalized bump evaluates to 1") {
        Space s(1, 0, 2);
        DualForm eta(s, 0);
        eta.add_term(OrderedTuple{1}, OrderedTuple{},
                     Density::from_tensor(s, TensorDensity::product({bump(0, 1, true)})));
        REQUIRE(zeta(eta) == 1);
    }

    SECTION("higher y* components do not contribute") {
        Space s(0, 1, 4);
        DualForm eta(s, 0);
        eta.add_term(OrderedTuple{}, OrderedTuple{1},
                     Density::from_tensor(s, TensorDensity::scalar(3), MultiIndex{2}));
        REQUIRE(zeta(eta) == 0);
    }

    SECTION("zero and the cross-check against pairing with 1") {
        Space s(1, 1, 4);
        REQUIRE(zeta(DualForm(s, 0)) == 0);
        Gen gen(19);
        for (int t = 0; t < 10; ++t) {
            DualForm eta = gen.dual_form(s, 0, 2, 2);
            Form one = Form::from_function(FormalFunction::constant(s, 1));
            REQUIRE(zeta(eta) == pair_dualform(one, eta));
        }
    }

    SECTION("degree mismatch is rejected") {
        Space s(1, 0, 2);
        REQUIRE_THROWS_AS(zeta(DualForm(s, 1)), Error);
    }
}

TEST_CASE("boxtimes") {
    SECTION("degree-0 x degree-0 is the plain tensor") {
        Space s1(1, 0, 2), s2(1, 0, 2);
        PiecewisePoly g1 = bump(0, 1, true), g2 = bump(0, 2, true);
        DualForm a(s1, 0), b(s2, 0);
        a.add_term(OrderedTuple{1}, OrderedTuple{}, Density::from_tensor(s1, TensorDensity::product({g1})));
        b.add_term(OrderedTuple{1}, OrderedTuple{}, Density::from_tensor(s2, TensorDensity::product({g2})));
        DualForm prod = boxtimes(a, b);
        REQUIRE(prod.degree() == 0);
        Density d = prod.coeff(OrderedTuple{1, 2}, OrderedTuple{});
        REQUIRE(!d.is_zero());
        REQUIRE(zeta(prod) == 1);
    }

    SECTION("duality identity on full small bases") {
        // <Psi(w1 (x) w2), eta1 boxtimes eta2> = (-1)^{r1 r2} <w1,eta1><w2,eta2>
        std::vector<Space> factors = {Space(1, 0, 3), Space(0, 1, 3), Space(1, 1, 3), Space(2, 0, 3)};
        for (const Space& s1 : factors)
            for (const Space& s2 : factors) {
                for (int r1 = 0; r1 <= s1.n + s1.k; ++r1)
                    for (int r2 = 0; r2 <= s2.n + s2.k; ++r2) {
                        auto ws1 = form_basis(s1, r1, 1, 1);
                        auto ws2 = form_basis(s2, r2, 1, 1);
                        auto es1 = dual_basis(s1, r1, 1);
                        auto es2 = dual_basis(s2, r2, 1);
                        Rational sign = ((r1 * r2) % 2 == 0) ? 1 : -1;
                        for (std::size_t i = 0; i < ws1.size(); i += 2)
                            for (std::size_t j = 0; j < ws2.size(); j += 2)
                                for (std::size_t p = 0; p < es1.size(); p += 2)
                                    for (std::size_t q = 0; q < es2.size(); q += 2) {
                                        Rational lhs = pair_dualform(kunneth(ws1[i], ws2[j]),
                                                                     boxtimes(es1[p], es2[q]));
                                        Rational rhs = sign *
                                                       pair_dualform(ws1[i], es1[p]) *
                                                       pair_dualform(ws2[j], es2[q]);
                                        REQUIRE(lhs == rhs);
                                    }
                    }
            }
    }

    SECTION("boxtimes is a complex map for the graded tensor differential") {
        // dual_d(a boxtimes b) = dual_d(a) boxtimes b + (-1)^{r1} a boxtimes dual_d(b)
        Gen gen(23);
        std::vector<std::pair<Space, Space>> combos = {
            {Space(1, 0, 3), Space(1, 0, 3)},
            {Space(1, 0, 3), Space(0, 1, 3)},
            {Space(0, 1, 3), Space(1, 1, 3)},
            {Space(1, 0, 3), Space(1, 1, 3)},
        };
        for (const auto& [s1, s2] : combos)
            for (int r1 = 0; r1 <= s1.n + s1.k; ++r1)
                for (int r2 = 0; r2 <= s2.n + s2.k; ++r2)
                    for (int t = 0; t < 3; ++t) {
                        DualForm a = gen.dual_form(s1, r1, 1);
                        DualForm b = gen.dual_form(s2, r2, 1);
                        DualForm lhs = dual_d(boxtimes(a, b));
                        Rational sign = (r1 % 2 == 0) ? 1 : -1;
                        DualForm rhs = boxtimes(a, b); // placeholder shape
                        if (r1 >= 1 && r2 >= 1)
                            rhs = boxtimes(dual_d(a), b) + sign * boxtimes(a, dual_d(b));
                        else if (r1 >= 1)
                            rhs = boxtimes(dual_d(a), b);
                        else if (r2 >= 1)
                            rhs = sign * boxtimes(a, dual_d(b));
                        else {
                            REQUIRE(lhs.functionally_zero());
                            continue;
                        }
                        REQUIRE((lhs - rhs).functionally_zero());
                    }
    }
}

TEST_CASE("truncated perfect pairing has full rank") {
    // For fixed y-degree <= 1 and x-degree <= 1, the pairing matrix between
    // the monomial form basis and an independent dual basis is square and
    // nonsingular.
    for (const Space& s : {Space(1, 1, 3), Space(2, 0, 3), Space(0, 2, 3)}) {
        for (int r = 0; r <= s.n + s.k; ++r) {
            auto ws = form_basis(s, r, 1, 1);
            // Independent densities: one per (tuple, L, x-monomial slot).
            std::vector<DualForm> es;
            for_each_basis_pair(s.n, s.k, s.n + s.k - r, [&](const OrderedTuple& I, const OrderedTuple& J) {
                for_each_multiindex_up_to(static_cast<std::size_t>(s.k), 1, [&](const MultiIndex& L) {
                    for_each_multiindex_up_to(static_cast<std::size_t>(s.n), 1, [&](const MultiIndex& A) {
                        std::vector<PiecewisePoly> factors;
                        for (int ax = 0; ax < s.n; ++ax) {
                            PiecewisePoly base = bump(0, 1);
                            // x^{A_ax} against distinct windows keeps slots independent.
                            PiecewisePoly weight = bump(Rational(A[ax]), Rational(A[ax]) + 1);
                            factors.push_back(weight * weight);
                        }
                        DualForm w(s, r);
                        w.add_term(I, J, Density::from_tensor(s, TensorDensity::product(factors), L));
                        es.push_back(w);
                    });
                });
            });
            std::vector<std::vector<Rational>> m;
            for (const auto& w : ws) {
                std::vector<Rational> row;
                for (const auto& e : es) row.push_back(pair_dualform(w, e));
                m.push_back(std::move(row));
            }
            REQUIRE(rank_of(m) == ws.size());
        }
    }
}
