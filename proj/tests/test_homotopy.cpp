#include <catch2/catch_amalgamated.hpp>

#include "formacalc/certify.hpp"

using namespace formacalc;

TEST_CASE("radial homotopy") {
    SECTION("K(x dx) = x^2/2 and d closes the loop") {
        Space s(1, 0, 0);
        Form w = wedge(Form::from_function(FormalFunction::x(s, 1)), Form::dx(s, 1));
        Form K = radial_homotopy(w);
        FormalFunction expect = Rational(1, 2) * FormalFunction::x(s, 1).pow(2);
        REQUIRE(K.coeff(OrderedTuple{}, OrderedTuple{}).same_series(expect));
        REQUIRE(K.d() == w);
    }

    SECTION("degree 0 maps to zero") {
        Space s(2, 1, 3);
        Gen gen(3);
        REQUIRE(radial_homotopy(gen.form(s, 0, 2, 1, 2)).is_zero());
    }

    SECTION("homotopy identity on df for f = x^2 y") {
        Space s(1, 1, 4);
        FormalFunction f = FormalFunction::x(s, 1).pow(2) * FormalFunction::y(s, 1);
        Form df = Form::from_function(f).d();
        Form lhs = radial_homotopy(df).d() + radial_homotopy(df.d());
        REQUIRE(forms_match(lhs, df));
    }

    SECTION("identity in every degree, spaces with n+k <= 4") {
        Gen gen(7);
        for (int n = 0; n <= 3; ++n)
            for (int k = 0; n + k <= 3; ++k) {
                Space s(n, k, 4);
                FormHomotopy H = radial_homotopy_data(s);
                for (int r = 0; r <= n + k; ++r)
                    for (int t = 0; t < 4; ++t) {
                        Form w = gen.form(s, r, 2, 2, 2);
                        REQUIRE(omega_identity_holds(H, w));
                    }
            }
    }

    SECTION("on (0,k) the radial operator restricts to the formal formula") {
        Space s(0, 1, 5);
        Gen gen(11);
        for (int t = 0; t < 10; ++t) {
            Form w = gen.form(s, 1, 0, 3, 2);
            REQUIRE(radial_homotopy(w) == formal_homotopy(w));
        }
    }
}

TEST_CASE("formal homotopy") {
    Space s(0, 1, 5);

    SECTION("h(y^2 dy) = y^3/3") {
        Form w(s, 1);
        FormalFunction y2 = FormalFunction::y(s, 1).pow(2);
        w.add_term(OrderedTuple{}, OrderedTuple{1}, y2);
        Form h = formal_homotopy(w);
        FormalFunction expect = Rational(1, 3) * FormalFunction::y(s, 1).pow(3);
        REQUIRE(h.coeff(OrderedTuple{}, OrderedTuple{}).same_series(expect));
    }

    SECTION("degree 0 maps to zero") {
        Gen gen(13);
        REQUIRE(formal_homotopy(gen.form(s, 0, 0, 3, 2)).is_zero());
    }

    SECTION("(hd + dh)(y^3) = y^3 with g(y^3) = 0") {
        Form w = Form::from_function(FormalFunction::y(s, 1).pow(3));
        Form lhs = formal_homotopy(w.d());
        REQUIRE(omega_g(w) == 0);
        REQUIRE(forms_match(lhs, w));
    }

    SECTION("identity at every truncation order") {
        for (int order = 1; order <= 5; ++order) {
            Space so(0, 1, order);
            Gen gen(17);
            FormHomotopy H = formal_homotopy_data(so);
            for (int r = 0; r <= 1; ++r)
                for (int t = 0; t < 5; ++t) {
                    Form w = gen.form(so, r, 0, static_cast<unsigned>(order - 1), 2);
                    REQUIRE(omega_identity_holds(H, w));
                }
        }
    }

    SECTION("wrong space is rejected") {
        Space bad(1, 1, 3);
        Gen gen(19);
        REQUIRE_THROWS_AS(formal_homotopy(gen.form(bad, 1, 1, 1, 1)), Error);
    }
}

TEST_CASE("tensor homotopy") {
    SECTION("(1,0) x (0,1) assembles a homotopy for (1,1)") {
        Space s1(1, 0, 4), s2(0, 1, 4);
        FormHomotopy H = tensor_homotopy(radial_homotopy_data(s1), formal_homotopy_data(s2));
        Gen gen(23);
        for (int r = 0; r <= 2; ++r)
            for (int t = 0; t < 8; ++t) {
                Form w = gen.form(Space(1, 1, 4), r, 2, 2, 2);
                REQUIRE(omega_identity_holds(H, w));
            }
    }

    SECTION("sign bookkeeping survives three factors") {
        Space s1(1, 0, 4), s2(0, 1, 4), s3(1, 0, 4);
        FormHomotopy H12 = tensor_homotopy(radial_homotopy_data(s1), formal_homotopy_data(s2));
        FormHomotopy H = tensor_homotopy(H12, radial_homotopy_data(s3));
        Gen gen(29);
        for (int r = 0; r <= 3; ++r) {
            Form w = gen.form(Space(2, 1, 4), r, 2, 2, 2);
            REQUIRE(omega_identity_holds(H, w));
        }
    }

    SECTION("invalid input triples are rejected") {
        Space s1(1, 0, 4), s2(0, 1, 4);
        FormHomotopy broken{s1, [](const Form& w) { return Rational(2) * radial_homotopy(w); }};
        Gen gen(31);
        std::vector<Form> probes{gen.form(s1, 1, 2, 0, 2)};
        REQUIRE_THROWS_AS(tensor_homotopy(broken, formal_homotopy_data(s2), probes, {}), Error);
    }
}

TEST_CASE("cs homotopy in one dimension") {
    Space s(1, 0, 2);
    PiecewisePoly g = bump(0, 1, true);
    Gen gen(37);

    SECTION("identity residual on random densities") {
        CsConfig cfg{{g}};
        for (int r = 0; r <= 1; ++r)
            for (int t = 0; t < 10; ++t) {
                DualForm eta = gen.dual_form(s, r, 0);
                REQUIRE(dual_residual(cfg, eta).empty());
            }
    }

    SECTION("agrees with the generic recursion") {
        CsConfig cfg{{g}};
        for (int r = 0; r <= 1; ++r)
            for (int t = 0; t < 5; ++t) {
                DualForm eta = gen.dual_form(s, r, 0);
                DualForm a = cs_homotopy_1d(eta, g);
                DualForm b = cs_homotopy(eta, cfg);
                REQUIRE((a - b).functionally_zero());
            }
    }

    SECTION("unnormalized bump is rejected") {
        DualForm eta = gen.dual_form(s, 0, 0);
        REQUIRE_THROWS_AS(cs_homotopy_1d(eta, bump(0, 1, false)), Error);
    }
}

TEST_CASE("cs homotopy on the formal factor") {
    Space s(0, 1, 4);
    CsConfig cfg; // no x axes

    SECTION("identity residual") {
        Gen gen(41);
        for (int r = 0; r <= 1; ++r)
            for (int t = 0; t < 10; ++t) {
                DualForm eta = gen.dual_form(s, r, 3);
                REQUIRE(dual_residual(cfg, eta).empty());
            }
    }

    SECTION("transpose of the formal homotopy, with the transpose sign") {
        // <H(eta), w> = (-1)^{r+1} <eta, h(w)> for eta of dual degree r.
        Gen gen(43);
        for (int t = 0; t < 10; ++t) {
            DualForm eta = gen.dual_form(s, 0, 3);
            Form w = gen.form(s, 1, 0, 3, 2);
            Rational lhs = pair_dualform(w, cs_homotopy(eta, cfg));
            Rational rhs = -pair_dualform(formal_homotopy(w), eta); // (-1)^{0+1}
            REQUIRE(lhs == rhs);
        }
    }

    SECTION("transposition commutes with the tensor construction on (0,2)") {
        Space s2(0, 2, 5);
        Gen gen(44);
        FormHomotopy H = tensor_homotopy(formal_homotopy_data(Space(0, 1, 5)),
                                         formal_homotopy_data(Space(0, 1, 5)));
        for (int r = 0; r <= 1; ++r)
            for (int t = 0; t < 8; ++t) {
                DualForm eta = gen.dual_form(s2, r, 3);
                Form w = gen.form(s2, r + 1, 0, 3, 2);
                Rational sign = ((r + 1) % 2 == 0) ? 1 : -1;
                REQUIRE(pair_dualform(w, cs_homotopy(eta, cfg)) ==
                        sign * pair_dualform(H.h(w), eta));
            }
    }
}

TEST_CASE("cs homotopy on mixed spaces") {
    Gen gen(47);

    SECTION("(1,1) identity residual") {
        Space s(1, 1, 3);
        CsConfig cfg = CsConfig::standard(1);
        for (int r = 0; r <= 2; ++r)
            for (int t = 0; t < 6; ++t) {
                DualForm eta = gen.dual_form(s, r, 2);
                REQUIRE(dual_residual(cfg, eta).empty());
            }
    }

    SECTION("(2,1) identity residual") {
        Space s(2, 1, 3);
        CsConfig cfg = CsConfig::standard(2);
        for (int r = 0; r <= 3; ++r)
            for (int t = 0; t < 3; ++t) {
                DualForm eta = gen.dual_form(s, r, 2);
                REQUIRE(dual_residual(cfg, eta).empty());
            }
    }

    SECTION("identity residual across n <= 2, k <= 2") {
        for (int n = 0; n <= 2; ++n)
            for (int k = 0; k <= 2; ++k) {
                Space s(n, k, 3);
                CsConfig cfg = CsConfig::standard(n);
                for (int r = 0; r <= n + k; ++r) {
                    DualForm eta = gen.dual_form(s, r, 2);
                    REQUIRE(dual_residual(cfg, eta).empty());
                }
            }
    }

    SECTION("missing configuration is rejected") {
        Space s(2, 0, 2);
        DualForm eta = gen.dual_form(s, 1, 0);
        CsConfig cfg = CsConfig::standard(1); // one bump short
        REQUIRE_THROWS_AS(cs_homotopy(eta, cfg), Error);
    }
}

TEST_CASE("strong exactness certificates") {
    SECTION("omega complex on (2,1)") {
        HomotopyCertificate cert = certify_strong_exactness("omega", Space(2, 1, 4), 6, 51);
        REQUIRE(cert.passed());
        REQUIRE(cert.degrees.size() == 4);
    }

    SECTION("trivial space (0,0)") {
        REQUIRE(certify_strong_exactness("omega", Space(0, 0, 0), 3, 52).passed());
        REQUIRE(certify_strong_exactness("dual", Space(0, 0, 0), 3, 53).passed());
    }

    SECTION("dual complex on (1,1)") {
        HomotopyCertificate cert = certify_strong_exactness("dual", Space(1, 1, 3), 4, 54);
        REQUIRE(cert.passed());
    }

    SECTION("unknown complex id is rejected") {
        REQUIRE_THROWS_AS(certify_strong_exactness("nope", Space(1, 0, 2), 1, 55), Error);
    }
}
