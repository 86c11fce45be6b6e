#include <catch2/catch_amalgamated.hpp>

#include "formacalc/diffop.hpp"
#include "formacalc/rng.hpp"

using namespace formacalc;

namespace {

Space s11(int order = 4) { return Space(1, 1, order); }

FormalFunction X(Space s, int i = 1) { return FormalFunction::x(s, i); }
FormalFunction Y(Space s, int j = 1) { return FormalFunction::y(s, j); }

// (x-a)^I y^J expanded in plain coordinates.
FormalFunction shifted_monomial(Space s, std::span<const Rational> a, const MultiIndex& I,
                                const MultiIndex& J) {
    std::vector<Rational> neg;
    for (const auto& v : a) neg.push_back(-v);
    FormalFunction f(s);
    f.add_term(J, Poly::monomial(I, 1).shifted(neg));
    return f;
}

} // namespace

TEST_CASE("formal function ring") {
    Space s = s11();
    FormalFunction one = FormalFunction::constant(s, 1);

    SECTION("unit") {
        Gen gen(3);
        FormalFunction f = gen.formal(s, 3, 3, 4);
        REQUIRE(f * one == f);
    }

    SECTION("(x+y)(x-y) = x^2 - y^2") {
        FormalFunction p = (X(s) + Y(s)) * (X(s) - Y(s));
        FormalFunction q = X(s) * X(s) - Y(s) * Y(s);
        REQUIRE(p == q);
    }

    SECTION("truncation at known_order 2") {
        Space s2(1, 1, 2);
        FormalFunction a = FormalFunction::constant(s2, 1) + Y(s2);
        FormalFunction b = FormalFunction::constant(s2, 1) - Y(s2) + Y(s2) * Y(s2);
        REQUIRE(a * b == FormalFunction::constant(s2, 1)); // the y^3 term falls outside
    }

    SECTION("ring axioms at fixed known_order, random") {
        Gen gen(17);
        for (int t = 0; t < 30; ++t) {
            FormalFunction a = gen.formal(s, 2, 3, 3), b = gen.formal(s, 2, 3, 3),
                           c = gen.formal(s, 2, 3, 3);
            REQUIRE(a + b == b + a);
            REQUIRE(a * b == b * a);
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
        }
    }
}

TEST_CASE("ff_value") {
    Space s = s11();
    // f = 1 + x + 3y + x y^2, value at x = 2 is 3.
    FormalFunction f = FormalFunction::constant(s, 1) + X(s) + Rational(3) * Y(s) + X(s) * Y(s) * Y(s);
    std::vector<Rational> a{Rational(2)};
    REQUIRE(f.value(a) == 3);
    REQUIRE(Y(s).value(a) == 0);
    REQUIRE(FormalFunction(s).value(a) == 0);
    std::vector<Rational> bad{Rational(1), Rational(2)};
    REQUIRE_THROWS_AS(f.value(bad), Error);
}

TEST_CASE("derivations satisfy Leibniz") {
    Space s(2, 2, 4);
    Gen gen(23);
    for (int t = 0; t < 20; ++t) {
        FormalFunction f = gen.formal(s, 2, 2, 3), g = gen.formal(s, 2, 2, 3);
        REQUIRE((f * g).dx(1) == f.dx(1) * g + f * g.dx(1));
        FormalFunction lhs = (f * g).dy(2);
        FormalFunction rhs = f.dy(2) * g + f * g.dy(2);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("ff_invert") {
    Space s = s11();

    SECTION("geometric series") {
        FormalFunction f = FormalFunction::constant(s, 1) + Y(s);
        FormalFunction g = ff_invert(f, {Rational(0)}, 3);
        FormalFunction expect = FormalFunction::constant(s, 1) - Y(s) + Y(s) * Y(s);
        REQUIRE(g.same_series(expect));
    }

    SECTION("constants invert globally") {
        FormalFunction two = FormalFunction::constant(s, 2);
        FormalFunction g = ff_invert(two, {Rational(5)}, 3);
        REQUIRE(g.same_series(FormalFunction::constant(s, Rational(1, 2))));
    }

    SECTION("zero value at basepoint is rejected") {
        REQUIRE_THROWS_AS(ff_invert(X(s), {Rational(0)}, 3), Error);
    }

    SECTION("jet identity: jet(f*g - 1, a, r) = 0") {
        Gen gen(31);
        for (int t = 0; t < 20; ++t) {
            FormalFunction f = gen.formal(s, 2, 2, 3);
            std::vector<Rational> a = gen.point(1);
            if (f.value(a) == 0) f = f + FormalFunction::constant(s, 1);
            if (f.value(a) == 0) continue;
            int r = 4;
            FormalFunction g = ff_invert(f, a, r);
            Jet residue = jet_of(f * g - FormalFunction::constant(s, 1), a, r);
            REQUIRE(residue.is_zero());
        }
    }
}

TEST_CASE("diffop apply") {
    Space s = s11();

    SECTION("d/dy y^2 = 2y") {
        DiffOp dy = DiffOp::partial_y(s, 1);
        REQUIRE(dy.apply(Y(s) * Y(s)).same_series(Rational(2) * Y(s)));
    }

    SECTION("identity") {
        Gen gen(41);
        FormalFunction f = gen.formal(s, 2, 2, 3);
        REQUIRE(DiffOp::identity(s).apply(f) == f);
    }

    SECTION("Euler operator on x^3") {
        DiffOp euler(s);
        euler.add_term(MultiIndex{1}, MultiIndex{0}, X(s)); // x o d_x
        FormalFunction x3 = X(s).pow(3);
        REQUIRE(euler.apply(x3).same_series(Rational(3) * x3));
    }

    SECTION("known_order accounting") {
        DiffOp dy = DiffOp::partial_y(s, 1);
        Gen gen(43);
        FormalFunction f = gen.formal(s, 2, 2, 3);
        REQUIRE(dy.apply(f).known_order() == f.known_order() - 1);
        FormalFunction burned = f.truncated(0);
        REQUIRE_THROWS_AS(dy.apply(burned), Error);
    }
}

TEST_CASE("commutators") {
    Space s = s11();

    SECTION("[d_y, y] = 1") {
        DiffOp dy = DiffOp::partial_y(s, 1);
        DiffOp c = dy.commutator_with_fn(Y(s));
        REQUIRE(c.order() == 0);
        Gen gen(47);
        FormalFunction f = gen.formal(s, 2, 2, 3);
        // The coefficient of [d_y, y] was produced through one y-derivative,
        // so its provable window is one short of f's.
        REQUIRE(c.apply(f) == f.truncated(f.known_order() - 1));
    }

    SECTION("order-0 operators commute with multiplication") {
        Gen gen(53);
        FormalFunction f = gen.formal(s, 2, 2, 2), g = gen.formal(s, 2, 2, 2);
        DiffOp m(s);
        m.add_term(MultiIndex{0}, MultiIndex{0}, f);
        REQUIRE(m.commutator_with_fn(g).is_zero());
    }

    SECTION("[d_x^2, x] = 2 d_x") {
        DiffOp dxx(s);
        dxx.add_term(MultiIndex{2}, MultiIndex{0}, FormalFunction::constant(s, 1));
        DiffOp c = dxx.commutator_with_fn(X(s));
        DiffOp expect(s);
        expect.add_term(MultiIndex{1}, MultiIndex{0}, FormalFunction::constant(s, 2));
        Gen gen(59);
        FormalFunction f = gen.formal(s, 3, 2, 3);
        REQUIRE(c.apply(f) == expect.apply(f));
    }

    SECTION("order filtration: order([D,f]) <= order(D) - 1") {
        Space s2(2, 1, 4);
        Gen gen(61);
        for (int t = 0; t < 15; ++t) {
            DiffOp D(s2);
            for (int q = 0; q < 3; ++q) {
                MultiIndex I = gen.multiindex(2, 2);
                MultiIndex J = gen.multiindex(1, 1);
                D.add_term(I, J, gen.formal(s2, 2, 1, 2));
            }
            if (D.order() < 1) continue;
            DiffOp c = D.commutator_with_fn(gen.formal(s2, 2, 1, 2));
            REQUIRE(c.order() <= D.order() - 1);
        }
    }
}

TEST_CASE("diffop order certificate") {
    Space s = s11();
    DiffOp dxdy(s);
    dxdy.add_term(MultiIndex{1}, MultiIndex{1}, FormalFunction::constant(s, 1));
    REQUIRE(diffop_order_certificate(dxdy, 2, 5));
    REQUIRE(!diffop_order_certificate(dxdy, 1, 5));
    REQUIRE(diffop_order_certificate(DiffOp(s), 0, 3));
}

TEST_CASE("jet ideal drop") {
    // For D of order <= r and f vanishing to order i + r at a,
    // jet(D f, a, i) = 0; brute force over i + r <= 5.
    Space s(1, 1, 6);
    Gen gen(67);
    std::vector<Rational> a{Rational(1, 2)};
    for (int r = 0; r <= 3; ++r)
        for (int i = 0; i + r <= 5; ++i) {
            DiffOp D(s);
            for (int q = 0; q < 2; ++q) {
                MultiIndex I{static_cast<unsigned>(gen.integer(0, r))};
                MultiIndex J{static_cast<unsigned>(r) - I[0]};
                D.add_term(I, J, gen.formal(s, 1, 1, 2));
            }
            FormalFunction f = gen.formal(s, 1, 1, 2);
            for (int q = 0; q < i + r; ++q) {
                FormalFunction lin = (gen.integer(0, 1) == 0)
                                         ? X(s) - FormalFunction::constant(s, a[0])
                                         : Y(s);
                f = f * lin;
            }
            if (D.max_dy() > static_cast<unsigned>(f.known_order())) continue;
            FormalFunction Df = D.apply(f);
            if (i > Df.known_order() + 1) continue;
            REQUIRE(jet_of(Df, a, i).is_zero());
        }
}

TEST_CASE("jets") {
    Space s = s11();

    SECTION("Taylor shift of x^2 at a = 1") {
        FormalFunction f = X(s).pow(2);
        Jet j = jet_of(f, {Rational(1)}, 3);
        REQUIRE(j.coeff(MultiIndex{0}, MultiIndex{0}) == 1);
        REQUIRE(j.coeff(MultiIndex{1}, MultiIndex{0}) == 2);
        REQUIRE(j.coeff(MultiIndex{2}, MultiIndex{0}) == 1);
    }

    SECTION("pure formal part") {
        Jet j = jet_of(Y(s), {Rational(7)}, 2);
        REQUIRE(j.coeff(MultiIndex{0}, MultiIndex{1}) == 1);
        REQUIRE(j.coeffs().size() == 1);
    }

    SECTION("jet-space dimension matches enumeration") {
        REQUIRE(Jet::dimension(1, 1, 2) == 3); // 1, x-a, y
        for (int n = 0; n <= 2; ++n)
            for (int k = 0; k <= 2; ++k)
                for (int r = 0; r <= 4; ++r) {
                    std::size_t count = 0;
                    if (r > 0)
                        for_each_multiindex_up_to(static_cast<std::size_t>(n + k),
                                                  static_cast<unsigned>(r - 1),
                                                  [&](const MultiIndex&) { ++count; });
                    REQUIRE(Jet::dimension(n, k, r) == count);
                }
    }

    SECTION("insufficient known_order is rejected") {
        Gen gen(71);
        FormalFunction f = gen.formal(s, 2, 2, 3).truncated(1);
        REQUIRE_THROWS_AS(jet_of(f, {Rational(0)}, 3), Error);
    }
}

TEST_CASE("point distributions") {
    Space s = s11();

    SECTION("differentiate then evaluate") {
        PointDistribution d(s, {Rational(0)});
        d.add_term(MultiIndex{1}, MultiIndex{1}, 1); // Ev_0 o d_x d_y
        REQUIRE(d.pair(X(s) * Y(s)) == 1);
    }

    SECTION("Dirac pairs to the value") {
        PointDistribution d = PointDistribution::dirac(s, {Rational(3)});
        REQUIRE(d.pair(FormalFunction::constant(s, 1)) == 1);
    }

    SECTION("perfect pairing against the jet basis: diagonal I! J!") {
        Space s2(2, 1, 6);
        std::vector<Rational> a{Rational(1), Rational(-2)};
        std::vector<IdxPair> basis;
        for (unsigned t = 0; t < 5; ++t)
            for_each_multiindex_of_order(3, t, [&](const MultiIndex& m) {
                basis.push_back({MultiIndex{m[0], m[1]}, MultiIndex{m[2]}});
            });
        for (const auto& row : basis)
            for (const auto& col : basis) {
                PointDistribution d(s2, a);
                d.add_term(row.first, row.second, 1);
                FormalFunction f = shifted_monomial(s2, a, col.first, col.second);
                Rational got = d.pair(f);
                if (row.first == col.first && row.second == col.second) {
                    REQUIRE(got == Rational(row.first.index_factorial() * row.second.index_factorial()));
                } else {
                    REQUIRE(got == 0);
                }
            }
    }
}

TEST_CASE("external product") {
    Space s1(1, 1, 3), s2(1, 1, 3);

    SECTION("unit embeds") {
        Gen gen(73);
        FormalFunction g = gen.formal(s2, 2, 2, 3);
        FormalFunction prod = external_product(FormalFunction::constant(s1, 1), g);
        Space s3(2, 2, 3);
        REQUIRE(prod.space() == s3);
        FormalFunction expect(s3, g.known_order());
        for (const auto& [J, p] : g.coeffs()) {
            MultiIndex J3(2);
            J3[1] = J[0];
            expect.add_term(J3, p.embedded(2, 1));
        }
        REQUIRE(prod == expect);
    }

    SECTION("x (x) x = x1 x2") {
        FormalFunction prod = external_product(FormalFunction::x(s1, 1), FormalFunction::x(s2, 1));
        Space s3(2, 2, 3);
        REQUIRE(prod.same_series(FormalFunction::x(s3, 1) * FormalFunction::x(s3, 2)));
    }

    SECTION("(x+y) (x) y") {
        FormalFunction prod = external_product(FormalFunction::x(s1, 1) + FormalFunction::y(s1, 1),
                                               FormalFunction::y(s2, 1));
        Space s3(2, 2, 3);
        FormalFunction expect = (FormalFunction::x(s3, 1) + FormalFunction::y(s3, 1)) *
                                FormalFunction::y(s3, 2);
        REQUIRE(prod.same_series(expect));
    }
}
