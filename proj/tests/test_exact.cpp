#include <catch2/catch_amalgamated.hpp>

#include "orefactor/reconstruct.hpp"

using namespace orefactor;

TEST_CASE("polynomial arithmetic over Q") {
    PolyQ x = PolyQ::x();
    PolyQ p = x * x - PolyQ(Rat(1)); // x^2 - 1
    PolyQ q = x - PolyQ(Rat(1));
    CHECK(poly_gcd(p, q) == q);
    auto [quo, rem] = poly_divrem(p, q);
    CHECK(rem.is_zero());
    CHECK(quo == x + PolyQ(Rat(1)));
    CHECK(poly_eval(p, Rat(3)) == Rat(8));
    CHECK(poly_derivative(p) == Rat(2) * x);
    // shift: (x+1)^2 - 1 = x^2 + 2x
    CHECK(poly_shift(p, Rat(1)) == x * x + Rat(2) * x);
}

TEST_CASE("squarefree decomposition") {
    PolyQ x = PolyQ::x();
    // (x-1)^2 (x+2)
    PolyQ p = (x - PolyQ(Rat(1))) * (x - PolyQ(Rat(1))) * (x + PolyQ(Rat(2)));
    auto fs = squarefree_decomposition(p);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0] == x + PolyQ(Rat(2)));
    CHECK(fs[1] == x - PolyQ(Rat(1)));
    CHECK(squarefree_part(p).degree() == 2);
}

TEST_CASE("rational functions") {
    RatFunc x = RatFunc::x();
    RatFunc one_over_x = RatFunc(Rat(1)) / x;
    RatFunc two_over_x = one_over_x + one_over_x;
    CHECK(two_over_x == RatFunc(Rat(2)) / x);

    RatFunc inv_x2 = RatFunc(Rat(1)) / (x * x);
    CHECK(rf_valuation(inv_x2, PolyQ::x()) == -2);

    CHECK(rf_eval(two_over_x, Rat(4)) == Rat(1, 2));
    // derivative of 1/x is -1/x^2
    CHECK(rf_derivative(one_over_x) == -inv_x2);
    // composition with 1/x: (1/x)(1/x) = x
    CHECK(rf_compose_recip(one_over_x) == x);
}

TEST_CASE("partial fractions") {
    PolyQ x = PolyQ::x();
    // 1 / (x (x-1)) = -1/x + 1/(x-1)
    std::vector<PolyQ> dens = {x, x - PolyQ(Rat(1))};
    auto [poly, parts] = partial_fractions(PolyQ(Rat(1)), dens);
    CHECK(poly.is_zero());
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == PolyQ(Rat(-1)));
    CHECK(parts[1] == PolyQ(Rat(1)));
}

TEST_CASE("resultants") {
    PolyQ x = PolyQ::x();
    PolyQ f = x * x - PolyQ(Rat(2));
    PolyQ g = x * x - PolyQ(Rat(3));
    CHECK(poly_resultant(f, g) == Rat(1));
    CHECK(poly_resultant(f, f) == Rat(0));
    // res(x^2-2, x-1) = 1 - 2 = -1
    CHECK(poly_resultant(f, x - PolyQ(Rat(1))) == Rat(-1));
}

TEST_CASE("number field arithmetic in Q(sqrt 2)") {
    auto F = std::make_shared<NumberField>();
    PolyQ x = PolyQ::x();
    F->minpoly = x * x - PolyQ(Rat(2));
    F->isolator = Ball::of_rat(Rat(3, 2), Rat(0), 64);
    F->isolator.rad = Mag::of_double(0.2);

    PolyQ theta_rep;
    theta_rep.c = {Rat(0), Rat(1)};
    NFElem theta(F, theta_rep);
    NFElem one(1);

    CHECK((theta * theta) == NFElem(Rat(2)));
    CHECK(((one + theta) * (one - theta)) == NFElem(Rat(-1)));
    CHECK((one / theta) * theta == one);

    Ball tb = nf_to_ball(theta, 128);
    Real sqrt2(128);
    mpfr_sqrt_ui(sqrt2.p(), 2, MPFR_RNDN);
    Ball pt = Ball::make(sqrt2, Real(128), Mag::two_pow(-120));
    CHECK(optimistic_eq(tb, pt));
}

TEST_CASE("LLL basics") {
    SECTION("identity stays put") {
        IntMat B = {{1, 0}, {0, 1}};
        IntMat R = lll_reduce(B);
        CHECK(R.size() == 2);
        for (auto& row : R) {
            Int n2 = row[0] * row[0] + row[1] * row[1];
            CHECK(n2 == 1);
        }
    }
    SECTION("shears reduce") {
        IntMat B = {{1, 0}, {4, 1}};
        IntMat R = lll_reduce(B);
        // both vectors should have norm 1 after reduction
        for (auto& row : R) {
            Int n2 = row[0] * row[0] + row[1] * row[1];
            CHECK(n2 <= 2);
        }
    }
}

TEST_CASE("algebraic reconstruction") {
    SECTION("rational 1/3") {
        Ball z = Ball::of_real_rat(Rat(1, 3), 256);
        z.rad = Mag::two_pow(-140);
        auto a = reconstruct_algebraic(z, 1, 60);
        REQUIRE(a.has_value());
        CHECK(a->is_rational());
        CHECK(a->rational_value() == Rat(1, 3));
    }
    SECTION("sqrt 2") {
        Real s(256);
        mpfr_sqrt_ui(s.p(), 2, MPFR_RNDN);
        Ball z = Ball::make(s, Real(256), Mag::two_pow(-140));
        auto a = reconstruct_algebraic(z, 2, 60);
        REQUIRE(a.has_value());
        PolyQ x = PolyQ::x();
        CHECK(a->min_poly == x * x - PolyQ(Rat(2)));
    }
    SECTION("pi resists low-degree low-height relations") {
        Real s(256);
        mpfr_const_pi(s.p(), MPFR_RNDN);
        Ball z = Ball::make(s, Real(256), Mag::two_pow(-140));
        auto a = reconstruct_algebraic(z, 4, 24);
        CHECK_FALSE(a.has_value());
    }
    SECTION("random rational round trip") {
        Rng rng(99);
        for (int i = 0; i < 30; i++) {
            Int num(static_cast<long>(rng.uniform(-1, 1)));
            // numerators and denominators up to 2^30
            long nbits = rng.uniform(1, 30);
            Rat v(static_cast<long>(rng.next() % (1ULL << nbits)) - (1L << (nbits - 1)),
                  static_cast<long>(rng.next() % (1ULL << nbits)) + 1);
            v.canonicalize();
            Ball z = Ball::of_real_rat(v, 256);
            z.rad = Mag::two_pow(-100);
            auto a = reconstruct_algebraic(z, 1, 40);
            REQUIRE(a.has_value());
            CHECK(a->rational_value() == v);
        }
    }
    SECTION("vector sharing one field") {
        Real s(256);
        mpfr_sqrt_ui(s.p(), 2, MPFR_RNDN);
        Ball r2 = Ball::make(s, Real(256), Mag::two_pow(-140));
        Real t(256);
        mpfr_add_ui(t.p(), s.p(), 1, MPFR_RNDN);
        Ball onePlus = Ball::make(t, Real(256), Mag::two_pow(-140));
        auto rv = reconstruct_vector({r2, onePlus}, 2, 60);
        REQUIRE(rv.has_value());
        REQUIRE(rv->field != nullptr);
        CHECK(rv->field->degree() == 2);
        // second entry = 1 + theta
        PolyQ expect;
        expect.c = {Rat(1), Rat(1)};
        CHECK(rv->entries[1].rep() == expect);
    }
}
