#include <catch2/catch_amalgamated.hpp>

#include "orefactor/generator.hpp"
#include "orefactor/monodromy.hpp"

using namespace orefactor;

namespace {

OrePoly d_op() { return OrePoly::d(); }
RatFunc one_over_x() { return RatFunc(PolyQ(Rat(1)), PolyQ::x()); }

} // namespace

TEST_CASE("transition along a segment for d^2") {
    Prec p = 128;
    OrePoly d2 = ore_mul(d_op(), d_op());
    PathSpec path;
    path.waypoints = {QPoint{Rat(0), Rat(0)}, QPoint{Rat(1), Rat(0)}};
    for (Mode mode : {Mode::heuristic, Mode::certified}) {
        BallMatrix M = transition_matrix(d2, path, p, mode, {});
        CHECK(contains_point_rat(M.at(0, 0), Rat(1), Rat(0)));
        CHECK(contains_point_rat(M.at(0, 1), Rat(1), Rat(0)));
        CHECK(contains_point_rat(M.at(1, 0), Rat(0), Rat(0)));
        CHECK(contains_point_rat(M.at(1, 1), Rat(1), Rat(0)));
    }
}

TEST_CASE("concatenation consistency") {
    Prec p = 128;
    OrePoly L; // d^2 + 1
    L.c = {RatFunc(Rat(1)), RatFunc(), RatFunc(Rat(1))};
    PathSpec p1, p2, p12;
    p1.waypoints = {QPoint{Rat(0), Rat(0)}, QPoint{Rat(1, 2), Rat(0)}};
    p2.waypoints = {QPoint{Rat(1, 2), Rat(0)}, QPoint{Rat(1), Rat(0)}};
    p12.waypoints = {QPoint{Rat(0), Rat(0)}, QPoint{Rat(1), Rat(0)}};
    BallMatrix A = transition_matrix(L, p1, p, Mode::certified, {});
    BallMatrix B = transition_matrix(L, p2, p, Mode::certified, {});
    BallMatrix AB = mat_mul(B, A, p);
    BallMatrix direct = transition_matrix(L, p12, p, Mode::certified, {});
    for (long i = 0; i < 2; i++)
        for (long j = 0; j < 2; j++) CHECK(optimistic_eq(AB.at(i, j), direct.at(i, j)));
    // sanity: the enclosure contains (cos 1, sin 1) data -- check cos via
    // high precision reference
    Real c1(256);
    mpfr_cos(c1.p(), Real::of_long(1, 256).p(), MPFR_RNDN);
    Ball ref = Ball::make(c1, Real(256), Mag::two_pow(-200));
    CHECK(optimistic_eq(direct.at(0, 0), ref));
}

TEST_CASE("loop monodromy of x d - 1/2 encloses -1") {
    Prec p = 128;
    OrePoly L; // d - (1/2)/x, solution x^{1/2}
    L.c = {RatFunc(PolyQ(Rat(-1, 2)), PolyQ::x()), RatFunc(Rat(1))};
    SingularityData sd = singularity_data(L);
    REQUIRE(sd.points.size() == 1);
    for (Mode mode : {Mode::heuristic, Mode::certified}) {
        MonodromyIter iter(L, sd, Rat(1), p, mode);
        REQUIRE(iter.has_next());
        MonodromyGenerator g = iter.next();
        CHECK(contains_point_rat(g.matrix.at(0, 0), Rat(-1), Rat(0)));
        // and the enclosure is reasonably tight at this precision
        CHECK(g.matrix.at(0, 0).rad.lt_2exp(-40));
    }
}

TEST_CASE("trivial monodromy for (d - 1/x)^2") {
    Prec p = 128;
    OrePoly b;
    b.c = {-one_over_x(), RatFunc(Rat(1))};
    OrePoly L = ore_mul(b, b); // solutions x and x^2: single-valued
    SingularityData sd = singularity_data(L);
    REQUIRE(sd.points.size() == 1);
    MonodromyIter iter(L, sd, choose_base_point(sd), p, Mode::certified);
    MonodromyGenerator g = iter.next();
    CHECK(matrix_contains_identity(g.matrix));
}

TEST_CASE("eigenvalue-exponent consistency for x^{1/2}, x^{1/3} solutions") {
    Prec p = 192;
    // L = d^2 + (1/(6x)) d + 1/(6x^2)
    PolyQ x2;
    x2.c = {Rat(0), Rat(0), Rat(1)};
    OrePoly L;
    L.c = {RatFunc(PolyQ(Rat(1, 6)), x2), RatFunc(PolyQ(Rat(1, 6)), PolyQ::x()), RatFunc(Rat(1))};
    SingularityData sd = singularity_data(L);
    REQUIRE(sd.points.size() == 1);
    MonodromyIter iter(L, sd, choose_base_point(sd), p, Mode::certified);
    MonodromyGenerator g = iter.next();
    auto ed = eigen_data(g.matrix, p);
    REQUIRE(ed.size() == 2);
    Ball em1 = ball_e2pii_rat(Rat(1, 2), p);  // e^{pi i} = -1
    Ball e13 = ball_e2pii_rat(Rat(1, 3), p);
    bool saw_m1 = false, saw_13 = false;
    for (const EigenData& e : ed) {
        if (optimistic_eq(e.value, em1)) saw_m1 = true;
        if (optimistic_eq(e.value, e13)) saw_13 = true;
    }
    CHECK(saw_m1);
    CHECK(saw_13);
}

TEST_CASE("monodromy product with infinity encloses the identity") {
    Prec p = 192;
    SECTION("hypergeometric instance") {
        OrePoly L = hypergeometric_operator(Rat(1, 3), Rat(1, 5), Rat(1, 2));
        SingularityData sd = singularity_data(L);
        Rat x0 = choose_base_point(sd);
        BallMatrix prod = monodromy_product_with_infinity(L, sd, x0, p, Mode::certified);
        CHECK(matrix_contains_identity(prod));
    }
    SECTION("single singularity") {
        OrePoly L; // d - (1/2)/x
        L.c = {RatFunc(PolyQ(Rat(-1, 2)), PolyQ::x()), RatFunc(Rat(1))};
        SingularityData sd = singularity_data(L);
        BallMatrix prod = monodromy_product_with_infinity(L, sd, choose_base_point(sd), p, Mode::certified);
        CHECK(matrix_contains_identity(prod));
    }
}

TEST_CASE("adjoint transport matches the adjoint's own monodromy") {
    Prec p = 192;
    OrePoly L = hypergeometric_operator(Rat(1, 3), Rat(1, 5), Rat(1, 2));
    SingularityData sd = singularity_data(L);
    Rat x0 = choose_base_point(sd);
    OrePoly Lstar = ore_monic(adjoint(L));
    SingularityData sd_star = singularity_data(Lstar);
    REQUIRE(sd_star.points.size() == sd.points.size());

    auto P = adjoint_transform_matrix(L);
    auto P0 = func_matrix_eval(P, x0);

    MonodromyIter iter(L, sd, x0, p, Mode::certified);
    MonodromyIter iter_star(Lstar, sd_star, x0, p, Mode::certified);
    while (iter.has_next()) {
        MonodromyGenerator g = iter.next();
        MonodromyGenerator h = iter_star.next();
        BallMatrix chi = adjoint_group_transport(g.matrix, P0, p);
        REQUIRE(chi.m == h.matrix.m);
        for (long i = 0; i < chi.m; i++)
            for (long j = 0; j < chi.n; j++) CHECK(optimistic_eq(chi.at(i, j), h.matrix.at(i, j)));
    }
}

TEST_CASE("precision monotonicity of monodromy radii") {
    OrePoly L = hypergeometric_operator(Rat(1, 3), Rat(1, 5), Rat(1, 2));
    SingularityData sd = singularity_data(L);
    Rat x0 = choose_base_point(sd);
    Mag rad_small, rad_big;
    {
        MonodromyIter it(L, sd, x0, 128, Mode::certified);
        rad_small = mat_max_rad(it.next().matrix);
    }
    {
        MonodromyIter it(L, sd, x0, 256, Mode::certified);
        rad_big = mat_max_rad(it.next().matrix);
    }
    CHECK(rad_big <= rad_small);
}
