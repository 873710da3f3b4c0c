#include <catch2/catch_amalgamated.hpp>

#include "orefactor/generator.hpp"
#include "orefactor/ore.hpp"
#include "orefactor/singular.hpp"

using namespace orefactor;

namespace {

RatFunc rf(long num) { return RatFunc(Rat(num)); }

RatFunc one_over_x() { return RatFunc(PolyQ(Rat(1)), PolyQ::x()); }

OrePoly d_op() { return OrePoly::d(); }

OrePoly x_op() { return OrePoly::of_func(RatFunc::x()); }

OrePoly rand_ore(Rng& rng, long max_ord, long max_deg) {
    OrePoly L;
    long ord = rng.uniform(0, max_ord);
    for (long k = 0; k <= ord; k++) {
        PolyQ num, den;
        long dn = rng.uniform(0, max_deg);
        for (long j = 0; j <= dn; j++) num.c.push_back(Rat(rng.uniform(-4, 4)));
        num.normalize();
        den.c = {Rat(rng.uniform(1, 3)), Rat(rng.uniform(0, 1))};
        den.normalize();
        L.c.push_back(num.is_zero() ? RatFunc() : RatFunc(num, den));
    }
    L.normalize();
    return L;
}

} // namespace

TEST_CASE("ore multiplication commutation rule") {
    // d * x = x d + 1
    OrePoly lhs = ore_mul(d_op(), x_op());
    OrePoly expect;
    expect.c = {rf(1), RatFunc::x()};
    CHECK(lhs == expect);
}

TEST_CASE("classic factorization identity") {
    // (d + 1/x)(d - 1/x) = d^2
    OrePoly a;
    a.c = {one_over_x(), rf(1)};
    OrePoly b;
    b.c = {-one_over_x(), rf(1)};
    OrePoly prod = ore_mul(a, b);
    OrePoly d2 = ore_mul(d_op(), d_op());
    CHECK(prod == d2);

    // (d - 1/x)^2 = d^2 - (2/x) d + 2/x^2
    OrePoly sq = ore_mul(b, b);
    PolyQ x2;
    x2.c = {Rat(0), Rat(0), Rat(1)};
    OrePoly expect;
    expect.c = {RatFunc(PolyQ(Rat(2)), x2), RatFunc(PolyQ(Rat(-2)), PolyQ::x()), rf(1)};
    CHECK(sq == expect);
}

TEST_CASE("right division") {
    OrePoly d2 = ore_mul(d_op(), d_op());
    SECTION("exact factor") {
        OrePoly b;
        b.c = {-one_over_x(), rf(1)};
        auto [q, rem] = right_divmod(d2, b);
        CHECK(rem.is_zero());
        OrePoly expect;
        expect.c = {one_over_x(), rf(1)};
        CHECK(q == expect);
    }
    SECTION("by d") {
        auto [q, rem] = right_divmod(d2, d_op());
        CHECK(rem.is_zero());
        CHECK(q == d_op());
    }
    SECTION("with remainder") {
        // d^2 = (d+1)(d-1) + 1
        OrePoly dm1;
        dm1.c = {rf(-1), rf(1)};
        auto [q, rem] = right_divmod(d2, dm1);
        OrePoly dp1;
        dp1.c = {rf(1), rf(1)};
        CHECK(q == dp1);
        CHECK(rem == OrePoly::of_func(rf(1)));
    }
}

TEST_CASE("ring axioms and division correctness (randomized)") {
    Rng rng(21);
    for (int iter = 0; iter < 15; iter++) {
        OrePoly A = rand_ore(rng, 2, 1), B = rand_ore(rng, 2, 1), C = rand_ore(rng, 1, 1);
        CHECK(ore_mul(ore_mul(A, B), C) == ore_mul(A, ore_mul(B, C)));
        CHECK(ore_mul(A, B + C) == ore_mul(A, B) + ore_mul(A, C));
    }
    for (int iter = 0; iter < 15; iter++) {
        OrePoly Q = rand_ore(rng, 2, 1), R = rand_ore(rng, 2, 1), S = rand_ore(rng, 1, 1);
        if (R.is_zero()) continue;
        while (!S.is_zero() && S.order() >= R.order()) S.c.pop_back();
        S.normalize();
        auto [q2, s2] = right_divmod(ore_mul(Q, R) + S, R);
        CHECK(q2 == Q);
        CHECK(s2 == S);
    }
}

TEST_CASE("adjoint") {
    OrePoly d2 = ore_mul(d_op(), d_op());
    CHECK(adjoint(d2) == d2);
    // (x d)* = -x d - 1
    OrePoly xd = ore_mul(x_op(), d_op());
    OrePoly expect;
    expect.c = {rf(-1), -RatFunc::x()};
    CHECK(adjoint(xd) == expect);

    Rng rng(31);
    for (int iter = 0; iter < 10; iter++) {
        OrePoly A = rand_ore(rng, 2, 1), B = rand_ore(rng, 2, 1);
        CHECK(adjoint(adjoint(A)) == A);
        CHECK(adjoint(ore_mul(A, B)) == ore_mul(adjoint(B), adjoint(A)));
    }
}

TEST_CASE("companion and adjoint-transform matrices") {
    OrePoly d2 = ore_mul(d_op(), d_op());
    auto C = companion_matrix(d2);
    CHECK(C[0][1] == RatFunc(Rat(1)));
    CHECK(C[0][0].is_zero());
    CHECK(C[1][0].is_zero());
    CHECK(C[1][1].is_zero());

    auto P = adjoint_transform_matrix(d2);
    auto P0 = func_matrix_eval(P, Rat(0));
    CHECK(P0[0][0] == 0);
    CHECK(P0[0][1] == 1);
    CHECK(P0[1][0] == -1);
    CHECK(P0[1][1] == 0);

    OrePoly d1 = d_op();
    auto P1 = adjoint_transform_matrix(d1);
    CHECK(func_matrix_eval(P1, Rat(0))[0][0] == 1);
}

TEST_CASE("singularity analysis") {
    OrePoly d2 = ore_mul(d_op(), d_op());
    SECTION("(d - 1/x)^2") {
        OrePoly b;
        b.c = {-one_over_x(), rf(1)};
        OrePoly L = ore_mul(b, b);
        SingularityData sd = singularity_data(L);
        CHECK(sd.fuchsian);
        REQUIRE(sd.points.size() == 1);
        CHECK(sd.points[0].rational.has_value());
        CHECK(*sd.points[0].rational == 0);
        const SingularClass& cls = sd.classes[sd.points[0].cls];
        REQUIRE(cls.rational_exponents.size() == 2);
        // indicial roots {1, 2}
        std::vector<Rat> roots;
        for (auto& [v, m] : cls.rational_exponents) {
            CHECK(m == 1);
            roots.push_back(v);
        }
        std::sort(roots.begin(), roots.end());
        CHECK(roots[0] == 1);
        CHECK(roots[1] == 2);
    }
    SECTION("x d^2 + d has indicial alpha^2 at 0") {
        OrePoly L;
        L.c = {RatFunc(), one_over_x(), rf(1)}; // monic form d^2 + (1/x) d
        SingularityData sd = singularity_data(L);
        REQUIRE(sd.points.size() == 1);
        const SingularClass& cls = sd.classes[0];
        REQUIRE(cls.rational_exponents.size() == 1);
        CHECK(cls.rational_exponents[0].first == 0);
        CHECK(cls.rational_exponents[0].second == 2);
    }
    SECTION("d^2 is singular only at infinity with exponents {0, -1}") {
        SingularityData sd = singularity_data(d2);
        CHECK(sd.points.empty());
        CHECK(sd.infinity_singular);
        CHECK(sd.infinity.regular);
        std::vector<Rat> roots;
        for (auto& [v, m] : sd.infinity.rational_exponents) roots.push_back(v);
        std::sort(roots.begin(), roots.end());
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == -1);
        CHECK(roots[1] == 0);
    }
    SECTION("irregular operator fails the Fuchs test") {
        PolyQ x2;
        x2.c = {Rat(0), Rat(0), Rat(1)};
        OrePoly L;
        L.c = {-RatFunc(PolyQ(Rat(1)), x2), rf(1)}; // d - 1/x^2
        CHECK_FALSE(fuchs_check(L));
    }
    SECTION("ordinary points have exponents 0..r-1") {
        // analyze the class x - 5 for d^2 (an ordinary point)
        SingularClass cls = analyze_class(d2, PolyQ::of_coeffs({Rat(-5), Rat(1)}));
        CHECK(cls.regular);
        std::vector<Rat> roots;
        for (auto& [v, m] : cls.rational_exponents) roots.push_back(v);
        std::sort(roots.begin(), roots.end());
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == 0);
        CHECK(roots[1] == 1);
    }
}

TEST_CASE("accessory parameter count") {
    CHECK(accessory_count(2, 2) == 0);
    CHECK(accessory_count(2, 3) == 1);
    CHECK(accessory_count(4, 2) == 3);
    CHECK(accessory_count(2, 1) == 0);
}

TEST_CASE("random fuchsian generator validity") {
    Rng seed_rng(1234);
    for (int iter = 0; iter < 12; iter++) {
        long r = seed_rng.uniform(1, 3);
        long nu = seed_rng.uniform(1, 3);
        std::vector<Rat> sing;
        for (long s = 0; s < nu; s++) sing.push_back(Rat(s == 0 ? 0 : (s == 1 ? 1 : -2)));
        Rng rng(seed_rng.next());
        FuchsianSpec spec = draw_fuchsian_spec(r, sing, rng, ExponentProfile::distinct, 6);
        OrePoly L = build_fuchsian(spec);
        CHECK(L.order() == r);
        SingularityData sd = singularity_data(L);
        CHECK(sd.fuchsian);
        // the singular support matches the request (some points may turn out
        // apparent-but-still-singular; they must at least be contained)
        for (const SingularPoint& pt : sd.points) {
            REQUIRE(pt.rational.has_value());
            bool found = false;
            for (const Rat& s : sing) found = found || (s == *pt.rational);
            CHECK(found);
        }
        // Fuchs relation: sum of all exponents (finite + infinity)
        Rat sum(0);
        for (long s = 0; s <= nu; s++)
            for (const Rat& e : spec.exponents[static_cast<size_t>(s)]) sum += e;
        CHECK(sum == Rat(r * (r - 1)) * Rat(nu - 1) / 2);
        // prescribed exponents are recovered by the analyzer
        for (const SingularPoint& pt : sd.points) {
            const SingularClass& cls = sd.classes[pt.cls];
            size_t s_idx = 0;
            for (size_t s = 0; s < sing.size(); s++)
                if (sing[s] == *pt.rational) s_idx = s;
            std::vector<Rat> expect = spec.exponents[s_idx];
            std::vector<Rat> got;
            for (auto& [v, m] : cls.rational_exponents)
                for (long i = 0; i < m; i++) got.push_back(v);
            std::sort(expect.begin(), expect.end());
            std::sort(got.begin(), got.end());
            CHECK(got == expect);
        }
    }
}

TEST_CASE("generator determinism") {
    std::vector<Rat> sing = {Rat(0), Rat(1)};
    OrePoly a = random_fuchsian(4, sing, 42);
    OrePoly b = random_fuchsian(4, sing, 42);
    CHECK(a == b);
    OrePoly c = random_fuchsian(4, sing, 43);
    CHECK_FALSE(a == c);
}

TEST_CASE("random reducible products divide") {
    std::vector<Rat> sing = {Rat(0), Rat(1)};
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        for (ExponentProfile prof : {ExponentProfile::distinct, ExponentProfile::single}) {
            ReducibleInstance inst = random_reducible(1, 1, sing, seed, prof, 5);
            CHECK(inst.L.order() == 2);
            CHECK(right_divmod(inst.L, inst.L1).second.is_zero());
            CHECK(fuchs_check(inst.L));
        }
    }
}

TEST_CASE("hypergeometric operator local data") {
    OrePoly L = hypergeometric_operator(Rat(1, 3), Rat(1, 5), Rat(1, 2));
    SingularityData sd = singularity_data(L);
    CHECK(sd.fuchsian);
    REQUIRE(sd.points.size() == 2);
    // exponents at 0: {0, 1-c} = {0, 1/2}
    for (const SingularPoint& pt : sd.points) {
        if (*pt.rational == 0) {
            std::vector<Rat> roots;
            for (auto& [v, m] : sd.classes[pt.cls].rational_exponents) roots.push_back(v);
            std::sort(roots.begin(), roots.end());
            REQUIRE(roots.size() == 2);
            CHECK(roots[0] == 0);
            CHECK(roots[1] == Rat(1, 2));
        }
    }
    CHECK_FALSE(hypergeometric_reducible(Rat(1, 3), Rat(1, 5), Rat(1, 2)));
    CHECK(hypergeometric_reducible(Rat(2), Rat(1, 5), Rat(1, 2)));
    CHECK(hypergeometric_reducible(Rat(1, 3), Rat(1, 5), Rat(16, 3))); // c - a = 5
}
