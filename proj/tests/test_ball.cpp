#include <catch2/catch_amalgamated.hpp>

#include "orefactor/ball_poly.hpp"
#include "orefactor/util.hpp"

#include "exact_linalg.hpp"

using namespace orefactor;

namespace {

Rat rand_rat(Rng& rng, long num_bound, long den_bound) {
    Rat q(rng.uniform(-num_bound, num_bound), rng.uniform(1, den_bound));
    q.canonicalize();
    return q;
}

BallMatrix of_rat_matrix(const testoracle::RatMat& M, Prec p) {
    BallMatrix B(static_cast<long>(M.size()), static_cast<long>(M[0].size()), p);
    for (long i = 0; i < B.m; i++)
        for (long j = 0; j < B.n; j++) B.at(i, j) = Ball::of_real_rat(M[static_cast<size_t>(i)][static_cast<size_t>(j)], p);
    return B;
}

} // namespace

TEST_CASE("optimistic equality is disk intersection") {
    Prec p = 64;
    Ball one = Ball::one(p);
    CHECK(optimistic_eq(one, one));

    Ball a = Ball::zero(p);
    a.rad = Mag::of_double(0.1);
    Ball b = Ball::of_rat(Rat(3, 20), Rat(0), p);
    b.rad = Mag::of_double(0.1);
    CHECK(optimistic_eq(a, b));

    Ball c = Ball::zero(p);
    c.rad = Mag::of_double(0.01);
    Ball d = Ball::one(p);
    d.rad = Mag::of_double(0.01);
    CHECK_FALSE(optimistic_eq(c, d));
}

TEST_CASE("arithmetic containment fuzz") {
    Rng rng(42);
    Prec coarse = 64, fine = 320;
    for (int iter = 0; iter < 200; iter++) {
        Rat ar = rand_rat(rng, 50, 9), ai = rand_rat(rng, 50, 9);
        Rat br = rand_rat(rng, 50, 9), bi = rand_rat(rng, 50, 9);
        if (br == 0 && bi == 0) br = 1;
        Ball a = Ball::of_rat(ar, ai, coarse);
        Ball b = Ball::of_rat(br, bi, coarse);
        a.rad += Mag::two_pow(-30);
        b.rad += Mag::two_pow(-40);
        Ball ax = Ball::of_rat(ar, ai, fine);
        Ball bx = Ball::of_rat(br, bi, fine);

        CHECK(ball_contains(ball_add(a, b, coarse), ball_add(ax, bx, fine)));
        CHECK(ball_contains(ball_sub(a, b, coarse), ball_sub(ax, bx, fine)));
        CHECK(ball_contains(ball_mul(a, b, coarse), ball_mul(ax, bx, fine)));
        if (certified_nonzero(b)) CHECK(ball_contains(ball_div(a, b, coarse), ball_div(ax, bx, fine)));
    }
}

TEST_CASE("division by zero-containing ball fails") {
    Ball z = Ball::zero(64);
    z.rad = Mag::of_double(0.5);
    CHECK_THROWS_AS(ball_inv(z, 64), Failure);
}

TEST_CASE("echelon on exact matrices") {
    Prec p = 128;
    SECTION("identity") {
        BallMatrix I = BallMatrix::identity(3, p);
        EchelonResult e = echelon(I, p);
        CHECK(e.rank == 3);
        CHECK(e.pivots == std::vector<long>{0, 1, 2});
    }
    SECTION("rank one") {
        testoracle::RatMat M = {{1, 1}, {1, 1}};
        EchelonResult e = echelon(of_rat_matrix(M, p), p);
        CHECK(e.rank == 1);
        // R = [[1,1],[0,0]] with containment of zero in the trailing row
        CHECK(contains_zero(e.R.at(1, 0)));
        CHECK(contains_zero(e.R.at(1, 1)));
        CHECK(contains_point_rat(e.R.at(0, 1), Rat(1), Rat(0)));
    }
    SECTION("fattened rank drop") {
        testoracle::RatMat M = {{1, 1}, {1, 1}};
        BallMatrix B = of_rat_matrix(M, p);
        B.at(1, 0).rad += Mag::two_pow(-100);
        B.at(1, 1).rad += Mag::two_pow(-100);
        EchelonResult e = echelon(B, p);
        CHECK(e.rank == 1);
        CHECK(contains_zero(e.R.at(1, 0)));
        CHECK(contains_zero(e.R.at(1, 1)));
    }
}

TEST_CASE("echelon containment and rank bound vs exact oracle") {
    Rng rng(7);
    Prec p = 128;
    for (int iter = 0; iter < 50; iter++) {
        long m = rng.uniform(1, 5), k = rng.uniform(1, 4), n = rng.uniform(1, 5);
        // A (m x k) * B (k x n): rank <= min(m, k, n), usually equal
        testoracle::RatMat A(static_cast<size_t>(m)), B(static_cast<size_t>(k));
        for (auto& row : A) {
            row.resize(static_cast<size_t>(k));
            for (auto& x : row) x = rand_rat(rng, 6, 4);
        }
        for (auto& row : B) {
            row.resize(static_cast<size_t>(n));
            for (auto& x : row) x = rand_rat(rng, 6, 4);
        }
        testoracle::RatMat M(static_cast<size_t>(m), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
        for (long i = 0; i < m; i++)
            for (long j = 0; j < n; j++)
                for (long l = 0; l < k; l++) M[static_cast<size_t>(i)][static_cast<size_t>(j)] += A[static_cast<size_t>(i)][static_cast<size_t>(l)] * B[static_cast<size_t>(l)][static_cast<size_t>(j)];
        long true_rank = testoracle::rref(M).rank;
        for (long fat : {-200L, -60L, -20L}) {
            BallMatrix Mb = mat_widen(of_rat_matrix(M, p), Mag::two_pow(fat));
            EchelonResult e = echelon(Mb, p);
            CHECK(e.rank <= true_rank);
            if (fat == -200) CHECK(e.rank == true_rank);
        }
    }
}

TEST_CASE("kernel basics") {
    Prec p = 128;
    SECTION("trivial kernel certified") {
        CHECK(kernel(BallMatrix::identity(2, p), p).empty());
    }
    SECTION("rank-one kernel") {
        testoracle::RatMat M = {{1, 1}, {1, 1}};
        auto K = kernel(of_rat_matrix(M, p), p);
        REQUIRE(K.size() == 1);
        // vector (x, 1) with x enclosing -1, up to the echelon normalization
        CHECK(contains_point_rat(K[0][0], Rat(-1), Rat(0)));
        CHECK(contains_point_rat(K[0][1], Rat(1), Rat(0)));
    }
    SECTION("full kernel of the zero row") {
        testoracle::RatMat M = {{0, 0}};
        auto K = kernel(of_rat_matrix(M, p), p);
        CHECK(K.size() == 2);
    }
}

TEST_CASE("kernel spans the true kernel (randomized)") {
    Rng rng(11);
    Prec p = 128;
    for (int iter = 0; iter < 40; iter++) {
        long m = rng.uniform(1, 5), n = rng.uniform(1, 5);
        testoracle::RatMat M(static_cast<size_t>(m));
        for (auto& row : M) {
            row.resize(static_cast<size_t>(n));
            for (auto& x : row) x = rand_rat(rng, 4, 3);
        }
        // make it rank-deficient half the time by duplicating a column
        if (n >= 2 && rng.uniform(0, 1)) {
            for (auto& row : M) row[static_cast<size_t>(n - 1)] = row[0];
        }
        auto true_kernel = testoracle::kernel_basis(M);
        auto K = kernel(of_rat_matrix(M, p), p);
        CHECK(K.size() >= true_kernel.size());
        // each true kernel vector must not be certifiably outside span(K)
        for (const auto& u : true_kernel) {
            BallMatrix S(static_cast<long>(K.size()) + 1, n, p);
            for (size_t i = 0; i < K.size(); i++)
                for (long j = 0; j < n; j++) S.at(static_cast<long>(i), j) = K[i][static_cast<size_t>(j)];
            for (long j = 0; j < n; j++) S.at(static_cast<long>(K.size()), j) = Ball::of_real_rat(u[static_cast<size_t>(j)], p);
            EchelonResult e = echelon(S, p);
            CHECK(e.rank <= static_cast<long>(K.size()));
        }
    }
}

TEST_CASE("spin-up orbits") {
    Prec p = 128;
    SECTION("identity fixes e1") {
        std::vector<BallMatrix> mats = {BallMatrix::identity(2, p)};
        BallVec v = {Ball::one(p), Ball::zero(p)};
        auto U = spin_up(mats, v, p);
        CHECK(U.size() == 1);
    }
    SECTION("swap generates the plane") {
        testoracle::RatMat S = {{0, 1}, {1, 0}};
        std::vector<BallMatrix> mats = {of_rat_matrix(S, p)};
        BallVec v = {Ball::one(p), Ball::zero(p)};
        auto U = spin_up(mats, v, p);
        CHECK(U.size() == 2);
    }
    SECTION("shear fixes e1") {
        testoracle::RatMat S = {{1, 1}, {0, 1}};
        std::vector<BallMatrix> mats = {of_rat_matrix(S, p)};
        BallVec v = {Ball::one(p), Ball::zero(p)};
        auto U = spin_up(mats, v, p);
        CHECK(U.size() == 1);
    }
}

TEST_CASE("matrix inverse encloses the true inverse") {
    Prec p = 128;
    testoracle::RatMat M = {{1, 2}, {3, 4}};
    BallMatrix inv = mat_inv(of_rat_matrix(M, p), p);
    // inverse is [[-2, 1], [3/2, -1/2]]
    CHECK(contains_point_rat(inv.at(0, 0), Rat(-2), Rat(0)));
    CHECK(contains_point_rat(inv.at(0, 1), Rat(1), Rat(0)));
    CHECK(contains_point_rat(inv.at(1, 0), Rat(3, 2), Rat(0)));
    CHECK(contains_point_rat(inv.at(1, 1), Rat(-1, 2), Rat(0)));
    CHECK_THROWS_AS(mat_inv(of_rat_matrix({{1, 1}, {1, 1}}, p), p), Failure);
}

TEST_CASE("root isolation basics") {
    Prec p = 64;
    SECTION("x^2 - 1") {
        BallPoly P;
        P.c = {Ball::of_long(-1, p), Ball::zero(p), Ball::one(p)};
        auto roots = isolate_roots(P, p);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].second == 1);
        CHECK(roots[1].second == 1);
        CHECK(contains_point_rat(roots[0].first, Rat(-1), Rat(0)));
        CHECK(contains_point_rat(roots[1].first, Rat(1), Rat(0)));
    }
    SECTION("x^2 double root") {
        BallPoly P;
        P.c = {Ball::zero(p), Ball::zero(p), Ball::one(p)};
        auto roots = isolate_roots(P, p);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].second == 2);
        CHECK(contains_point_rat(roots[0].first, Rat(0), Rat(0)));
    }
    SECTION("separation depends on precision") {
        // (x-1)(x-1-eps), eps = 2^-66 (about 1.4e-20)
        Rat eps = Rat(1) / (Rat(1) << 66);
        Rat b = -(2 + eps), c = 1 + eps;
        auto build = [&](Prec pp) {
            BallPoly P;
            P.c = {Ball::of_real_rat(c, pp), Ball::of_real_rat(b, pp), Ball::one(pp)};
            return P;
        };
        auto at64 = isolate_roots(build(64), 64);
        REQUIRE(at64.size() == 1);
        CHECK(at64[0].second == 2);
        auto at128 = isolate_roots(build(128), 128);
        REQUIRE(at128.size() == 2);
        CHECK(at128[0].second == 1);
        CHECK(at128[1].second == 1);
    }
}

TEST_CASE("root multiplicities sum to degree (randomized)") {
    Rng rng(5);
    for (int iter = 0; iter < 20; iter++) {
        Prec p = 96;
        // product of (x - r_i)^{m_i}
        long nfac = rng.uniform(1, 3);
        BallPoly P;
        P.c = {Ball::one(p)};
        long deg = 0;
        for (long i = 0; i < nfac; i++) {
            long m = rng.uniform(1, 2);
            Rat root = rand_rat(rng, 5, 3);
            for (long j = 0; j < m; j++) {
                BallPoly Q;
                Q.c.assign(P.c.size() + 1, Ball::zero(p));
                for (size_t k = 0; k < P.c.size(); k++) {
                    Q.c[k + 1] = ball_add(Q.c[k + 1], P.c[k], p);
                    Q.c[k] = ball_sub(Q.c[k], ball_mul(P.c[k], Ball::of_real_rat(root, p), p), p);
                }
                P = Q;
                deg++;
            }
        }
        auto roots = isolate_roots(P, p);
        long sum = 0;
        for (auto& [b, m] : roots) sum += m;
        CHECK(sum == deg);
    }
}

TEST_CASE("eigen data") {
    Prec p = 128;
    SECTION("diagonal") {
        testoracle::RatMat M = {{1, 0}, {0, 2}};
        auto ed = eigen_data(of_rat_matrix(M, p), p);
        REQUIRE(ed.size() == 2);
        CHECK(ed[0].multiplicity == 1);
        CHECK(ed[1].multiplicity == 1);
        CHECK(ed[0].eigenvectors.size() == 1);
        CHECK(ed[1].eigenvectors.size() == 1);
    }
    SECTION("jordan block") {
        testoracle::RatMat M = {{1, 1}, {0, 1}};
        auto ed = eigen_data(of_rat_matrix(M, p), p);
        REQUIRE(ed.size() == 1);
        CHECK(ed[0].multiplicity == 2);
        CHECK(contains_point_rat(ed[0].value, Rat(1), Rat(0)));
        CHECK(ed[0].eigenvectors.size() == 1);
        CHECK(ed[0].generalized.size() == 2);
    }
    SECTION("swap matrix") {
        testoracle::RatMat M = {{0, 1}, {1, 0}};
        auto ed = eigen_data(of_rat_matrix(M, p), p);
        REQUIRE(ed.size() == 2);
        CHECK(contains_point_rat(ed[0].value, Rat(-1), Rat(0)));
        CHECK(contains_point_rat(ed[1].value, Rat(1), Rat(0)));
    }
}

TEST_CASE("transcendental enclosures") {
    Prec p = 128;
    Ball rot = ball_e2pii_rat(Rat(1, 2), p);
    CHECK(contains_point_rat(rot, Rat(-1), Rat(0)));
    Ball quarter = ball_e2pii_rat(Rat(1, 4), p);
    CHECK(contains_point_rat(quarter, Rat(0), Rat(1)));
    // exp(0) = 1
    CHECK(contains_point_rat(ball_exp(Ball::zero(p), p), Rat(1), Rat(0)));
}

TEST_CASE("precision monotonicity of echelon rank") {
    // halving radii and doubling precision never decreases certified rank
    Rng rng(13);
    for (int iter = 0; iter < 20; iter++) {
        testoracle::RatMat M(3, std::vector<Rat>(3));
        for (auto& row : M)
            for (auto& x : row) x = rand_rat(rng, 5, 4);
        long prev = -1;
        for (long k : {-30L, -60L, -120L}) {
            Prec p = -2 * k;
            BallMatrix B = mat_widen(of_rat_matrix(M, p), Mag::two_pow(k));
            long rk = echelon(B, p).rank;
            CHECK(rk >= prev);
            prev = rk;
        }
    }
}
