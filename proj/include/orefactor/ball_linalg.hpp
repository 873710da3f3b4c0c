#ifndef OREFACTOR_BALL_LINALG_HPP
#define OREFACTOR_BALL_LINALG_HPP

#include <utility>
#include <vector>

#include "orefactor/ball.hpp"

namespace orefactor {

using BallVec = std::vector<Ball>;

struct BallMatrix {
    long m = 0, n = 0;
    std::vector<Ball> e; // row-major, m*n entries

    BallMatrix() = default;
    BallMatrix(long rows, long cols, Prec p) : m(rows), n(cols), e(static_cast<size_t>(rows * cols), Ball(p)) {}

    Ball& at(long i, long j) { return e[static_cast<size_t>(i * n + j)]; }
    const Ball& at(long i, long j) const { return e[static_cast<size_t>(i * n + j)]; }

    static BallMatrix identity(long r, Prec p) {
        BallMatrix I(r, r, p);
        for (long i = 0; i < r; i++) I.at(i, i) = Ball::one(p);
        return I;
    }
};

inline BallMatrix mat_add(const BallMatrix& A, const BallMatrix& B, Prec p) {
    BallMatrix C(A.m, A.n, p);
    for (size_t k = 0; k < C.e.size(); k++) C.e[k] = ball_add(A.e[k], B.e[k], p);
    return C;
}

inline BallMatrix mat_sub(const BallMatrix& A, const BallMatrix& B, Prec p) {
    BallMatrix C(A.m, A.n, p);
    for (size_t k = 0; k < C.e.size(); k++) C.e[k] = ball_sub(A.e[k], B.e[k], p);
    return C;
}

inline BallMatrix mat_mul(const BallMatrix& A, const BallMatrix& B, Prec p) {
    BallMatrix C(A.m, B.n, p);
    for (long i = 0; i < A.m; i++)
        for (long j = 0; j < B.n; j++) {
            Ball s = Ball::zero(p);
            for (long k = 0; k < A.n; k++) s = ball_add(s, ball_mul(A.at(i, k), B.at(k, j), p), p);
            C.at(i, j) = s;
        }
    return C;
}

inline BallVec mat_vec(const BallMatrix& A, const BallVec& v, Prec p) {
    BallVec r(static_cast<size_t>(A.m), Ball::zero(p));
    for (long i = 0; i < A.m; i++) {
        Ball s = Ball::zero(p);
        for (long k = 0; k < A.n; k++) s = ball_add(s, ball_mul(A.at(i, k), v[static_cast<size_t>(k)], p), p);
        r[static_cast<size_t>(i)] = s;
    }
    return r;
}

inline BallMatrix mat_transpose(const BallMatrix& A, Prec p) {
    BallMatrix C(A.n, A.m, p);
    for (long i = 0; i < A.m; i++)
        for (long j = 0; j < A.n; j++) C.at(j, i) = A.at(i, j);
    return C;
}

inline BallMatrix mat_scale(const BallMatrix& A, const Ball& c, Prec p) {
    BallMatrix C(A.m, A.n, p);
    for (size_t k = 0; k < C.e.size(); k++) C.e[k] = ball_mul(A.e[k], c, p);
    return C;
}

inline Ball mat_trace(const BallMatrix& A, Prec p) {
    Ball s = Ball::zero(p);
    for (long i = 0; i < A.m; i++) s = ball_add(s, A.at(i, i), p);
    return s;
}

inline Mag mat_max_rad(const BallMatrix& A) {
    Mag r;
    for (const Ball& b : A.e) r = Mag::max(r, b.rad);
    return r;
}

// ----- optimistic row echelon form -----
//
// Row-reduces a ball matrix. Pivot columns of R are exact unit columns;
// entries below/right of the pivot structure are balls containing zero;
// R = T M member-wise with T invertible. A column is skipped when every
// candidate pivot ball contains zero; the certified rank never exceeds the
// rank of any member matrix.

struct EchelonResult {
    BallMatrix R, T;
    long rank = 0;
    std::vector<long> pivots;
};

inline EchelonResult echelon(const BallMatrix& M, Prec p) {
    EchelonResult res;
    res.R = M;
    res.T = BallMatrix::identity(M.m, p);
    BallMatrix& R = res.R;
    BallMatrix& T = res.T;
    long rank = 0;
    for (long col = 0; col < M.n && rank < M.m; col++) {
        // pivot: candidate with the largest certified-nonzero margin
        long best = -1;
        Real best_lb(64);
        for (long i = rank; i < M.m; i++) {
            Real lb = abs_lb(R.at(i, col));
            if (lb.sign() > 0 && (best < 0 || mpfr_cmp(lb.p(), best_lb.p()) > 0)) {
                best = i;
                best_lb = lb;
            }
        }
        if (best < 0) continue; // all candidates contain zero: skip column
        if (best != rank) {
            for (long j = 0; j < M.n; j++) std::swap(R.at(best, j), R.at(rank, j));
            for (long j = 0; j < M.m; j++) std::swap(T.at(best, j), T.at(rank, j));
        }
        Ball inv_piv = ball_inv(R.at(rank, col), p);
        for (long j = 0; j < M.n; j++) R.at(rank, j) = ball_mul(R.at(rank, j), inv_piv, p);
        for (long j = 0; j < M.m; j++) T.at(rank, j) = ball_mul(T.at(rank, j), inv_piv, p);
        R.at(rank, col) = Ball::one(p); // exact by construction for every member
        for (long i = 0; i < M.m; i++) {
            if (i == rank) continue;
            Ball f = R.at(i, col);
            if (f.is_exact() && f.re.is_zero() && f.im.is_zero()) continue;
            for (long j = 0; j < M.n; j++) R.at(i, j) = ball_sub(R.at(i, j), ball_mul(f, R.at(rank, j), p), p);
            for (long j = 0; j < M.m; j++) T.at(i, j) = ball_sub(T.at(i, j), ball_mul(f, T.at(rank, j), p), p);
            R.at(i, col) = Ball::zero(p); // exact elimination for every member
        }
        res.pivots.push_back(col);
        rank++;
    }
    res.rank = rank;
    return res;
}

// Kernel enclosure per the optimistic-kernel guarantee: any member selection
// of the returned vectors is linearly independent, and for every member M
// the kernel of M is contained in the span of some member selection.
inline std::vector<BallVec> kernel(const BallMatrix& M, Prec p) {
    EchelonResult ech = echelon(M, p);
    std::vector<bool> is_pivot(static_cast<size_t>(M.n), false);
    for (long c : ech.pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<BallVec> out;
    for (long j = 0; j < M.n; j++) {
        if (is_pivot[static_cast<size_t>(j)]) continue;
        BallVec v(static_cast<size_t>(M.n), Ball::zero(p));
        v[static_cast<size_t>(j)] = Ball::one(p);
        for (long i = 0; i < ech.rank; i++)
            v[static_cast<size_t>(ech.pivots[static_cast<size_t>(i)])] = ball_neg(ech.R.at(i, j));
        out.push_back(std::move(v));
    }
    return out;
}

// Enclosure of the inverse. R = T M with R == I exactly when the rank is
// full, so T encloses the member inverses. Fails when full rank cannot be
// certified at this precision.
inline BallMatrix mat_inv(const BallMatrix& A, Prec p) {
    EchelonResult ech = echelon(A, p);
    if (ech.rank < A.n || A.m != A.n) throw Failure("mat_inv: full rank not certified");
    return ech.T;
}

// ----- spin-up (orbit saturation) -----
//
// Reduced-echelon basis U with span(U) contained in C[A]v member-wise and
// equality at high precision. Applies each generator to the current basis
// and re-reduces until the certified dimension stabilizes.
inline std::vector<BallVec> spin_up(const std::vector<BallMatrix>& mats, const BallVec& v, Prec p) {
    long n = static_cast<long>(v.size());
    auto reduce = [&](const std::vector<BallVec>& rows) {
        BallMatrix S(static_cast<long>(rows.size()), n, p);
        for (long i = 0; i < S.m; i++)
            for (long j = 0; j < n; j++) S.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        EchelonResult ech = echelon(S, p);
        std::vector<BallVec> basis;
        for (long i = 0; i < ech.rank; i++) {
            BallVec row(static_cast<size_t>(n));
            for (long j = 0; j < n; j++) row[static_cast<size_t>(j)] = ech.R.at(i, j);
            basis.push_back(std::move(row));
        }
        return basis;
    };
    std::vector<BallVec> basis = reduce({v});
    while (!basis.empty() && static_cast<long>(basis.size()) < n) {
        std::vector<BallVec> rows = basis;
        for (const BallMatrix& A : mats)
            for (const BallVec& b : basis) rows.push_back(mat_vec(A, b, p));
        std::vector<BallVec> next = reduce(rows);
        if (next.size() <= basis.size()) break; // dimension stabilized
        basis = std::move(next);
    }
    return basis;
}

// Stacks a list of vectors as matrix rows.
inline BallMatrix rows_matrix(const std::vector<BallVec>& rows, long n, Prec p) {
    BallMatrix S(static_cast<long>(rows.size()), n, p);
    for (long i = 0; i < S.m; i++)
        for (long j = 0; j < n; j++) S.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return S;
}

// Widens every entry by r (test helper for containment properties).
inline BallMatrix mat_widen(const BallMatrix& A, const Mag& r) {
    BallMatrix C = A;
    for (Ball& b : C.e) b.rad += r;
    return C;
}

} // namespace orefactor

#endif
