// Test-only exact rational linear algebra, used as an independent oracle for
// the optimistic (ball) routines. Deliberately naive: plain fraction
// Gauss-Jordan.
#ifndef OREFACTOR_TESTS_EXACT_LINALG_HPP
#define OREFACTOR_TESTS_EXACT_LINALG_HPP

#include <gmpxx.h>

#include <vector>

namespace testoracle {

using Rat = mpq_class;
using RatMat = std::vector<std::vector<Rat>>;

struct RrefResult {
    RatMat R;
    std::vector<long> pivots;
    long rank = 0;
};

inline RrefResult rref(RatMat M) {
    long m = static_cast<long>(M.size());
    long n = m ? static_cast<long>(M[0].size()) : 0;
    RrefResult res;
    long rank = 0;
    for (long col = 0; col < n && rank < m; col++) {
        long piv = -1;
        for (long i = rank; i < m; i++)
            if (M[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[piv], M[rank]);
        Rat inv = 1 / M[rank][col];
        for (long j = 0; j < n; j++) M[rank][j] *= inv;
        for (long i = 0; i < m; i++) {
            if (i == rank || M[i][col] == 0) continue;
            Rat f = M[i][col];
            for (long j = 0; j < n; j++) M[i][j] -= f * M[rank][j];
        }
        res.pivots.push_back(col);
        rank++;
    }
    res.R = std::move(M);
    res.rank = rank;
    return res;
}

inline std::vector<std::vector<Rat>> kernel_basis(const RatMat& M) {
    RrefResult r = rref(M);
    long n = M.empty() ? 0 : static_cast<long>(M[0].size());
    std::vector<bool> is_p(static_cast<size_t>(n), false);
    for (long c : r.pivots) is_p[static_cast<size_t>(c)] = true;
    std::vector<std::vector<Rat>> out;
    for (long j = 0; j < n; j++) {
        if (is_p[static_cast<size_t>(j)]) continue;
        std::vector<Rat> v(static_cast<size_t>(n), Rat(0));
        v[static_cast<size_t>(j)] = 1;
        for (long i = 0; i < r.rank; i++) v[static_cast<size_t>(r.pivots[static_cast<size_t>(i)])] = -r.R[static_cast<size_t>(i)][static_cast<size_t>(j)];
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace testoracle

#endif
