#ifndef OREFACTOR_LATTICE_HPP
#define OREFACTOR_LATTICE_HPP

#include <vector>

#include "orefactor/rat.hpp"

namespace orefactor {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

// Textbook LLL with exact rational Gram-Schmidt, Lovasz delta = 3/4.
// Operates on row vectors; the returned rows span the same lattice.
// Dimensions stay small here (degree + 3), so the exact arithmetic is fine.
inline IntMat lll_reduce(IntMat B) {
    const long m = static_cast<long>(B.size());
    if (m == 0) return B;
    const long n = static_cast<long>(B[0].size());
    const Rat delta(3, 4);

    std::vector<std::vector<Rat>> mu(static_cast<size_t>(m), std::vector<Rat>(static_cast<size_t>(m), Rat(0)));
    std::vector<Rat> Bn(static_cast<size_t>(m), Rat(0)); // |b*_i|^2

    auto dot_zz = [&](const IntVec& a, const IntVec& b) {
        Int s(0);
        for (long j = 0; j < n; j++) s += a[static_cast<size_t>(j)] * b[static_cast<size_t>(j)];
        return s;
    };

    auto gram_schmidt = [&]() {
        // b*_i = b_i - sum_{j<i} mu_ij b*_j ; maintained via rational dots
        std::vector<std::vector<Rat>> bs(static_cast<size_t>(m), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
        for (long i = 0; i < m; i++) {
            for (long j = 0; j < n; j++) bs[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(B[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            for (long j = 0; j < i; j++) {
                Rat num(0);
                for (long l = 0; l < n; l++) num += Rat(B[static_cast<size_t>(i)][static_cast<size_t>(l)]) * bs[static_cast<size_t>(j)][static_cast<size_t>(l)];
                Rat m_ij = Bn[static_cast<size_t>(j)] == 0 ? Rat(0) : num / Bn[static_cast<size_t>(j)];
                mu[static_cast<size_t>(i)][static_cast<size_t>(j)] = m_ij;
                for (long l = 0; l < n; l++) bs[static_cast<size_t>(i)][static_cast<size_t>(l)] -= m_ij * bs[static_cast<size_t>(j)][static_cast<size_t>(l)];
            }
            Rat nn(0);
            for (long l = 0; l < n; l++) nn += bs[static_cast<size_t>(i)][static_cast<size_t>(l)] * bs[static_cast<size_t>(i)][static_cast<size_t>(l)];
            Bn[static_cast<size_t>(i)] = nn;
        }
    };

    auto round_rat = [](const Rat& q) {
        // nearest integer, ties toward +inf
        Rat t = q + Rat(1, 2);
        Int fl;
        mpz_fdiv_q(fl.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
        return fl;
    };

    gram_schmidt();
    long k = 1;
    long guard = 1L << 20;
    while (k < m && guard-- > 0) {
        for (long j = k - 1; j >= 0; j--) {
            Rat m_kj = mu[static_cast<size_t>(k)][static_cast<size_t>(j)];
            if (abs(m_kj) > Rat(1, 2)) {
                Int r = round_rat(m_kj);
                for (long l = 0; l < n; l++) B[static_cast<size_t>(k)][static_cast<size_t>(l)] -= r * B[static_cast<size_t>(j)][static_cast<size_t>(l)];
                Rat rr(r);
                for (long l = 0; l < j; l++) mu[static_cast<size_t>(k)][static_cast<size_t>(l)] -= rr * mu[static_cast<size_t>(j)][static_cast<size_t>(l)];
                mu[static_cast<size_t>(k)][static_cast<size_t>(j)] -= rr;
            }
        }
        Rat lhs = Bn[static_cast<size_t>(k)];
        Rat rhs = (delta - mu[static_cast<size_t>(k)][static_cast<size_t>(k - 1)] * mu[static_cast<size_t>(k)][static_cast<size_t>(k - 1)]) * Bn[static_cast<size_t>(k - 1)];
        if (lhs >= rhs) {
            k++;
        } else {
            std::swap(B[static_cast<size_t>(k)], B[static_cast<size_t>(k - 1)]);
            gram_schmidt();
            k = std::max<long>(k - 1, 1);
        }
    }
    (void)dot_zz;
    return B;
}

} // namespace orefactor

#endif
