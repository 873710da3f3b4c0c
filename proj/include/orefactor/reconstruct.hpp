#ifndef OREFACTOR_RECONSTRUCT_HPP
#define OREFACTOR_RECONSTRUCT_HPP

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "orefactor/lattice.hpp"
#include "orefactor/numfield.hpp"

namespace orefactor {

// Exact algebraic number: monic defining polynomial plus an isolating ball.
struct AlgebraicNumber {
    PolyQ min_poly; // monic; irreducible for honest minimal polynomials
    Ball isolator;

    bool is_rational() const { return min_poly.degree() == 1; }
    Rat rational_value() const { return -min_poly.c[0]; }
};

namespace detail {

inline Int round_scaled(const Real& x, long cbits) {
    Real t(x.prec() + 8);
    mpfr_mul_2si(t.p(), x.p(), cbits, MPFR_RNDN);
    Int z;
    mpfr_get_z(z.get_mpz_t(), t.p(), MPFR_RNDN);
    return z;
}

// Largest s with rad <= 2^-s (effective accuracy in bits); caps at the
// center precision for exact balls.
inline long accuracy_bits(const Ball& z) {
    if (z.rad.is_zero()) return z.prec();
    long e = static_cast<long>(mpfr_get_exp(z.rad.p()));
    return -e;
}

} // namespace detail

// Attempts to identify an exact algebraic number of degree <= max_degree and
// coefficient height <= 2^height_bits inside the ball z, via LLL on the
// integer-relation lattice of (1, z, ..., z^d). The result is only a
// candidate: callers validate it independently (here: a containment check;
// in the factoring pipeline: exact division).
inline std::optional<AlgebraicNumber> reconstruct_algebraic(const Ball& z, long max_degree, long height_bits) {
    if (max_degree < 1) return std::nullopt;
    long acc = detail::accuracy_bits(z);
    if (acc < 40) return std::nullopt;
    Prec q = acc + 64;

    for (long d = 1; d <= max_degree; d++) {
        // powers of z
        std::vector<Ball> pw(static_cast<size_t>(d + 1));
        pw[0] = Ball::one(q);
        for (long i = 1; i <= d; i++) pw[static_cast<size_t>(i)] = ball_mul(pw[static_cast<size_t>(i - 1)], z, q);
        long cbits = acc;
        for (long i = 1; i <= d; i++) cbits = std::min(cbits, detail::accuracy_bits(pw[static_cast<size_t>(i)]));
        cbits -= 16;
        if (cbits < 32) continue;

        IntMat B;
        for (long i = 0; i <= d; i++) {
            IntVec row(static_cast<size_t>(d + 3), Int(0));
            row[static_cast<size_t>(i)] = 1;
            row[static_cast<size_t>(d + 1)] = detail::round_scaled(pw[static_cast<size_t>(i)].re, cbits);
            row[static_cast<size_t>(d + 2)] = detail::round_scaled(pw[static_cast<size_t>(i)].im, cbits);
            B.push_back(std::move(row));
        }
        IntMat R = lll_reduce(std::move(B));

        for (const IntVec& row : R) {
            PolyQ A;
            bool nonzero = false;
            Int height(0);
            for (long i = 0; i <= d; i++) {
                Int a = row[static_cast<size_t>(i)];
                if (a != 0) nonzero = true;
                height = std::max(height, Int(abs(a)));
                A.c.push_back(Rat(a));
            }
            A.normalize();
            if (!nonzero || A.degree() < 1) continue;
            if (mpz_sizeinbase(height.get_mpz_t(), 2) > static_cast<size_t>(height_bits)) continue;
            // necessary condition: the enclosure of A(z) must contain zero
            Ball val = Ball::zero(q);
            for (long i = A.degree(); i >= 0; i--)
                val = ball_add(ball_mul(val, z, q), Ball::of_real_rat(A.c[static_cast<size_t>(i)], q), q);
            if (!contains_zero(val)) continue;
            PolyQ sf = squarefree_part(A);
            if (sf.degree() < 1) continue;
            // locate the unique root compatible with z
            std::vector<std::pair<Ball, long>> roots;
            try {
                roots = isolate_roots(poly_to_ballpoly(sf, q), std::max<Prec>(acc, 64));
            } catch (const Failure&) {
                continue;
            }
            const Ball* hit = nullptr;
            int nhits = 0;
            for (auto& [rb, m] : roots) {
                if (m == 1 && optimistic_eq(rb, z)) {
                    hit = &rb;
                    nhits++;
                }
            }
            if (nhits != 1) continue;
            AlgebraicNumber out;
            out.min_poly = poly_monic(sf);
            out.isolator = *hit;
            if (static_cast<long>(out.min_poly.degree()) > d) continue;
            return out;
        }
    }
    return std::nullopt;
}

struct ReconstructedVector {
    std::shared_ptr<const NumberField> field; // null when all entries rational
    std::vector<NFElem> entries;
};

// Componentwise reconstruction sharing a single number field: rational
// entries are identified first; the first non-rational entry fixes the
// field, and the remaining entries are expressed in it through a relation
// lattice. Returns nullopt if any entry resists.
inline std::optional<ReconstructedVector> reconstruct_vector(const std::vector<Ball>& v, long max_degree,
                                                             long height_bits) {
    ReconstructedVector out;
    out.entries.assign(v.size(), NFElem(0));
    std::vector<size_t> pending;
    for (size_t i = 0; i < v.size(); i++) {
        auto r1 = reconstruct_algebraic(v[i], 1, height_bits);
        if (r1 && r1->is_rational()) {
            out.entries[i] = NFElem(r1->rational_value());
        } else {
            pending.push_back(i);
        }
    }
    std::shared_ptr<const NumberField> F;
    Ball theta(64);
    for (size_t i : pending) {
        if (!F) {
            auto ra = reconstruct_algebraic(v[i], max_degree, height_bits);
            if (!ra) return std::nullopt;
            auto nf = std::make_shared<NumberField>();
            nf->minpoly = ra->min_poly;
            nf->isolator = ra->isolator;
            F = nf;
            long acc = detail::accuracy_bits(v[i]);
            theta = nf_root_ball(*F, acc + 32);
            PolyQ rep;
            rep.c = {Rat(0), Rat(1)};
            out.entries[i] = NFElem(F, rep);
            continue;
        }
        // relation q*z = sum p_i theta^i
        long dF = F->degree();
        long acc = detail::accuracy_bits(v[i]);
        Prec q = acc + 64;
        std::vector<Ball> pw(static_cast<size_t>(dF));
        pw[0] = Ball::one(q);
        for (long k = 1; k < dF; k++) pw[static_cast<size_t>(k)] = ball_mul(pw[static_cast<size_t>(k - 1)], theta, q);
        long cbits = acc;
        for (long k = 0; k < dF; k++) cbits = std::min(cbits, detail::accuracy_bits(pw[static_cast<size_t>(k)]));
        cbits -= 16;
        if (cbits < 32) return std::nullopt;
        IntMat B;
        {
            IntVec row(static_cast<size_t>(dF + 3), Int(0));
            row[0] = 1;
            row[static_cast<size_t>(dF + 1)] = detail::round_scaled(v[i].re, cbits);
            row[static_cast<size_t>(dF + 2)] = detail::round_scaled(v[i].im, cbits);
            B.push_back(std::move(row));
        }
        for (long k = 0; k < dF; k++) {
            IntVec row(static_cast<size_t>(dF + 3), Int(0));
            row[static_cast<size_t>(k + 1)] = 1;
            Real nre(q), nim(q);
            mpfr_neg(nre.p(), pw[static_cast<size_t>(k)].re.p(), MPFR_RNDN);
            mpfr_neg(nim.p(), pw[static_cast<size_t>(k)].im.p(), MPFR_RNDN);
            row[static_cast<size_t>(dF + 1)] = detail::round_scaled(nre, cbits);
            row[static_cast<size_t>(dF + 2)] = detail::round_scaled(nim, cbits);
            B.push_back(std::move(row));
        }
        IntMat R = lll_reduce(std::move(B));
        bool found = false;
        for (const IntVec& row : R) {
            Int qden = row[0];
            if (qden == 0) continue;
            Int height = abs(qden);
            PolyQ rep;
            for (long k = 0; k < dF; k++) {
                rep.c.push_back(Rat(row[static_cast<size_t>(k + 1)], qden));
                height = std::max(height, Int(abs(row[static_cast<size_t>(k + 1)])));
            }
            if (mpz_sizeinbase(height.get_mpz_t(), 2) > static_cast<size_t>(height_bits)) continue;
            for (Rat& c : rep.c) c.canonicalize();
            rep.normalize();
            NFElem cand(F, rep);
            Ball val = nf_eval_ball(cand, theta, q);
            if (!optimistic_eq(val, v[i])) continue;
            out.entries[i] = cand;
            found = true;
            break;
        }
        if (!found) return std::nullopt;
    }
    out.field = F;
    return out;
}

inline Ball algnum_to_ball(const AlgebraicNumber& a, Prec p) {
    if (a.is_rational()) return Ball::of_real_rat(a.rational_value(), p);
    return refine_root(a.min_poly, a.isolator, p + 16);
}

} // namespace orefactor

#endif
