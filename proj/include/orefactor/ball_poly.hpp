#ifndef OREFACTOR_BALL_POLY_HPP
#define OREFACTOR_BALL_POLY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "orefactor/ball_linalg.hpp"

namespace orefactor {

// Dense polynomial with Ball coefficients, ascending degree. A "monic"
// BallPoly has exact leading coefficient 1.
struct BallPoly {
    std::vector<Ball> c;

    long degree() const { return static_cast<long>(c.size()) - 1; }

    static BallPoly zero() { return BallPoly{}; }
};

inline Ball bp_eval(const BallPoly& P, const Ball& z, Prec p) {
    Ball acc = Ball::zero(p);
    for (long i = P.degree(); i >= 0; i--) acc = ball_add(ball_mul(acc, z, p), P.c[static_cast<size_t>(i)], p);
    return acc;
}

inline BallPoly bp_derivative(const BallPoly& P, Prec p) {
    BallPoly D;
    for (long i = 1; i <= P.degree(); i++) D.c.push_back(ball_mul_long(P.c[static_cast<size_t>(i)], i, p));
    return D;
}

// Taylor shift: returns Q with Q(y) = P(c + y), computed by synthetic
// division so the result encloses the shift of every member polynomial.
inline BallPoly bp_taylor_shift(const BallPoly& P, const Ball& c, Prec p) {
    BallPoly Q = P;
    long n = Q.degree();
    for (long i = 0; i < n; i++)
        for (long j = n - 1; j >= i; j--)
            Q.c[static_cast<size_t>(j)] = ball_add(Q.c[static_cast<size_t>(j)], ball_mul(c, Q.c[static_cast<size_t>(j + 1)], p), p);
    return Q;
}

// ----- plain complex centers (heuristic root approximation stage) -----

namespace detail {

struct C2 {
    Real re, im;
    explicit C2(Prec p) : re(p), im(p) {}
};

inline C2 c2_of(const Ball& b, Prec p) {
    C2 z(p);
    mpfr_set(z.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_set(z.im.p(), b.im.p(), MPFR_RNDN);
    return z;
}
inline C2 c2_add(const C2& a, const C2& b, Prec p) {
    C2 r(p);
    mpfr_add(r.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_add(r.im.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    return r;
}
inline C2 c2_sub(const C2& a, const C2& b, Prec p) {
    C2 r(p);
    mpfr_sub(r.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_sub(r.im.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    return r;
}
inline C2 c2_mul(const C2& a, const C2& b, Prec p) {
    C2 r(p);
    Real t1(p), t2(p);
    mpfr_mul(t1.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_mul(t2.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    mpfr_sub(r.re.p(), t1.p(), t2.p(), MPFR_RNDN);
    mpfr_mul(t1.p(), a.re.p(), b.im.p(), MPFR_RNDN);
    mpfr_mul(t2.p(), a.im.p(), b.re.p(), MPFR_RNDN);
    mpfr_add(r.im.p(), t1.p(), t2.p(), MPFR_RNDN);
    return r;
}
inline C2 c2_div(const C2& a, const C2& b, Prec p) {
    C2 r(p);
    Real d(p), t1(p), t2(p);
    mpfr_sqr(d.p(), b.re.p(), MPFR_RNDN);
    mpfr_sqr(t1.p(), b.im.p(), MPFR_RNDN);
    mpfr_add(d.p(), d.p(), t1.p(), MPFR_RNDN);
    mpfr_mul(t1.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_mul(t2.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    mpfr_add(t1.p(), t1.p(), t2.p(), MPFR_RNDN);
    mpfr_div(r.re.p(), t1.p(), d.p(), MPFR_RNDN);
    mpfr_mul(t1.p(), a.im.p(), b.re.p(), MPFR_RNDN);
    mpfr_mul(t2.p(), a.re.p(), b.im.p(), MPFR_RNDN);
    mpfr_sub(t1.p(), t1.p(), t2.p(), MPFR_RNDN);
    mpfr_div(r.im.p(), t1.p(), d.p(), MPFR_RNDN);
    return r;
}
inline Mag c2_abs(const C2& a) { return hypot_ub(a.re, a.im); }
inline bool c2_tiny(const C2& b) { return b.re.is_zero() && b.im.is_zero(); }

// Aberth-Ehrlich on the center polynomial; accuracy is heuristic, the
// certification happens in pellet_count below.
inline std::vector<C2> aberth_roots(const std::vector<C2>& coeff, Prec q) {
    long n = static_cast<long>(coeff.size()) - 1;
    std::vector<C2> z;
    // Cauchy-style radius
    Mag mmax;
    for (long i = 0; i < n; i++) mmax = Mag::max(mmax, c2_abs(coeff[static_cast<size_t>(i)]));
    Mag lead = c2_abs(coeff[static_cast<size_t>(n)]);
    double r0 = 1.0;
    if (!lead.is_zero()) {
        double ratio = mmax.to_double() / lead.to_double();
        if (ratio > 0 && ratio < 1e300) r0 = 1.0 + ratio;
    }
    for (long k = 0; k < n; k++) {
        C2 w(q);
        double ang = 6.283185307179586 * (static_cast<double>(k) + 0.25) / static_cast<double>(n) + 0.7;
        mpfr_set_d(w.re.p(), r0 * std::cos(ang), MPFR_RNDN);
        mpfr_set_d(w.im.p(), r0 * std::sin(ang), MPFR_RNDN);
        z.push_back(std::move(w));
    }
    auto horner2 = [&](const C2& x, C2& val, C2& der) {
        val = c2_of(Ball::zero(q), q);
        der = c2_of(Ball::zero(q), q);
        for (long i = n; i >= 0; i--) {
            der = c2_add(c2_mul(der, x, q), val, q);
            val = c2_add(c2_mul(val, x, q), coeff[static_cast<size_t>(i)], q);
        }
    };
    long iters = 100 + 2 * n + q / 8;
    for (long it = 0; it < iters; it++) {
        bool done = true;
        for (long k = 0; k < n; k++) {
            C2 val(q), der(q);
            horner2(z[static_cast<size_t>(k)], val, der);
            if (c2_tiny(val)) continue;
            if (c2_tiny(der)) { // nudge off a critical point
                mpfr_nextabove(z[static_cast<size_t>(k)].re.p());
                done = false;
                continue;
            }
            C2 newton = c2_div(val, der, q);
            C2 s(q);
            for (long j = 0; j < n; j++) {
                if (j == k) continue;
                C2 d = c2_sub(z[static_cast<size_t>(k)], z[static_cast<size_t>(j)], q);
                if (c2_tiny(d)) mpfr_nextabove(d.re.p());
                C2 one(q);
                mpfr_set_ui(one.re.p(), 1, MPFR_RNDN);
                s = c2_add(s, c2_div(one, d, q), q);
            }
            C2 denom(q);
            mpfr_set_ui(denom.re.p(), 1, MPFR_RNDN);
            denom = c2_sub(denom, c2_mul(newton, s, q), q);
            C2 step = c2_tiny(denom) ? newton : c2_div(newton, denom, q);
            z[static_cast<size_t>(k)] = c2_sub(z[static_cast<size_t>(k)], step, q);
            Mag sz = c2_abs(step);
            Mag scale = c2_abs(z[static_cast<size_t>(k)]) + Mag::two_pow(0);
            if (!(sz <= scale.mul_2exp(-(q * 3 / 4)))) done = false;
        }
        if (done) break;
    }
    return z;
}

} // namespace detail

// Rouché/Pellet count: returns true when every member polynomial has
// exactly m roots in the open disk |y - c| < rho. rho is taken as an exact
// dyadic from the Mag.
inline bool pellet_count(const BallPoly& P, const Ball& center, const Mag& rho, long m, Prec p) {
    long n = P.degree();
    if (m < 0 || m > n) return false;
    Ball c = center;
    c.rad = Mag::zero();
    BallPoly Q = bp_taylor_shift(P, c, p);
    // left: lower bound of |q_m| * rho^m, right: sum of upper bounds
    Real lhs(64);
    Real lbm = abs_lb(Q.c[static_cast<size_t>(m)]);
    if (lbm.sign() <= 0) return false;
    Real rpow(64);
    mpfr_pow_ui(rpow.p(), rho.p(), static_cast<unsigned long>(m), MPFR_RNDD);
    mpfr_mul(lhs.p(), lbm.p(), rpow.p(), MPFR_RNDD);
    Mag rhs;
    for (long k = 0; k <= n; k++) {
        if (k == m) continue;
        rhs += abs_ub(Q.c[static_cast<size_t>(k)]) * rho.pow_ui(static_cast<unsigned long>(k));
    }
    return lhs.sign() > 0 && mpfr_cmp(rhs.p(), lhs.p()) < 0;
}

// ----- certified root isolation -----
//
// Returns disjoint enclosures with multiplicities summing to the degree;
// each enclosure contains exactly its count of roots of every member
// polynomial. Throws Failure when clusters cannot be certified at this
// precision.
inline std::vector<std::pair<Ball, long>> isolate_roots(const BallPoly& Pin, Prec p) {
    long n = Pin.degree();
    if (n < 0) throw Failure("isolate_roots: zero polynomial");
    if (n == 0) return {};
    if (!certified_nonzero(Pin.c[static_cast<size_t>(n)])) throw Failure("isolate_roots: leading coefficient not certified nonzero");
    Prec q = 2 * p + 32;
    BallPoly P = Pin;
    // normalize to certified-monic (containment preserved member-wise)
    {
        Ball inv_lead = ball_inv(P.c[static_cast<size_t>(n)], q);
        for (long i = 0; i < n; i++) P.c[static_cast<size_t>(i)] = ball_mul(P.c[static_cast<size_t>(i)], inv_lead, q);
        P.c[static_cast<size_t>(n)] = Ball::one(q);
    }
    std::vector<detail::C2> centers;
    for (const Ball& b : P.c) centers.push_back(detail::c2_of(b, q));
    std::vector<detail::C2> roots = detail::aberth_roots(centers, q);

    struct Cluster {
        std::vector<long> members;
        Ball centroid;
        Mag rho;
        bool certified = false;
    };
    auto centroid_of = [&](const std::vector<long>& mem) {
        Ball c(q);
        for (long k : mem) {
            mpfr_add(c.re.p(), c.re.p(), roots[static_cast<size_t>(k)].re.p(), MPFR_RNDN);
            mpfr_add(c.im.p(), c.im.p(), roots[static_cast<size_t>(k)].im.p(), MPFR_RNDN);
        }
        mpfr_div_ui(c.re.p(), c.re.p(), static_cast<unsigned long>(mem.size()), MPFR_RNDN);
        mpfr_div_ui(c.im.p(), c.im.p(), static_cast<unsigned long>(mem.size()), MPFR_RNDN);
        return c;
    };
    auto spread_of = [&](const std::vector<long>& mem, const Ball& c) {
        Mag s;
        for (long k : mem) {
            Real dr(64), di(64);
            mpfr_sub(dr.p(), roots[static_cast<size_t>(k)].re.p(), c.re.p(), MPFR_RNDN);
            mpfr_sub(di.p(), roots[static_cast<size_t>(k)].im.p(), c.im.p(), MPFR_RNDN);
            s = Mag::max(s, hypot_ub(dr, di));
        }
        return s;
    };

    std::vector<Cluster> clusters;
    for (long k = 0; k < n; k++) clusters.push_back(Cluster{{k}, Ball(q), Mag(), false});

    const int kMaxRounds = 4 * static_cast<int>(n) + 8;
    for (int round = 0; round < kMaxRounds; round++) {
        for (Cluster& cl : clusters) {
            cl.centroid = centroid_of(cl.members);
            cl.certified = false;
        }
        bool merged = false;
        // certify each cluster by growing a Pellet disk
        for (size_t i = 0; i < clusters.size() && !merged; i++) {
            Cluster& cl = clusters[i];
            Mag base = spread_of(cl.members, cl.centroid);
            Mag scale = abs_ub(cl.centroid) + Mag::two_pow(0);
            Mag rho = Mag::max(base.mul_2exp(1), scale.mul_2exp(-q + 8));
            bool ok = false;
            const int max_grow = static_cast<int>(q) + 96;
            for (int grow = 0; grow < max_grow; grow++) {
                // would this disk collide with another cluster's points?
                bool collide = false;
                size_t collide_with = 0;
                for (size_t j = 0; j < clusters.size(); j++) {
                    if (j == i) continue;
                    for (long k : clusters[j].members) {
                        Real dr(64), di(64);
                        mpfr_sub(dr.p(), roots[static_cast<size_t>(k)].re.p(), cl.centroid.re.p(), MPFR_RNDN);
                        mpfr_sub(di.p(), roots[static_cast<size_t>(k)].im.p(), cl.centroid.im.p(), MPFR_RNDN);
                        Mag d = hypot_ub(dr, di);
                        if (d <= rho.mul_2exp(2)) {
                            collide = true;
                            collide_with = j;
                            break;
                        }
                    }
                    if (collide) break;
                }
                if (collide) {
                    // merge and restart the round
                    Cluster& other = clusters[collide_with];
                    cl.members.insert(cl.members.end(), other.members.begin(), other.members.end());
                    clusters.erase(clusters.begin() + static_cast<long>(collide_with));
                    merged = true;
                    break;
                }
                if (pellet_count(P, cl.centroid, rho, static_cast<long>(cl.members.size()), q)) {
                    cl.rho = rho;
                    cl.certified = true;
                    ok = true;
                    break;
                }
                rho = rho.mul_2exp(1);
            }
            if (merged) break;
            if (!ok) {
                // could not certify: merge with nearest other cluster if any
                if (clusters.size() == 1) throw Failure("isolate_roots: cannot certify root cluster");
                size_t nearest = (i == 0) ? 1 : 0;
                Mag best = Mag::inf();
                for (size_t j = 0; j < clusters.size(); j++) {
                    if (j == i) continue;
                    Ball cj = centroid_of(clusters[j].members);
                    Real dr(64), di(64);
                    mpfr_sub(dr.p(), cj.re.p(), cl.centroid.re.p(), MPFR_RNDN);
                    mpfr_sub(di.p(), cj.im.p(), cl.centroid.im.p(), MPFR_RNDN);
                    Mag d = hypot_ub(dr, di);
                    if (d < best) {
                        best = d;
                        nearest = j;
                    }
                }
                Cluster& other = clusters[nearest];
                cl.members.insert(cl.members.end(), other.members.begin(), other.members.end());
                clusters.erase(clusters.begin() + static_cast<long>(nearest));
                merged = true;
                break;
            }
        }
        if (merged) continue;
        // all certified: check pairwise disjointness of the enclosing disks
        bool disjoint = true;
        size_t bad_i = 0, bad_j = 0;
        for (size_t i = 0; i < clusters.size() && disjoint; i++)
            for (size_t j = i + 1; j < clusters.size() && disjoint; j++) {
                Mag s = clusters[i].rho + clusters[j].rho;
                if (cmp_center_dist2(clusters[i].centroid, clusters[j].centroid, s) <= 0) {
                    disjoint = false;
                    bad_i = i;
                    bad_j = j;
                }
            }
        if (!disjoint) {
            clusters[bad_i].members.insert(clusters[bad_i].members.end(), clusters[bad_j].members.begin(),
                                           clusters[bad_j].members.end());
            clusters.erase(clusters.begin() + static_cast<long>(bad_j));
            continue;
        }
        std::vector<std::pair<Ball, long>> out;
        for (Cluster& cl : clusters) {
            Ball enc = cl.centroid;
            enc.rad = cl.rho;
            out.emplace_back(std::move(enc), static_cast<long>(cl.members.size()));
        }
        // deterministic order: by center (re, then im)
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            int c = mpfr_cmp(a.first.re.p(), b.first.re.p());
            if (c != 0) return c < 0;
            return mpfr_cmp(a.first.im.p(), b.first.im.p()) < 0;
        });
        return out;
    }
    throw Failure("isolate_roots: cluster certification did not stabilize");
}

// ----- characteristic polynomial and eigen data -----

inline Ball ball_div_ui(const Ball& a, unsigned long k, Prec p) {
    Ball r(p);
    int t1 = mpfr_div_ui(r.re.p(), a.re.p(), k, MPFR_RNDN);
    int t2 = mpfr_div_ui(r.im.p(), a.im.p(), k, MPFR_RNDN);
    Mag rk;
    mpfr_div_ui(rk.p(), a.rad.p(), k, MPFR_RNDU);
    r.rad = rk + round_err(r.re, t1, p) + round_err(r.im, t2, p);
    return r;
}

// Monic characteristic polynomial via the trace recurrence
// (Faddeev-LeVerrier). Divisions are by integers only, so this never
// raises Failure and content containment is preserved.
inline BallPoly charpoly(const BallMatrix& A, Prec p) {
    long r = A.m;
    BallPoly cp;
    cp.c.assign(static_cast<size_t>(r + 1), Ball::zero(p));
    cp.c[static_cast<size_t>(r)] = Ball::one(p);
    BallMatrix Mk = A;
    Ball ck = ball_neg(mat_trace(A, p));
    if (r >= 1) cp.c[static_cast<size_t>(r - 1)] = ck;
    for (long k = 2; k <= r; k++) {
        BallMatrix t = Mk;
        for (long i = 0; i < r; i++) t.at(i, i) = ball_add(t.at(i, i), ck, p);
        Mk = mat_mul(A, t, p);
        ck = ball_div_ui(ball_neg(mat_trace(Mk, p)), static_cast<unsigned long>(k), p);
        cp.c[static_cast<size_t>(r - k)] = ck;
    }
    return cp;
}

struct EigenData {
    Ball value;
    long multiplicity = 0;
    std::vector<BallVec> eigenvectors;         // kernel(M - lambda I)
    std::vector<BallVec> generalized;          // kernel((M - lambda I)^r)
};

inline std::vector<EigenData> eigen_data(const BallMatrix& M, Prec p) {
    long r = M.m;
    BallPoly cp = charpoly(M, p);
    auto roots = isolate_roots(cp, p);
    std::vector<EigenData> out;
    for (auto& [lam, mult] : roots) {
        EigenData ed;
        ed.value = lam;
        ed.multiplicity = mult;
        BallMatrix B(r, r, p);
        for (long i = 0; i < r; i++)
            for (long j = 0; j < r; j++)
                B.at(i, j) = (i == j) ? ball_sub(M.at(i, j), lam, p) : M.at(i, j);
        ed.eigenvectors = kernel(B, p);
        BallMatrix Bp = B;
        for (long k = 1; k < mult; k++) Bp = mat_mul(Bp, B, p);
        ed.generalized = kernel(Bp, p);
        out.push_back(std::move(ed));
    }
    return out;
}

} // namespace orefactor

#endif
