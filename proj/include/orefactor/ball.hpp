#ifndef OREFACTOR_BALL_HPP
#define OREFACTOR_BALL_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "orefactor/real.hpp"

namespace orefactor {

// Complex ball: dyadic center, one shared radius covering |z - center| <= rad.
// Every operation keeps the containment guarantee: z in a, w in b implies
// z*w in op(a, b). Radii converge to zero with the input radii (away from
// division by zero).
struct Ball {
    Real re, im;
    Mag rad;

    Ball() = default;
    explicit Ball(Prec p) : re(p), im(p) {}

    bool is_exact() const { return rad.is_zero(); }
    Prec prec() const { return re.prec(); }

    static Ball zero(Prec p) { return Ball(p); }
    static Ball one(Prec p) {
        Ball b(p);
        mpfr_set_ui(b.re.p(), 1, MPFR_RNDN);
        return b;
    }
    static Ball of_long(long x, Prec p) {
        Ball b(p);
        mpfr_set_si(b.re.p(), x, MPFR_RNDN);
        return b;
    }
    static Ball of_rat(const Rat& re_q, const Rat& im_q, Prec p) {
        Ball b(p);
        int t1 = mpfr_set_q(b.re.p(), re_q.get_mpq_t(), MPFR_RNDN);
        int t2 = mpfr_set_q(b.im.p(), im_q.get_mpq_t(), MPFR_RNDN);
        b.rad = round_err(b.re, t1, p) + round_err(b.im, t2, p);
        return b;
    }
    static Ball of_real_rat(const Rat& q, Prec p) { return of_rat(q, Rat(0), p); }
    static Ball make(Real re, Real im, Mag r) {
        Ball b;
        b.re = std::move(re);
        b.im = std::move(im);
        b.rad = std::move(r);
        return b;
    }
};

// ----- center magnitude helpers -----

inline Mag hypot_ub(const Real& x, const Real& y) {
    Mag m;
    mpfr_hypot(m.p(), x.p(), y.p(), MPFR_RNDU);
    mpfr_abs(m.p(), m.p(), MPFR_RNDU);
    return m;
}

// Lower bound of sqrt(x^2+y^2), returned as a nonnegative Real.
inline Real hypot_lb(const Real& x, const Real& y) {
    Real r(64);
    mpfr_hypot(r.p(), x.p(), y.p(), MPFR_RNDD);
    mpfr_abs(r.p(), r.p(), MPFR_RNDD);
    // one ulp safety against the abs/hypot composition
    mpfr_nextbelow(r.p());
    if (r.sign() < 0) mpfr_set_zero(r.p(), 1);
    return r;
}

inline Mag abs_ub(const Ball& b) { return hypot_ub(b.re, b.im) + b.rad; }

// Rigorous lower bound of inf_{z in b} |z| (zero if the ball contains 0).
inline Real abs_lb(const Ball& b) {
    Real c = hypot_lb(b.re, b.im);
    Real r(64);
    mpfr_sub(r.p(), c.p(), b.rad.p(), MPFR_RNDD);
    if (r.sign() < 0) mpfr_set_zero(r.p(), 1);
    return r;
}

inline bool contains_zero(const Ball& b) { return abs_lb(b).is_zero(); }
inline bool certified_nonzero(const Ball& b) { return abs_lb(b).sign() > 0; }

// Exact comparison of |ca-cb|^2 against s^2 for dyadic centers and dyadic s.
// Falls back to conservative directed rounding if exponent spans get absurd.
inline int cmp_center_dist2(const Ball& a, const Ball& b, const Mag& s) {
    if (s.is_inf()) return -1;
    auto exact_sub = [](const Real& x, const Real& y) -> Real {
        if (x.is_zero()) {
            Real r(y.prec());
            mpfr_neg(r.p(), y.p(), MPFR_RNDN);
            return r;
        }
        if (y.is_zero()) return x;
        long ex = mpfr_get_exp(x.p()), ey = mpfr_get_exp(y.p());
        long lx = ex - x.prec(), ly = ey - y.prec();
        long need = std::max(ex, ey) - std::min(lx, ly) + 4;
        need = std::min<long>(need, 1L << 20);
        Real r(need);
        mpfr_sub(r.p(), x.p(), y.p(), MPFR_RNDN);
        return r;
    };
    Real dx = exact_sub(a.re, b.re);
    Real dy = exact_sub(a.im, b.im);
    Real d2(2 * std::max(dx.prec(), dy.prec()) + 4);
    mpfr_sqr(d2.p(), dx.p(), MPFR_RNDN);
    Real y2(2 * dy.prec() + 4);
    mpfr_sqr(y2.p(), dy.p(), MPFR_RNDN);
    Real sum(std::max(d2.prec(), y2.prec()) + 4);
    mpfr_add(sum.p(), d2.p(), y2.p(), MPFR_RNDN);
    Real s2(2 * Mag::kPrec + 4);
    mpfr_sqr(s2.p(), s.p(), MPFR_RNDN);
    return mpfr_cmp(sum.p(), s2.p());
}

// The optimistic equality of Section "optimistic arithmetic": true iff the
// closed disks intersect. Exact on the dyadic representation.
inline bool optimistic_eq(const Ball& a, const Ball& b) {
    // exact radius sum, then compare |ca-cb|^2 vs (ra+rb)^2 exactly
    Real sr(2 * Mag::kPrec + 4);
    mpfr_add(sr.p(), a.rad.p(), b.rad.p(), MPFR_RNDN);
    Real s2(2 * sr.prec() + 4);
    mpfr_sqr(s2.p(), sr.p(), MPFR_RNDN);
    auto exact_sub = [](const Real& x, const Real& y) -> Real {
        if (x.is_zero()) {
            Real r(y.prec());
            mpfr_neg(r.p(), y.p(), MPFR_RNDN);
            return r;
        }
        if (y.is_zero()) return x;
        long ex = mpfr_get_exp(x.p()), ey = mpfr_get_exp(y.p());
        long lx = ex - x.prec(), ly = ey - y.prec();
        long need = std::max(ex, ey) - std::min(lx, ly) + 4;
        need = std::min<long>(need, 1L << 20);
        Real r(need);
        mpfr_sub(r.p(), x.p(), y.p(), MPFR_RNDN);
        return r;
    };
    Real dx = exact_sub(a.re, b.re);
    Real dy = exact_sub(a.im, b.im);
    Real dx2(2 * dx.prec() + 4), dy2(2 * dy.prec() + 4);
    mpfr_sqr(dx2.p(), dx.p(), MPFR_RNDN);
    mpfr_sqr(dy2.p(), dy.p(), MPFR_RNDN);
    Real d2(std::max(dx2.prec(), dy2.prec()) + 4);
    mpfr_add(d2.p(), dx2.p(), dy2.p(), MPFR_RNDN);
    return mpfr_cmp(d2.p(), s2.p()) <= 0;
}

// outer contains inner (as sets)?
inline bool ball_contains(const Ball& outer, const Ball& inner) {
    // |co-ci| + ri <= ro, checked with outward rounding on the left
    Real dr(96), di(96);
    int t1 = mpfr_sub(dr.p(), outer.re.p(), inner.re.p(), MPFR_RNDN);
    int t2 = mpfr_sub(di.p(), outer.im.p(), inner.im.p(), MPFR_RNDN);
    Mag d = hypot_ub(dr, di) + round_err(dr, t1, 96) + round_err(di, t2, 96) + inner.rad;
    return d <= outer.rad;
}

inline bool contains_point_rat(const Ball& b, const Rat& zre, const Rat& zim) {
    Ball pt = Ball::of_rat(zre, zim, 128);
    return ball_contains(b, pt);
}

// Smallest representable ball containing both (used for clustering).
inline Ball ball_hull(const Ball& a, const Ball& b, Prec p) {
    Ball c(p);
    int t1 = mpfr_add(c.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    mpfr_div_2ui(c.re.p(), c.re.p(), 1, MPFR_RNDN);
    int t2 = mpfr_add(c.im.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    mpfr_div_2ui(c.im.p(), c.im.p(), 1, MPFR_RNDN);
    Real dra(96), dia(96);
    int t3 = mpfr_sub(dra.p(), c.re.p(), a.re.p(), MPFR_RNDN);
    int t4 = mpfr_sub(dia.p(), c.im.p(), a.im.p(), MPFR_RNDN);
    Mag da = hypot_ub(dra, dia) + round_err(dra, t3, 96) + round_err(dia, t4, 96) + a.rad;
    int t5 = mpfr_sub(dra.p(), c.re.p(), b.re.p(), MPFR_RNDN);
    int t6 = mpfr_sub(dia.p(), c.im.p(), b.im.p(), MPFR_RNDN);
    Mag db = hypot_ub(dra, dia) + round_err(dra, t5, 96) + round_err(dia, t6, 96) + b.rad;
    c.rad = Mag::max(da, db) + round_err(c.re, t1, p) + round_err(c.im, t2, p);
    return c;
}

// ----- arithmetic -----

inline Ball ball_neg(const Ball& a) {
    Ball r = a;
    mpfr_neg(r.re.p(), r.re.p(), MPFR_RNDN);
    mpfr_neg(r.im.p(), r.im.p(), MPFR_RNDN);
    return r;
}

inline Ball ball_conj(const Ball& a) {
    Ball r = a;
    mpfr_neg(r.im.p(), r.im.p(), MPFR_RNDN);
    return r;
}

inline Ball ball_add(const Ball& a, const Ball& b, Prec p) {
    Ball r(p);
    int t1 = mpfr_add(r.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    int t2 = mpfr_add(r.im.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    r.rad = a.rad + b.rad + round_err(r.re, t1, p) + round_err(r.im, t2, p);
    return r;
}

inline Ball ball_sub(const Ball& a, const Ball& b, Prec p) {
    Ball r(p);
    int t1 = mpfr_sub(r.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    int t2 = mpfr_sub(r.im.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    r.rad = a.rad + b.rad + round_err(r.re, t1, p) + round_err(r.im, t2, p);
    return r;
}

inline Ball ball_mul(const Ball& a, const Ball& b, Prec p) {
    Ball r(p);
    Real t(p);
    Mag err;
    int tt;
    // re = ar*br - ai*bi
    tt = mpfr_mul(r.re.p(), a.re.p(), b.re.p(), MPFR_RNDN);
    err += round_err(r.re, tt, p);
    tt = mpfr_mul(t.p(), a.im.p(), b.im.p(), MPFR_RNDN);
    err += round_err(t, tt, p);
    tt = mpfr_sub(r.re.p(), r.re.p(), t.p(), MPFR_RNDN);
    err += round_err(r.re, tt, p);
    // im = ar*bi + ai*br
    tt = mpfr_mul(r.im.p(), a.re.p(), b.im.p(), MPFR_RNDN);
    err += round_err(r.im, tt, p);
    tt = mpfr_mul(t.p(), a.im.p(), b.re.p(), MPFR_RNDN);
    err += round_err(t, tt, p);
    tt = mpfr_add(r.im.p(), r.im.p(), t.p(), MPFR_RNDN);
    err += round_err(r.im, tt, p);

    Mag ma = hypot_ub(a.re, a.im), mb = hypot_ub(b.re, b.im);
    r.rad = ma * b.rad + mb * a.rad + a.rad * b.rad + err;
    return r;
}

inline Ball ball_mul_long(const Ball& a, long k, Prec p) {
    Ball r(p);
    int t1 = mpfr_mul_si(r.re.p(), a.re.p(), k, MPFR_RNDN);
    int t2 = mpfr_mul_si(r.im.p(), a.im.p(), k, MPFR_RNDN);
    Mag mk = Mag::of_double(static_cast<double>(k < 0 ? -k : k));
    r.rad = a.rad * mk + round_err(r.re, t1, p) + round_err(r.im, t2, p);
    return r;
}

inline Ball ball_mul_2exp(const Ball& a, long e) {
    Ball r = a;
    mpfr_mul_2si(r.re.p(), r.re.p(), e, MPFR_RNDN);
    mpfr_mul_2si(r.im.p(), r.im.p(), e, MPFR_RNDN);
    r.rad = r.rad.mul_2exp(e);
    return r;
}

inline Ball ball_inv(const Ball& a, Prec p) {
    Real clb = hypot_lb(a.re, a.im);
    // require |c| > rad strictly
    if (mpfr_cmp(clb.p(), a.rad.p()) <= 0) throw Failure("ball_inv: divisor contains zero");
    Ball r(p);
    Real d(p), t(p);
    mpfr_sqr(d.p(), a.re.p(), MPFR_RNDN);
    mpfr_sqr(t.p(), a.im.p(), MPFR_RNDN);
    mpfr_add(d.p(), d.p(), t.p(), MPFR_RNDN);
    mpfr_div(r.re.p(), a.re.p(), d.p(), MPFR_RNDN);
    mpfr_div(r.im.p(), a.im.p(), d.p(), MPFR_RNDN);
    mpfr_neg(r.im.p(), r.im.p(), MPFR_RNDN);
    // center rounding: a handful of correctly rounded ops, bounded by
    // 8 ulp relative on |1/c| <= 1/clb
    Real inv_ub(64);
    mpfr_ui_div(inv_ub.p(), 1, clb.p(), MPFR_RNDU);
    Mag minv = Mag::of_real_abs(inv_ub);
    Mag cerr = minv * Mag::two_pow(3 - p);
    // propagation: |1/w - 1/c| <= r / (|c| (|c|-r))
    Real denom(64), c2(64);
    mpfr_sub(denom.p(), clb.p(), a.rad.p(), MPFR_RNDD); // > 0 by the check above
    mpfr_mul(c2.p(), clb.p(), denom.p(), MPFR_RNDD);
    Mag prop = Mag::div_lb(a.rad, c2);
    r.rad = prop + cerr;
    return r;
}

inline Ball ball_div(const Ball& a, const Ball& b, Prec p) { return ball_mul(a, ball_inv(b, p), p); }

// ----- transcendental enclosures -----

inline Ball pi_ball(Prec p) {
    Ball r(p);
    int t = mpfr_const_pi(r.re.p(), MPFR_RNDN);
    r.rad = round_err(r.re, t, p);
    return r;
}

// e^z for a complex ball.
inline Ball ball_exp(const Ball& z, Prec p) {
    Ball r(p);
    Real ex(p), co(p), si(p), t(p);
    Mag err;
    int tt;
    tt = mpfr_exp(ex.p(), z.re.p(), MPFR_RNDN);
    err += round_err(ex, tt, p);
    int tc, ts;
    tc = mpfr_cos(co.p(), z.im.p(), MPFR_RNDN);
    ts = mpfr_sin(si.p(), z.im.p(), MPFR_RNDN);
    Mag trig_err = round_err(co, tc, p) + round_err(si, ts, p);
    tt = mpfr_mul(r.re.p(), ex.p(), co.p(), MPFR_RNDN);
    err += round_err(r.re, tt, p);
    tt = mpfr_mul(r.im.p(), ex.p(), si.p(), MPFR_RNDN);
    err += round_err(r.im, tt, p);
    Mag mex = Mag::of_real_abs(ex);
    err += mex * trig_err;
    // propagation: |e^{c+d} - e^c| <= |e^c| (e^r - 1)
    Mag em1;
    mpfr_expm1(em1.p(), z.rad.p(), MPFR_RNDU);
    r.rad = mex * em1 + err * Mag::two_pow(1); // factor 2 slack on accumulated center error
    return r;
}

// exp(2*pi*i*alpha) for a real ball alpha.
inline Ball ball_e2pii(const Ball& alpha, Prec p) {
    Ball two_pi = ball_mul_long(pi_ball(p), 2, p);
    Ball w = ball_mul(two_pi, alpha, p);
    Ball iz(p);
    iz.im = w.re;
    iz.re = Real(p);
    iz.rad = w.rad;
    return ball_exp(iz, p);
}

inline Ball ball_e2pii_rat(const Rat& alpha, Prec p) { return ball_e2pii(Ball::of_real_rat(alpha, p), p); }

inline std::string ball_to_string(const Ball& b, int digits = 10) {
    char bufr[128], bufi[128], bufe[64];
    mpfr_snprintf(bufr, sizeof bufr, "%.*Rg", digits, b.re.p());
    mpfr_snprintf(bufi, sizeof bufi, "%.*Rg", digits, b.im.p());
    mpfr_snprintf(bufe, sizeof bufe, "%.2Rg", b.rad.p());
    std::string s = "(";
    s += bufr;
    if (mpfr_zero_p(b.im.p()) == 0) {
        s += mpfr_sgn(b.im.p()) >= 0 ? "+" : "";
        s += bufi;
        s += "i";
    }
    s += " +/- ";
    s += bufe;
    s += ")";
    return s;
}

} // namespace orefactor

#endif
