#ifndef OREFACTOR_SERIES_HPP
#define OREFACTOR_SERIES_HPP

#include <optional>
#include <utility>
#include <vector>

#include "orefactor/ore.hpp"

namespace orefactor {

// Truncated power series with ball coefficients, expanded at a rational
// point in u = x - x0.
struct BallSeries {
    Rat x0;
    std::vector<Ball> c;

    long truncation_order() const { return static_cast<long>(c.size()); }
};

inline BallPoly bp_scale(const BallPoly& P, const Ball& s, Prec p) {
    BallPoly r;
    for (const Ball& b : P.c) r.c.push_back(ball_mul(b, s, p));
    return r;
}

inline BallPoly bp_add(const BallPoly& a, const BallPoly& b, Prec p) {
    BallPoly r;
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.assign(n, Ball::zero(p));
    for (size_t i = 0; i < a.c.size(); i++) r.c[i] = ball_add(r.c[i], a.c[i], p);
    for (size_t i = 0; i < b.c.size(); i++) r.c[i] = ball_add(r.c[i], b.c[i], p);
    return r;
}

// Denominator-cleared polynomial coefficients of the operator (coefficients
// of d^k as polynomials), as exact-center ball polynomials.
inline std::vector<BallPoly> ore_cleared_ballpoly(const OrePoly& L, Prec p) {
    PolyQ D(Rat(1));
    for (const RatFunc& f : L.c) {
        if (f.is_zero()) continue;
        PolyQ g = poly_gcd(D, f.den);
        D = poly_monic(D * poly_div_exact(f.den, g));
    }
    std::vector<BallPoly> out;
    for (const RatFunc& f : L.c) {
        if (f.is_zero()) {
            out.push_back(BallPoly{});
            continue;
        }
        PolyQ q = f.num * poly_div_exact(D, f.den);
        out.push_back(poly_to_ballpoly(q, p));
    }
    return out;
}

inline std::vector<BallPoly> ore_cleared_ballpoly(const OrePolyNF& L, Prec p) {
    Poly<NFElem> D(NFElem(1));
    for (const auto& f : L.c) {
        if (f.is_zero()) continue;
        Poly<NFElem> g = poly_gcd(D, f.den);
        D = poly_monic(D * poly_div_exact(f.den, g));
    }
    std::shared_ptr<const NumberField> F;
    for (const auto& f : L.c) {
        for (const NFElem& e : f.num.c)
            if (e.field()) F = e.field();
        for (const NFElem& e : f.den.c)
            if (e.field()) F = e.field();
    }
    Ball theta = F ? nf_root_ball(*F, p) : Ball::zero(p);
    std::vector<BallPoly> out;
    for (const auto& f : L.c) {
        if (f.is_zero()) {
            out.push_back(BallPoly{});
            continue;
        }
        Poly<NFElem> q = f.num * poly_div_exact(D, f.den);
        BallPoly bp;
        for (const NFElem& e : q.c) bp.c.push_back(nf_eval_ball(e, theta, p));
        out.push_back(std::move(bp));
    }
    return out;
}

// ----- the P-finite recurrence at an expansion point -----
//
// With cleared coefficients q_k shifted to the point (p_k(u) = q_k(w + u)),
// the Taylor coefficients of a solution satisfy
//    sum_{i=-J}^{r} A_i(n) c_{n+i} = 0  for all n >= 0,
// where A_i(n) = sum_k p_{k,k-i} (n+i)(n+i-1)...(n+i-k+1). At an ordinary
// point A_r(n) = p_{r,0} (n+r)...(n+1) never vanishes for n >= 0.
struct LocalRecurrence {
    long r = 0, J = 0;
    Prec p = 64;
    std::vector<BallPoly> A; // A[i + J] multiplies c_{n+i}

    const BallPoly& Ai(long i) const { return A[static_cast<size_t>(i + J)]; }

    // extends several coefficient columns in lockstep to length T
    void extend_multi(std::vector<BallVec>& cols, long T) const {
        if (cols.empty()) return;
        long cur = static_cast<long>(cols[0].size());
        for (long N = cur; N < T; N++) {
            long n = N - r;
            Ball den = bp_eval(Ai(r), Ball::of_long(n, p), p);
            if (!certified_nonzero(den)) throw Failure("recurrence: leading term not certified nonzero");
            Ball dinv = ball_inv(den, p);
            std::vector<Ball> coef(static_cast<size_t>(r + J), Ball(p));
            for (long i = -J; i < r; i++) {
                if (n + i < 0) continue;
                coef[static_cast<size_t>(i + J)] = bp_eval(Ai(i), Ball::of_long(n, p), p);
            }
            for (BallVec& c : cols) {
                Ball s = Ball::zero(p);
                for (long i = -J; i < r; i++) {
                    if (n + i < 0) continue;
                    s = ball_add(s, ball_mul(coef[static_cast<size_t>(i + J)], c[static_cast<size_t>(n + i)], p), p);
                }
                c.push_back(ball_neg(ball_mul(s, dinv, p)));
            }
        }
    }
};

inline PolyQ falling_factorial_shifted(long i, long k) {
    // (n+i)(n+i-1)...(n+i-k+1) as a polynomial in n
    PolyQ r(Rat(1));
    PolyQ n = PolyQ::x();
    for (long j = 0; j < k; j++) r = r * (n + PolyQ(Rat(i - j)));
    return r;
}

inline LocalRecurrence recurrence_at(const std::vector<BallPoly>& qk, const Ball& w, Prec p) {
    LocalRecurrence rec;
    rec.p = p;
    rec.r = static_cast<long>(qk.size()) - 1;
    long J = 0;
    std::vector<BallPoly> pk;
    Ball wexact = w;
    wexact.rad = Mag::zero(); // expansion points are exact dyadic data
    for (const BallPoly& q : qk) {
        BallPoly s = bp_taylor_shift(q, wexact, p);
        J = std::max(J, s.degree());
        pk.push_back(std::move(s));
    }
    rec.J = std::max<long>(J, 0);
    rec.A.assign(static_cast<size_t>(rec.r + rec.J + 1), BallPoly{});
    for (long i = -rec.J; i <= rec.r; i++) {
        BallPoly acc;
        for (long k = std::max<long>(0, i); k <= rec.r; k++) {
            long j = k - i;
            if (j < 0 || j > pk[static_cast<size_t>(k)].degree()) continue;
            const Ball& pkj = pk[static_cast<size_t>(k)].c[static_cast<size_t>(j)];
            BallPoly term = poly_to_ballpoly(falling_factorial_shifted(i, k), p);
            acc = bp_add(acc, bp_scale(term, pkj, p), p);
        }
        rec.A[static_cast<size_t>(i + rec.J)] = acc;
    }
    return rec;
}

// First t + r Taylor coefficients at an ordinary rational point of the
// solution with jet (f(x0), ..., f^{(r-1)}(x0)) = v.
inline BallSeries series_solution(const OrePoly& L_in, const Rat& x0, const BallVec& v, long t, Prec p) {
    OrePoly L = ore_monic(L_in);
    long r = L.order();
    LocalRecurrence rec = recurrence_at(ore_cleared_ballpoly(L, p), Ball::of_real_rat(x0, p), p);
    BallSeries s;
    s.x0 = x0;
    BallVec c;
    Ball fact = Ball::one(p);
    for (long j = 0; j < r; j++) {
        if (j > 0) fact = ball_mul_long(fact, j, p);
        c.push_back(ball_div(v[static_cast<size_t>(j)], fact, p));
    }
    std::vector<BallVec> cols = {std::move(c)};
    rec.extend_multi(cols, t + r);
    s.c = std::move(cols[0]);
    return s;
}

// Basis of solutions whose Wronskian matrix at x0 is the identity.
inline std::vector<BallSeries> fundamental_series(const OrePoly& L_in, const Rat& x0, long t, Prec p) {
    OrePoly L = ore_monic(L_in);
    long r = L.order();
    LocalRecurrence rec = recurrence_at(ore_cleared_ballpoly(L, p), Ball::of_real_rat(x0, p), p);
    std::vector<BallVec> cols;
    Ball fact = Ball::one(p);
    for (long j = 0; j < r; j++) {
        if (j > 0) fact = ball_mul_long(fact, j, p);
        BallVec c(static_cast<size_t>(r), Ball::zero(p));
        c[static_cast<size_t>(j)] = ball_inv(fact, p); // 1/j!
        cols.push_back(std::move(c));
    }
    rec.extend_multi(cols, t + r);
    std::vector<BallSeries> out;
    for (BallVec& c : cols) {
        BallSeries s;
        s.x0 = x0;
        s.c = std::move(c);
        out.push_back(std::move(s));
    }
    return out;
}

// (y(u), y'(u), ..., y^{(m-1)}(u)) of a truncated series, by termwise
// differentiation and Horner evaluation. Purely the truncated value; callers
// in certified mode add their own tail bounds.
inline BallVec jet_eval(const BallVec& coeffs, const Ball& u, long m, Prec p) {
    BallVec out;
    BallVec d = coeffs;
    for (long k = 0; k < m; k++) {
        Ball acc = Ball::zero(p);
        for (long n = static_cast<long>(d.size()) - 1; n >= 0; n--)
            acc = ball_add(ball_mul(acc, u, p), d[static_cast<size_t>(n)], p);
        out.push_back(acc);
        // differentiate
        BallVec nd;
        for (size_t n = 1; n < d.size(); n++) nd.push_back(ball_mul_long(d[n], static_cast<long>(n), p));
        d = std::move(nd);
    }
    return out;
}

// ----- Hermite-Pade search for candidate annihilators -----

// Operator with ball polynomial coefficients in u = x - x0 (not monic; the
// echelon normalization pins one coefficient to exactly 1).
struct BallOrePoly {
    Rat x0;
    long ord = 0;
    long deg = 0;
    std::vector<BallPoly> coeffs; // coeffs[k] multiplies d^k
};

// Enclosure of R(f) as a truncated series.
inline BallSeries apply_ore(const BallOrePoly& R, const BallSeries& f, Prec p) {
    long tmax = static_cast<long>(f.c.size()) - R.ord;
    BallSeries out;
    out.x0 = f.x0;
    out.c.assign(static_cast<size_t>(std::max<long>(tmax, 0)), Ball::zero(p));
    BallVec der = f.c; // k-th derivative coefficients
    for (long k = 0; k <= R.ord; k++) {
        const BallPoly& bk = R.coeffs[static_cast<size_t>(k)];
        for (long j = 0; j <= bk.degree(); j++) {
            const Ball& b = bk.c[static_cast<size_t>(j)];
            for (long n = 0; n + j < tmax; n++) {
                if (n >= static_cast<long>(der.size())) break;
                out.c[static_cast<size_t>(n + j)] =
                    ball_add(out.c[static_cast<size_t>(n + j)], ball_mul(b, der[static_cast<size_t>(n)], p), p);
            }
        }
        BallVec nd;
        for (size_t n = 1; n < der.size(); n++) nd.push_back(ball_mul_long(der[n], static_cast<long>(n), p));
        der = std::move(nd);
    }
    return out;
}

inline BallSeries apply_ore(const OrePoly& R, const BallSeries& f, Prec p) {
    BallOrePoly B;
    B.x0 = f.x0;
    B.ord = R.order();
    PolyQ D(Rat(1));
    for (const RatFunc& g : R.c) {
        if (g.is_zero()) continue;
        PolyQ gg = poly_gcd(D, g.den);
        D = poly_monic(D * poly_div_exact(g.den, gg));
    }
    for (long k = 0; k <= R.order(); k++) {
        const RatFunc& g = R.coeff(k);
        PolyQ q = g.is_zero() ? PolyQ() : g.num * poly_div_exact(D, g.den);
        // shift to u = x - x0
        q = poly_shift(q, f.x0);
        B.deg = std::max(B.deg, q.degree());
        B.coeffs.push_back(poly_to_ballpoly(q, p));
    }
    return apply_ore(B, f, p);
}

// Monic-normalizable operator enclosure of minimal coefficient degree with
// ord <= s and R(f) = O(u^t): sweeps the degree upward and solves the linear
// system through the optimistic kernel. An empty kernel at degree d
// certifies that no member operator of that (order, degree) annihilates any
// member of f to order t.
inline std::optional<BallOrePoly> hermite_pade_min(const BallSeries& f, long s, long t, long degree_cap, Prec p) {
    if (static_cast<long>(f.c.size()) < t + s) throw std::domain_error("hermite_pade_min: series too short");
    // derivative coefficient tables
    std::vector<BallVec> der(static_cast<size_t>(s + 1));
    der[0] = f.c;
    for (long k = 1; k <= s; k++) {
        const BallVec& prev = der[static_cast<size_t>(k - 1)];
        for (size_t n = 1; n < prev.size(); n++) der[static_cast<size_t>(k)].push_back(ball_mul_long(prev[n], static_cast<long>(n), p));
    }
    for (long d = 0; d <= degree_cap; d++) {
        long ncols = (s + 1) * (d + 1);
        BallMatrix M(t, ncols, p);
        for (long k = 0; k <= s; k++)
            for (long j = 0; j <= d; j++) {
                long col = k * (d + 1) + j;
                const BallVec& dk = der[static_cast<size_t>(k)];
                for (long n = 0; n < t; n++) {
                    // coefficient of u^n in u^j f^{(k)}
                    long idx = n - j;
                    if (idx < 0 || idx >= static_cast<long>(dk.size())) continue;
                    M.at(n, col) = dk[static_cast<size_t>(idx)];
                }
            }
        std::vector<BallVec> K = kernel(M, p);
        if (K.empty()) continue;
        const BallVec& sol = K.front();
        BallOrePoly R;
        R.x0 = f.x0;
        R.ord = s;
        R.deg = d;
        for (long k = 0; k <= s; k++) {
            BallPoly bk;
            for (long j = 0; j <= d; j++) bk.c.push_back(sol[static_cast<size_t>(k * (d + 1) + j)]);
            R.coeffs.push_back(std::move(bk));
        }
        // drop zero higher-order coefficients so ord reflects the content
        while (R.ord > 0) {
            bool zero = true;
            for (const Ball& b : R.coeffs.back().c)
                if (!(b.is_exact() && b.re.is_zero() && b.im.is_zero())) zero = false;
            if (!zero) break;
            R.coeffs.pop_back();
            R.ord--;
        }
        return R;
    }
    return std::nullopt;
}

} // namespace orefactor

#endif
