#ifndef OREFACTOR_MONODROMY_HPP
#define OREFACTOR_MONODROMY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "orefactor/series.hpp"
#include "orefactor/singular.hpp"

namespace orefactor {

enum class Mode { heuristic, certified };

// Exact planar point used by the path planner.
struct QPoint {
    Rat re, im;
};

inline QPoint qpoint_of_double(double x, double y) {
    Rat a, b;
    mpq_set_d(a.get_mpq_t(), x);
    mpq_set_d(b.get_mpq_t(), y);
    return {a, b};
}

inline Ball qpoint_ball(const QPoint& w, Prec p) { return Ball::of_rat(w.re, w.im, p); }

// Closed polygonal path. Waypoints are exact rationals; consecutive
// waypoints satisfy |w_{i+1} - w_i| <= 1/2 dist(w_i, Sigma).
struct PathSpec {
    std::vector<QPoint> waypoints;
    bool is_loop = false;
    std::optional<size_t> encircled; // index into SingularityData.points
};

// Exact winding number of a closed rational polygon around a rational point
// (crossing counting; the point must avoid the edges).
inline long winding_number(const std::vector<QPoint>& poly, const Rat& px, const Rat& py) {
    long wn = 0;
    size_t n = poly.size();
    for (size_t i = 0; i + 1 < n; i++) {
        const QPoint& a = poly[i];
        const QPoint& b = poly[i + 1];
        auto is_left = [&]() { // cross product sign of (b-a) x (p-a)
            Rat c = (b.re - a.re) * (py - a.im) - (px - a.re) * (b.im - a.im);
            return sgn(c);
        };
        if (a.im <= py) {
            if (b.im > py && is_left() > 0) wn++;
        } else {
            if (b.im <= py && is_left() < 0) wn--;
        }
    }
    return wn;
}

namespace pathimpl {

inline double ball_re_d(const Ball& b) { return b.re.to_double(); }
inline double ball_im_d(const Ball& b) { return b.im.to_double(); }

// lower bound of the distance from w to every listed point
inline Real dist_lb_to_points(const Ball& w, const std::vector<Ball>& pts) {
    Real best(64);
    mpfr_set_inf(best.p(), 1);
    for (const Ball& s : pts) {
        Real dr(96), di(96);
        mpfr_sub(dr.p(), w.re.p(), s.re.p(), MPFR_RNDN);
        mpfr_sub(di.p(), w.im.p(), s.im.p(), MPFR_RNDN);
        Real d = hypot_lb(dr, di);
        // subtract radii and a rounding cushion
        Mag slack = w.rad + s.rad + Mag::two_pow(-80);
        Real dd(64);
        mpfr_sub(dd.p(), d.p(), slack.p(), MPFR_RNDD);
        if (dd.sign() < 0) mpfr_set_zero(dd.p(), 1);
        if (mpfr_cmp(dd.p(), best.p()) < 0) best = dd;
    }
    return best;
}

inline Mag qdist_ub(const QPoint& a, const QPoint& b) {
    Ball ba = qpoint_ball(a, 96), bb = qpoint_ball(b, 96);
    Real dr(96), di(96);
    mpfr_sub(dr.p(), ba.re.p(), bb.re.p(), MPFR_RNDN);
    mpfr_sub(di.p(), ba.im.p(), bb.im.p(), MPFR_RNDN);
    return hypot_ub(dr, di) + ba.rad + bb.rad + Mag::two_pow(-80);
}

// enforce the step invariant by midpoint subdivision
inline void subdivide_steps(std::vector<QPoint>& wps, const std::vector<Ball>& sing) {
    for (int round = 0; round < 40; round++) {
        bool changed = false;
        std::vector<QPoint> out;
        out.push_back(wps.front());
        for (size_t i = 0; i + 1 < wps.size(); i++) {
            const QPoint& a = wps[i];
            const QPoint& b = wps[i + 1];
            Real lim(64);
            mpfr_div_2ui(lim.p(), dist_lb_to_points(qpoint_ball(a, 96), sing).p(), 1, MPFR_RNDD);
            if (!(qdist_ub(a, b) <= Mag::of_real_abs(lim))) {
                QPoint mid{(a.re + b.re) / 2, (a.im + b.im) / 2};
                out.push_back(mid);
                changed = true;
            }
            out.push_back(b);
        }
        wps = std::move(out);
        if (!changed) return;
    }
    throw Failure("path planning: step subdivision did not converge (point too close to a singularity?)");
}

} // namespace pathimpl

// Deterministic polygonal loop from x0 encircling exactly the target
// singular point once, positively. Spur + regular polygon + return spur;
// the base point chooser guarantees the corridors are clear.
inline PathSpec plan_loop(const std::vector<Ball>& sing, const Rat& x0, size_t target, Prec /*p*/ = 64) {
    const Ball& t = sing[target];
    double tx = pathimpl::ball_re_d(t), ty = pathimpl::ball_im_d(t);
    double x0x = mpq_class(x0).get_d(), x0y = 0.0;
    // loop radius: half the clearance of the target
    std::vector<Ball> others;
    for (size_t j = 0; j < sing.size(); j++)
        if (j != target) others.push_back(sing[j]);
    double clear_others = 1e300;
    if (!others.empty()) clear_others = pathimpl::dist_lb_to_points(t, others).to_double();
    double dx0 = std::hypot(x0x - tx, x0y - ty);
    double rho = 0.4375 * std::min(clear_others, dx0);
    if (!(rho > 0)) throw Failure("plan_loop: degenerate geometry");

    // entry point: on the circle toward x0
    double ang0 = std::atan2(x0y - ty, x0x - tx);
    const int N = 16;
    std::vector<QPoint> circle;
    for (int k = 0; k <= N; k++) {
        double a = ang0 + 6.283185307179586 * k / N;
        circle.push_back(qpoint_of_double(tx + rho * std::cos(a), ty + rho * std::sin(a)));
    }
    QPoint entry = circle.front();
    QPoint start{x0, Rat(0)};
    std::vector<QPoint> wps;
    wps.push_back(start);
    wps.push_back(entry);
    for (int k = 1; k <= N; k++) wps.push_back(circle[static_cast<size_t>(k)]);
    // close: return spur is the reverse of the outbound one
    wps.push_back(start);

    pathimpl::subdivide_steps(wps, sing);

    PathSpec path;
    path.waypoints = std::move(wps);
    path.is_loop = true;
    path.encircled = target;
    return path;
}

// Big clockwise circle around all finite singularities: a positive loop
// around infinity. The spur leaves x0 in the given direction (radians).
inline PathSpec plan_infinity_loop(const std::vector<Ball>& sing, const Rat& x0, double spur_angle) {
    double x0x = mpq_class(x0).get_d();
    double R = 1.0 + 2.0 * std::abs(x0x);
    for (const Ball& s : sing) R = std::max(R, 2.5 * (abs_ub(s).to_double() + 1.0));
    // exit point along the spur direction
    double ex = x0x + 0.0, ey = 0.0;
    // walk straight out to the big circle along spur_angle
    double cx = std::cos(spur_angle), cy = std::sin(spur_angle);
    // find the length where |x0 + L*dir| = R (solve quadratic)
    double b = 2 * (ex * cx + ey * cy), c = ex * ex + ey * ey - R * R;
    double L = (-b + std::sqrt(b * b - 4 * c)) / 2;
    double px = ex + L * cx, py = ey + L * cy;
    double ang0 = std::atan2(py, px);
    const int N = 24;
    std::vector<QPoint> wps;
    wps.push_back(QPoint{x0, Rat(0)});
    wps.push_back(qpoint_of_double(px, py));
    for (int k = 1; k <= N; k++) {
        double a = ang0 - 6.283185307179586 * k / N; // clockwise
        wps.push_back(qpoint_of_double(R * std::cos(a), R * std::sin(a)));
    }
    wps.push_back(QPoint{x0, Rat(0)});
    pathimpl::subdivide_steps(wps, sing);
    PathSpec path;
    path.waypoints = std::move(wps);
    path.is_loop = true;
    return path;
}

// ----- certified truncation tails -----
//
// Geometric envelope |c_n| <= A sigma^-n validated from the recurrence:
// past N0 the weighted recurrence is a contraction, so the envelope constant
// comes from the first N0 + window coefficients. Tails of jet evaluations
// then follow from Cauchy's estimates on the circle of radius sigma' between
// the evaluation radius and sigma.
struct TailEnvelope {
    Real sigma = Real(64); // lower bound of the validated analyticity radius
    long N0 = 0;
    long window = 0;
};

inline std::optional<TailEnvelope> tail_envelope(const LocalRecurrence& rec, const Real& dist_lb, const Mag& step_ub) {
    long r = rec.r, J = rec.J;
    Real lead_lb = abs_lb(rec.Ai(r).c.back()); // coefficient of n^r
    if (lead_lb.sign() <= 0) return std::nullopt;
    TailEnvelope env;
    env.window = r + J;
    // N^{i-r} as a rigorous upper bound (i <= r)
    auto npow_ub = [](const Mag& coeff, long N, long rminusi) {
        if (rminusi <= 0) return coeff;
        Real den(64);
        mpfr_ui_pow_ui(den.p(), static_cast<unsigned long>(N), static_cast<unsigned long>(rminusi), MPFR_RNDD);
        return Mag::div_lb(coeff, den);
    };
    Real sigma(64);
    mpfr_mul_d(sigma.p(), dist_lb.p(), 0.75, MPFR_RNDD);
    {
        // keep sigma finite (entire solutions have no nearby singularity)
        Real cap(64);
        mpfr_add_ui(cap.p(), step_ub.p(), 1, MPFR_RNDD);
        mpfr_mul_2ui(cap.p(), cap.p(), 6, MPFR_RNDD);
        if (mpfr_inf_p(sigma.p()) || mpfr_cmp(sigma.p(), cap.p()) > 0) sigma = cap;
    }
    for (int halve = 0; halve < 60; halve++, mpfr_div_2ui(sigma.p(), sigma.p(), 1, MPFR_RNDD)) {
        if (!(step_ub <= Mag::of_real_abs(sigma))) break; // need |u| < sigma
        // find N0 by doubling
        for (long N = 8; N <= (1L << 14); N *= 2) {
            // den(N) = lead_lb - sum_{i<r} |a_{r,i}| N^{i-r}
            Mag sub;
            const BallPoly& Ar = rec.Ai(r);
            for (long i = 0; i < Ar.degree(); i++)
                sub += npow_ub(abs_ub(Ar.c[static_cast<size_t>(i)]), N, r - i);
            Real den(64);
            mpfr_sub(den.p(), lead_lb.p(), sub.p(), MPFR_RNDD);
            if (den.sign() <= 0) continue;
            Mag total;
            Mag spow = Mag::of_real_abs(sigma);
            Mag sp = spow;
            for (long j = 1; j <= r + J; j++) {
                const BallPoly& Aj = rec.Ai(r - j);
                Mag num;
                for (long i = 0; i <= Aj.degree(); i++)
                    num += npow_ub(abs_ub(Aj.c[static_cast<size_t>(i)]), N, r - i);
                total += Mag::div_lb(num, den) * sp;
                sp = sp * spow;
            }
            if (total.lt_2exp(0)) { // strictly below 1
                env.sigma = sigma;
                env.N0 = N;
                return env;
            }
        }
    }
    return std::nullopt;
}

// Upper bound of the k-th derivative tail sum_{n>=T} |c_n| ff(n,k) |u|^{n-k}
// given the envelope constant A on |c_n| sigma^n.
inline Mag tail_bound_k(const Mag& A, const Real& sigma, const Mag& u_ub, long T, long k) {
    // sigma' between |u| and sigma
    Real sp(64);
    mpfr_add(sp.p(), sigma.p(), u_ub.p(), MPFR_RNDD);
    mpfr_div_2ui(sp.p(), sp.p(), 1, MPFR_RNDD);
    // rho = sigma'/sigma < 1 (upper bound)
    Mag rho;
    mpfr_div(rho.p(), sp.p(), sigma.p(), MPFR_RNDU);
    // G = A rho^T / (1 - rho): sup of the tail on |z| = sigma'
    Real one_minus(64);
    mpfr_ui_sub(one_minus.p(), 1, rho.p(), MPFR_RNDD);
    if (one_minus.sign() <= 0) return Mag::inf();
    Mag G = Mag::div_lb(A * rho.pow_ui(static_cast<unsigned long>(T)), one_minus);
    // |g^(k)(u)| <= k! G sigma' / (sigma' - |u|)^{k+1}
    Real gap(64);
    mpfr_sub(gap.p(), sp.p(), u_ub.p(), MPFR_RNDD);
    if (gap.sign() <= 0) return Mag::inf();
    Mag fact;
    mpfr_set_ui(fact.p(), 1, MPFR_RNDU);
    for (long j = 2; j <= k; j++) mpfr_mul_ui(fact.p(), fact.p(), static_cast<unsigned long>(j), MPFR_RNDU);
    Real gap_pow(64);
    mpfr_pow_ui(gap_pow.p(), gap.p(), static_cast<unsigned long>(k + 1), MPFR_RNDD);
    Mag out = Mag::div_lb(fact * G * Mag::of_real_abs(sp), gap_pow);
    return out;
}

// ----- stepwise analytic continuation -----

// Enclosure of the matrix sending the solution jet at the path start to the
// jet at its end. In heuristic mode the result is an enclosure of the
// truncated computation only; in certified mode every step carries a
// validated truncation tail, so the output contains the true transition
// matrix.
inline BallMatrix transition_matrix(const OrePoly& L_in, const PathSpec& path, Prec p, Mode mode,
                                    const std::vector<Ball>& sing) {
    OrePoly L = ore_monic(L_in);
    long r = L.order();
    std::vector<BallPoly> qk = ore_cleared_ballpoly(L, p);
    BallMatrix Jmat = BallMatrix::identity(r, p);
    const long Tcap = 128 + 12 * (p + 64);
    std::vector<QPoint> wps = path.waypoints;
    const size_t max_waypoints = 64 * wps.size() + 1024;
    for (size_t i = 0; i + 1 < wps.size(); i++) {
        Ball w = qpoint_ball(wps[i], p);
        Ball wnext = qpoint_ball(wps[i + 1], p);
        Ball u = ball_sub(wnext, w, p);
        LocalRecurrence rec = recurrence_at(qk, w, p);
        // fundamental columns: c_j = e_l / j!
        std::vector<BallVec> cols;
        {
            Ball fact = Ball::one(p);
            for (long l = 0; l < r; l++) {
                if (l > 0) fact = ball_mul_long(fact, l, p);
                BallVec c(static_cast<size_t>(r), Ball::zero(p));
                c[static_cast<size_t>(l)] = ball_inv(fact, p);
                cols.push_back(std::move(c));
            }
        }
        Mag u_ub = abs_ub(u);
        std::optional<TailEnvelope> env;
        if (mode == Mode::certified) {
            Real dl = pathimpl::dist_lb_to_points(w, sing);
            env = tail_envelope(rec, dl, u_ub);
            if (!env) {
                // the validated disk is smaller than the step: halve the step
                if (wps.size() >= max_waypoints) throw Failure("transition_matrix: step subdivision limit reached");
                QPoint mid{(wps[i].re + wps[i + 1].re) / 2, (wps[i].im + wps[i + 1].im) / 2};
                wps.insert(wps.begin() + static_cast<long>(i) + 1, mid);
                i--;
                continue;
            }
        }
        long T = std::max<long>(2 * r + 8, env ? env->N0 + 2 * r + rec.J + 8 : 0);
        bool done = false;
        std::vector<Mag> tails(static_cast<size_t>(r));
        while (!done) {
            rec.extend_multi(cols, T);
            if (mode == Mode::heuristic) {
                // stop once the last r term magnitudes at radius |u| are tiny
                Mag worst;
                for (const BallVec& c : cols)
                    for (long n = T - r; n < T; n++)
                        worst = Mag::max(worst, abs_ub(c[static_cast<size_t>(n)]) * u_ub.pow_ui(static_cast<unsigned long>(n)));
                if (worst.lt_2exp(-(p + 20))) done = true;
            } else {
                // envelope constant A = max d_n over the base window
                Mag A;
                Mag spow = Mag::of_double(1.0);
                Mag sigma_m = Mag::of_real_abs(env->sigma);
                long base = std::min<long>(T, env->N0 + r + env->window);
                for (long n = 0; n < base; n++) {
                    for (const BallVec& c : cols) A = Mag::max(A, abs_ub(c[static_cast<size_t>(n)]) * spow);
                    spow = spow * sigma_m;
                }
                bool ok = true;
                for (long k = 0; k < r; k++) {
                    tails[static_cast<size_t>(k)] = tail_bound_k(A, env->sigma, u_ub, T, k);
                    Mag scale = Mag::two_pow(0);
                    if (!(tails[static_cast<size_t>(k)] <= scale.mul_2exp(-(p / 2)) * (A + Mag::two_pow(0)))) ok = false;
                }
                if (ok) done = true;
            }
            if (!done) {
                T *= 2;
                if (T > Tcap) throw Failure("transition_matrix: truncation order cap exceeded");
            }
        }
        // step matrix S[k][l] = y_l^(k)(u)
        BallMatrix S(r, r, p);
        for (long l = 0; l < r; l++) {
            BallVec jets = jet_eval(cols[static_cast<size_t>(l)], u, r, p);
            for (long k = 0; k < r; k++) {
                Ball e = jets[static_cast<size_t>(k)];
                if (mode == Mode::certified) e.rad += tails[static_cast<size_t>(k)];
                S.at(k, l) = e;
            }
        }
        Jmat = mat_mul(S, Jmat, p);
    }
    return Jmat;
}

// ----- monodromy generators -----

struct MonodromyGenerator {
    size_t point_idx = 0; // index into SingularityData.points
    Ball location;
    BallMatrix matrix;
    Prec precision_bits = 0;
    Mode mode = Mode::heuristic;
};

// Base point selection: smallest-height real rational keeping its distance
// to the singular set and leaving a clear corridor to every singularity.
inline Rat choose_base_point(const SingularityData& sd) {
    std::vector<Ball> pts;
    for (const SingularPoint& sp : sd.points) pts.push_back(sp.location);
    if (pts.empty()) return Rat(0);
    // min pairwise gap (capped at 1)
    double gap = 1.0;
    for (size_t i = 0; i < pts.size(); i++)
        for (size_t j = i + 1; j < pts.size(); j++) {
            std::vector<Ball> other = {pts[j]};
            gap = std::min(gap, pathimpl::dist_lb_to_points(pts[i], other).to_double());
        }
    auto candidate_ok = [&](const Rat& x0) {
        Ball b0 = Ball::of_real_rat(x0, 96);
        double d0 = pathimpl::dist_lb_to_points(b0, pts).to_double();
        if (!(d0 >= gap / 4)) return false;
        // corridor clearance: for every target j, every other singularity k
        // stays away from the segment [x0, xi_j]
        double x = mpq_class(x0).get_d();
        for (size_t j = 0; j < pts.size(); j++) {
            double jx = pathimpl::ball_re_d(pts[j]), jy = pathimpl::ball_im_d(pts[j]);
            for (size_t k = 0; k < pts.size(); k++) {
                if (k == j) continue;
                double kx = pathimpl::ball_re_d(pts[k]), ky = pathimpl::ball_im_d(pts[k]);
                // distance from point k to segment [x0, j]
                double vx = jx - x, vy = jy;
                double wx = kx - x, wy = ky;
                double vv = vx * vx + vy * vy;
                double tpar = vv > 0 ? std::max(0.0, std::min(1.0, (wx * vx + wy * vy) / vv)) : 0.0;
                double dxs = wx - tpar * vx, dys = wy - tpar * vy;
                double dseg = std::hypot(dxs, dys);
                double rho_k = 0.4375 * gap;
                if (dseg < 0.8 * rho_k) return false;
            }
        }
        return true;
    };
    for (long H = 1; H <= 64; H++) {
        for (long q = 1; q <= H; q++) {
            for (long pnum = -H; pnum <= H; pnum++) {
                if (std::max(std::abs(pnum), q) != H) continue; // exactly height H
                Rat cand(pnum, q);
                cand.canonicalize();
                if (cand.get_den() != q) continue; // not in lowest terms
                if (candidate_ok(cand)) return cand;
            }
        }
    }
    throw Failure("choose_base_point: no suitable rational base point found");
}

// Lazily yields one enclosed monodromy generator per finite singular point,
// ordered by distance from the base point, so the driver can stop early.
class MonodromyIter {
  public:
    MonodromyIter(const OrePoly& L, const SingularityData& sd, const Rat& x0, Prec p, Mode mode)
        : L_(ore_monic(L)), sd_(sd), x0_(x0), p_(p), mode_(mode) {
        for (const SingularPoint& sp : sd.points) locs_.push_back(sp.location);
        Ball b0 = Ball::of_real_rat(x0, 96);
        std::vector<std::pair<double, size_t>> order;
        for (size_t j = 0; j < locs_.size(); j++) {
            Real dr(96), di(96);
            mpfr_sub(dr.p(), locs_[j].re.p(), b0.re.p(), MPFR_RNDN);
            mpfr_sub(di.p(), locs_[j].im.p(), b0.im.p(), MPFR_RNDN);
            order.emplace_back(hypot_ub(dr, di).to_double(), j);
        }
        std::sort(order.begin(), order.end());
        for (auto& [d, j] : order) queue_.push_back(j);
    }

    bool has_next() const { return next_ < queue_.size(); }
    size_t total() const { return queue_.size(); }

    MonodromyGenerator next() {
        size_t j = queue_[next_++];
        PathSpec loop = plan_loop(locs_, x0_, j);
        verify_winding(loop, j);
        MonodromyGenerator g;
        g.point_idx = j;
        g.location = locs_[j];
        g.matrix = transition_matrix(L_, loop, p_, mode_, locs_);
        g.precision_bits = p_;
        g.mode = mode_;
        return g;
    }

  private:
    void verify_winding(const PathSpec& loop, size_t target) const {
        for (size_t k = 0; k < locs_.size(); k++) {
            Rat px, py;
            if (sd_.points[k].rational) {
                px = *sd_.points[k].rational;
                py = 0;
            } else {
                // exact check at a dyadic approximation of the center; the
                // clearance of the polygon makes the winding number constant
                // on the isolating ball
                mpq_set_d(px.get_mpq_t(), pathimpl::ball_re_d(locs_[k]));
                mpq_set_d(py.get_mpq_t(), pathimpl::ball_im_d(locs_[k]));
            }
            long w = winding_number(loop.waypoints, px, py);
            long expect = (k == target) ? 1 : 0;
            if (w != expect) throw Failure("plan_loop: winding number check failed");
        }
    }

    OrePoly L_;
    const SingularityData& sd_;
    Rat x0_;
    Prec p_;
    Mode mode_;
    std::vector<Ball> locs_;
    std::vector<size_t> queue_;
    size_t next_ = 0;
};

// Product of all finite local monodromies (in counterclockwise angular
// order as seen from x0, starting at the infinity spur direction) followed
// through the loop at infinity. Encloses the identity when everything is
// consistent; the returned matrix is that product.
inline BallMatrix monodromy_product_with_infinity(const OrePoly& L, const SingularityData& sd, const Rat& x0,
                                                  Prec p, Mode mode) {
    std::vector<Ball> locs;
    for (const SingularPoint& sp : sd.points) locs.push_back(sp.location);
    double x = mpq_class(x0).get_d();
    // spur direction for the infinity loop: bisector of the widest angular
    // gap between singularities seen from x0
    std::vector<double> angs;
    for (const Ball& s : locs)
        angs.push_back(std::atan2(pathimpl::ball_im_d(s), pathimpl::ball_re_d(s) - x));
    std::sort(angs.begin(), angs.end());
    double spur = 0.0;
    if (angs.empty()) {
        spur = 0.0;
    } else {
        double best_gap = -1;
        for (size_t i = 0; i < angs.size(); i++) {
            double a = angs[i];
            double b = (i + 1 < angs.size()) ? angs[i + 1] : angs[0] + 6.283185307179586;
            if (b - a > best_gap) {
                best_gap = b - a;
                spur = (a + b) / 2;
            }
        }
    }
    // order the finite loops counterclockwise starting just after the spur
    std::vector<std::pair<double, size_t>> order;
    for (size_t j = 0; j < locs.size(); j++) {
        double a = std::atan2(pathimpl::ball_im_d(locs[j]), pathimpl::ball_re_d(locs[j]) - x);
        double rel = a - spur;
        while (rel < 0) rel += 6.283185307179586;
        while (rel >= 6.283185307179586) rel -= 6.283185307179586;
        order.emplace_back(rel, j);
    }
    std::sort(order.begin(), order.end());
    long r = ore_monic(L).order();
    BallMatrix prod = BallMatrix::identity(r, p);
    for (auto& [a, j] : order) {
        PathSpec loop = plan_loop(locs, x0, j);
        BallMatrix M = transition_matrix(L, loop, p, mode, locs);
        prod = mat_mul(M, prod, p);
    }
    PathSpec inf_loop = plan_infinity_loop(locs, x0, spur);
    BallMatrix Minf = transition_matrix(L, inf_loop, p, mode, locs);
    return mat_mul(Minf, prod, p);
}

inline bool matrix_contains_identity(const BallMatrix& M) {
    for (long i = 0; i < M.m; i++)
        for (long j = 0; j < M.n; j++)
            if (!contains_point_rat(M.at(i, j), Rat(i == j ? 1 : 0), Rat(0))) return false;
    return true;
}

// ----- adjoint transport -----

// Exact rational inverse (the adjoint transform P(x0) is exact).
inline std::vector<std::vector<Rat>> rat_matrix_inverse(const std::vector<std::vector<Rat>>& M) {
    long n = static_cast<long>(M.size());
    std::vector<std::vector<Rat>> A(M);
    std::vector<std::vector<Rat>> I(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
    for (long i = 0; i < n; i++) I[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    for (long col = 0; col < n; col++) {
        long piv = -1;
        for (long i = col; i < n; i++)
            if (A[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) throw std::domain_error("rat_matrix_inverse: singular");
        std::swap(A[static_cast<size_t>(piv)], A[static_cast<size_t>(col)]);
        std::swap(I[static_cast<size_t>(piv)], I[static_cast<size_t>(col)]);
        Rat inv = 1 / A[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (long j = 0; j < n; j++) {
            A[static_cast<size_t>(col)][static_cast<size_t>(j)] *= inv;
            I[static_cast<size_t>(col)][static_cast<size_t>(j)] *= inv;
        }
        for (long i = 0; i < n; i++) {
            if (i == col) continue;
            Rat f = A[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (long j = 0; j < n; j++) {
                A[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * A[static_cast<size_t>(col)][static_cast<size_t>(j)];
                I[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * I[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
    }
    return I;
}

inline BallMatrix rat_matrix_to_ball(const std::vector<std::vector<Rat>>& M, Prec p) {
    BallMatrix B(static_cast<long>(M.size()), static_cast<long>(M.empty() ? 0 : M[0].size()), p);
    for (long i = 0; i < B.m; i++)
        for (long j = 0; j < B.n; j++) B.at(i, j) = Ball::of_real_rat(M[static_cast<size_t>(i)][static_cast<size_t>(j)], p);
    return B;
}

// Group transport per the adjoint lemma: chi = P(x0) (phi^-1)^T P(x0)^-1 is
// a monodromy enclosure of the adjoint operator. (Algorithm internals use
// the inversion-free anti-isomorphism phi -> P phi^T P^-1 instead, which
// generates the same matrix algebra.)
inline BallMatrix adjoint_group_transport(const BallMatrix& phi, const std::vector<std::vector<Rat>>& P0, Prec p) {
    BallMatrix Pb = rat_matrix_to_ball(P0, p);
    BallMatrix Pinv = rat_matrix_to_ball(rat_matrix_inverse(P0), p);
    BallMatrix inv = mat_inv(phi, p);
    return mat_mul(mat_mul(Pb, mat_transpose(inv, p), p), Pinv, p);
}

inline BallMatrix adjoint_algebra_transport(const BallMatrix& phi, const std::vector<std::vector<Rat>>& P0, Prec p) {
    BallMatrix Pb = rat_matrix_to_ball(P0, p);
    BallMatrix Pinv = rat_matrix_to_ball(rat_matrix_inverse(P0), p);
    return mat_mul(mat_mul(Pb, mat_transpose(phi, p), p), Pinv, p);
}

} // namespace orefactor

#endif
