#ifndef OREFACTOR_NUMFIELD_HPP
#define OREFACTOR_NUMFIELD_HPP

#include <memory>
#include <stdexcept>
#include <utility>

#include "orefactor/ball_poly.hpp"
#include "orefactor/rat.hpp"

namespace orefactor {

// Simple algebraic extension Q(theta). The defining polynomial is monic and
// expected irreducible; if arithmetic ever stumbles on a zero divisor the
// discovered factor is reported through SplitDetected (dynamic evaluation),
// letting singularity analysis refine its conjugacy classes without a
// general factorization routine.
struct NumberField {
    PolyQ minpoly; // monic, degree >= 1
    Ball isolator; // contains exactly one root of minpoly

    long degree() const { return minpoly.degree(); }
};

struct SplitDetected : std::runtime_error {
    PolyQ factor;
    explicit SplitDetected(PolyQ f) : std::runtime_error("reducible modulus detected"), factor(std::move(f)) {}
};

inline BallPoly poly_to_ballpoly(const PolyQ& a, Prec p) {
    BallPoly P;
    for (const Rat& q : a.c) P.c.push_back(Ball::of_real_rat(q, p));
    return P;
}

// Refines an isolating ball for a simple root of the exact polynomial f to
// roughly 2^-target radius: Newton on the center, then a Pellet
// re-certification. Falls back to full isolation on trouble.
inline Ball refine_root(const PolyQ& f, const Ball& isolator, Prec target) {
    Prec q = 2 * target + 64;
    BallPoly F = poly_to_ballpoly(f, q);
    detail::C2 z = detail::c2_of(isolator, q);
    std::vector<detail::C2> coeff;
    for (const Ball& b : F.c) coeff.push_back(detail::c2_of(b, q));
    long n = f.degree();
    for (int it = 0; it < 64; it++) {
        detail::C2 val(q), der(q);
        val = detail::c2_of(Ball::zero(q), q);
        der = detail::c2_of(Ball::zero(q), q);
        for (long i = n; i >= 0; i--) {
            der = detail::c2_add(detail::c2_mul(der, z, q), val, q);
            val = detail::c2_add(detail::c2_mul(val, z, q), coeff[static_cast<size_t>(i)], q);
        }
        if (detail::c2_tiny(val) || detail::c2_tiny(der)) break;
        detail::C2 step = detail::c2_div(val, der, q);
        z = detail::c2_sub(z, step, q);
        Mag sz = detail::c2_abs(step);
        Mag scale = detail::c2_abs(z) + Mag::two_pow(0);
        if (sz <= scale.mul_2exp(-q + 16)) break;
    }
    Ball out(q);
    mpfr_set(out.re.p(), z.re.p(), MPFR_RNDN);
    mpfr_set(out.im.p(), z.im.p(), MPFR_RNDN);
    Mag scale = abs_ub(out) + Mag::two_pow(0);
    Mag rho = scale.mul_2exp(-target - 8);
    for (int grow = 0; grow < 64; grow++) {
        if (pellet_count(F, out, rho, 1, q)) {
            out.rad = rho;
            return out;
        }
        rho = rho.mul_2exp(1);
    }
    // give up on the fast path; re-isolate and match against the old ball
    auto roots = isolate_roots(F, target);
    for (auto& [b, m] : roots)
        if (m == 1 && optimistic_eq(b, isolator)) return b;
    throw Failure("refine_root: could not refine isolator");
}

class NFElem {
  public:
    NFElem() : rep_(Rat(0)) {}
    NFElem(long x) : rep_(Rat(x)) {} // NOLINT: implicit by design, mirrors K(long)
    explicit NFElem(const Rat& x) : rep_(x) {}
    NFElem(std::shared_ptr<const NumberField> F, PolyQ rep) : F_(std::move(F)), rep_(std::move(rep)) {
        reduce();
    }

    const std::shared_ptr<const NumberField>& field() const { return F_; }
    const PolyQ& rep() const { return rep_; }
    bool is_rational() const { return rep_.degree() <= 0; }
    Rat rational_value() const { return rep_.degree() < 0 ? Rat(0) : rep_.c[0]; }
    bool is_zero() const { return rep_.is_zero(); }

    friend bool operator==(const NFElem& a, const NFElem& b) { return a.rep_ == b.rep_; }

    friend NFElem operator+(const NFElem& a, const NFElem& b) { return NFElem(join(a, b), a.rep_ + b.rep_); }
    friend NFElem operator-(const NFElem& a, const NFElem& b) { return NFElem(join(a, b), a.rep_ - b.rep_); }
    friend NFElem operator-(const NFElem& a) { return NFElem(a.F_, -a.rep_); }
    friend NFElem operator*(const NFElem& a, const NFElem& b) { return NFElem(join(a, b), a.rep_ * b.rep_); }
    friend NFElem operator/(const NFElem& a, const NFElem& b) { return a * b.inverse(); }

    NFElem inverse() const {
        if (rep_.is_zero()) throw std::domain_error("NFElem: division by zero");
        if (!F_ || rep_.degree() == 0) {
            NFElem r(*this);
            r.rep_ = PolyQ(Rat(1) / rep_.c[0]);
            return r;
        }
        auto [g, u, v] = poly_xgcd(rep_, F_->minpoly);
        (void)v;
        if (g.degree() != 0) {
            // rep and minpoly share a factor: modulus is reducible
            throw SplitDetected(g);
        }
        return NFElem(F_, u); // g is the monic constant 1, so u * rep == 1
    }

  private:
    static std::shared_ptr<const NumberField> join(const NFElem& a, const NFElem& b) {
        if (a.F_ && b.F_ && a.F_ != b.F_ && !(a.F_->minpoly == b.F_->minpoly))
            throw std::domain_error("NFElem: mixed number fields");
        return a.F_ ? a.F_ : b.F_;
    }
    void reduce() {
        if (F_ && rep_.degree() >= F_->minpoly.degree()) rep_ = poly_divrem(rep_, F_->minpoly).second;
        if (!F_ && rep_.degree() > 0) throw std::domain_error("NFElem: nonconstant rep without a field");
    }

    std::shared_ptr<const NumberField> F_;
    PolyQ rep_;
};

inline bool k_is_zero(const NFElem& x) { return x.is_zero(); }

// Certified enclosure of the field generator at the requested precision.
inline Ball nf_root_ball(const NumberField& F, Prec p) {
    if (F.degree() == 1) return Ball::of_real_rat(-F.minpoly.c[0], p); // x + c
    return refine_root(F.minpoly, F.isolator, p + 32);
}

inline Ball nf_eval_ball(const NFElem& e, const Ball& theta, Prec p) {
    Ball acc = Ball::zero(p);
    for (long i = e.rep().degree(); i >= 0; i--)
        acc = ball_add(ball_mul(acc, theta, p), Ball::of_real_rat(e.rep().c[static_cast<size_t>(i)], p), p);
    return acc;
}

inline Ball nf_to_ball(const NFElem& e, Prec p) {
    if (!e.field() || e.is_rational()) return Ball::of_real_rat(e.rational_value(), p);
    return nf_eval_ball(e, nf_root_ball(*e.field(), p), p);
}

} // namespace orefactor

#endif
