#ifndef OREFACTOR_REAL_HPP
#define OREFACTOR_REAL_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <cassert>
#include <string>
#include <utility>

#include "orefactor/util.hpp"

namespace orefactor {

using Int = mpz_class;
using Rat = mpq_class;

// Value-semantic wrapper around mpfr_t. Each value carries its own
// precision; operations write into a preallocated target.
class Real {
  public:
    explicit Real(Prec p = 53) {
        mpfr_init2(v_, static_cast<mpfr_prec_t>(p < 2 ? 2 : p));
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr p() { return v_; }
    mpfr_srcptr p() const { return v_; }
    Prec prec() const { return static_cast<Prec>(mpfr_get_prec(v_)); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    static Real of_long(long x, Prec p) {
        Real r(p);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    // Exact iff the rational fits in p bits; the ternary result is folded
    // into ball radii by callers that need it.
    static Real of_rat(const Rat& q, Prec p, int* tern = nullptr) {
        Real r(p);
        int t = mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        if (tern) *tern = t;
        return r;
    }

  private:
    mpfr_t v_;
};

// Nonnegative dyadic upper-bound quantity (ball radii, error bounds).
// Low precision, every operation rounds up, so arithmetic on Mags always
// yields valid upper bounds.
class Mag {
  public:
    static constexpr mpfr_prec_t kPrec = 32;

    Mag() {
        mpfr_init2(v_, kPrec);
        mpfr_set_zero(v_, 1);
    }
    Mag(const Mag& o) {
        mpfr_init2(v_, kPrec);
        mpfr_set(v_, o.v_, MPFR_RNDU);
    }
    Mag(Mag&& o) noexcept {
        mpfr_init2(v_, kPrec);
        mpfr_swap(v_, o.v_);
    }
    Mag& operator=(const Mag& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDU);
        return *this;
    }
    Mag& operator=(Mag&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mag() { mpfr_clear(v_); }

    mpfr_ptr p() { return v_; }
    mpfr_srcptr p() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_inf() const { return mpfr_inf_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDU); }

    static Mag zero() { return Mag(); }
    static Mag inf() {
        Mag m;
        mpfr_set_inf(m.v_, 1);
        return m;
    }
    static Mag two_pow(long e) {
        Mag m;
        mpfr_set_ui_2exp(m.v_, 1, static_cast<mpfr_exp_t>(e), MPFR_RNDU);
        return m;
    }
    static Mag of_double(double x) {
        Mag m;
        mpfr_set_d(m.v_, x < 0 ? -x : x, MPFR_RNDU);
        return m;
    }
    // Upper bound of |x|.
    static Mag of_real_abs(const Real& x) {
        Mag m;
        mpfr_abs(m.v_, x.p(), MPFR_RNDU);
        return m;
    }
    static Mag of_rat_abs(const Rat& q) {
        Mag m;
        mpfr_set_q(m.v_, q.get_mpq_t(), MPFR_RNDU);
        mpfr_abs(m.v_, m.v_, MPFR_RNDU);
        return m;
    }

    friend Mag operator+(const Mag& a, const Mag& b) {
        Mag r;
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDU);
        return r;
    }
    friend Mag operator*(const Mag& a, const Mag& b) {
        Mag r;
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDU);
        return r;
    }
    Mag& operator+=(const Mag& o) {
        mpfr_add(v_, v_, o.v_, MPFR_RNDU);
        return *this;
    }
    Mag& operator*=(const Mag& o) {
        mpfr_mul(v_, v_, o.v_, MPFR_RNDU);
        return *this;
    }
    // Upper bound of a/b given b a LOWER bound of the true divisor.
    static Mag div_lb(const Mag& a, const Real& b_lb) {
        assert(b_lb.sign() > 0);
        Mag r;
        mpfr_div(r.v_, a.p(), b_lb.p(), MPFR_RNDU);
        return r;
    }
    static Mag max(const Mag& a, const Mag& b) {
        Mag r;
        mpfr_max(r.v_, a.v_, b.v_, MPFR_RNDU);
        return r;
    }
    Mag pow_ui(unsigned long k) const {
        Mag r;
        mpfr_pow_ui(r.v_, v_, k, MPFR_RNDU);
        return r;
    }
    Mag mul_2exp(long e) const {
        Mag r;
        mpfr_mul_2si(r.v_, v_, e, MPFR_RNDU);
        return r;
    }
    friend bool operator<(const Mag& a, const Mag& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Mag& a, const Mag& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }

    // a < 2^e ?
    bool lt_2exp(long e) const {
        if (is_zero()) return true;
        if (is_inf()) return false;
        return mpfr_cmp_ui_2exp(v_, 1, static_cast<mpfr_exp_t>(e)) < 0;
    }

  private:
    mpfr_t v_;
};

// Upper bound on the rounding error of an mpfr operation whose result is x,
// obtained with the given ternary value at precision p. One full ulp, which
// safely covers round-to-nearest as well as directed rounding.
inline Mag round_err(const Real& x, int ternary, Prec p) {
    if (ternary == 0) return Mag::zero();
    assert(!x.is_zero() && "inexact mpfr result underflowed to zero");
    return Mag::two_pow(static_cast<long>(mpfr_get_exp(x.p())) - p);
}

} // namespace orefactor

#endif
