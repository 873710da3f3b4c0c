#ifndef OREFACTOR_RAT_HPP
#define OREFACTOR_RAT_HPP

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "orefactor/util.hpp"

namespace orefactor {

using Int = mpz_class;
using Rat = mpq_class;

inline bool k_is_zero(const Rat& x) { return sgn(x) == 0; }

// Dense univariate polynomial over a field K, ascending coefficients.
// K needs K(long), +, -, *, /, ==, and a k_is_zero overload.
template <class K>
struct Poly {
    std::vector<K> c;

    Poly() = default;
    explicit Poly(const K& x) {
        if (!k_is_zero(x)) c.push_back(x);
    }

    long degree() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const K& lead() const { return c.back(); }

    void normalize() {
        while (!c.empty() && k_is_zero(c.back())) c.pop_back();
    }

    K coeff(long i) const { return (i >= 0 && i <= degree()) ? c[static_cast<size_t>(i)] : K(0); }

    static Poly x() {
        Poly p;
        p.c = {K(0), K(1)};
        return p;
    }
    static Poly of_coeffs(std::vector<K> v) {
        Poly p;
        p.c = std::move(v);
        p.normalize();
        return p;
    }
    static Poly monomial(const K& a, long deg) {
        Poly p;
        if (k_is_zero(a)) return p;
        p.c.assign(static_cast<size_t>(deg + 1), K(0));
        p.c[static_cast<size_t>(deg)] = a;
        return p;
    }
};

template <class K>
bool operator==(const Poly<K>& a, const Poly<K>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (size_t i = 0; i < a.c.size(); i++)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}

template <class K>
Poly<K> operator+(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), K(0));
    for (size_t i = 0; i < a.c.size(); i++) r.c[i] = r.c[i] + a.c[i];
    for (size_t i = 0; i < b.c.size(); i++) r.c[i] = r.c[i] + b.c[i];
    r.normalize();
    return r;
}

template <class K>
Poly<K> operator-(const Poly<K>& a) {
    Poly<K> r = a;
    for (K& x : r.c) x = K(0) - x;
    return r;
}

template <class K>
Poly<K> operator-(const Poly<K>& a, const Poly<K>& b) {
    return a + (-b);
}

template <class K>
Poly<K> operator*(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, K(0));
    for (size_t i = 0; i < a.c.size(); i++)
        for (size_t j = 0; j < b.c.size(); j++) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    r.normalize();
    return r;
}

template <class K>
Poly<K> operator*(const K& s, const Poly<K>& a) {
    Poly<K> r = a;
    for (K& x : r.c) x = s * x;
    r.normalize();
    return r;
}

// Division with remainder; the divisor's leading coefficient must be
// invertible.
template <class K>
std::pair<Poly<K>, Poly<K>> poly_divrem(const Poly<K>& a, const Poly<K>& b) {
    if (b.is_zero()) throw std::domain_error("poly_divrem: division by zero polynomial");
    Poly<K> q, r = a;
    K inv_lead = K(1) / b.lead();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        long d = r.degree() - b.degree();
        K f = r.lead() * inv_lead;
        if (q.c.size() < static_cast<size_t>(d + 1)) q.c.resize(static_cast<size_t>(d + 1), K(0));
        q.c[static_cast<size_t>(d)] = q.c[static_cast<size_t>(d)] + f;
        for (long i = 0; i <= b.degree(); i++) {
            size_t idx = static_cast<size_t>(i + d);
            r.c[idx] = r.c[idx] - f * b.c[static_cast<size_t>(i)];
        }
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

template <class K>
Poly<K> poly_div_exact(const Poly<K>& a, const Poly<K>& b) {
    auto [q, r] = poly_divrem(a, b);
    if (!r.is_zero()) throw std::domain_error("poly_div_exact: not divisible");
    return q;
}

template <class K>
Poly<K> poly_monic(const Poly<K>& a) {
    if (a.is_zero()) return a;
    K inv = K(1) / a.lead();
    return inv * a;
}

// Monic gcd by the Euclidean algorithm.
template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    a.normalize();
    b.normalize();
    while (!b.is_zero()) {
        auto [q, r] = poly_divrem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return poly_monic(a);
}

// Extended gcd: returns (g, u, v) monic g with u a + v b = g.
template <class K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> poly_xgcd(Poly<K> a, Poly<K> b) {
    Poly<K> u0(K(1)), v0, u1, v1(K(1));
    while (!b.is_zero()) {
        auto [q, r] = poly_divrem(a, b);
        a = std::move(b);
        b = std::move(r);
        Poly<K> u2 = u0 - q * u1, v2 = v0 - q * v1;
        u0 = std::move(u1);
        v0 = std::move(v1);
        u1 = std::move(u2);
        v1 = std::move(v2);
    }
    if (a.is_zero()) return {a, u0, v0};
    K inv = K(1) / a.lead();
    return {inv * a, inv * u0, inv * v0};
}

template <class K>
Poly<K> poly_derivative(const Poly<K>& a) {
    Poly<K> r;
    for (long i = 1; i <= a.degree(); i++) r.c.push_back(K(i) * a.c[static_cast<size_t>(i)]);
    r.normalize();
    return r;
}

template <class K>
K poly_eval(const Poly<K>& a, const K& x) {
    K acc(0);
    for (long i = a.degree(); i >= 0; i--) acc = acc * x + a.c[static_cast<size_t>(i)];
    return acc;
}

// Composition with x + s (Taylor shift).
template <class K>
Poly<K> poly_shift(const Poly<K>& a, const K& s) {
    Poly<K> r = a;
    long n = r.degree();
    for (long i = 0; i < n; i++)
        for (long j = n - 1; j >= i; j--) r.c[static_cast<size_t>(j)] = r.c[static_cast<size_t>(j)] + s * r.c[static_cast<size_t>(j + 1)];
    return r;
}

template <class K>
Poly<K> poly_pow(const Poly<K>& a, long e) {
    Poly<K> r(K(1));
    for (long i = 0; i < e; i++) r = r * a;
    return r;
}

// x^deg * a(1/x), the coefficient reversal used by the substitution x -> 1/z.
template <class K>
Poly<K> poly_reverse(const Poly<K>& a) {
    Poly<K> r = a;
    std::reverse(r.c.begin(), r.c.end());
    r.normalize();
    return r;
}

// Resultant by the Euclidean PRS over the fraction field.
template <class K>
K poly_resultant(Poly<K> f, Poly<K> g) {
    f.normalize();
    g.normalize();
    if (f.is_zero() || g.is_zero()) return K(0);
    K acc(1);
    bool neg = false;
    while (g.degree() > 0) {
        auto [q, r] = poly_divrem(f, g);
        long df = f.degree(), dg = g.degree(), dr = r.is_zero() ? -1 : r.degree();
        if (r.is_zero()) return K(0);
        // res(f, g) = (-1)^{df dg} lc(g)^{df - dr} res(g, r)
        if ((df % 2) && (dg % 2)) neg = !neg;
        K lg = g.lead();
        K pw(1);
        for (long i = 0; i < df - dr; i++) pw = pw * lg;
        acc = acc * pw;
        f = std::move(g);
        g = std::move(r);
    }
    // deg g == 0: res(f, c) = c^{deg f}
    K c0 = g.c[0];
    K pw(1);
    for (long i = 0; i < f.degree(); i++) pw = pw * c0;
    acc = acc * pw;
    return neg ? K(0) - acc : acc;
}

using PolyQ = Poly<Rat>;

// Integer content scaling: returns primitive integer coefficients and does
// not change the roots.
inline std::vector<Int> poly_primitive_int(const PolyQ& a) {
    Int den(1);
    for (const Rat& q : a.c) den = lcm(den, q.get_den());
    std::vector<Int> out;
    Int g(0);
    for (const Rat& q : a.c) {
        Int v = q.get_num() * (den / q.get_den());
        out.push_back(v);
        g = gcd(g, v);
    }
    if (g != 0)
        for (Int& v : out) v /= g;
    return out;
}

// Squarefree decomposition (Yun): returns factors so that
// a = lead * prod f_i^i with the f_i monic squarefree and pairwise coprime.
inline std::vector<PolyQ> squarefree_decomposition(const PolyQ& a) {
    std::vector<PolyQ> out;
    if (a.degree() <= 0) return out;
    PolyQ f = poly_monic(a);
    PolyQ fp = poly_derivative(f);
    PolyQ g = poly_gcd(f, fp);
    PolyQ w = poly_div_exact(f, g);
    PolyQ y = poly_div_exact(fp, g);
    while (w.degree() > 0) {
        PolyQ z = y - poly_derivative(w);
        PolyQ fi = poly_gcd(w, z);
        out.push_back(fi);
        w = poly_div_exact(w, fi);
        y = poly_div_exact(z, fi);
    }
    return out;
}

inline PolyQ squarefree_part(const PolyQ& a) {
    if (a.degree() <= 0) return poly_monic(a);
    PolyQ f = poly_monic(a);
    PolyQ g = poly_gcd(f, poly_derivative(f));
    return poly_div_exact(f, g);
}

// ----- rational functions -----

// num/den with den monic and gcd(num, den) = 1.
template <class K>
struct RatFuncT {
    Poly<K> num, den;

    RatFuncT() : den(K(1)) {}
    explicit RatFuncT(const K& x) : num(x), den(K(1)) {}
    RatFuncT(Poly<K> n, Poly<K> d) {
        if (d.is_zero()) throw std::domain_error("RatFuncT: zero denominator");
        Poly<K> g = poly_gcd(n, d);
        if (g.degree() > 0) {
            n = poly_div_exact(n, g);
            d = poly_div_exact(d, g);
        }
        K inv = K(1) / d.lead();
        num = inv * n;
        den = inv * d;
    }

    bool is_zero() const { return num.is_zero(); }
    bool is_poly() const { return den.degree() == 0; }

    static RatFuncT of_poly(Poly<K> p) {
        RatFuncT r;
        r.num = std::move(p);
        r.den = Poly<K>(K(1));
        return r;
    }
    static RatFuncT x() { return of_poly(Poly<K>::x()); }
};

template <class K>
bool k_is_zero(const RatFuncT<K>& f) {
    return f.is_zero();
}

template <class K>
bool operator==(const RatFuncT<K>& a, const RatFuncT<K>& b) {
    return a.num == b.num && a.den == b.den;
}

template <class K>
RatFuncT<K> operator+(const RatFuncT<K>& a, const RatFuncT<K>& b) {
    return RatFuncT<K>(a.num * b.den + b.num * a.den, a.den * b.den);
}
template <class K>
RatFuncT<K> operator-(const RatFuncT<K>& a) {
    RatFuncT<K> r = a;
    r.num = -r.num;
    return r;
}
template <class K>
RatFuncT<K> operator-(const RatFuncT<K>& a, const RatFuncT<K>& b) {
    return a + (-b);
}
template <class K>
RatFuncT<K> operator*(const RatFuncT<K>& a, const RatFuncT<K>& b) {
    return RatFuncT<K>(a.num * b.num, a.den * b.den);
}
template <class K>
RatFuncT<K> operator/(const RatFuncT<K>& a, const RatFuncT<K>& b) {
    if (b.is_zero()) throw std::domain_error("RatFuncT: division by zero");
    return RatFuncT<K>(a.num * b.den, a.den * b.num);
}

template <class K>
RatFuncT<K> rf_derivative(const RatFuncT<K>& f) {
    return RatFuncT<K>(poly_derivative(f.num) * f.den - f.num * poly_derivative(f.den), f.den * f.den);
}

// Order of vanishing of f at the roots of the (squarefree, monic,
// nonconstant) polynomial q: positive for zeros, negative for poles.
template <class K>
long rf_valuation(const RatFuncT<K>& f, const Poly<K>& q) {
    if (f.is_zero()) throw std::domain_error("rf_valuation of zero");
    auto count = [&](Poly<K> p) {
        long v = 0;
        while (true) {
            auto [quo, rem] = poly_divrem(p, q);
            if (!rem.is_zero()) break;
            v++;
            p = quo;
        }
        return v;
    };
    return count(f.num) - count(f.den);
}

template <class K>
K rf_eval(const RatFuncT<K>& f, const K& x) {
    K d = poly_eval(f.den, x);
    if (k_is_zero(d)) throw std::domain_error("rf_eval: pole");
    return poly_eval(f.num, x) / d;
}

// f(1/x) as a rational function.
template <class K>
RatFuncT<K> rf_compose_recip(const RatFuncT<K>& f) {
    if (f.is_zero()) return f;
    long dn = f.num.degree(), dd = f.den.degree();
    long d = std::max(dn, dd);
    // f(1/x) = x^{d-dn} rev(num) / (x^{d-dd} rev(den))
    Poly<K> n = poly_reverse(f.num) * Poly<K>::monomial(K(1), d - dn);
    Poly<K> dq = poly_reverse(f.den) * Poly<K>::monomial(K(1), d - dd);
    return RatFuncT<K>(n, dq);
}

using RatFunc = RatFuncT<Rat>;

// Partial fractions w.r.t. pairwise coprime denominator pieces:
// num/ (d_1 ... d_k) = sum n_i / d_i (+ polynomial part, returned first).
inline std::pair<PolyQ, std::vector<PolyQ>> partial_fractions(const PolyQ& num, const std::vector<PolyQ>& dens) {
    PolyQ d(Rat(1));
    for (const PolyQ& di : dens) d = d * di;
    auto [polypart, rem] = poly_divrem(num, d);
    std::vector<PolyQ> parts;
    for (const PolyQ& di : dens) {
        PolyQ cof = poly_div_exact(d, di);
        auto [g, u, v] = poly_xgcd(cof, di);
        if (g.degree() != 0) throw std::domain_error("partial_fractions: factors not coprime");
        // rem/d = rem * u / di + rem * v / cof   (since u cof + v di = 1)
        auto [q, ni] = poly_divrem(rem * u, di);
        (void)q;
        parts.push_back(ni);
    }
    return {polypart, parts};
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

} // namespace orefactor

#endif
