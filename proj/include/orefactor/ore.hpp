#ifndef OREFACTOR_ORE_HPP
#define OREFACTOR_ORE_HPP

#include <utility>
#include <vector>

#include "orefactor/numfield.hpp"
#include "orefactor/rat.hpp"

namespace orefactor {

// Skew polynomial in d/dx over K(x), with the commutation rule
// d * a(x) = a(x) * d + a'(x). Coefficients are stored by ascending power
// of the derivation.
template <class K>
struct OrePolyT {
    std::vector<RatFuncT<K>> c;

    OrePolyT() = default;

    long order() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    void normalize() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    RatFuncT<K> coeff(long i) const {
        return (i >= 0 && i <= order()) ? c[static_cast<size_t>(i)] : RatFuncT<K>();
    }
    const RatFuncT<K>& lead() const { return c.back(); }
    bool is_monic() const {
        return !is_zero() && c.back() == RatFuncT<K>(K(1));
    }

    static OrePolyT d() {
        OrePolyT p;
        p.c = {RatFuncT<K>(), RatFuncT<K>(K(1))};
        return p;
    }
    static OrePolyT of_func(RatFuncT<K> f) {
        OrePolyT p;
        p.c = {std::move(f)};
        p.normalize();
        return p;
    }
    static OrePolyT of_coeffs(std::vector<RatFuncT<K>> v) {
        OrePolyT p;
        p.c = std::move(v);
        p.normalize();
        return p;
    }
};

using OrePoly = OrePolyT<Rat>;
using OrePolyNF = OrePolyT<NFElem>;

template <class K>
bool operator==(const OrePolyT<K>& a, const OrePolyT<K>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (size_t i = 0; i < a.c.size(); i++)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}

template <class K>
OrePolyT<K> operator+(const OrePolyT<K>& a, const OrePolyT<K>& b) {
    OrePolyT<K> r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < a.c.size(); i++) r.c[i] = r.c[i] + a.c[i];
    for (size_t i = 0; i < b.c.size(); i++) r.c[i] = r.c[i] + b.c[i];
    r.normalize();
    return r;
}

template <class K>
OrePolyT<K> operator-(const OrePolyT<K>& a) {
    OrePolyT<K> r = a;
    for (auto& f : r.c) f = -f;
    return r;
}

template <class K>
OrePolyT<K> operator-(const OrePolyT<K>& a, const OrePolyT<K>& b) {
    return a + (-b);
}

// Left multiplication by a function coefficient.
template <class K>
OrePolyT<K> ore_scale(const RatFuncT<K>& f, const OrePolyT<K>& a) {
    OrePolyT<K> r = a;
    for (auto& g : r.c) g = f * g;
    r.normalize();
    return r;
}

// d * N = N' + (terms shifted one order up), from d a = a d + a'.
template <class K>
OrePolyT<K> ore_d_mul(const OrePolyT<K>& a) {
    OrePolyT<K> r;
    r.c.resize(a.c.size() + 1);
    for (size_t j = 0; j < a.c.size(); j++) {
        r.c[j + 1] = r.c[j + 1] + a.c[j];
        r.c[j] = r.c[j] + rf_derivative(a.c[j]);
    }
    r.normalize();
    return r;
}

template <class K>
OrePolyT<K> ore_mul(const OrePolyT<K>& a, const OrePolyT<K>& b) {
    OrePolyT<K> r;
    if (a.is_zero() || b.is_zero()) return r;
    OrePolyT<K> dib = b; // d^i * b
    for (long i = 0; i <= a.order(); i++) {
        if (!a.c[static_cast<size_t>(i)].is_zero()) r = r + ore_scale(a.c[static_cast<size_t>(i)], dib);
        if (i < a.order()) dib = ore_d_mul(dib);
    }
    return r;
}

template <class K>
OrePolyT<K> ore_pow(const OrePolyT<K>& a, long e) {
    OrePolyT<K> r = OrePolyT<K>::of_func(RatFuncT<K>(K(1)));
    for (long i = 0; i < e; i++) r = ore_mul(r, a);
    return r;
}

// Right Euclidean division: L = Q * R + Rem with ord(Rem) < ord(R).
// The remainder test is the exact Las Vegas validator of the pipeline.
template <class K>
std::pair<OrePolyT<K>, OrePolyT<K>> right_divmod(const OrePolyT<K>& L, const OrePolyT<K>& R) {
    if (R.is_zero()) throw std::domain_error("right_divmod: zero divisor");
    OrePolyT<K> q, rem = L;
    RatFuncT<K> inv_lead = RatFuncT<K>(K(1)) / R.lead();
    while (!rem.is_zero() && rem.order() >= R.order()) {
        long d = rem.order() - R.order();
        RatFuncT<K> f = rem.lead() * inv_lead;
        // q += f d^d ; rem -= (f d^d) R
        OrePolyT<K> term;
        term.c.assign(static_cast<size_t>(d + 1), RatFuncT<K>());
        term.c[static_cast<size_t>(d)] = f;
        q = q + term;
        rem = rem - ore_mul(term, R);
    }
    return {q, rem};
}

template <class K>
bool right_divides(const OrePolyT<K>& L, const OrePolyT<K>& R) {
    return right_divmod(L, R).second.is_zero();
}

// Anti-morphism d -> -d, a(x) -> a(x): (AB)* = B* A*.
// Using d^i a = sum_k C(i,k) a^{(k)} d^{i-k}:
// (a_i d^i)* = (-1)^i d^i a_i = (-1)^i sum_k C(i,k) a_i^{(k)} d^{i-k}.
template <class K>
OrePolyT<K> adjoint(const OrePolyT<K>& L) {
    OrePolyT<K> r;
    if (L.is_zero()) return r;
    r.c.assign(L.c.size(), RatFuncT<K>());
    for (long i = 0; i <= L.order(); i++) {
        RatFuncT<K> f = L.c[static_cast<size_t>(i)];
        if (f.is_zero()) continue;
        if (i % 2) f = -f;
        Rat binom(1);
        for (long k = 0; k <= i; k++) {
            RatFuncT<K> term = RatFuncT<K>(K(binom.get_num().get_si())) * f;
            r.c[static_cast<size_t>(i - k)] = r.c[static_cast<size_t>(i - k)] + term;
            f = rf_derivative(f);
            binom = binom * Rat(i - k) / Rat(k + 1);
        }
    }
    r.normalize();
    return r;
}

template <class K>
OrePolyT<K> ore_monic(const OrePolyT<K>& L) {
    if (L.is_zero() || L.is_monic()) return L;
    RatFuncT<K> inv = RatFuncT<K>(K(1)) / L.lead();
    OrePolyT<K> r = ore_scale(inv, L);
    r.c.back() = RatFuncT<K>(K(1));
    return r;
}

// Max degree appearing in any normalized coefficient.
template <class K>
long ore_coeff_degree(const OrePolyT<K>& L) {
    long d = 0;
    for (const auto& f : L.c) {
        if (f.is_zero()) continue;
        d = std::max(d, std::max(f.num.degree(), f.den.degree()));
    }
    return d;
}

inline OrePolyNF ore_lift_nf(const OrePoly& L) {
    OrePolyNF r;
    for (const RatFunc& f : L.c) {
        Poly<NFElem> n, d;
        for (const Rat& q : f.num.c) n.c.push_back(NFElem(q));
        for (const Rat& q : f.den.c) d.c.push_back(NFElem(q));
        n.normalize();
        d.normalize();
        r.c.push_back(d.is_zero() ? RatFuncT<NFElem>() : RatFuncT<NFElem>(n, d));
    }
    r.normalize();
    return r;
}

// True when every coefficient is rational; used to lower factors back to Q.
inline bool ore_nf_is_rational(const OrePolyNF& L) {
    for (const auto& f : L.c) {
        for (const NFElem& e : f.num.c)
            if (!e.is_rational()) return false;
        for (const NFElem& e : f.den.c)
            if (!e.is_rational()) return false;
    }
    return true;
}

inline OrePoly ore_nf_to_rational(const OrePolyNF& L) {
    OrePoly r;
    for (const auto& f : L.c) {
        PolyQ n, d;
        for (const NFElem& e : f.num.c) n.c.push_back(e.rational_value());
        for (const NFElem& e : f.den.c) d.c.push_back(e.rational_value());
        n.normalize();
        d.normalize();
        r.c.push_back(d.is_zero() ? RatFunc() : RatFunc(n, d));
    }
    r.normalize();
    return r;
}

// ----- companion and adjoint-transform matrices -----

template <class K>
using FuncMatrix = std::vector<std::vector<RatFuncT<K>>>;

// Companion matrix C of a monic operator: W' = C W for Wronskian matrices,
// bottom row (-a_0, ..., -a_{r-1}).
template <class K>
FuncMatrix<K> companion_matrix(const OrePolyT<K>& L) {
    long r = L.order();
    FuncMatrix<K> C(static_cast<size_t>(r), std::vector<RatFuncT<K>>(static_cast<size_t>(r)));
    for (long i = 0; i + 1 < r; i++) C[static_cast<size_t>(i)][static_cast<size_t>(i + 1)] = RatFuncT<K>(K(1));
    for (long j = 0; j < r; j++) C[static_cast<size_t>(r - 1)][static_cast<size_t>(j)] = -L.c[static_cast<size_t>(j)];
    return C;
}

// P(x) from the recurrence B_0 = I, B_{k+1} = B_k' - B_k C^T; row k+1 of P
// is the last row of B_k. Conjugating transposed-inverse monodromy by P(x0)
// transports the monodromy group of L to that of the adjoint.
template <class K>
FuncMatrix<K> adjoint_transform_matrix(const OrePolyT<K>& L) {
    long r = L.order();
    FuncMatrix<K> C = companion_matrix(L);
    FuncMatrix<K> B(static_cast<size_t>(r), std::vector<RatFuncT<K>>(static_cast<size_t>(r)));
    for (long i = 0; i < r; i++) B[static_cast<size_t>(i)][static_cast<size_t>(i)] = RatFuncT<K>(K(1));
    FuncMatrix<K> P(static_cast<size_t>(r), std::vector<RatFuncT<K>>(static_cast<size_t>(r)));
    for (long k = 0; k < r; k++) {
        P[static_cast<size_t>(k)] = B[static_cast<size_t>(r - 1)];
        if (k + 1 == r) break;
        FuncMatrix<K> next(static_cast<size_t>(r), std::vector<RatFuncT<K>>(static_cast<size_t>(r)));
        for (long i = 0; i < r; i++)
            for (long j = 0; j < r; j++) {
                RatFuncT<K> s = rf_derivative(B[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                for (long l = 0; l < r; l++)
                    s = s - B[static_cast<size_t>(i)][static_cast<size_t>(l)] * C[static_cast<size_t>(j)][static_cast<size_t>(l)];
                next[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
            }
        B = std::move(next);
    }
    return P;
}

template <class K>
std::vector<std::vector<K>> func_matrix_eval(const FuncMatrix<K>& M, const K& x0) {
    std::vector<std::vector<K>> R(M.size(), std::vector<K>(M.empty() ? 0 : M[0].size(), K(0)));
    for (size_t i = 0; i < M.size(); i++)
        for (size_t j = 0; j < M[i].size(); j++) R[i][j] = rf_eval(M[i][j], x0);
    return R;
}

// ----- factor degree bound -----

struct DegreeBound {
    long bound = 0;
    bool certified = false; // the "return L" shortcut in the annihilator
                            // search is gated on this flag
};

// Heuristic default provider. A certified provider (van Hoeij-style bound)
// is an extension point; nothing in the pipeline assumes this one is tight.
template <class K>
DegreeBound factor_degree_bound(const OrePolyT<K>& L, long override_bound = 0) {
    DegreeBound b;
    long d = ore_coeff_degree(L);
    b.bound = std::max<long>(2 * std::max<long>(d, 1) * std::max<long>(L.order(), 1), override_bound);
    b.certified = false;
    return b;
}

} // namespace orefactor

#endif
