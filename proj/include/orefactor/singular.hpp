#ifndef OREFACTOR_SINGULAR_HPP
#define OREFACTOR_SINGULAR_HPP

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "orefactor/ore.hpp"
#include "orefactor/reconstruct.hpp"

namespace orefactor {

using PolyNF = Poly<NFElem>;

// Splits off the rational roots of a rational polynomial: isolate
// numerically, identify with degree-1 reconstruction, confirm by exact
// division. Returns the roots with multiplicities and the rational-root-free
// cofactor (monic).
struct RationalRoots {
    std::vector<std::pair<Rat, long>> roots;
    PolyQ cofactor;
};

inline RationalRoots rational_roots(const PolyQ& f_in) {
    RationalRoots out;
    PolyQ f = poly_monic(f_in);
    if (f.degree() <= 0) {
        out.cofactor = f;
        return out;
    }
    long hbits = 16;
    for (const Rat& c : f.c) {
        hbits = std::max<long>(hbits, static_cast<long>(mpz_sizeinbase(c.get_num().get_mpz_t(), 2)));
        hbits = std::max<long>(hbits, static_cast<long>(mpz_sizeinbase(c.get_den().get_mpz_t(), 2)));
    }
    for (Prec p : {Prec(192), Prec(512)}) {
        bool progress = true;
        while (progress && f.degree() > 0) {
            progress = false;
            std::vector<std::pair<Ball, long>> enc;
            try {
                enc = isolate_roots(poly_to_ballpoly(f, p + 64), p);
            } catch (const Failure&) {
                break;
            }
            for (auto& [b, m] : enc) {
                auto cand = reconstruct_algebraic(b, 1, hbits + 32);
                if (!cand || !cand->is_rational()) continue;
                Rat r = cand->rational_value();
                PolyQ lin;
                lin.c = {-r, Rat(1)};
                long mult = 0;
                while (true) {
                    auto [q, rem] = poly_divrem(f, lin);
                    if (!rem.is_zero()) break;
                    f = q;
                    mult++;
                }
                if (mult > 0) {
                    out.roots.emplace_back(r, mult);
                    progress = true;
                }
            }
        }
        if (f.degree() <= 0) break;
    }
    out.cofactor = f;
    return out;
}

// One conjugacy class of singular points: the roots of a monic polynomial
// over Q (degree 1 for a rational point), with local data computed over the
// corresponding extension.
struct SingularClass {
    PolyQ minpoly;                            // monic, squarefree
    std::shared_ptr<const NumberField> field; // null for rational points
    bool regular = true;
    PolyNF indicial;                          // monic of degree ord(L) when regular
    // exact exponents, available when the class is rational and the
    // indicial polynomial splits (partially) over Q
    std::vector<std::pair<Rat, long>> rational_exponents;
    PolyQ irrational_exponent_poly; // rational-root-free cofactor (degree-1 classes)
};

struct SingularPoint {
    size_t cls = 0;
    Ball location;                 // isolates one root of the class polynomial
    std::optional<Rat> rational;   // exact location when degree-1
};

struct SingularityData {
    long order = 0;
    bool fuchsian = true;
    std::vector<SingularClass> classes;   // finite classes
    std::vector<SingularPoint> points;    // finite points, one per root
    bool infinity_singular = false;
    SingularClass infinity;               // valid when infinity_singular
};

namespace detail {

// alpha (alpha-1) ... (alpha-k+1)
inline PolyNF falling_factorial_nf(long k) {
    PolyNF r(NFElem(1));
    PolyNF alpha = PolyNF::x();
    for (long j = 0; j < k; j++) r = r * (alpha - PolyNF(NFElem(j)));
    return r;
}

inline Poly<NFElem> lift_poly_nf(const PolyQ& p, const std::shared_ptr<const NumberField>& F) {
    (void)F;
    Poly<NFElem> r;
    for (const Rat& c : p.c) r.c.push_back(NFElem(c));
    r.normalize();
    return r;
}

} // namespace detail

// Indicial data of a monic operator at the roots of the (squarefree, monic)
// class polynomial qcls. Throws SplitDetected if the modulus proves
// reducible mid-computation.
inline SingularClass analyze_class(const OrePoly& L, const PolyQ& qcls) {
    SingularClass out;
    out.minpoly = qcls;
    long r = L.order();
    std::shared_ptr<const NumberField> F;
    NFElem theta;
    if (qcls.degree() == 1) {
        theta = NFElem(-qcls.c[0]);
    } else {
        auto nf = std::make_shared<NumberField>();
        nf->minpoly = qcls;
        auto roots = isolate_roots(poly_to_ballpoly(qcls, 192), 128);
        nf->isolator = roots.front().first;
        F = nf;
        PolyQ rep;
        rep.c = {Rat(0), Rat(1)};
        theta = NFElem(F, rep);
        out.field = F;
    }
    PolyNF xm = PolyNF::x() - PolyNF(theta); // x - theta over the class field

    // c_k = value at theta of (x-theta)^{r-k} a_k(x); Fuchs regularity
    // means the limit exists, i.e. val(a_k) >= k - r.
    std::vector<NFElem> cval(static_cast<size_t>(r + 1), NFElem(0));
    cval[static_cast<size_t>(r)] = NFElem(1);
    for (long k = 0; k <= r; k++) {
        RatFunc a = (k == r) ? RatFunc(Rat(1)) : L.coeff(k);
        if (a.is_zero()) continue;
        // valuation over Q[x] w.r.t. qcls equals the (x-theta)-valuation
        long vnum = 0, vden = 0;
        {
            PolyQ n = a.num;
            while (true) {
                auto [q2, rem] = poly_divrem(n, qcls);
                if (!rem.is_zero()) break;
                n = q2;
                vnum++;
            }
            PolyQ d = a.den;
            while (true) {
                auto [q2, rem] = poly_divrem(d, qcls);
                if (!rem.is_zero()) break;
                d = q2;
                vden++;
            }
        }
        long v = vnum - vden;
        long e = (r - k) + v;
        if (e < 0) {
            out.regular = false;
            continue;
        }
        if (e > 0) continue; // contributes zero to the indicial polynomial
        // unit part evaluated at theta, over the class field
        PolyNF n = detail::lift_poly_nf(a.num, F);
        PolyNF d = detail::lift_poly_nf(a.den, F);
        for (long i = 0; i < vnum; i++) n = poly_div_exact(n, xm);
        for (long i = 0; i < vden; i++) d = poly_div_exact(d, xm);
        NFElem num_v = poly_eval(n, theta);
        NFElem den_v = poly_eval(d, theta);
        cval[static_cast<size_t>(k)] = num_v / den_v;
    }
    if (out.regular) {
        PolyNF ind;
        for (long k = 0; k <= r; k++) {
            if (k_is_zero(cval[static_cast<size_t>(k)])) continue;
            ind = ind + NFElem(cval[static_cast<size_t>(k)]) * detail::falling_factorial_nf(k);
        }
        out.indicial = ind;
        if (qcls.degree() == 1) {
            PolyQ indq;
            for (const NFElem& e : ind.c) indq.c.push_back(e.rational_value());
            indq.normalize();
            RationalRoots rr = rational_roots(indq);
            out.rational_exponents = rr.roots;
            out.irrational_exponent_poly = rr.cofactor;
        }
    }
    return out;
}

// x -> 1/z substitution: returns the operator in z whose solutions are
// y(1/z); d/dx becomes -z^2 d/dz.
inline OrePoly ore_at_infinity(const OrePoly& L) {
    OrePoly T; // -z^2 d
    {
        PolyQ z2;
        z2.c = {Rat(0), Rat(0), Rat(-1)};
        T = ore_scale(RatFunc::of_poly(z2), OrePoly::d());
    }
    OrePoly out;
    OrePoly Tpow = OrePoly::of_func(RatFunc(Rat(1)));
    for (long k = 0; k <= L.order(); k++) {
        const RatFunc& a = L.coeff(k);
        if (!a.is_zero()) out = out + ore_scale(rf_compose_recip(a), Tpow);
        if (k < L.order()) Tpow = ore_mul(T, Tpow);
    }
    return out;
}

// Full singularity analysis of a (not necessarily monic) operator.
inline SingularityData singularity_data(const OrePoly& L_in) {
    OrePoly L = ore_monic(L_in);
    SingularityData out;
    out.order = L.order();
    // finite singular support: union of coefficient denominators
    PolyQ D(Rat(1));
    for (long k = 0; k < L.order(); k++) {
        const RatFunc& a = L.coeff(k);
        if (a.is_zero()) continue;
        PolyQ g = poly_gcd(D, a.den);
        D = poly_monic(D * poly_div_exact(a.den, g));
    }
    PolyQ S = squarefree_part(D);
    if (S.degree() > 0) {
        RationalRoots rr = rational_roots(S);
        std::vector<PolyQ> class_polys;
        for (auto& [root, mult] : rr.roots) {
            (void)mult;
            PolyQ lin;
            lin.c = {-root, Rat(1)};
            class_polys.push_back(lin);
        }
        if (rr.cofactor.degree() > 0) class_polys.push_back(rr.cofactor);
        // analyze each class, refining on dynamic-evaluation splits
        for (size_t i = 0; i < class_polys.size(); i++) {
            try {
                SingularClass cls = analyze_class(L, class_polys[i]);
                if (!cls.regular) out.fuchsian = false;
                size_t cls_idx = out.classes.size();
                out.classes.push_back(std::move(cls));
                // instantiate the points of the class
                const PolyQ& q = out.classes[cls_idx].minpoly;
                if (q.degree() == 1) {
                    SingularPoint pt;
                    pt.cls = cls_idx;
                    pt.rational = -q.c[0];
                    pt.location = Ball::of_real_rat(*pt.rational, 128);
                    out.points.push_back(std::move(pt));
                } else {
                    auto roots = isolate_roots(poly_to_ballpoly(q, 192), 128);
                    for (auto& [b, m] : roots) {
                        (void)m;
                        SingularPoint pt;
                        pt.cls = cls_idx;
                        pt.location = b;
                        out.points.push_back(std::move(pt));
                    }
                }
            } catch (const SplitDetected& s) {
                PolyQ g = s.factor;
                class_polys.push_back(g);
                class_polys.push_back(poly_div_exact(class_polys[i], g));
            }
        }
    }
    // the point at infinity
    OrePoly Linf = ore_monic(ore_at_infinity(L));
    bool inf_sing = false;
    for (long k = 0; k < Linf.order(); k++) {
        const RatFunc& a = Linf.coeff(k);
        if (a.is_zero()) continue;
        PolyQ z = PolyQ::x();
        if (rf_valuation(a, z) < 0) inf_sing = true;
    }
    out.infinity_singular = inf_sing;
    if (inf_sing) {
        PolyQ z = PolyQ::x();
        out.infinity = analyze_class(Linf, z);
        if (!out.infinity.regular) out.fuchsian = false;
    }
    // deterministic point order
    std::sort(out.points.begin(), out.points.end(), [](const SingularPoint& a, const SingularPoint& b) {
        int c = mpfr_cmp(a.location.re.p(), b.location.re.p());
        if (c != 0) return c < 0;
        return mpfr_cmp(a.location.im.p(), b.location.im.p()) < 0;
    });
    return out;
}

inline bool fuchs_check(const OrePoly& L) { return singularity_data(L).fuchsian; }

// Ball enclosures (with multiplicity) of the local exponents at one point of
// a class, at the requested precision.
inline std::vector<std::pair<Ball, long>> class_exponents_at(const SingularClass& cls, const Ball& location,
                                                             Prec p) {
    BallPoly ind;
    if (cls.minpoly.degree() == 1) {
        for (const NFElem& e : cls.indicial.c) ind.c.push_back(Ball::of_real_rat(e.rational_value(), p));
    } else {
        Ball theta = refine_root(cls.minpoly, location, p + 32);
        for (const NFElem& e : cls.indicial.c) ind.c.push_back(nf_eval_ball(e, theta, p));
    }
    return isolate_roots(ind, p);
}

// True exact exponent test used by generator validation: every exponent of
// the (degree-1) class is rational and known.
inline bool class_exponents_all_rational(const SingularClass& cls) {
    if (!cls.regular || cls.minpoly.degree() != 1) return false;
    return cls.irrational_exponent_poly.degree() <= 0;
}

} // namespace orefactor

#endif
