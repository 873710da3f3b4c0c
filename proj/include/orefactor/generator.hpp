#ifndef OREFACTOR_GENERATOR_HPP
#define OREFACTOR_GENERATOR_HPP

#include <stdexcept>
#include <vector>

#include "orefactor/singular.hpp"

namespace orefactor {

// Exponent multiplicity profile of generated reducible instances: either
// every local exponent sits in its own class mod Z, or all of them share a
// single class (realized with integer exponents).
enum class ExponentProfile { distinct, single };

inline long accessory_count(long r, long nu) {
    long raw = (r - 1) * (r * nu - r - 2);
    return raw <= 0 ? 0 : raw / 2;
}

// Everything that determines a generated operator. exponents[s][k] for
// s < nu are the finite points, exponents[nu] is infinity.
struct FuchsianSpec {
    long order = 0;
    std::vector<Rat> sing;
    std::vector<std::vector<Rat>> exponents;
    std::vector<Rat> accessory;
};

namespace genimpl {

inline PolyQ falling_factorial(long k) {
    PolyQ r(Rat(1));
    PolyQ x = PolyQ::x();
    for (long j = 0; j < k; j++) r = r * (x - PolyQ(Rat(j)));
    return r;
}

// G_m(b) = (-1)^{r-m} b (b+1) ... (b+r-m-1)
inline PolyQ infinity_basis(long r, long m) {
    PolyQ g(Rat(1));
    PolyQ x = PolyQ::x();
    for (long j = 0; j < r - m; j++) g = g * (x + PolyQ(Rat(j)));
    if ((r - m) % 2) g = -g;
    return g;
}

inline PolyQ from_roots(const std::vector<Rat>& roots) {
    PolyQ p(Rat(1));
    PolyQ x = PolyQ::x();
    for (const Rat& a : roots) p = p * (x - PolyQ(a));
    return p;
}

// Triangular expansion of T in a monomial-degree-graded basis: basis[j] has
// degree exactly deg_of(j); returns the coefficients.
inline std::vector<Rat> triangular_expand(PolyQ T, const std::vector<PolyQ>& basis) {
    std::vector<Rat> out(basis.size(), Rat(0));
    for (size_t i = 0; i < basis.size(); i++) {
        const PolyQ& b = basis[i];
        long d = b.degree();
        Rat coeff = T.coeff(d) / b.lead();
        out[i] = coeff;
        T = T - coeff * b;
    }
    if (!T.is_zero()) throw std::logic_error("triangular_expand: basis did not span");
    return out;
}

inline PolyQ lagrange(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
    PolyQ acc;
    PolyQ x = PolyQ::x();
    for (size_t s = 0; s < xs.size(); s++) {
        PolyQ num(Rat(1));
        Rat den(1);
        for (size_t t = 0; t < xs.size(); t++) {
            if (t == s) continue;
            num = num * (x - PolyQ(xs[t]));
            den *= xs[s] - xs[t];
        }
        Rat c = ys[s] / den;
        acc = acc + c * num;
    }
    return acc;
}

} // namespace genimpl

// Deterministic construction of the operator from its spec, via the ansatz
// p_m = N_m / D^m with D the monic singularity polynomial, deg N_m <=
// m(nu-1), point values of N_m prescribed by the finite indicial
// polynomials, the top coefficient prescribed by the indicial polynomial at
// infinity, and the remaining coefficients filled from spec.accessory.
inline OrePoly build_fuchsian(const FuchsianSpec& spec) {
    long r = spec.order;
    long nu = static_cast<long>(spec.sing.size());
    if (r < 1 || nu < 1) throw std::domain_error("build_fuchsian: need order >= 1 and at least one singularity");
    for (size_t i = 0; i < spec.sing.size(); i++)
        for (size_t j = i + 1; j < spec.sing.size(); j++)
            if (spec.sing[i] == spec.sing[j]) throw std::domain_error("build_fuchsian: repeated singularity");

    // gamma[m][s]: value of (x - xi_s)^m p_m at xi_s, from the finite
    // indicial polynomials; A[m]: asymptotic coefficient at infinity.
    std::vector<std::vector<Rat>> gamma(static_cast<size_t>(r + 1), std::vector<Rat>(static_cast<size_t>(nu), Rat(0)));
    for (long s = 0; s < nu; s++) {
        PolyQ T = genimpl::from_roots(spec.exponents[static_cast<size_t>(s)]);
        std::vector<PolyQ> basis;
        for (long m = 0; m <= r; m++) basis.push_back(genimpl::falling_factorial(r - m));
        std::vector<Rat> g = genimpl::triangular_expand(T, basis);
        if (g[0] != 1) throw std::logic_error("build_fuchsian: finite indicial expansion not monic");
        for (long m = 1; m <= r; m++) gamma[static_cast<size_t>(m)][static_cast<size_t>(s)] = g[static_cast<size_t>(m)];
    }
    std::vector<Rat> A(static_cast<size_t>(r + 1), Rat(0));
    {
        PolyQ T = genimpl::from_roots(spec.exponents[static_cast<size_t>(nu)]);
        if (r % 2) T = -T; // match leading coefficients: ind_inf = (-1)^r prod(b - b_k)
        std::vector<PolyQ> basis;
        for (long m = 0; m <= r; m++) basis.push_back(genimpl::infinity_basis(r, m));
        std::vector<Rat> a = genimpl::triangular_expand(T, basis);
        if (a[0] != 1) throw std::logic_error("build_fuchsian: infinity indicial expansion not monic");
        for (long m = 1; m <= r; m++) A[static_cast<size_t>(m)] = a[static_cast<size_t>(m)];
    }

    PolyQ D = genimpl::from_roots(spec.sing);
    size_t acc_used = 0;
    OrePoly L;
    L.c.assign(static_cast<size_t>(r + 1), RatFunc());
    L.c[static_cast<size_t>(r)] = RatFunc(Rat(1));
    for (long m = 1; m <= r; m++) {
        // point values of N_m
        std::vector<Rat> vals(static_cast<size_t>(nu));
        for (long s = 0; s < nu; s++) {
            Rat prod(1);
            for (long t = 0; t < nu; t++) {
                if (t == s) continue;
                Rat diff = spec.sing[static_cast<size_t>(s)] - spec.sing[static_cast<size_t>(t)];
                for (long e = 0; e < m; e++) prod *= diff;
            }
            vals[static_cast<size_t>(s)] = gamma[static_cast<size_t>(m)][static_cast<size_t>(s)] * prod;
        }
        PolyQ Nm = genimpl::lagrange(spec.sing, vals);
        long wdeg = m * (nu - 1) - nu; // degree of the free cofactor
        if (wdeg < 0) {
            // fully determined: the top coefficient must agree with infinity
            if (m * (nu - 1) >= 0 && Nm.coeff(m * (nu - 1)) != A[static_cast<size_t>(m)]) {
                if (nu == 1 && m * (nu - 1) == 0) {
                    // nu = 1: infinity data is derived, not prescribed
                } else {
                    throw std::domain_error("build_fuchsian: exponent data violates the Fuchs relation");
                }
            }
        } else {
            PolyQ W;
            W.c.assign(static_cast<size_t>(wdeg + 1), Rat(0));
            W.c[static_cast<size_t>(wdeg)] = A[static_cast<size_t>(m)];
            for (long j = 0; j < wdeg; j++) {
                Rat a = acc_used < spec.accessory.size() ? spec.accessory[acc_used] : Rat(0);
                acc_used++;
                W.c[static_cast<size_t>(j)] = a;
            }
            W.normalize();
            Nm = Nm + D * W;
        }
        PolyQ Dm(Rat(1));
        for (long e = 0; e < m; e++) Dm = Dm * D;
        L.c[static_cast<size_t>(r - m)] = RatFunc(Nm, Dm);
    }
    L.normalize();
    return L;
}

// For nu = 1 the infinity exponents are forced by the finite ones; this
// fills them so build_fuchsian gets a consistent table. (Euler-type
// operator: solutions x^a have exponent -a at infinity.)
inline void complete_infinity_exponents_nu1(FuchsianSpec& spec) {
    spec.exponents.resize(2);
    spec.exponents[1].clear();
    for (const Rat& a : spec.exponents[0]) spec.exponents[1].push_back(-a);
}

// Draws an exponent table satisfying the Fuchs relation
// sum = r(r-1)(nu-1)/2 exactly.
inline FuchsianSpec draw_fuchsian_spec(long r, const std::vector<Rat>& sing, Rng& rng, ExponentProfile profile,
                                       long height = 10) {
    long nu = static_cast<long>(sing.size());
    FuchsianSpec spec;
    spec.order = r;
    spec.sing = sing;
    spec.exponents.assign(static_cast<size_t>(nu + 1), {});
    Rat target = Rat(r * (r - 1)) * Rat(nu - 1) / 2;
    if (nu == 1) {
        // finite exponents free; infinity derived
        std::vector<Rat>& ex = spec.exponents[0];
        for (long k = 0; k < r; k++) {
            Rat a = profile == ExponentProfile::single ? Rat(rng.uniform(-height, height))
                                                       : Rat(rng.uniform(-height, height), rng.uniform(2, 5));
            a.canonicalize();
            ex.push_back(a);
        }
        complete_infinity_exponents_nu1(spec);
    } else {
        Rat sum(0);
        for (long s = 0; s <= nu; s++) {
            for (long k = 0; k < r; k++) {
                if (s == nu && k == r - 1) break; // last exponent balances
                Rat a;
                if (profile == ExponentProfile::single) {
                    a = Rat(rng.uniform(-height, height));
                } else {
                    long den = rng.uniform(2, 5);
                    a = Rat(rng.uniform(-height, height), den);
                    a.canonicalize();
                }
                spec.exponents[static_cast<size_t>(s)].push_back(a);
                sum += a;
            }
        }
        spec.exponents[static_cast<size_t>(nu)].push_back(target - sum);
    }
    for (long i = 0; i < accessory_count(r, nu); i++) {
        Rat a(rng.uniform(-height, height), rng.uniform(1, 4));
        a.canonicalize();
        spec.accessory.push_back(a);
    }
    return spec;
}

inline OrePoly random_fuchsian(long r, const std::vector<Rat>& sing, std::uint64_t seed,
                               ExponentProfile profile = ExponentProfile::distinct, long height = 10) {
    Rng rng(seed);
    FuchsianSpec spec = draw_fuchsian_spec(r, sing, rng, profile, height);
    return build_fuchsian(spec);
}

struct ReducibleInstance {
    OrePoly L, L1, L2; // L = L2 * L1 by construction
    FuchsianSpec spec1, spec2;
};

// Product instances for the benchmark protocol: two random operators with
// the same singular support. Profile "distinct" arranges all exponents of
// the product distinct mod Z at every finite point; "single" uses integer
// exponents everywhere (one class mod Z).
inline ReducibleInstance random_reducible(long r1, long r2, const std::vector<Rat>& sing, std::uint64_t seed,
                                          ExponentProfile profile, long height = 10) {
    Rng rng(seed);
    long nu = static_cast<long>(sing.size());
    ReducibleInstance inst;
    for (int attempt = 0; attempt < 64; attempt++) {
        Rng sub = rng.split();
        FuchsianSpec s1 = draw_fuchsian_spec(r1, sing, sub, profile, height);
        FuchsianSpec s2 = draw_fuchsian_spec(r2, sing, sub, profile, height);
        if (profile == ExponentProfile::distinct) {
            // product exponents at xi: exps(L1) together with exps(L2) + r1;
            // require pairwise distinct mod Z at each finite point
            bool ok = true;
            for (long s = 0; s <= nu && ok; s++) {
                // at infinity the second factor's exponents shift by -r1
                Rat shift = (s == nu) ? Rat(-r1) : Rat(r1);
                std::vector<Rat> all = s1.exponents[static_cast<size_t>(s)];
                for (const Rat& e : s2.exponents[static_cast<size_t>(s)]) all.push_back(e + shift);
                for (size_t i = 0; i < all.size() && ok; i++)
                    for (size_t j = i + 1; j < all.size(); j++) {
                        Rat d = all[i] - all[j];
                        if (d.get_den() == 1) {
                            ok = false;
                            break;
                        }
                    }
            }
            if (!ok) continue;
        }
        inst.spec1 = s1;
        inst.spec2 = s2;
        inst.L1 = build_fuchsian(s1);
        inst.L2 = build_fuchsian(s2);
        inst.L = ore_mul(inst.L2, inst.L1);
        return inst;
    }
    throw std::domain_error("random_reducible: could not draw a valid exponent table");
}

// Gauss hypergeometric operator, monic form. Singularities 0, 1, infinity;
// local exponents {0, 1-c}, {0, c-a-b}, {a, b}. Reducible over Qbar(x) iff
// one of a, b, c-a, c-b is an integer.
inline OrePoly hypergeometric_operator(const Rat& a, const Rat& b, const Rat& c) {
    PolyQ x = PolyQ::x();
    PolyQ den = x * (PolyQ(Rat(1)) - x); // x(1-x)
    PolyQ pnum;
    pnum.c = {c, -(a + b + 1)};
    pnum.normalize();
    RatFunc p(pnum, den);
    RatFunc q(PolyQ(-(a * b)), den);
    OrePoly L;
    L.c = {q, p, RatFunc(Rat(1))};
    L.normalize();
    return L;
}

inline bool hypergeometric_reducible(const Rat& a, const Rat& b, const Rat& c) {
    auto is_int = [](const Rat& q) { return q.get_den() == 1; };
    return is_int(a) || is_int(b) || is_int(c - a) || is_int(c - b);
}

} // namespace orefactor

#endif
