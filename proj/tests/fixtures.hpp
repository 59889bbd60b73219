#pragma once

// Shared inputs and oracles for the unit and acceptance suites. The oracles
// never call factorize.

#include "gen.hpp"

#include "kpf/kp.hpp"

namespace kpf::fixtures {

inline RingElem three_mode()
{
    return FourierElem({{-1, GaussRational(1, 2)}, {1, GaussRational(1, -2)}, {2, Rational(1, 3)}});
}

inline LaxOp lax(const RingElem &u, const RingTag &ring = RingTag::fourier())
{
    return LaxOp(PsiOp::d(ring, 1, kExactDepth) + PsiOp::monomial(u, -1, kExactDepth));
}

// Exact barred group member.
inline TPsiSeries random_member(testgen::Gen &g, int v_max, int k_max, const RingTag &ring = RingTag::fourier())
{
    TPsiSeries u(ring, v_max);
    for (const auto &m : monomials_up_to(v_max, k_max)) {
        if (m.is_one()) {
            u.set(m, PsiOp::identity(ring, kExactDepth) + g.op(ring, -2, -1, kExactDepth, 0.5));
            continue;
        }
        if (g.uniform(0, 2) == 0)
            continue;
        u.set(m, g.op(ring, -2, m.valuation(), kExactDepth, 0.4));
    }
    u.set_barred(true);
    return u;
}

// Exact S in G_{A_t} and exact Y in the barred differential group.
inline FactorPair random_factors(testgen::Gen &g, int v_max, int k_max, const RingTag &ring = RingTag::fourier())
{
    TPsiSeries s(ring, v_max), y(ring, v_max);
    for (const auto &m : monomials_up_to(v_max, k_max)) {
        PsiOp sm = g.op(ring, -3, -1, kExactDepth, 0.5);
        if (m.is_one()) {
            s.set(m, PsiOp::identity(ring, kExactDepth) + sm);
            y.set(m, PsiOp::identity(ring, kExactDepth));
            continue;
        }
        s.set(m, sm);
        y.set(m, g.op(ring, 0, m.valuation(), kExactDepth, 0.5));
    }
    s.set_barred(true);
    y.set_barred(true);
    return {s, y};
}

// Brute-force integration of dL/dt_k = [(L^k)_+, L] coefficient by coefficient:
// L_n = (1/n_k) [(L^k)_+, L]_{n - e_k} with k the smallest index in n. Every
// slot on the right has valuation < |n|.
inline TPsiSeries picard(const PsiOp &l0, int k_max, int v_max, int d0)
{
    TPsiSeries l(l0.ring(), v_max);
    l.set(TimeMonomial(), l0.truncated(d0));
    for (const auto &n : monomials_up_to(v_max, k_max)) {
        if (n.is_one())
            continue;
        int k = 1;
        while (n.exponent(k) == 0)
            ++k;
        TPsiSeries known = l.truncated_valuation(n.valuation() - 1);
        TPsiSeries rhs = t_bracket(t_proj_plus(t_power(known, k)), known);
        l.set(n, rhs.at(*n.divided_by(TimeMonomial::t(k))) * Rational(1, n.exponent(k)));
    }
    return l;
}

// Coefficient of d^order in every slot, differentiated `derivs` times, as a
// multiplication operator.
inline TPsiSeries scalar_slots(const TPsiSeries &s, int order, int derivs = 0)
{
    TPsiSeries r(s.ring(), s.vmax());
    for (const auto &[m, p] : s.terms())
        r.set(m, PsiOp::monomial(p.coeff(order).derive(derivs), 0, kExactDepth));
    return r;
}

inline TPsiSeries dx(const TPsiSeries &s, int n) { return scalar_slots(s, 0, n); }

struct Elimination {
    TPsiSeries from_zs;   // -(1/2) E0' + (E1'' - E1_{t2}) / 4
    TPsiSeries kp1;       // (3/4) u_{t2 t2} - (u_{t3} - (1/4) u''' - 3 u u')'
};

// On an arbitrary t-dependent L = d + u d^{-1} + v d^{-2} + ..., with
// B2 = d^2 + 2u and B3 = d^3 + 3u d + w, w = 3u' + 3v, the d^1 and d^0
// components of the (2,3) zero-curvature residual are
//   E1 = -3 u_{t2} + 2 w' - 3 u'',
//   E0 = 2 u_{t3} - w_{t2} + w'' - 2 u''' - 6 u u',
// and eliminating v leaves the KP-I expression. Both sides are compared
// through valuation vMax - 5: the (2,3) residual reaches vMax - 3 and E1_{t2}
// two less. Time derivatives of u are taken directly, never from a flow.
inline Elimination kp1_elimination(const TPsiSeries &l)
{
    const int v = l.vmax() - 5;
    auto cut = [v](const TPsiSeries &x) { return x.truncated_valuation(v); };
    TPsiSeries z = zs_residual(l, 2, 3);
    TPsiSeries e1 = scalar_slots(z, 1), e0 = scalar_slots(z, 0);
    TPsiSeries lhs = cut(dx(e0, 1)) * Rational(-1, 2) + (cut(dx(e1, 2)) - cut(d_t(e1, 2))) * Rational(1, 4);

    TPsiSeries u = scalar_slots(l, -1);
    TPsiSeries inner =
        cut(d_t(u, 3)) - cut(dx(u, 3)) * Rational(1, 4) - cut(t_mul(u, dx(u, 1))) * Rational(3);
    TPsiSeries rhs = cut(d_t(d_t(u, 2), 2)) * Rational(3, 4) - dx(inner, 1);
    return {lhs, rhs};
}

// Random t-dependent L = d + (orders -1..-3) in every slot, reliable to `depth`.
inline TPsiSeries random_lax_series(testgen::Gen &g, int v_max, int k_max, int depth)
{
    const RingTag F = RingTag::fourier();
    TPsiSeries l(F, v_max);
    for (const auto &m : monomials_up_to(v_max, k_max)) {
        PsiOp p = g.op(F, -3, -1, depth, 0.7);
        if (m.is_one())
            p += PsiOp::d(F, 1, kExactDepth);
        l.set(m, p);
    }
    return l;
}

} // namespace kpf::fixtures
