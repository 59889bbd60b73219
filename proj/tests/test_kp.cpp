#include "doctest.h"
#include "fixtures.hpp"

#include "kpf/kp.hpp"

using namespace kpf;
using namespace kpf::fixtures;

namespace {

const RingTag F = RingTag::fourier();

PsiOp dd(int order, int depth = kExactDepth, const RingTag &ring = F) { return PsiOp::d(ring, order, depth); }
TimeMonomial t(int i, int n = 1) { return TimeMonomial::t(i, n); }

} // namespace

TEST_SUITE("kp")
{
    TEST_CASE("Lax datum shape")
    {
        RingElem u = three_mode();
        CHECK_NOTHROW(lax(u));
        CHECK_THROWS_AS(LaxOp(dd(1) * Rational(2)), Error);
        CHECK_THROWS_AS(LaxOp(dd(1) + PsiOp::monomial(u, 0, kExactDepth)), Error);
        CHECK_THROWS_AS(LaxOp(dd(2)), Error);
    }

    TEST_CASE("trivial datum: L = d for all t")
    {
        SolveResult r = kp_solve(LaxOp(dd(1)), 2, 3, -4);
        TPsiSeries expect = TPsiSeries::constant(dd(1), 3);
        CHECK(r.l == expect);
        for (Check c : {Check::lax, Check::zs, Check::logderiv, Check::shape, Check::dressing})
            for (const auto &o : run_checks(LaxOp(dd(1)), r, {c}))
                CHECK_MESSAGE(o.pass, o.name);
    }

    TEST_CASE("solve agrees with Picard integration")
    {
        LaxOp l0 = lax(three_mode());
        SolveResult r = kp_solve(l0, 3, 3, -5);
        TPsiSeries p = picard(l0.op(), 3, 3, -16);
        CHECK(p.depth() <= -5);
        CHECK(r.l.depth() <= -5);
        CHECK(p == r.l);

        // a different datum gives a different flow
        LaxOp other = lax(three_mode() + RingElem(FourierElem({{3, 1}})));
        CHECK_FALSE(picard(other.op(), 3, 3, -16) == r.l);
    }

    TEST_CASE("residual battery on a solve")
    {
        LaxOp l0 = lax(three_mode());
        SolveResult r = kp_solve(l0, 3, 4, -6);
        std::set<Check> checks(all_checks().begin(), all_checks().end());
        checks.erase(Check::dressing);
        auto outs = run_checks(l0, r, checks);
        CHECK(outs.size() == 3 + 3 + 6 + 3 + 1 + 1);
        for (const auto &o : outs)
            CHECK_MESSAGE(o.pass, o.name << " " << o.detail);
        // zc components equal the S log-derivative
        for (int k = 1; k <= 3; ++k) {
            TPsiSeries zc = zc_component(r.l, k);
            TPsiSeries ds = t_mul(d_t(r.f.s, k), t_inverse(r.f.s).truncated_valuation(4 - k));
            CHECK(ds == zc);
        }
    }

    TEST_CASE("residuals detect a perturbed L")
    {
        LaxOp l0 = lax(three_mode());
        SolveResult r = kp_solve(l0, 3, 3, -5);
        TPsiSeries bad = r.l;
        bad.add(t(1), PsiOp::monomial(RingElem(FourierElem({{1, 1}})), -2, kExactDepth));
        CHECK_FALSE(lax_residual(bad, 1).is_zero());
        // order -2 cannot reach (L^2)_+; order -1 does
        CHECK(zs_residual(bad, 1, 2).is_zero());
        bad.add(t(1), PsiOp::monomial(RingElem(FourierElem({{1, 1}})), -1, kExactDepth));
        CHECK_FALSE(zs_residual(bad, 1, 2).is_zero());
        CHECK_FALSE(q_lax_residual(bad, 1) == QSeriesOp(F, 4));
    }

    TEST_CASE("KP-I constants from the (2,3) zero-curvature component")
    {
        testgen::Gen g(71);
        for (int i = 0; i < 3; ++i) {
            Elimination e = kp1_elimination(random_lax_series(g, 6, 3, -7));
            CHECK(e.from_zs == e.kp1);
            CHECK_FALSE(e.kp1.is_zero());
        }
    }

    TEST_CASE("KP-I residual")
    {
        LaxOp l0 = lax(three_mode());
        SolveResult r = kp_solve(l0, 3, 4, -6);
        CHECK(kp1_residual(r.l, 3).empty());
        CHECK_THROWS_AS(kp1_residual(r.l, 2), Error);
        TPsiSeries bad = r.l;
        bad.add(t(3), PsiOp::monomial(RingElem(FourierElem({{1, 1}})), -1, kExactDepth));
        CHECK_FALSE(kp1_residual(bad, 3).empty());
    }

    TEST_CASE("dressing")
    {
        CHECK(dressing(LaxOp(dd(1)), -5) == PsiOp::identity(F, -5));

        RingElem u = three_mode();
        PsiOp s = dressing(lax(u), -2);
        CHECK(s.coeff(-1) == -u.antiderive());

        // a constant d^{-1} coefficient has no periodic antiderivative
        try {
            dressing(lax(RingElem::one(F)), -3);
            CHECK(false);
        } catch (const NonZeroMean &e) {
            CHECK(e.step() == 1);
        }

        // s_{-2} always exists (u times the antiderivative of u has zero mean);
        // a mixed-frequency datum fails later
        try {
            dressing(lax(u), -6);
            CHECK(false);
        } catch (const NonZeroMean &e) {
            CHECK(e.step() >= 3);
        }

        // only positive frequencies: every product has zero mean
        RingElem pos = FourierElem({{1, 1}, {2, GaussRational(0, 1)}});
        PsiOp s0 = dressing(lax(pos), -7);
        PsiOp back = compose(compose(s0, dd(1)), psi_inverse(s0));
        CHECK(back.depth() <= -6);
        CHECK(back == lax(pos).op());
    }

    TEST_CASE("Hamiltonians")
    {
        // res L = u, res L^2 = u', res L^3 = u'' + 3u^2 for L = d + u d^{-1}
        RingElem u = FourierElem({{0, 2}, {1, 1}, {-1, 3}});
        PsiOp l = lax(u).op();
        CHECK(trace(l) == Scalar(GaussRational(2)));
        CHECK(hamiltonian(l, 1).is_zero());
        CHECK(hamiltonian(l, 2) == Scalar(GaussRational(Rational(3, 2) * 10)));

        LaxOp l0 = lax(three_mode());
        SolveResult r = kp_solve(l0, 3, 4, -6);
        for (int k = 1; k <= 3; ++k) {
            ScalarTSeries h = hamiltonian(r.l, k);
            for (const auto &[m, s] : h)
                CHECK((m.is_one() ? s == hamiltonian(l0.op(), k) : s.is_zero()));
        }
    }

    TEST_CASE("conservation on the z-series ring")
    {
        RingTag z = RingTag::fourier_z(2);
        RingElem u = ZSeries<FourierElem>(2, {std::get<FourierElem>(three_mode().storage()),
                                              FourierElem({{1, 1}, {-2, 2}}), FourierElem()});
        LaxOp l0 = lax(u, z);
        SolveResult r = kp_solve(l0, 3, 4, -6);
        for (const auto &o : run_checks(l0, r, {Check::conservation, Check::lax, Check::shape}))
            CHECK_MESSAGE(o.pass, o.name << " " << o.detail);
        CHECK_FALSE(hamiltonian(l0.op(), 2).coeff(1).is_zero());
    }

    TEST_CASE("functional derivative matches the directional derivative")
    {
        testgen::Gen g(72);
        for (int i = 0; i < 10; ++i) {
            PsiOp p = g.op(F, -3, 2, kExactDepth);
            PsiOp q = g.op(F, -3, 2, kExactDepth);
            for (int k = 2; k <= 3; ++k) {
                std::vector<Rational> a(k);
                a[k - 1] = 1;
                const int floor = -12;
                Scalar dir = directional_derivative(a, p, q, floor);
                CHECK(dir == pairing(functional_derivative(a, p, floor), q));

                // finite differences of the degree-k polynomial e -> Trace((P + eQ)^k)
                std::vector<Scalar> f;
                for (int e = 0; e <= k; ++e)
                    f.push_back(trace_polynomial(a, p + q * Rational(e), floor));
                Scalar slope = Scalar::zero(-1);
                for (int j = 1; j <= k; ++j) {
                    std::vector<Scalar> diff = f;
                    for (int r = 0; r < j; ++r)
                        for (std::size_t s = 0; s + 1 < diff.size(); ++s)
                            diff[s] = diff[s + 1] - diff[s];
                    slope += diff[0] * Rational(j % 2 ? 1 : -1, j);
                }
                CHECK(dir == slope);
            }
        }
    }

    TEST_CASE("q-scaled flows")
    {
        LaxOp l0 = lax(three_mode());
        SolveResult r = kp_solve(l0, 3, 4, -6);
        for (int k = 1; k <= 3; ++k)
            CHECK(q_lax_residual(r.l, k) == QSeriesOp(F, 5));
        CHECK(q_scale(r.l, 5, 1).satisfies_q_predicate());
    }

    TEST_CASE("each slot of L is a polynomial in the datum")
    {
        // (L^k)_+ has degree <= k - 1 in the coefficients of L, so a slot of
        // valuation v has degree <= 1 + v in a perturbation e of u0; finite
        // differences of order vMax + 2 vanish.
        const int v_max = 2;
        RingElem bump = FourierElem({{1, 1}, {-2, GaussRational(0, 1)}});
        std::vector<TPsiSeries> samples;
        for (int e = 0; e <= v_max + 2; ++e)
            samples.push_back(kp_solve(lax(three_mode() + bump * Rational(e)), 2, v_max, -3).l);
        for (const auto &m : monomials_up_to(v_max, 2)) {
            for (int a = -1; a >= -3; --a) {
                RingElem diff = RingElem::zero(F);
                for (int j = 0; j <= v_max + 2; ++j) {
                    Rational c = binomial(v_max + 2, j) * ((v_max + 2 - j) % 2 ? -1 : 1);
                    diff += samples[j].at(m).coeff(a) * c;
                }
                CHECK(diff.is_zero());
            }
        }
    }

    TEST_CASE("check names")
    {
        for (Check c : all_checks())
            CHECK(parse_check(to_string(c)) == c);
        CHECK_THROWS_AS(parse_check("nope"), Error);
    }
}
