#include "doctest.h"
#include "gen.hpp"

using namespace kpf;

namespace {

FourierElem e(long n, GaussRational c = GaussRational(1)) { return FourierElem::mode(n, std::move(c)); }
PolyElem x(int d, Rational c = 1) { return PolyElem::monomial(d, std::move(c)); }
const GaussRational I{0, 1};

} // namespace

TEST_SUITE("coeffring")
{
    TEST_CASE("rational parsing and printing")
    {
        CHECK(parse_rational("6/4") == Rational(3, 2));
        CHECK(parse_rational("-7") == Rational(-7));
        CHECK(to_string(parse_rational("-3/6")) == "-1/2");
        CHECK(to_string(parse_rational("4/2")) == "2");
        CHECK_THROWS_AS(parse_rational("1/0"), Error);
        CHECK_THROWS_AS(parse_rational("a/2"), Error);
        CHECK(binomial(-1, 3) == Rational(-1));
        CHECK(binomial(-2, 2) == Rational(3));
        CHECK(binomial(2, 3) == Rational(0));
    }

    TEST_CASE("addition")
    {
        CHECK((RingElem(e(0)) + RingElem(e(0, -1))).is_zero());
        CHECK(RingElem(e(1, Rational(1, 2))) + RingElem(e(1, Rational(1, 2))) == RingElem(e(1)));
        ZSeries<FourierElem> a(2, {e(0, 2), e(1), {}});
        ZSeries<FourierElem> b(2, {{}, e(-1), {}});
        ZSeries<FourierElem> s = a;
        s += b;
        CHECK(s.coeff(0) == e(0, 2));
        CHECK(s.coeff(1) == (FourierElem({{1, 1}, {-1, 1}})));
        CHECK(s.coeff(2).is_zero());
    }

    TEST_CASE("ring mismatch")
    {
        CHECK_THROWS_AS(RingElem(e(1)) + RingElem(x(1)), Error);
        CHECK_THROWS_AS(RingElem(e(1)) * RingElem(ZSeries<FourierElem>(1)), Error);
    }

    TEST_CASE("multiplication")
    {
        CHECK(RingElem(e(1)) * RingElem(e(-1)) == RingElem(e(0)));
        CHECK(RingElem(x(2)) * RingElem(x(3)) == RingElem(x(5)));
        // (1 + z a)(1 + z b) = 1 + z (a + b) at z_max = 1
        FourierElem a = e(1, 3), b = e(-2, I);
        ZSeries<FourierElem> p(1, {e(0), a}), q(1, {e(0), b});
        auto r = p * q;
        CHECK(r.z_max() == 1);
        CHECK(r.coeff(0) == e(0));
        CHECK(r.coeff(1) == (FourierElem({{1, 3}, {-2, I}})));
        // different truncations meet at the smaller one
        ZSeries<FourierElem> w(3, {e(0), e(0), e(0), e(0)});
        CHECK((RingElem(w) * RingElem(p)).tag().z_max == 1);
    }

    TEST_CASE("derive")
    {
        CHECK(RingElem(e(1)).derive() == RingElem(e(1, I)));
        CHECK(RingElem(e(0, 5)).derive().is_zero());
        CHECK(RingElem(x(3)).derive() == RingElem(x(2, 3)));
        CHECK(RingElem(e(2)).derive(3) == RingElem(e(2, GaussRational(0, -8))));
    }

    TEST_CASE("antiderive")
    {
        CHECK(RingElem(e(1)).antiderive() == RingElem(e(1, GaussRational(0, -1))));
        CHECK_THROWS_AS(RingElem(e(0)).antiderive(), NonZeroMean);
        try {
            RingElem(FourierElem({{0, 3}, {1, 1}})).antiderive();
            FAIL("expected NonZeroMean");
        } catch (const NonZeroMean &err) {
            CHECK(err.code() == ErrorCode::non_zero_mean);
            CHECK(err.mean() == Scalar(GaussRational(3)));
        }
        CHECK(RingElem(x(0)).antiderive() == RingElem(x(1)));
        CHECK(RingElem(x(2, 3)).antiderive() == RingElem(x(3)));
    }

    TEST_CASE("integration functional")
    {
        CHECK(RingElem(FourierElem({{0, 3}, {1, 1}})).integrate() == Scalar(GaussRational(3)));
        ZSeries<FourierElem> z(1, {{}, FourierElem({{0, 2}, {1, 1}})});
        Scalar s = RingElem(z).integrate();
        CHECK(s.z_max() == 1);
        CHECK(s.coeff(0).is_zero());
        CHECK(s.coeff(1) == GaussRational(2));
        CHECK_THROWS_AS(RingElem(x(1)).integrate(), Error);
    }

    TEST_CASE("inverse")
    {
        CHECK(RingElem(e(0, 2)).inverse() == RingElem(e(0, Rational(1, 2))));
        CHECK(RingElem(e(3, I)).inverse() == RingElem(e(-3, GaussRational(0, -1))));
        CHECK_THROWS_AS(RingElem(FourierElem({{0, 1}, {1, 1}})).inverse(), Error);
        CHECK_THROWS_AS(RingElem(x(1)).inverse(), Error);
        CHECK(RingElem(x(0, -4)).inverse() == RingElem(x(0, Rational(-1, 4))));
        // (1 + z a)^{-1} = 1 - z a + z^2 a^2 at z_max = 2
        FourierElem a({{1, 1}, {-1, 2}});
        ZSeries<FourierElem> u(2, {e(0), a, {}});
        ZSeries<FourierElem> expect(2, {e(0), -a, a * a});
        CHECK(u.inverse() == expect);
        CHECK((u * u.inverse()) == ZSeries<FourierElem>(2, {e(0), {}, {}}));
        ZSeries<FourierElem> bad(1, {{}, e(0)});
        CHECK_THROWS_AS(bad.inverse(), Error);
    }

    TEST_CASE("properties on randomized elements")
    {
        testgen::Gen g(11);
        const RingTag tags[] = {RingTag::fourier(), RingTag::poly(), RingTag::fourier_z(2), RingTag::poly_z(1)};
        for (const auto &tag : tags) {
            for (int trial = 0; trial < 25; ++trial) {
                RingElem a = g.elem(tag), b = g.elem(tag), c = g.elem(tag);
                CHECK((a * b) * c == a * (b * c));
                CHECK(a * b == b * a);
                CHECK(a * (b + c) == a * b + a * c);
                CHECK((a * b).derive() == a.derive() * b + a * b.derive());
                if (tag.base == BaseRing::fourier) {
                    CHECK(a.derive().integrate().is_zero());
                    CHECK((a.derive() * b).integrate() == Scalar::zero(tag.z_max) - (a * b.derive()).integrate());
                    RingElem d = a.derive();
                    CHECK(d.antiderive().derive() == d);
                } else {
                    CHECK(a.antiderive().derive() == a);
                }
            }
        }
    }

    TEST_CASE("z-series with support {0} agree with the base ring")
    {
        testgen::Gen g(12);
        for (int trial = 0; trial < 20; ++trial) {
            FourierElem a = g.fourier(), b = g.fourier();
            RingTag tag = RingTag::fourier_z(2);
            RingElem za = RingElem::lift(tag, a), zb = RingElem::lift(tag, b);
            CHECK(za * zb == RingElem::lift(tag, a * b));
            CHECK(za + zb == RingElem::lift(tag, a + b));
            CHECK(za.derive() == RingElem::lift(tag, a.derive()));
        }
    }
}
