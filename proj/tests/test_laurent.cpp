#include "doctest.h"
#include "gen.hpp"

#include "kpf/error.hpp"
#include "kpf/laurent.hpp"

using namespace kpf;

namespace {

Rational q(long a, long b)
{
    Rational r(a, b);
    r.canonicalize();
    return r;
}

LaurentSeries random_laurent(testgen::Gen &g, int lo, int hi)
{
    std::map<int, Rational> c;
    for (int d = lo; d <= hi; ++d)
        if (g.coin())
            c.emplace(d, g.small_rational());
    c[lo] = g.small_rational() + 7; // small_rational lies in [-5, 5]
    return LaurentSeries(std::move(c));
}

} // namespace

TEST_SUITE("laurent")
{
    TEST_CASE("arithmetic")
    {
        LaurentSeries x = LaurentSeries::monomial(1, 1);
        LaurentSeries xi = LaurentSeries::monomial(1, -1);
        CHECK(x * xi == LaurentSeries::constant(1));
        CHECK((x + xi).valuation() == -1);
        CHECK((x - x).is_zero());

        // (1 - X)^{-1} = 1 + X + X^2 + ... + O(X^4)
        LaurentSeries one_minus_x = LaurentSeries::constant(1) - x;
        LaurentSeries geo = inverse(one_minus_x, 4);
        CHECK(geo.prec() == 4);
        for (int d = 0; d < 4; ++d)
            CHECK(geo.coeff(d) == 1);
        CHECK_THROWS_AS(geo.coeff(4), Error);
        CHECK_THROWS_AS(inverse(LaurentSeries(), 3), Error);
    }

    TEST_CASE("multiplication and inversion roundtrip")
    {
        testgen::Gen g(91);
        for (int i = 0; i < 40; ++i) {
            int lo = g.uniform(-4, 3);
            LaurentSeries a = random_laurent(g, lo, lo + g.uniform(0, 4));
            const int prec = -lo + g.uniform(1, 6);
            LaurentSeries b = inverse(a, prec);
            LaurentSeries one = a * b;
            // a exact, b known below prec: the product is 1 below prec + lo
            CHECK(one.prec() == prec + lo);
            CHECK(one == LaurentSeries::constant(1).truncated(one.prec()));
            // inverting the truncated inverse recovers a where known
            LaurentSeries back = inverse(b, prec + 2 * lo + 4);
            CHECK(back.prec() == prec + 2 * lo);
            CHECK(back == a);
        }
    }

    TEST_CASE("Euler step product")
    {
        CHECK(euler_step_product(1) == LaurentSeries({{0, 1}, {-1, 1}}));
        LaurentSeries p2 = euler_step_product(2);
        CHECK(p2.coeff(-1) == 1);
        CHECK(p2.coeff(-2) == q(1, 4));
        CHECK_THROWS_AS(euler_step_product(0), Error);

        for (int n = 1; n <= 25; ++n) {
            // repeated multiplication of the step factor
            LaurentSeries step({{0, 1}, {-1, q(1, n)}});
            LaurentSeries prod = LaurentSeries::constant(1);
            for (int i = 0; i < n; ++i)
                prod = prod * step;
            LaurentSeries p = euler_step_product(n);
            CHECK(prod == p);
            CHECK(p.valuation() == -n);
            Rational n_pow = 1; // n^m
            for (int m = 0; m <= n; ++m, n_pow *= n)
                CHECK(p.coeff(-m) == binomial(n, m) / n_pow);
        }
    }

    TEST_CASE("coefficient limit sandwich")
    {
        CHECK(coefficient_limit_check(0, 5).value == 1);
        for (int n = 1; n <= 30; ++n)
            CHECK(coefficient_limit_check(1, n).scaled == 1);
        CoefficientLimit c = coefficient_limit_check(2, 100);
        CHECK(c.scaled == q(99, 100));
        CHECK(c.lower == q(99, 100));
        CHECK(c.sandwich_ok);
        for (int m = 0; m <= 6; ++m)
            for (int n = std::max(m, 1); n <= 60; ++n)
                CHECK(coefficient_limit_check(m, n).sandwich_ok);
        CHECK_THROWS_AS(coefficient_limit_check(4, 3), Error);
    }

    TEST_CASE("divergence witness")
    {
        DivergenceReport r = divergence_witness({1, 2, 3}, 5);
        REQUIRE(r.rows.size() == 3);
        CHECK(r.rows[0].lowest_degree == -1);
        CHECK(r.rows[1].lowest_degree == -2);
        CHECK(r.rows[2].lowest_degree == -3);
        CHECK(r.verdict == kDivergenceVerdict);

        // degree -2: C(n,2)/n^2 = (n-1)/(2n), increasing towards 1/2
        DivergenceReport s = divergence_witness({2, 5, 10, 100}, 2);
        Rational prev = 0;
        for (const auto &row : s.rows) {
            Rational v = row.coeffs.at(2).value;
            CHECK(v == q(row.n - 1, 2L * row.n));
            CHECK(v > prev);
            CHECK(v < q(1, 2));
            prev = v;
        }
    }
}
