#pragma once

// Formal Laurent series Q((X)) and the Euler-method product (1 + X^{-1}/n)^n,
// whose coefficients converge degree by degree while its lowest degree -n
// escapes every Laurent series: the group of units of R((X)) is not regular
// in Omori's sense.

#include "kpf/rational.hpp"

#include <climits>
#include <map>
#include <string>
#include <vector>

namespace kpf {

// sum a_d X^d + O(X^prec). Finitely many stored degrees, all < prec, so the
// support is bounded below by construction. prec = kExactPrec marks an exact
// (finite) Laurent polynomial.
class LaurentSeries {
public:
    static constexpr int kExactPrec = INT_MAX;

    LaurentSeries() = default;
    explicit LaurentSeries(std::map<int, Rational> coeffs, int prec = kExactPrec);

    static LaurentSeries monomial(Rational c, int degree);
    static LaurentSeries constant(Rational c) { return monomial(std::move(c), 0); }

    const std::map<int, Rational> &coeffs() const { return c_; }
    int prec() const { return prec_; }
    bool is_exact() const { return prec_ == kExactPrec; }
    bool is_zero() const { return c_.empty(); }
    // Throws Error(insufficient_depth) at or above prec.
    Rational coeff(int degree) const;
    // Lowest degree with a non-zero coefficient. Throws Error(not_a_unit) on a
    // zero series.
    int valuation() const;
    int top_degree() const;

    LaurentSeries truncated(int prec) const;

    LaurentSeries &operator+=(const LaurentSeries &o);
    LaurentSeries &operator-=(const LaurentSeries &o);
    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries &b) { return a += b; }
    friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries &b) { return a -= b; }
    friend LaurentSeries operator*(const LaurentSeries &a, const LaurentSeries &b);
    // Equal on every degree below both precisions.
    friend bool operator==(const LaurentSeries &a, const LaurentSeries &b);

    std::string str() const;

private:
    std::map<int, Rational> c_;
    int prec_ = kExactPrec;
};

// a^{-1} + O(X^prec). With a = X^N (a_N + a_{N+1} X + ...) the coefficients
// of b = a^{-1} satisfy b_{-N} = 1/a_N and
//   b_{-N+p} = -(1/a_N) sum_{i=1}^{p} a_{N+i} b_{-N+p-i}.
// A non-exact a caps prec at its own relative precision. Throws
// Error(not_a_unit) on zero.
LaurentSeries inverse(const LaurentSeries &a, int prec);

// (1 + X^{-1}/n)^n exactly: the coefficient of X^{-m} is C(n,m)/n^m for
// 0 <= m <= n. Throws Error(config_error) for n < 1.
LaurentSeries euler_step_product(int n);

struct CoefficientLimit {
    int m;
    int n;
    Rational value;    // C(n,m)/n^m
    Rational scaled;   // value * m!
    Rational lower;    // 1 - m(m-1)/(2n)
    bool sandwich_ok;  // lower <= scaled <= 1
};

// Throws Error(config_error) unless 0 <= m <= n.
CoefficientLimit coefficient_limit_check(int m, int n);

struct DivergenceRow {
    int n;
    int lowest_degree;
    std::vector<CoefficientLimit> coeffs; // m = 0 .. min(mMax, n)
};

struct DivergenceReport {
    std::vector<DivergenceRow> rows; // in the order given
    // every sandwich holds, and for each m the scaled coefficient is
    // non-decreasing along increasing n
    bool pointwise_convergent;
    // lowest degree is -n for every row, strictly decreasing along increasing n
    bool order_unbounded;
    std::string verdict;
};

inline constexpr const char *kDivergenceVerdict = "pointwise convergent, order-unbounded";

DivergenceReport divergence_witness(const std::vector<int> &n_list, int m_max);

} // namespace kpf
