#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace kpf {

// Arbitrary precision rationals. mpq_class keeps the canonical form
// (gcd(num, den) = 1, den > 0) through all arithmetic.
using Rational = mpq_class;

// Accepts "p/q" or "p"; throws Error(parse_error) otherwise or on q = 0.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational &r);

// Generalized binomial coefficient beta(beta-1)...(beta-k+1)/k!, valid for
// every integer beta.
Rational binomial(long beta, long k);

Rational factorial(long n);

// Element re + i*im of Q(i).
struct GaussRational {
    Rational re;
    Rational im;

    GaussRational() = default;
    GaussRational(Rational r) : re(std::move(r)) {}
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussRational(long r) : re(r) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }
    // Throws Error(not_a_unit) on zero.
    GaussRational inverse() const;

    GaussRational &operator+=(const GaussRational &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRational &operator-=(const GaussRational &o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussRational &operator*=(const Rational &s)
    {
        re *= s;
        im *= s;
        return *this;
    }
    GaussRational &operator*=(const GaussRational &o);

    // Multiply by i*n, the Fourier eigenvalue of d/dx on e^{inx}.
    void mul_i(long n);

    friend GaussRational operator-(const GaussRational &a) { return {-a.re, -a.im}; }
    friend GaussRational operator+(GaussRational a, const GaussRational &b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational &b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational &b) { return a *= b; }
    friend GaussRational operator*(GaussRational a, const Rational &s) { return a *= s; }
    friend bool operator==(const GaussRational &a, const GaussRational &b)
    {
        return a.re == b.re && a.im == b.im;
    }
};

// a += b * c without temporaries for the common accumulation pattern.
void fma_into(GaussRational &acc, const GaussRational &b, const GaussRational &c);

std::string to_string(const GaussRational &g);

} // namespace kpf
