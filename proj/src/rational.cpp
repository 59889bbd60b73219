#include "kpf/rational.hpp"

#include "kpf/error.hpp"

#include <cctype>

namespace kpf {

namespace {

bool is_integer_text(std::string_view s)
{
    if (s.empty())
        return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

mpz_class parse_integer(std::string_view s)
{
    if (!is_integer_text(s))
        throw Error(ErrorCode::parse_error, "not an integer: '" + std::string(s) + "'");
    std::string t(s[0] == '+' ? s.substr(1) : s);
    return mpz_class(t, 10);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_integer(text));
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0)
        throw Error(ErrorCode::parse_error, "zero denominator: '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational &r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational binomial(long beta, long k)
{
    Rational r(1);
    for (long j = 0; j < k; ++j) {
        r *= Rational(beta - j);
        r /= Rational(j + 1);
    }
    return r;
}

Rational factorial(long n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

GaussRational GaussRational::inverse() const
{
    if (is_zero())
        throw Error(ErrorCode::not_a_unit, "zero has no inverse");
    Rational n = norm();
    return {re / n, -im / n};
}

GaussRational &GaussRational::operator*=(const GaussRational &o)
{
    if (o.is_real()) {
        re *= o.re;
        im *= o.re;
        return *this;
    }
    if (is_real()) {
        im = re * o.im;
        re *= o.re;
        return *this;
    }
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
}

void GaussRational::mul_i(long n)
{
    // (re + i im)(i n) = -n im + i n re
    Rational r = -im * n;
    im = re * n;
    re = std::move(r);
}

void fma_into(GaussRational &acc, const GaussRational &b, const GaussRational &c)
{
    thread_local Rational tmp;
    if (c.is_real()) {
        if (sgn(b.re) != 0) {
            tmp = b.re * c.re;
            acc.re += tmp;
        }
        if (sgn(b.im) != 0) {
            tmp = b.im * c.re;
            acc.im += tmp;
        }
        return;
    }
    if (b.is_real()) {
        tmp = b.re * c.re;
        acc.re += tmp;
        tmp = b.re * c.im;
        acc.im += tmp;
        return;
    }
    tmp = b.re * c.re;
    acc.re += tmp;
    tmp = b.im * c.im;
    acc.re -= tmp;
    tmp = b.re * c.im;
    acc.im += tmp;
    tmp = b.im * c.re;
    acc.im += tmp;
}

std::string to_string(const GaussRational &g)
{
    if (g.is_real())
        return to_string(g.re);
    return "(" + to_string(g.re) + (sgn(g.im) < 0 ? "-" : "+") + to_string(abs(g.im)) + "i)";
}

} // namespace kpf
