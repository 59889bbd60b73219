#include "kpf/laurent.hpp"

#include "kpf/error.hpp"

#include <algorithm>
#include <sstream>

namespace kpf {

namespace {

void put(std::map<int, Rational> &c, int d, Rational v, int prec)
{
    if (d >= prec)
        return;
    auto it = c.find(d);
    if (it == c.end()) {
        if (sgn(v) != 0)
            c.emplace(d, std::move(v));
        return;
    }
    it->second += v;
    if (sgn(it->second) == 0)
        c.erase(it);
}

int add_prec(long a, long b)
{
    return static_cast<int>(std::min<long>(a + b, LaurentSeries::kExactPrec));
}

} // namespace

LaurentSeries::LaurentSeries(std::map<int, Rational> coeffs, int prec) : prec_(prec)
{
    for (auto &[d, v] : coeffs)
        put(c_, d, std::move(v), prec_);
}

LaurentSeries LaurentSeries::monomial(Rational c, int degree)
{
    return LaurentSeries({{degree, std::move(c)}});
}

Rational LaurentSeries::coeff(int degree) const
{
    if (degree >= prec_)
        throw Error(ErrorCode::insufficient_depth,
                    "coefficient of X^" + std::to_string(degree) + " lies beyond O(X^" + std::to_string(prec_) + ")");
    auto it = c_.find(degree);
    return it == c_.end() ? Rational(0) : it->second;
}

int LaurentSeries::valuation() const
{
    if (c_.empty())
        throw Error(ErrorCode::not_a_unit, "zero Laurent series has no valuation");
    return c_.begin()->first;
}

int LaurentSeries::top_degree() const
{
    if (c_.empty())
        throw Error(ErrorCode::not_a_unit, "zero Laurent series has no degree");
    return c_.rbegin()->first;
}

LaurentSeries LaurentSeries::truncated(int prec) const
{
    return LaurentSeries(c_, std::min(prec, prec_));
}

LaurentSeries &LaurentSeries::operator+=(const LaurentSeries &o)
{
    prec_ = std::min(prec_, o.prec_);
    for (auto it = c_.lower_bound(prec_); it != c_.end();)
        it = c_.erase(it);
    for (const auto &[d, v] : o.c_)
        put(c_, d, v, prec_);
    return *this;
}

LaurentSeries &LaurentSeries::operator-=(const LaurentSeries &o)
{
    LaurentSeries neg = o;
    for (auto &[d, v] : neg.c_)
        v = -v;
    return *this += neg;
}

LaurentSeries operator*(const LaurentSeries &a, const LaurentSeries &b)
{
    if (a.is_zero() || b.is_zero())
        return LaurentSeries({}, std::min(a.is_zero() ? a.prec_ : add_prec(a.prec_, b.valuation()),
                                          b.is_zero() ? b.prec_ : add_prec(b.prec_, a.valuation())));
    const int prec = std::min(add_prec(a.prec_, b.valuation()), add_prec(b.prec_, a.valuation()));
    std::map<int, Rational> c;
    for (const auto &[da, va] : a.c_)
        for (const auto &[db, vb] : b.c_)
            put(c, da + db, va * vb, prec);
    LaurentSeries r;
    r.c_ = std::move(c);
    r.prec_ = prec;
    return r;
}

bool operator==(const LaurentSeries &a, const LaurentSeries &b)
{
    const int prec = std::min(a.prec_, b.prec_);
    auto below = [prec](const std::map<int, Rational> &c) {
        return std::map<int, Rational>(c.begin(), c.lower_bound(prec));
    };
    return below(a.c_) == below(b.c_);
}

std::string LaurentSeries::str() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto &[d, v] : c_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << to_string(v) << ")";
        if (d != 0)
            os << "X^" << d;
    }
    if (first)
        os << "0";
    if (!is_exact())
        os << " + O(X^" << prec_ << ")";
    return os.str();
}

LaurentSeries inverse(const LaurentSeries &a, int prec)
{
    const int n = a.valuation();
    if (!a.is_exact())
        prec = std::min(prec, a.prec() - 2 * n);
    const Rational lead_inv = 1 / a.coeff(n);
    std::vector<Rational> b; // b[p] = coefficient of X^{-n+p}
    for (long p = 0; -n + p < prec; ++p) {
        if (p == 0) {
            b.push_back(lead_inv);
            continue;
        }
        Rational acc = 0;
        for (const auto &[d, v] : a.coeffs()) {
            const long i = d - n;
            if (i == 0)
                continue;
            if (i > p)
                break;
            acc += v * b[p - i];
        }
        b.push_back(-lead_inv * acc);
    }
    std::map<int, Rational> c;
    for (std::size_t p = 0; p < b.size(); ++p)
        c.emplace(-n + static_cast<int>(p), b[p]);
    return LaurentSeries(std::move(c), prec);
}

LaurentSeries euler_step_product(int n)
{
    if (n < 1)
        throw Error(ErrorCode::config_error, "Euler step count must be >= 1");
    std::map<int, Rational> c;
    Rational term = 1; // C(n,m)/n^m
    for (int m = 0; m <= n; ++m) {
        c.emplace(-m, term);
        term *= Rational(n - m, static_cast<long>(n) * (m + 1));
        term.canonicalize();
    }
    return LaurentSeries(std::move(c));
}

CoefficientLimit coefficient_limit_check(int m, int n)
{
    if (m < 0 || m > n)
        throw Error(ErrorCode::config_error, "coefficient limit needs 0 <= m <= n");
    // C(n,m) m!/n^m = prod_{j<m} (1 - j/n)
    Rational scaled = 1;
    for (int j = 0; j < m; ++j) {
        Rational f(n - j, n);
        f.canonicalize();
        scaled *= f;
    }
    Rational lower(static_cast<long>(m) * (m - 1), 2L * n);
    lower.canonicalize();
    lower = 1 - lower;
    CoefficientLimit r{m, n, scaled / factorial(m), scaled, lower, lower <= scaled && scaled <= 1};
    return r;
}

DivergenceReport divergence_witness(const std::vector<int> &n_list, int m_max)
{
    DivergenceReport rep;
    rep.pointwise_convergent = true;
    rep.order_unbounded = true;
    for (int n : n_list) {
        LaurentSeries p = euler_step_product(n);
        DivergenceRow row{n, p.valuation(), {}};
        for (int m = 0; m <= std::min(m_max, n); ++m) {
            CoefficientLimit c = coefficient_limit_check(m, n);
            // the closed form agrees with the expanded product
            if (c.value != p.coeff(-m))
                rep.pointwise_convergent = false;
            rep.pointwise_convergent = rep.pointwise_convergent && c.sandwich_ok;
            row.coeffs.push_back(std::move(c));
        }
        if (row.lowest_degree != -n)
            rep.order_unbounded = false;
        rep.rows.push_back(std::move(row));
    }

    std::vector<const DivergenceRow *> by_n;
    for (const auto &r : rep.rows)
        by_n.push_back(&r);
    std::sort(by_n.begin(), by_n.end(), [](auto *a, auto *b) { return a->n < b->n; });
    for (std::size_t i = 1; i < by_n.size(); ++i) {
        if (by_n[i]->n == by_n[i - 1]->n)
            continue;
        if (by_n[i]->lowest_degree >= by_n[i - 1]->lowest_degree)
            rep.order_unbounded = false;
        const auto &lo = by_n[i - 1]->coeffs;
        const auto &hi = by_n[i]->coeffs;
        for (std::size_t m = 0; m < std::min(lo.size(), hi.size()); ++m)
            if (hi[m].scaled < lo[m].scaled)
                rep.pointwise_convergent = false;
    }
    rep.verdict = rep.pointwise_convergent && rep.order_unbounded ? kDivergenceVerdict : "witness failed";
    return rep;
}

} // namespace kpf
