#include "kpf/coeffring.hpp"

#include <algorithm>
#include <sstream>

namespace kpf {

std::string RingTag::name() const
{
    std::string b = base == BaseRing::fourier ? "fourier" : "poly";
    return has_z() ? b + "-z" : b;
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(std::vector<GaussRational> coeffs) : c_(std::move(coeffs))
{
    if (c_.empty())
        c_.resize(1);
}

bool Scalar::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const GaussRational &g) { return g.is_zero(); });
}

Scalar &Scalar::operator+=(const Scalar &o)
{
    if (o.c_.size() < c_.size())
        c_.resize(o.c_.size());
    for (std::size_t m = 0; m < c_.size(); ++m)
        c_[m] += o.c_[m];
    return *this;
}

Scalar &Scalar::operator-=(const Scalar &o)
{
    if (o.c_.size() < c_.size())
        c_.resize(o.c_.size());
    for (std::size_t m = 0; m < c_.size(); ++m)
        c_[m] -= o.c_[m];
    return *this;
}

Scalar &Scalar::operator*=(const Rational &s)
{
    for (auto &g : c_)
        g *= s;
    return *this;
}

Scalar operator*(const Scalar &a, const Scalar &b)
{
    std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<GaussRational> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j)
            fma_into(out[i + j], a.c_[i], b.c_[j]);
    return Scalar(std::move(out));
}

bool operator==(const Scalar &a, const Scalar &b)
{
    std::size_t n = std::max(a.c_.size(), b.c_.size());
    for (std::size_t m = 0; m < n; ++m) {
        GaussRational x = m < a.c_.size() ? a.c_[m] : GaussRational();
        GaussRational y = m < b.c_.size() ? b.c_[m] : GaussRational();
        if (!(x == y))
            return false;
    }
    return true;
}

std::string Scalar::str() const
{
    if (c_.size() == 1)
        return to_string(c_[0]);
    std::ostringstream os;
    bool first = true;
    for (std::size_t m = 0; m < c_.size(); ++m) {
        if (c_[m].is_zero())
            continue;
        if (!first)
            os << " + ";
        os << to_string(c_[m]) << "*z^" << m;
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

NonZeroMean::NonZeroMean(Scalar mean, int step)
    : Error(ErrorCode::non_zero_mean,
            "antiderivative requires zero mean, got " + mean.str() +
                (step > 0 ? " at step " + std::to_string(step) : std::string())),
      mean_(std::move(mean)), step_(step)
{
}

// ---------------------------------------------------------------- helpers

namespace {

// Merge two sorted sparse term lists with `op` applied to the right operand.
template <class Key, class Coef, class Op>
std::vector<std::pair<Key, Coef>> merge_terms(const std::vector<std::pair<Key, Coef>> &a,
                                              const std::vector<std::pair<Key, Coef>> &b, Op op)
{
    std::vector<std::pair<Key, Coef>> out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.end() || j->first < i->first) {
            out.emplace_back(j->first, op(Coef(), j->second));
            ++j;
        } else {
            Coef c = op(i->second, j->second);
            if (!(c == Coef()))
                out.emplace_back(i->first, std::move(c));
            ++i;
            ++j;
        }
    }
    return out;
}

bool is_zero_coef(const GaussRational &g) { return g.is_zero(); }
bool is_zero_coef(const Rational &r) { return sgn(r) == 0; }

template <class Key, class Coef>
void canonicalize(std::vector<std::pair<Key, Coef>> &t)
{
    std::stable_sort(t.begin(), t.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    std::vector<std::pair<Key, Coef>> out;
    out.reserve(t.size());
    for (auto &term : t) {
        if (!out.empty() && out.back().first == term.first)
            out.back().second += term.second;
        else
            out.push_back(std::move(term));
    }
    std::erase_if(out, [](const auto &x) { return is_zero_coef(x.second); });
    t = std::move(out);
}

} // namespace

// ---------------------------------------------------------------- Fourier

FourierElem::FourierElem(std::vector<Term> terms) : t_(std::move(terms)) { canonicalize(t_); }

FourierElem FourierElem::mode(long n, GaussRational c)
{
    FourierElem e;
    if (!c.is_zero())
        e.t_.emplace_back(n, std::move(c));
    return e;
}

GaussRational FourierElem::coeff(long n) const
{
    auto it = std::lower_bound(t_.begin(), t_.end(), n, [](const Term &t, long k) { return t.first < k; });
    return (it != t_.end() && it->first == n) ? it->second : GaussRational();
}

FourierElem &FourierElem::operator+=(const FourierElem &o)
{
    t_ = merge_terms(t_, o.t_, [](const GaussRational &x, const GaussRational &y) { return x + y; });
    return *this;
}

FourierElem &FourierElem::operator-=(const FourierElem &o)
{
    t_ = merge_terms(t_, o.t_, [](const GaussRational &x, const GaussRational &y) { return x - y; });
    return *this;
}

FourierElem &FourierElem::operator*=(const Rational &s)
{
    if (sgn(s) == 0) {
        t_.clear();
        return *this;
    }
    for (auto &[n, c] : t_)
        c *= s;
    return *this;
}

FourierElem FourierElem::operator-() const
{
    FourierElem r = *this;
    for (auto &[n, c] : r.t_) {
        c.re = -c.re;
        c.im = -c.im;
    }
    return r;
}

FourierElem operator*(const FourierElem &a, const FourierElem &b)
{
    FourierElem r;
    if (a.is_zero() || b.is_zero())
        return r;
    long lo = a.t_.front().first + b.t_.front().first;
    long hi = a.t_.back().first + b.t_.back().first;
    std::vector<GaussRational> acc(static_cast<std::size_t>(hi - lo + 1));
    for (const auto &[na, ca] : a.t_)
        for (const auto &[nb, cb] : b.t_)
            fma_into(acc[static_cast<std::size_t>(na + nb - lo)], ca, cb);
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (!acc[i].is_zero())
            r.t_.emplace_back(lo + static_cast<long>(i), std::move(acc[i]));
    return r;
}

FourierElem FourierElem::derive(int k) const
{
    FourierElem r;
    for (const auto &[n, c] : t_) {
        if (n == 0 && k > 0)
            continue;
        GaussRational d = c;
        for (int j = 0; j < k; ++j)
            d.mul_i(n);
        r.t_.emplace_back(n, std::move(d));
    }
    return r;
}

FourierElem FourierElem::antiderive() const
{
    GaussRational m = mean();
    if (!m.is_zero())
        throw NonZeroMean(Scalar(m));
    FourierElem r;
    for (const auto &[n, c] : t_) {
        // c / (i n) = -i c / n
        GaussRational d = c;
        d.mul_i(-1);
        Rational inv = Rational(1) / n;
        d *= inv;
        r.t_.emplace_back(n, std::move(d));
    }
    return r;
}

FourierElem FourierElem::inverse() const
{
    if (t_.size() != 1)
        throw Error(ErrorCode::not_a_unit, "only single Fourier modes are invertible");
    return mode(-t_[0].first, t_[0].second.inverse());
}

// ---------------------------------------------------------------- Poly

PolyElem::PolyElem(std::vector<Term> terms) : t_(std::move(terms))
{
    for (const auto &[d, c] : t_)
        if (d < 0)
            throw Error(ErrorCode::parse_error, "negative polynomial degree");
    canonicalize(t_);
}

PolyElem PolyElem::monomial(int d, Rational c)
{
    PolyElem e;
    if (sgn(c) != 0)
        e.t_.emplace_back(d, std::move(c));
    return e;
}

Rational PolyElem::coeff(int d) const
{
    auto it = std::lower_bound(t_.begin(), t_.end(), d, [](const Term &t, int k) { return t.first < k; });
    return (it != t_.end() && it->first == d) ? it->second : Rational();
}

PolyElem &PolyElem::operator+=(const PolyElem &o)
{
    t_ = merge_terms(t_, o.t_, [](const Rational &x, const Rational &y) { return Rational(x + y); });
    return *this;
}

PolyElem &PolyElem::operator-=(const PolyElem &o)
{
    t_ = merge_terms(t_, o.t_, [](const Rational &x, const Rational &y) { return Rational(x - y); });
    return *this;
}

PolyElem &PolyElem::operator*=(const Rational &s)
{
    if (sgn(s) == 0) {
        t_.clear();
        return *this;
    }
    for (auto &[d, c] : t_)
        c *= s;
    return *this;
}

PolyElem PolyElem::operator-() const
{
    PolyElem r = *this;
    for (auto &[d, c] : r.t_)
        c = -c;
    return r;
}

PolyElem operator*(const PolyElem &a, const PolyElem &b)
{
    PolyElem r;
    if (a.is_zero() || b.is_zero())
        return r;
    int hi = a.t_.back().first + b.t_.back().first;
    std::vector<Rational> acc(static_cast<std::size_t>(hi + 1));
    for (const auto &[da, ca] : a.t_)
        for (const auto &[db, cb] : b.t_)
            acc[static_cast<std::size_t>(da + db)] += ca * cb;
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (sgn(acc[i]) != 0)
            r.t_.emplace_back(static_cast<int>(i), std::move(acc[i]));
    return r;
}

PolyElem PolyElem::derive(int k) const
{
    PolyElem r;
    for (const auto &[d, c] : t_) {
        if (d < k)
            continue;
        Rational f = c;
        for (int j = 0; j < k; ++j)
            f *= d - j;
        r.t_.emplace_back(d - k, std::move(f));
    }
    return r;
}

PolyElem PolyElem::antiderive() const
{
    PolyElem r;
    for (const auto &[d, c] : t_)
        r.t_.emplace_back(d + 1, Rational(c / (d + 1)));
    return r;
}

PolyElem PolyElem::inverse() const
{
    if (t_.size() != 1 || t_[0].first != 0)
        throw Error(ErrorCode::not_a_unit, "only non-zero constants are units in Q[x]");
    return constant(1 / t_[0].second);
}

// ---------------------------------------------------------------- ZSeries

template <class Base>
ZSeries<Base>::ZSeries(int z_max, std::vector<Base> coeffs) : c_(std::move(coeffs))
{
    if (static_cast<int>(c_.size()) > z_max + 1)
        throw Error(ErrorCode::truncation_mismatch, "z-series support exceeds z_max");
    c_.resize(z_max + 1);
}

template <class Base>
bool ZSeries<Base>::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Base &b) { return b.is_zero(); });
}

template <class Base>
ZSeries<Base> &ZSeries<Base>::operator+=(const ZSeries &o)
{
    truncate(std::min(z_max(), o.z_max()));
    for (std::size_t m = 0; m < c_.size(); ++m)
        c_[m] += o.c_[m];
    return *this;
}

template <class Base>
ZSeries<Base> &ZSeries<Base>::operator-=(const ZSeries &o)
{
    truncate(std::min(z_max(), o.z_max()));
    for (std::size_t m = 0; m < c_.size(); ++m)
        c_[m] -= o.c_[m];
    return *this;
}

template <class Base>
ZSeries<Base> &ZSeries<Base>::operator*=(const Rational &s)
{
    for (auto &b : c_)
        b *= s;
    return *this;
}

template <class Base>
ZSeries<Base> ZSeries<Base>::operator-() const
{
    ZSeries r = *this;
    for (auto &b : r.c_)
        b = -b;
    return r;
}

template <class Base>
ZSeries<Base> operator*(const ZSeries<Base> &a, const ZSeries<Base> &b)
{
    int zm = std::min(a.z_max(), b.z_max());
    std::vector<Base> out(zm + 1);
    for (int i = 0; i <= zm; ++i) {
        if (a.coeff(i).is_zero())
            continue;
        for (int j = 0; i + j <= zm; ++j)
            if (!b.coeff(j).is_zero())
                out[i + j] += a.coeff(i) * b.coeff(j);
    }
    return ZSeries<Base>(zm, std::move(out));
}

template <class Base>
ZSeries<Base> ZSeries<Base>::derive(int k) const
{
    ZSeries r(z_max());
    for (std::size_t m = 0; m < c_.size(); ++m)
        r.c_[m] = c_[m].derive(k);
    return r;
}

template <class Base>
ZSeries<Base> ZSeries<Base>::antiderive() const
{
    ZSeries r(z_max());
    if constexpr (std::is_same_v<Base, FourierElem>) {
        std::vector<GaussRational> means;
        bool bad = false;
        for (const auto &b : c_) {
            means.push_back(b.mean());
            bad = bad || !means.back().is_zero();
        }
        if (bad)
            throw NonZeroMean(Scalar(std::move(means)));
    }
    for (std::size_t m = 0; m < c_.size(); ++m)
        r.c_[m] = c_[m].antiderive();
    return r;
}

template <class Base>
ZSeries<Base> ZSeries<Base>::inverse() const
{
    // b_0 = a_0^{-1}, b_m = -b_0 sum_{j=1}^{m} a_j b_{m-j}
    ZSeries r(z_max());
    r.c_[0] = c_[0].inverse();
    for (int m = 1; m <= z_max(); ++m) {
        Base acc;
        for (int j = 1; j <= m; ++j)
            if (!c_[j].is_zero())
                acc += c_[j] * r.c_[m - j];
        r.c_[m] = -(r.c_[0] * acc);
    }
    return r;
}

template class ZSeries<FourierElem>;
template class ZSeries<PolyElem>;
template ZSeries<FourierElem> operator*(const ZSeries<FourierElem> &, const ZSeries<FourierElem> &);
template ZSeries<PolyElem> operator*(const ZSeries<PolyElem> &, const ZSeries<PolyElem> &);

// ---------------------------------------------------------------- RingElem

namespace {

template <class T>
struct TagOf;
template <>
struct TagOf<FourierElem> {
    static RingTag get(const FourierElem &) { return RingTag::fourier(); }
};
template <>
struct TagOf<PolyElem> {
    static RingTag get(const PolyElem &) { return RingTag::poly(); }
};
template <>
struct TagOf<ZSeries<FourierElem>> {
    static RingTag get(const ZSeries<FourierElem> &e) { return RingTag::fourier_z(e.z_max()); }
};
template <>
struct TagOf<ZSeries<PolyElem>> {
    static RingTag get(const ZSeries<PolyElem> &e) { return RingTag::poly_z(e.z_max()); }
};

[[noreturn]] void mismatch(const RingElem &a, const RingElem &b)
{
    throw Error(ErrorCode::ring_mismatch, "ring mismatch: " + a.tag().name() + " vs " + b.tag().name());
}

template <class F>
RingElem binary(const RingElem &a, const RingElem &b, F f)
{
    if (a.storage().index() != b.storage().index())
        mismatch(a, b);
    return std::visit(
        [&](const auto &x) -> RingElem {
            using T = std::decay_t<decltype(x)>;
            return RingElem(f(x, std::get<T>(b.storage())));
        },
        a.storage());
}

} // namespace

RingElem RingElem::zero(const RingTag &tag)
{
    if (tag.has_z()) {
        if (tag.base == BaseRing::fourier)
            return ZSeries<FourierElem>(tag.z_max);
        return ZSeries<PolyElem>(tag.z_max);
    }
    if (tag.base == BaseRing::fourier)
        return FourierElem();
    return PolyElem();
}

RingElem RingElem::constant(const RingTag &tag, const GaussRational &c)
{
    RingElem base;
    if (tag.base == BaseRing::fourier) {
        base = FourierElem::constant(c);
    } else {
        if (!c.is_real())
            throw Error(ErrorCode::ring_mismatch, "Q[x] has no imaginary constants");
        base = PolyElem::constant(c.re);
    }
    return lift(tag, base);
}

RingElem RingElem::lift(const RingTag &tag, const RingElem &base)
{
    if (!tag.has_z())
        return base;
    if (const auto *f = std::get_if<FourierElem>(&base.s_)) {
        std::vector<FourierElem> c(tag.z_max + 1);
        c[0] = *f;
        return ZSeries<FourierElem>(tag.z_max, std::move(c));
    }
    if (const auto *p = std::get_if<PolyElem>(&base.s_)) {
        std::vector<PolyElem> c(tag.z_max + 1);
        c[0] = *p;
        return ZSeries<PolyElem>(tag.z_max, std::move(c));
    }
    throw Error(ErrorCode::ring_mismatch, "lift expects a base-ring element");
}

RingTag RingElem::tag() const
{
    return std::visit([](const auto &x) { return TagOf<std::decay_t<decltype(x)>>::get(x); }, s_);
}

bool RingElem::is_zero() const
{
    return std::visit([](const auto &x) { return x.is_zero(); }, s_);
}

RingElem &RingElem::operator+=(const RingElem &o)
{
    if (s_.index() != o.s_.index())
        mismatch(*this, o);
    std::visit(
        [&](auto &x) {
            using T = std::decay_t<decltype(x)>;
            x += std::get<T>(o.s_);
        },
        s_);
    return *this;
}

RingElem &RingElem::operator-=(const RingElem &o)
{
    if (s_.index() != o.s_.index())
        mismatch(*this, o);
    std::visit(
        [&](auto &x) {
            using T = std::decay_t<decltype(x)>;
            x -= std::get<T>(o.s_);
        },
        s_);
    return *this;
}

RingElem &RingElem::operator*=(const Rational &s)
{
    std::visit([&](auto &x) { x *= s; }, s_);
    return *this;
}

RingElem RingElem::operator-() const
{
    return std::visit([](const auto &x) { return RingElem(-x); }, s_);
}

RingElem operator*(const RingElem &a, const RingElem &b)
{
    return binary(a, b, [](const auto &x, const auto &y) { return x * y; });
}

RingElem RingElem::derive(int k) const
{
    return std::visit([k](const auto &x) { return RingElem(x.derive(k)); }, s_);
}

RingElem RingElem::antiderive() const
{
    return std::visit([](const auto &x) { return RingElem(x.antiderive()); }, s_);
}

Scalar RingElem::integrate() const
{
    if (const auto *f = std::get_if<FourierElem>(&s_))
        return Scalar(f->mean());
    if (const auto *z = std::get_if<ZSeries<FourierElem>>(&s_)) {
        std::vector<GaussRational> means;
        for (const auto &b : z->coeffs())
            means.push_back(b.mean());
        return Scalar(std::move(means));
    }
    throw Error(ErrorCode::unsupported_ring, "integration functional is not defined on " + tag().name());
}

RingElem RingElem::inverse() const
{
    return std::visit([](const auto &x) { return RingElem(x.inverse()); }, s_);
}

namespace {

std::string str_fourier(const FourierElem &f)
{
    if (f.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[n, c] : f.terms()) {
        if (!first)
            os << " + ";
        first = false;
        os << to_string(c);
        if (n != 0)
            os << "*e^{" << n << "ix}";
    }
    return os.str();
}

std::string str_poly(const PolyElem &p)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[d, c] : p.terms()) {
        if (!first)
            os << " + ";
        first = false;
        os << to_string(c);
        if (d != 0)
            os << "*x^" << d;
    }
    return os.str();
}

std::string str_base(const FourierElem &f) { return str_fourier(f); }
std::string str_base(const PolyElem &p) { return str_poly(p); }

} // namespace

std::string RingElem::str() const
{
    return std::visit(
        [](const auto &x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, FourierElem> || std::is_same_v<T, PolyElem>) {
                return str_base(x);
            } else {
                std::ostringstream os;
                bool first = true;
                for (int m = 0; m <= x.z_max(); ++m) {
                    if (x.coeff(m).is_zero())
                        continue;
                    if (!first)
                        os << " + ";
                    first = false;
                    os << "z^" << m << "*(" << str_base(x.coeff(m)) << ")";
                }
                if (first)
                    os << "0";
                return os.str();
            }
        },
        s_);
}

} // namespace kpf
