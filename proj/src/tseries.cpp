#include "kpf/tseries.hpp"

#include <algorithm>
#include <set>

namespace kpf {

TimeMonomial::TimeMonomial(std::vector<int> exps) : e_(std::move(exps))
{
    for (int x : e_)
        if (x < 0)
            throw Error(ErrorCode::config_error, "negative exponent in time monomial");
    while (!e_.empty() && e_.back() == 0)
        e_.pop_back();
}

TimeMonomial TimeMonomial::t(int i, int n)
{
    if (i < 1)
        throw Error(ErrorCode::config_error, "time index must be >= 1");
    std::vector<int> e(i, 0);
    e[i - 1] = n;
    return TimeMonomial(std::move(e));
}

int TimeMonomial::valuation() const
{
    int v = 0;
    for (std::size_t i = 0; i < e_.size(); ++i)
        v += static_cast<int>(i + 1) * e_[i];
    return v;
}

TimeMonomial operator*(const TimeMonomial &a, const TimeMonomial &b)
{
    std::vector<int> e(std::max(a.e_.size(), b.e_.size()), 0);
    for (std::size_t i = 0; i < a.e_.size(); ++i)
        e[i] += a.e_[i];
    for (std::size_t i = 0; i < b.e_.size(); ++i)
        e[i] += b.e_[i];
    return TimeMonomial(std::move(e));
}

std::optional<TimeMonomial> TimeMonomial::divided_by(const TimeMonomial &b) const
{
    if (b.e_.size() > e_.size())
        return std::nullopt;
    std::vector<int> e = e_;
    for (std::size_t i = 0; i < b.e_.size(); ++i) {
        e[i] -= b.e_[i];
        if (e[i] < 0)
            return std::nullopt;
    }
    return TimeMonomial(std::move(e));
}

std::strong_ordering operator<=>(const TimeMonomial &a, const TimeMonomial &b)
{
    if (auto c = a.valuation() <=> b.valuation(); c != 0)
        return c;
    return a.e_ <=> b.e_;
}

std::string TimeMonomial::str() const
{
    if (e_.empty())
        return "1";
    std::string s;
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (e_[i] == 0)
            continue;
        if (!s.empty())
            s += "*";
        s += "t" + std::to_string(i + 1);
        if (e_[i] > 1)
            s += "^" + std::to_string(e_[i]);
    }
    return s;
}

std::vector<TimeMonomial> monomials_up_to(int v_max, int k_max)
{
    std::vector<TimeMonomial> out;
    std::vector<int> e(std::max(k_max, 0), 0);
    // Depth-first over the exponent of t_i, tracking the remaining valuation.
    auto rec = [&](auto &&self, int i, int remaining) -> void {
        if (i > k_max) {
            out.emplace_back(e);
            return;
        }
        for (int n = 0; n * i <= remaining; ++n) {
            e[i - 1] = n;
            self(self, i + 1, remaining - n * i);
        }
        e[i - 1] = 0;
    };
    rec(rec, 1, v_max);
    std::sort(out.begin(), out.end());
    return out;
}

TPsiSeries TPsiSeries::constant(const PsiOp &p, int v_max)
{
    TPsiSeries s(p.ring(), v_max);
    s.set(TimeMonomial(), p);
    return s;
}

TPsiSeries TPsiSeries::identity(RingTag ring, int v_max, int depth)
{
    return constant(PsiOp::identity(ring, depth), v_max);
}

void TPsiSeries::set_barred(bool b)
{
    if (b && !is_barred(*this))
        throw Error(ErrorCode::predicate_violation,
                    "series has a coefficient of order a > 0 in a slot of valuation < a");
    barred_ = b;
}

const PsiOp *TPsiSeries::find(const TimeMonomial &m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? nullptr : &it->second;
}

PsiOp TPsiSeries::at(const TimeMonomial &m) const
{
    if (const PsiOp *p = find(m))
        return *p;
    return PsiOp(ring_, kExactDepth);
}

void TPsiSeries::set(const TimeMonomial &m, PsiOp p)
{
    if (m.valuation() > vmax_)
        return;
    if (!p.ring().compatible(ring_))
        throw Error(ErrorCode::ring_mismatch, "slot over " + p.ring().name() + ", series over " + ring_.name());
    if (p.is_zero() && is_exact_depth(p.depth())) {
        terms_.erase(m);
        return;
    }
    terms_.insert_or_assign(m, std::move(p));
}

void TPsiSeries::add(const TimeMonomial &m, const PsiOp &p)
{
    if (m.valuation() > vmax_)
        return;
    auto it = terms_.find(m);
    if (it == terms_.end())
        set(m, p);
    else
        it->second += p;
}

int TPsiSeries::depth() const
{
    int d = kExactDepth;
    for (const auto &[m, p] : terms_)
        d = std::max(d, p.depth());
    return d;
}

bool TPsiSeries::is_zero() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const auto &kv) { return kv.second.is_zero(); });
}

TPsiSeries TPsiSeries::truncated_valuation(int v_max) const
{
    TPsiSeries r(ring_, std::min(v_max, vmax_));
    r.barred_ = barred_;
    for (const auto &[m, p] : terms_)
        if (m.valuation() <= r.vmax_)
            r.terms_.emplace(m, p);
    return r;
}

TPsiSeries TPsiSeries::truncated_depth(int depth) const
{
    TPsiSeries r(ring_, vmax_);
    r.barred_ = barred_;
    for (const auto &[m, p] : terms_)
        r.terms_.emplace(m, p.truncated(depth));
    return r;
}

void TPsiSeries::check_compatible(const TPsiSeries &o) const
{
    if (!ring_.compatible(o.ring_))
        throw Error(ErrorCode::ring_mismatch, "series over " + ring_.name() + " and " + o.ring_.name());
    if (vmax_ != o.vmax_)
        throw Error(ErrorCode::truncation_mismatch,
                    "series truncated at vMax " + std::to_string(vmax_) + " and " + std::to_string(o.vmax_));
}

TPsiSeries &TPsiSeries::operator+=(const TPsiSeries &o)
{
    check_compatible(o);
    for (const auto &[m, p] : o.terms_)
        add(m, p);
    barred_ = barred_ && o.barred_;
    return *this;
}

TPsiSeries &TPsiSeries::operator-=(const TPsiSeries &o)
{
    return *this += -o;
}

TPsiSeries &TPsiSeries::operator*=(const Rational &s)
{
    for (auto &[m, p] : terms_)
        p *= s;
    return *this;
}

TPsiSeries TPsiSeries::operator-() const
{
    TPsiSeries r = *this;
    for (auto &[m, p] : r.terms_)
        p = -p;
    return r;
}

bool operator==(const TPsiSeries &a, const TPsiSeries &b)
{
    if (!a.ring_.compatible(b.ring_))
        return false;
    std::set<TimeMonomial> keys;
    for (const auto &[m, p] : a.terms_)
        keys.insert(m);
    for (const auto &[m, p] : b.terms_)
        keys.insert(m);
    for (const auto &m : keys)
        if (!(a.at(m) == b.at(m)))
            return false;
    return true;
}

std::string TPsiSeries::str() const
{
    std::string s;
    for (const auto &[m, p] : terms_) {
        if (p.is_zero())
            continue;
        if (!s.empty())
            s += "\n";
        s += m.str() + ": " + p.str();
    }
    return s.empty() ? "0" : s;
}

TPsiSeries t_mul(const TPsiSeries &u, const TPsiSeries &w, std::optional<int> floor)
{
    if (!u.ring().compatible(w.ring()))
        throw Error(ErrorCode::ring_mismatch, "series over " + u.ring().name() + " and " + w.ring().name());
    if (u.vmax() != w.vmax())
        throw Error(ErrorCode::truncation_mismatch,
                    "series truncated at vMax " + std::to_string(u.vmax()) + " and " + std::to_string(w.vmax()));
    TPsiSeries r(u.ring(), u.vmax());
    for (const auto &[m1, p] : u.terms()) {
        const int v1 = m1.valuation();
        for (const auto &[m2, q] : w.terms()) {
            if (v1 + m2.valuation() > u.vmax())
                continue;
            r.add(m1 * m2, compose(p, q, floor));
        }
    }
    if (u.barred() && w.barred())
        r.set_barred(true);
    return r;
}

TPsiSeries t_bracket(const TPsiSeries &u, const TPsiSeries &w, std::optional<int> floor)
{
    TPsiSeries r = t_mul(u, w, floor) - t_mul(w, u, floor);
    return r;
}

TPsiSeries t_power(const TPsiSeries &u, int k, std::optional<int> floor)
{
    if (k < 0)
        throw Error(ErrorCode::config_error, "negative power of a t-series");
    TPsiSeries r = TPsiSeries::identity(u.ring(), u.vmax());
    r.set_barred(true);
    for (int i = 0; i < k; ++i)
        r = t_mul(r, u, floor);
    return r;
}

TPsiSeries t_inverse(const TPsiSeries &u, std::optional<int> floor)
{
    const TimeMonomial one;
    const PsiOp *u0 = u.find(one);
    if (!u0)
        throw Error(ErrorCode::not_invertible_at_zero, "series vanishes at t = 0");
    PsiOp v0(u.ring(), 0);
    try {
        v0 = psi_inverse(*u0, floor);
    } catch (const Error &e) {
        throw Error(ErrorCode::not_invertible_at_zero, std::string("value at t = 0 is not invertible: ") + e.what());
    }

    int k_max = 0;
    for (const auto &[m, p] : u.terms())
        k_max = std::max(k_max, m.max_index());

    TPsiSeries v(u.ring(), u.vmax());
    v.set(one, v0);
    for (const auto &t : monomials_up_to(u.vmax(), k_max)) {
        if (t.is_one())
            continue;
        std::optional<PsiOp> acc;
        for (const auto &[t1, p] : u.terms()) {
            if (t1.is_one())
                continue;
            auto t2 = t.divided_by(t1);
            if (!t2)
                continue;
            const PsiOp *q = v.find(*t2);
            if (!q)
                continue;
            PsiOp c = compose(p, *q, floor);
            if (acc)
                *acc += c;
            else
                acc = std::move(c);
        }
        if (acc)
            v.set(t, -compose(v0, *acc, floor));
    }
    if (u.barred())
        v.set_barred(true);
    return v;
}

TPsiSeries exp_t(const std::vector<PsiOp> &p, int k_max, int v_max, std::optional<int> floor)
{
    if (p.empty())
        throw Error(ErrorCode::config_error, "exp_t needs at least one generator");
    const RingTag ring = p.front().ring();
    TPsiSeries x(ring, v_max);
    const int top = std::min<int>(k_max, static_cast<int>(p.size()));
    for (int i = 1; i <= top; ++i) {
        const PsiOp &pi = p[i - 1];
        if (!pi.is_zero() && pi.order() > i)
            throw Error(ErrorCode::order_violation, "generator P_" + std::to_string(i) + " has order " +
                                                        std::to_string(pi.order()) + " > " + std::to_string(i));
        x.set(TimeMonomial::t(i), floor ? pi.truncated(*floor) : pi);
    }
    x.set_barred(true);

    TPsiSeries result = TPsiSeries::identity(ring, v_max);
    result.set_barred(true);
    TPsiSeries term = result;
    for (int n = 1; n <= v_max; ++n) {
        term = t_mul(term, x, floor) * Rational(1, n);
        if (term.terms().empty())
            break;
        result += term;
    }
    result.set_barred(true);
    return result;
}

TPsiSeries d_t(const TPsiSeries &u, int k)
{
    if (k < 1)
        throw Error(ErrorCode::config_error, "time index must be >= 1");
    TPsiSeries r(u.ring(), std::max(u.vmax() - k, 0));
    for (const auto &[m, p] : u.terms()) {
        const int n = m.exponent(k);
        if (n == 0)
            continue;
        std::vector<int> e = m.exponents();
        e[k - 1] -= 1;
        r.set(TimeMonomial(std::move(e)), p * Rational(n));
    }
    return r;
}

TPsiSeries t_proj_plus(const TPsiSeries &u)
{
    TPsiSeries r(u.ring(), u.vmax());
    for (const auto &[m, p] : u.terms())
        r.set(m, proj_plus(p));
    if (u.barred())
        r.set_barred(true);
    return r;
}

TPsiSeries t_proj_minus(const TPsiSeries &u)
{
    TPsiSeries r(u.ring(), u.vmax());
    for (const auto &[m, p] : u.terms())
        r.set(m, proj_minus(p));
    if (u.barred())
        r.set_barred(true);
    return r;
}

bool is_barred(const TPsiSeries &u)
{
    for (const auto &[m, p] : u.terms())
        if (!p.is_zero() && p.order() > 0 && p.order() > m.valuation())
            return false;
    return true;
}

namespace {

bool is_one_plus_minus(const PsiOp &p)
{
    if (p.order() > 0)
        return false;
    return p.coeff(0) == RingElem::one(p.ring());
}

} // namespace

bool in_g_at(const TPsiSeries &u)
{
    const PsiOp *u0 = u.find(TimeMonomial());
    if (!u0 || !is_one_plus_minus(*u0))
        return false;
    for (const auto &[m, p] : u.terms())
        if (!m.is_one() && !p.is_zero() && p.order() >= 0)
            return false;
    return true;
}

bool in_group(const TPsiSeries &u)
{
    const PsiOp *u0 = u.find(TimeMonomial());
    return u0 && is_barred(u) && is_one_plus_minus(*u0);
}

bool in_d_bar_times(const TPsiSeries &u)
{
    if (!is_barred(u))
        return false;
    for (const auto &[m, p] : u.terms())
        if (!p.is_zero() && p.lowest_stored_order() < 0)
            return false;
    const PsiOp *u0 = u.find(TimeMonomial());
    return u0 && *u0 == PsiOp::identity(u.ring(), kExactDepth);
}

PsiOp QSeriesOp::at(int m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? PsiOp(ring_, kExactDepth) : it->second;
}

void QSeriesOp::add(int m, const PsiOp &p)
{
    if (m > qmax_)
        return;
    auto it = terms_.find(m);
    if (it == terms_.end())
        terms_.emplace(m, p);
    else
        it->second += p;
}

bool QSeriesOp::satisfies_q_predicate() const
{
    for (const auto &[m, p] : terms_)
        if (!p.is_zero() && p.order() > m)
            return false;
    return true;
}

bool operator==(const QSeriesOp &a, const QSeriesOp &b)
{
    std::set<int> keys;
    for (const auto &[m, p] : a.terms_)
        keys.insert(m);
    for (const auto &[m, p] : b.terms_)
        keys.insert(m);
    for (int m : keys)
        if (!(a.at(m) == b.at(m)))
            return false;
    return true;
}

QSeriesOp q_mul(const QSeriesOp &a, const QSeriesOp &b, std::optional<int> floor)
{
    QSeriesOp r(a.ring(), std::min(a.qmax(), b.qmax()));
    for (const auto &[m1, p] : a.terms())
        for (const auto &[m2, q] : b.terms())
            if (m1 + m2 <= r.qmax())
                r.add(m1 + m2, compose(p, q, floor));
    return r;
}

QSeriesOp q_bracket(const QSeriesOp &a, const QSeriesOp &b, std::optional<int> floor)
{
    QSeriesOp r = q_mul(a, b, floor);
    const QSeriesOp ba = q_mul(b, a, floor);
    for (const auto &[m, p] : ba.terms())
        r.add(m, -p);
    return r;
}

QSeriesOp q_proj_plus(const QSeriesOp &a)
{
    QSeriesOp r(a.ring(), a.qmax());
    for (const auto &[m, p] : a.terms())
        r.add(m, proj_plus(p));
    return r;
}

QSeriesOp q_truncated(const QSeriesOp &a, int q_max)
{
    QSeriesOp r(a.ring(), std::min(q_max, a.qmax()));
    for (const auto &[m, p] : a.terms())
        r.add(m, p);
    return r;
}

QSeriesOp q_scale(const TPsiSeries &u, int q_max, int shift)
{
    QSeriesOp r(u.ring(), q_max);
    for (const auto &[m, p] : u.terms())
        r.add(m.valuation() + shift, p);
    return r;
}

} // namespace kpf
