#include "kpf/psido.hpp"

#include <algorithm>
#include <vector>

namespace kpf {

PsiOp::PsiOp(RingTag ring, int depth, std::map<int, RingElem> coeffs) : ring_(ring), depth_(depth)
{
    for (auto &[a, v] : coeffs)
        set(a, std::move(v));
}

PsiOp PsiOp::monomial(RingElem coeff, int order, int depth)
{
    PsiOp p(coeff.tag(), depth);
    if (order >= depth)
        p.set(order, std::move(coeff));
    return p;
}

RingElem PsiOp::coeff(int order) const
{
    if (order < depth_)
        throw Error(ErrorCode::insufficient_depth,
                    "order " + std::to_string(order) + " below reliable depth " + std::to_string(depth_));
    auto it = c_.find(order);
    return it == c_.end() ? RingElem::zero(ring_) : it->second;
}

void PsiOp::set(int order, RingElem value)
{
    if (order < depth_)
        return;
    if (!value.tag().compatible(ring_))
        throw Error(ErrorCode::ring_mismatch, "coefficient in " + value.tag().name() + ", operator over " + ring_.name());
    if (value.is_zero())
        c_.erase(order);
    else
        c_[order] = std::move(value);
}

PsiOp PsiOp::truncated(int depth) const
{
    PsiOp r(ring_, std::max(depth, depth_));
    for (auto it = c_.lower_bound(r.depth_); it != c_.end(); ++it)
        r.c_.emplace_hint(r.c_.end(), *it);
    return r;
}

PsiOp PsiOp::restricted(int lo, int hi) const
{
    PsiOp r(ring_, depth_);
    for (auto it = c_.lower_bound(lo); it != c_.end() && it->first <= hi; ++it)
        r.c_.emplace_hint(r.c_.end(), *it);
    return r;
}

void PsiOp::check_ring(const PsiOp &o) const
{
    if (!ring_.compatible(o.ring_))
        throw Error(ErrorCode::ring_mismatch, "operators over " + ring_.name() + " and " + o.ring_.name());
}

PsiOp &PsiOp::operator+=(const PsiOp &o)
{
    check_ring(o);
    *this = truncated(o.depth_);
    if (o.ring_.z_max >= 0 && o.ring_.z_max < ring_.z_max)
        ring_ = o.ring_;
    for (auto it = o.c_.lower_bound(depth_); it != o.c_.end(); ++it) {
        auto mine = c_.find(it->first);
        if (mine == c_.end()) {
            c_.emplace(*it);
            continue;
        }
        mine->second += it->second;
        if (mine->second.is_zero())
            c_.erase(mine);
    }
    return *this;
}

PsiOp &PsiOp::operator-=(const PsiOp &o)
{
    return *this += -o;
}

PsiOp &PsiOp::operator*=(const Rational &s)
{
    if (sgn(s) == 0) {
        c_.clear();
        return *this;
    }
    for (auto &[a, v] : c_)
        v *= s;
    return *this;
}

PsiOp PsiOp::operator-() const
{
    PsiOp r = *this;
    for (auto &[a, v] : r.c_)
        v = -v;
    return r;
}

bool operator==(const PsiOp &a, const PsiOp &b)
{
    if (!a.ring_.compatible(b.ring_))
        return false;
    int d = std::max(a.depth_, b.depth_);
    auto ia = a.c_.lower_bound(d);
    auto ib = b.c_.lower_bound(d);
    for (; ia != a.c_.end() && ib != b.c_.end(); ++ia, ++ib) {
        if (ia->first != ib->first)
            return false;
        if (!(ia->second - ib->second).is_zero())
            return false;
    }
    return ia == a.c_.end() && ib == b.c_.end();
}

std::string PsiOp::str() const
{
    std::string s;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (!s.empty())
            s += " + ";
        s += "(" + it->second.str() + ")d^" + std::to_string(it->first);
    }
    if (s.empty())
        s = "0";
    if (is_exact_depth(depth_))
        return s;
    return s + " + O(d^" + std::to_string(depth_ - 1) + ")";
}

namespace {

// Lazily extended table of d^k q_c.
class DerivativeCache {
public:
    explicit DerivativeCache(const PsiOp &q)
    {
        for (const auto &[c, v] : q.coeffs())
            rows_.emplace(c, std::vector<RingElem>{v});
    }

    const RingElem &get(int c, int k)
    {
        auto &row = rows_.at(c);
        while (static_cast<int>(row.size()) <= k)
            row.push_back(row.back().derive());
        return row[k];
    }

private:
    std::map<int, std::vector<RingElem>> rows_;
};

} // namespace

PsiOp compose(const PsiOp &p, const PsiOp &q, std::optional<int> floor)
{
    if (!p.ring().compatible(q.ring()))
        throw Error(ErrorCode::ring_mismatch, "operators over " + p.ring().name() + " and " + q.ring().name());
    RingTag tag = p.ring();
    if (q.ring().has_z() && q.ring().z_max < tag.z_max)
        tag = q.ring();

    const int np = p.order();
    const int nq = q.order();
    int depth = std::max({p.depth() + nq, q.depth() + np, kExactDepth});
    if (floor)
        depth = std::max(depth, *floor);
    PsiOp r(tag, depth);
    if (p.is_zero() || q.is_zero())
        return r;

    DerivativeCache dq(q);
    const int q_lo = q.lowest_stored_order();
    const int p_lo = p.lowest_stored_order();

    // Orders in [depth, a_lo) receive no contribution at all.
    int a_lo = depth;
    if (p_lo >= 0)
        a_lo = std::max(a_lo, q_lo);
    bool q_constant = true;
    for (const auto &[c, v] : q.coeffs())
        if (!dq.get(c, 1).is_zero()) {
            q_constant = false;
            break;
        }
    if (q_constant)
        a_lo = std::max(a_lo, p_lo + q_lo);
    if (static_cast<long>(np) + nq - a_lo > 100000)
        throw Error(ErrorCode::insufficient_depth, "composition has an unbounded tail; a depth floor is required");

    for (int a = np + nq; a >= a_lo; --a) {
        RingElem acc = RingElem::zero(tag);
        bool any = false;
        for (const auto &[b, pb] : p.coeffs()) {
            // k ranges over c = a - b + k in [q_lo, nq], k >= 0, and k <= b when b >= 0.
            int k_lo = std::max(0, q_lo - a + b);
            int k_hi = nq - a + b;
            if (b >= 0)
                k_hi = std::min(k_hi, b);
            if (k_lo > k_hi)
                continue;
            RingElem inner = RingElem::zero(tag);
            bool inner_any = false;
            for (int k = k_lo; k <= k_hi; ++k) {
                int c = a - b + k;
                if (!q.coeffs().count(c))
                    continue;
                Rational bin = binomial(b, k);
                if (sgn(bin) == 0)
                    continue;
                const RingElem &dqc = dq.get(c, k);
                if (dqc.is_zero())
                    continue;
                if (bin == 1)
                    inner += dqc;
                else
                    inner += dqc * bin;
                inner_any = true;
            }
            if (!inner_any || inner.is_zero())
                continue;
            acc += pb * inner;
            any = true;
        }
        if (any)
            r.set(a, std::move(acc));
    }
    return r;
}

PsiOp bracket(const PsiOp &p, const PsiOp &q, std::optional<int> floor)
{
    return compose(p, q, floor) - compose(q, p, floor);
}

PsiOp proj_plus(const PsiOp &p)
{
    // Known at every order >= 0, and zero by definition below.
    PsiOp r = p.restricted(0, std::max(p.order(), 0));
    return p.depth() <= 0 ? PsiOp(r.ring(), kExactDepth, r.coeffs()) : r;
}

PsiOp proj_minus(const PsiOp &p)
{
    return p.restricted(p.lowest_stored_order(), -1);
}

PsiOp r_bracket(const PsiOp &p, const PsiOp &q)
{
    return bracket(proj_plus(p), proj_plus(q)) - bracket(proj_minus(p), proj_minus(q));
}

PsiOp psi_inverse(const PsiOp &p, std::optional<int> depth)
{
    if (p.is_zero())
        throw Error(ErrorCode::not_a_unit, "zero operator is not invertible");
    const int n = p.order();
    const RingTag tag = p.ring();
    const int natural = std::max(p.depth() - 2 * n, kExactDepth);
    const int target = depth ? std::max(*depth, natural) : natural;

    // P = a d^n (1 + K) with M = d^{-n} a^{-1} and K = M P - 1 of order <= -1.
    RingElem a_inv = p.coeffs().rbegin()->second.inverse();
    const int m_depth = std::max(std::min(target, natural) - 1, kExactDepth);
    PsiOp m = compose(PsiOp::d(tag, -n, m_depth), PsiOp::monomial(a_inv, 0, m_depth), m_depth);

    const int k_floor = target + n;
    PsiOp k = compose(m, p, k_floor) - PsiOp::identity(tag, k_floor);
    PsiOp minus_k = -k;

    PsiOp sum = PsiOp::identity(tag, k_floor);
    PsiOp term = sum;
    while (true) {
        term = compose(term, minus_k, k_floor);
        if (term.is_zero())
            break;
        sum += term;
    }
    return compose(sum, m, target).truncated(target);
}

PsiOp power(const PsiOp &p, int k, std::optional<int> floor)
{
    if (k < 0)
        return power(psi_inverse(p, floor), -k, floor);
    if (k == 0)
        return PsiOp::identity(p.ring(), p.depth());
    PsiOp r = floor ? p.truncated(*floor) : p;
    for (int i = 1; i < k; ++i)
        r = compose(r, p, floor);
    return r;
}

RingElem residue(const PsiOp &p)
{
    return p.coeff(-1);
}

Scalar trace(const PsiOp &p)
{
    return residue(p).integrate();
}

Scalar pairing(const PsiOp &p, const PsiOp &q)
{
    return trace(compose(p, q, -1));
}

} // namespace kpf
