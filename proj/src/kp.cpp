#include "kpf/kp.hpp"

#include <algorithm>

namespace kpf {

namespace {

PsiOp exact(const PsiOp &p)
{
    return PsiOp(p.ring(), kExactDepth, p.coeffs());
}

bool has_lax_shape(const PsiOp &p)
{
    if (p.is_zero() || p.order() != 1 || p.depth() > 0)
        return false;
    return p.coeff(1) == RingElem::one(p.ring()) && p.coeff(0).is_zero();
}

// L in d + Psi^{-1}: the t = 0 slot has Lax shape, every other slot has
// orders <= -1 only.
bool in_lax_space(const TPsiSeries &l)
{
    const PsiOp *l0 = l.find(TimeMonomial());
    if (!l0 || !has_lax_shape(*l0))
        return false;
    for (const auto &[m, p] : l.terms())
        if (!m.is_one() && !p.is_zero() && p.order() >= 0)
            return false;
    return true;
}

int nonzero_slots(const TPsiSeries &s)
{
    return static_cast<int>(std::count_if(s.terms().begin(), s.terms().end(),
                                          [](const auto &kv) { return !kv.second.is_zero(); }));
}

TPsiSeries map_coeffs(const TPsiSeries &s, int n)
{
    TPsiSeries r(s.ring(), s.vmax());
    for (const auto &[m, p] : s.terms()) {
        PsiOp q(p.ring(), p.depth());
        for (const auto &[a, c] : p.coeffs())
            q.set(a, c.derive(n));
        r.set(m, q);
    }
    return r;
}

} // namespace

LaxOp::LaxOp(PsiOp op) : op_(std::move(op))
{
    if (!has_lax_shape(op_))
        throw Error(ErrorCode::predicate_violation, "initial datum is not of the form d + sum_{a <= -1} u_a d^a");
}

SolveResult kp_solve(const LaxOp &l0, int k_max, int v_max, int depth)
{
    if (k_max < 1 || v_max < 1 || depth > -1)
        throw Error(ErrorCode::config_error, "kp_solve needs kMax >= 1, vMax >= 1, depth <= -1");
    const PsiOp &op = l0.op();
    const RingTag ring = op.ring();

    SolveResult r{TPsiSeries(ring, v_max), {TPsiSeries(ring, v_max), TPsiSeries(ring, v_max)}, k_max, v_max, depth,
                  depth - k_max - 1, 0, 0, 0};
    r.s_depth = r.l_depth - 1;

    // Slot t of U and of S is reliable about |t| orders above the floor used
    // for U; start one vMax below the target and widen on failure.
    TPsiSeries u(ring, v_max);
    for (int attempt = 0;; ++attempt) {
        r.u_depth = r.s_depth - v_max * (attempt + 1);
        std::vector<PsiOp> gens;
        for (int k = 1; k <= k_max; ++k)
            gens.push_back(power(op, k, r.u_depth));
        u = exp_t(gens, k_max, v_max, r.u_depth);
        try {
            r.f = factorize(u, r.s_depth);
            break;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::insufficient_depth || attempt == 3)
                throw;
        }
    }

    // (S U)_- = 0 has been verified down to s_depth; Y is differential, so its
    // non-negative part is exact.
    TPsiSeries y(ring, v_max);
    for (const auto &[m, p] : r.f.y.terms())
        y.set(m, exact(proj_plus(p)));
    y.set_barred(true);
    r.f.y = y;

    const TPsiSeries l0s = TPsiSeries::constant(op, v_max);
    const int floor = r.l_depth - v_max;
    TPsiSeries inner = t_mul(l0s, t_inverse(y), floor);
    r.l = t_mul(y, inner, floor).truncated_depth(r.l_depth);
    if (r.l.depth() > r.l_depth)
        throw Error(ErrorCode::insufficient_depth, "L is reliable only to depth " + std::to_string(r.l.depth()));
    if (!in_lax_space(r.l))
        throw Error(ErrorCode::predicate_violation, "Y L0 Y^{-1} is not in d + Psi^{-1}");

    TPsiSeries via_s = t_mul(t_mul(r.f.s, l0s), t_inverse(r.f.s));
    if (!(via_s == r.l))
        throw Error(ErrorCode::predicate_violation, "S L0 S^{-1} differs from Y L0 Y^{-1}");
    r.conjugation_depth = std::max(via_s.depth(), r.l.depth());
    return r;
}

TPsiSeries lax_residual(const TPsiSeries &l, int k)
{
    const int v = std::max(l.vmax() - k, 0);
    TPsiSeries plus = t_proj_plus(t_power(l, k));
    return d_t(l, k) - t_bracket(plus, l).truncated_valuation(v);
}

TPsiSeries zs_residual(const TPsiSeries &l, int i, int j)
{
    const int v = std::max(l.vmax() - std::max(i, j), 0);
    TPsiSeries pi = t_proj_plus(t_power(l, i));
    TPsiSeries pj = t_proj_plus(t_power(l, j));
    return d_t(pi, j).truncated_valuation(v) - d_t(pj, i).truncated_valuation(v) +
           t_bracket(pi, pj).truncated_valuation(v);
}

std::pair<TPsiSeries, TPsiSeries> log_deriv_residual(const FactorPair &f, const TPsiSeries &l, int k)
{
    const int v = std::max(l.vmax() - k, 0);
    TPsiSeries lk = t_power(l, k);
    TPsiSeries y_part = t_mul(d_t(f.y, k), t_inverse(f.y).truncated_valuation(v)) -
                        t_proj_plus(lk).truncated_valuation(v);
    TPsiSeries s_part = t_mul(d_t(f.s, k), t_inverse(f.s).truncated_valuation(v)) +
                        t_proj_minus(lk).truncated_valuation(v);
    return {y_part, s_part};
}

TPsiSeries zc_component(const TPsiSeries &l, int k)
{
    return -t_proj_minus(t_power(l, k)).truncated_valuation(std::max(l.vmax() - k, 0));
}

namespace {

// Floor under which P^k needs no coefficients for its residue to be reliable.
int residue_floor(const PsiOp &p, int k)
{
    return -1 - (k - 1) * std::max(p.is_zero() ? 0 : p.order(), 0);
}

} // namespace

Scalar hamiltonian(const PsiOp &l, int k)
{
    if (k < 1)
        throw Error(ErrorCode::config_error, "Hamiltonian index must be >= 1");
    return trace(power(l, k + 1, residue_floor(l, k + 1))) * Rational(1, k);
}

ScalarTSeries hamiltonian(const TPsiSeries &l, int k)
{
    if (k < 1)
        throw Error(ErrorCode::config_error, "Hamiltonian index must be >= 1");
    int top = 0;
    for (const auto &[m, p] : l.terms())
        if (!p.is_zero())
            top = std::max(top, p.order());
    TPsiSeries lp = t_power(l, k + 1, -1 - k * top);
    ScalarTSeries out;
    for (const auto &[m, p] : lp.terms())
        out.emplace(m, trace(p) * Rational(1, k));
    return out;
}

Scalar trace_polynomial(const std::vector<Rational> &a, const PsiOp &p, std::optional<int> floor)
{
    Scalar total = Scalar::zero(p.ring().z_max);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        if (sgn(a[i]) == 0)
            continue;
        total += trace(power(p, k, floor ? *floor : residue_floor(p, k))) * a[i];
    }
    return total;
}

PsiOp functional_derivative(const std::vector<Rational> &a, const PsiOp &p, std::optional<int> floor)
{
    PsiOp total(p.ring(), kExactDepth);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        if (sgn(a[i]) == 0)
            continue;
        PsiOp term = k == 1 ? PsiOp::identity(p.ring(), kExactDepth) : power(p, k - 1, floor);
        total += term * (a[i] * k);
    }
    return total;
}

Scalar directional_derivative(const std::vector<Rational> &a, const PsiOp &p, const PsiOp &q,
                              std::optional<int> floor)
{
    // (A + eB)(P + eQ) = AP + e(AQ + BP)
    const int top = std::max({p.is_zero() ? 0 : p.order(), q.is_zero() ? 0 : q.order(), 0});
    const int f = floor ? *floor : -1 - (static_cast<int>(a.size()) - 1) * top;
    PsiOp re = PsiOp::identity(p.ring(), kExactDepth);
    PsiOp eps(p.ring(), kExactDepth);
    Scalar total = Scalar::zero(p.ring().z_max);
    for (std::size_t i = 0; i < a.size(); ++i) {
        PsiOp next_eps = compose(re, q, f) + compose(eps, p, f);
        re = compose(re, p, f);
        eps = std::move(next_eps);
        if (sgn(a[i]) != 0)
            total += trace(eps) * a[i];
    }
    return total;
}

PsiOp dressing(const LaxOp &l0, int depth)
{
    const RingTag ring = l0.ring();
    const PsiOp tail = l0.op() - PsiOp::d(ring, 1, kExactDepth);
    PsiOp s(ring, 0, {{0, RingElem::one(ring)}});
    for (int m = 1; m <= -depth; ++m) {
        RingElem rhs = compose(tail, s, -m).coeff(-m);
        RingElem sm;
        try {
            sm = -rhs.antiderive();
        } catch (const NonZeroMean &e) {
            throw NonZeroMean(e.mean(), m);
        }
        std::map<int, RingElem> c = s.coeffs();
        c.emplace(-m, std::move(sm));
        s = PsiOp(ring, -m, std::move(c));
    }
    return s;
}

RingTSeries kp1_residual(const TPsiSeries &l, int k_max)
{
    if (k_max < 3)
        throw Error(ErrorCode::insufficient_kmax, "the KP-I equation needs the t_2 and t_3 flows (kMax >= 3)");
    const int v = l.vmax() - 3;
    RingTSeries out;
    if (v < 0)
        return out;

    auto minus_one = [&](const TPsiSeries &s) {
        TPsiSeries r(s.ring(), s.vmax());
        for (const auto &[m, p] : s.terms())
            r.set(m, PsiOp::monomial(p.coeff(-1), 0, kExactDepth));
        return r;
    };
    TPsiSeries u = minus_one(l);
    // u_{t2} from the t_2 flow is known through vMax, so u_{t2 t2} reaches vMax - 2.
    TPsiSeries u_y = minus_one(t_bracket(t_proj_plus(t_power(l, 2)), l));
    TPsiSeries u_yy = d_t(u_y, 2).truncated_valuation(v);
    TPsiSeries u_t = d_t(u, 3).truncated_valuation(v);
    TPsiSeries u_xxx = map_coeffs(u, 3).truncated_valuation(v);
    TPsiSeries u_ux = t_mul(u, map_coeffs(u, 1)).truncated_valuation(v);
    TPsiSeries inner = u_t - u_xxx * Rational(1, 4) - u_ux * Rational(3);
    TPsiSeries res = u_yy * Rational(3, 4) - map_coeffs(inner, 1);
    for (const auto &[m, p] : res.terms())
        if (!p.is_zero())
            out.emplace(m, p.coeff(0));
    return out;
}

QSeriesOp q_lax_residual(const TPsiSeries &l, int k)
{
    const int q_max = l.vmax() + 1;
    QSeriesOp lt = q_scale(l, q_max, 1);
    QSeriesOp lk = lt;
    for (int i = 1; i < k; ++i)
        lk = q_mul(lk, lt);
    QSeriesOp rhs = q_bracket(q_proj_plus(lk), lt);
    QSeriesOp res = q_scale(d_t(l, k), q_max, 1 + k);
    for (const auto &[m, p] : rhs.terms())
        res.add(m, -p);
    return res;
}

std::string to_string(Check c)
{
    switch (c) {
    case Check::lax: return "lax";
    case Check::zs: return "zs";
    case Check::logderiv: return "logderiv";
    case Check::conservation: return "conservation";
    case Check::kp1: return "kp1";
    case Check::shape: return "shape";
    case Check::dressing: return "dressing";
    }
    return "?";
}

Check parse_check(const std::string &name)
{
    for (Check c : all_checks())
        if (to_string(c) == name)
            return c;
    throw Error(ErrorCode::config_error, "unknown check '" + name + "'");
}

const std::vector<Check> &all_checks()
{
    static const std::vector<Check> all{Check::lax,  Check::zs,    Check::logderiv, Check::conservation,
                                        Check::kp1, Check::shape, Check::dressing};
    return all;
}

std::set<Check> solution_checks()
{
    std::set<Check> s(all_checks().begin(), all_checks().end());
    s.erase(Check::dressing);
    return s;
}

namespace {

CheckOutcome series_outcome(Check c, std::string name, TPsiSeries res, int depth)
{
    CheckOutcome o;
    o.check = c;
    o.name = std::move(name);
    o.verified_depth = res.depth();
    o.nonzero_slots = nonzero_slots(res);
    o.pass = res.is_zero() && res.depth() <= depth;
    if (res.depth() > depth)
        o.detail = "residual reliable only down to depth " + std::to_string(res.depth());
    o.residual = std::move(res);
    return o;
}

std::string kname(const char *base, int k)
{
    return std::string(base) + "[k=" + std::to_string(k) + "]";
}

} // namespace

std::vector<CheckOutcome> run_checks(const LaxOp &l0, const SolveResult &r, const std::set<Check> &checks)
{
    std::vector<CheckOutcome> out;
    const TPsiSeries &l = r.l;
    for (Check c : all_checks()) {
        if (!checks.count(c))
            continue;
        switch (c) {
        case Check::lax:
            for (int k = 1; k <= r.k_max; ++k)
                out.push_back(series_outcome(c, kname("lax", k), lax_residual(l, k), r.depth));
            break;
        case Check::zs:
            for (int i = 1; i <= r.k_max; ++i)
                for (int j = i + 1; j <= r.k_max; ++j)
                    out.push_back(series_outcome(c, "zs[i=" + std::to_string(i) + ",j=" + std::to_string(j) + "]",
                                                 zs_residual(l, i, j), r.depth));
            break;
        case Check::logderiv:
            for (int k = 1; k <= r.k_max; ++k) {
                auto [yr, sr] = log_deriv_residual(r.f, l, k);
                out.push_back(series_outcome(c, kname("logderiv.Y", k), std::move(yr), r.depth));
                out.push_back(series_outcome(c, kname("logderiv.S", k), std::move(sr), r.depth));
            }
            break;
        case Check::conservation:
            for (int k = 1; k <= r.k_max; ++k) {
                CheckOutcome o;
                o.check = c;
                o.name = kname("conservation", k);
                ScalarTSeries h = hamiltonian(l, k);
                ScalarTSeries bad;
                for (const auto &[m, s] : h)
                    if (!m.is_one() && !s.is_zero())
                        bad.emplace(m, s);
                o.pass = bad.empty();
                o.nonzero_slots = static_cast<int>(bad.size());
                auto h0 = h.find(TimeMonomial());
                o.detail = "H_" + std::to_string(k) + " at t = 0: " +
                           (h0 == h.end() ? std::string("0") : h0->second.str());
                o.residual = std::move(bad);
                out.push_back(std::move(o));
            }
            break;
        case Check::kp1: {
            CheckOutcome o;
            o.check = c;
            o.name = "kp1";
            try {
                RingTSeries res = kp1_residual(l, r.k_max);
                o.pass = res.empty();
                o.nonzero_slots = static_cast<int>(res.size());
                o.detail = std::string(kp1_convention) + "; checked through valuation " +
                           std::to_string(l.vmax() - 3);
                o.residual = std::move(res);
            } catch (const Error &e) {
                o.pass = false;
                o.detail = std::string(to_string(e.code())) + ": " + e.what();
            }
            out.push_back(std::move(o));
            break;
        }
        case Check::shape: {
            CheckOutcome o;
            o.check = c;
            o.name = "shape";
            o.verified_depth = r.conjugation_depth;
            o.pass = in_lax_space(l) && r.conjugation_depth <= r.depth;
            o.detail = "L in d + Psi^{-1}; S L0 S^{-1} = Y L0 Y^{-1} down to depth " +
                       std::to_string(r.conjugation_depth);
            out.push_back(std::move(o));
            break;
        }
        case Check::dressing: {
            CheckOutcome o;
            o.check = c;
            o.name = "dressing";
            try {
                PsiOp s0 = dressing(l0, r.depth - 1);
                PsiOp back = compose(compose(s0, PsiOp::d(l0.ring(), 1, kExactDepth)), psi_inverse(s0));
                PsiOp diff = back - l0.op();
                o.verified_depth = diff.depth();
                o.pass = diff.is_zero() && diff.depth() <= r.depth;
                o.nonzero_slots = diff.is_zero() ? 0 : 1;
                o.detail = "S0 d S0^{-1} = L0 down to depth " + std::to_string(diff.depth());
                o.residual = std::move(s0);
            } catch (const NonZeroMean &e) {
                o.pass = false;
                // S0 d S0^{-1} = L0 forces Trace(L0^k) = Trace(d^k) = 0
                o.detail = "NonZeroMean at step " + std::to_string(e.step()) + ", mean " + e.mean().str() +
                           "; Trace(L0^3) = " + (hamiltonian(l0.op(), 2) * Rational(2)).str();
            }
            out.push_back(std::move(o));
            break;
        }
        }
    }
    return out;
}

} // namespace kpf
