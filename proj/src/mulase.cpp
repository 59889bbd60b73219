#include "kpf/mulase.hpp"

#include <algorithm>

namespace kpf {

FactorPair factorize(const TPsiSeries &u, int depth)
{
    if (!in_group(u))
        throw Error(ErrorCode::predicate_violation,
                    "input is not a barred series with value at t = 0 in 1 + Psi^{-1}");

    int k_max = 0;
    int max_order = 0;
    for (const auto &[m, p] : u.terms()) {
        k_max = std::max(k_max, m.max_index());
        if (!p.is_zero())
            max_order = std::max(max_order, p.order());
    }
    // Slot t of S loses up to |t| orders of depth against U; solve deeper and
    // check the delivered depth afterwards.
    const int work = std::max(depth - u.vmax() - max_order, kExactDepth);

    const TimeMonomial one;
    const PsiOp s0 = psi_inverse(u.at(one), work);

    TPsiSeries s(u.ring(), u.vmax());
    s.set(one, s0);
    for (const auto &t : monomials_up_to(u.vmax(), k_max)) {
        if (t.is_one())
            continue;
        // R_t = sum over t' != t of S_{t'} U_{t / t'}; only slots already solved occur.
        std::optional<PsiOp> r;
        for (const auto &[t1, st1] : s.terms()) {
            auto t2 = t.divided_by(t1);
            if (!t2 || t2->is_one())
                continue;
            const PsiOp *ut2 = u.find(*t2);
            if (!ut2)
                continue;
            PsiOp c = compose(st1, *ut2, work);
            if (r)
                *r += c;
            else
                r = std::move(c);
        }
        if (r)
            s.set(t, -compose(proj_minus(*r), s0, work));
    }

    if (s.depth() > depth)
        throw Error(ErrorCode::insufficient_depth,
                    "S is reliable only to depth " + std::to_string(s.depth()) + ", requested " +
                        std::to_string(depth) + "; extend the input operator depth");
    s.set_barred(true);

    TPsiSeries y = t_mul(s, u, work);
    if (y.depth() > depth)
        throw Error(ErrorCode::insufficient_depth,
                    "Y is reliable only to depth " + std::to_string(y.depth()) + ", requested " +
                        std::to_string(depth) + "; extend the input operator depth");
    if (!t_proj_minus(y).is_zero())
        throw Error(ErrorCode::predicate_violation, "(S U)_- does not vanish");
    y.set_barred(true);
    if (!in_d_bar_times(y))
        throw Error(ErrorCode::predicate_violation, "S U is not a differential series with value 1 at t = 0");

    return {s.truncated_depth(depth), y.truncated_depth(depth)};
}

TPsiSeries recompose(const FactorPair &f, std::optional<int> floor)
{
    return t_mul(t_inverse(f.s, floor), f.y, floor);
}

TPsiSeries factorization_residual(const TPsiSeries &s, const TPsiSeries &u)
{
    return t_proj_minus(t_mul(s, u));
}

} // namespace kpf
