#pragma once

// Splitting U = S^{-1} Y of a barred group member U, with S in 1 + (orders
// <= -1) and Y purely differential with Y|_{t=0} = 1.

#include "kpf/tseries.hpp"

namespace kpf {

struct FactorPair {
    TPsiSeries s;
    TPsiSeries y;
};

// S is built slot by slot in canonical monomial order:
//   [S]_1 = [U]_1^{-1},  [S]_t = -( sum_{t' t'' = t, t' != t} [S]_{t'} [U]_{t''} )_- o [S]_1,
// which makes (S U)_- vanish slot by slot. Y = S U.
//
// Throws Error(predicate_violation) when U is not a barred group member, and
// Error(insufficient_depth) when S or Y are not reliable down to `depth`.
// Internally S is solved down to depth - vMax - (max order of U); U must be
// reliable about that deep. Both factors are returned truncated at `depth`.
FactorPair factorize(const TPsiSeries &u, int depth);

// S^{-1} Y; `floor` bounds the work when both factors are exact.
TPsiSeries recompose(const FactorPair &f, std::optional<int> floor = std::nullopt);

// (S U)_- slotwise; identically zero for a factorization of U.
TPsiSeries factorization_residual(const TPsiSeries &s, const TPsiSeries &u);

} // namespace kpf
