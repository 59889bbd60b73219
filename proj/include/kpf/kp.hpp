#pragma once

// The KP hierarchy dL/dt_k = [(L^k)_+, L]: Cauchy solve through the
// factorization of exp(sum t_k L0^k), and the identities a solution satisfies.

#include "kpf/mulase.hpp"

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace kpf {

// Initial datum d + sum_{a <= -1} u_a d^a.
class LaxOp {
public:
    // Throws Error(predicate_violation) on any other shape.
    explicit LaxOp(PsiOp op);
    const PsiOp &op() const { return op_; }
    const RingTag &ring() const { return op_.ring(); }

private:
    PsiOp op_;
};

// Scalar-valued and ring-valued t-series, keyed by monomial.
using ScalarTSeries = std::map<TimeMonomial, Scalar>;
using RingTSeries = std::map<TimeMonomial, RingElem>;

struct SolveResult {
    TPsiSeries l;
    FactorPair f;
    int k_max;
    int v_max;
    int depth;        // requested verification depth
    int l_depth;      // depth L is computed to
    int s_depth;      // depth S is computed to
    int u_depth;      // floor used for exp(sum t_k L0^k)
    // S L0 S^{-1} agrees with L at every order >= this depth.
    int conjugation_depth;
};

// L = Y L0 Y^{-1} where exp(sum_{k <= kMax} t_k L0^k) = S^{-1} Y.
//
// Y is differential by uniqueness of the factorization, so once (S U)_- = 0
// is verified its non-negative part is taken as exact; L is then computed at
// every order >= depth - kMax - 1, deep enough that every residual below is
// reliable down to `depth`. Asserts L in d + Psi^{-1} and S L0 S^{-1} = L,
// throwing Error(predicate_violation) otherwise.
SolveResult kp_solve(const LaxOp &l0, int k_max, int v_max, int depth);

// dT(L, k) - [(L^k)_+, L], truncated at vMax - k.
TPsiSeries lax_residual(const TPsiSeries &l, int k);

// d_{t_j}(L^i)_+ - d_{t_i}(L^j)_+ + [(L^i)_+, (L^j)_+], truncated at vMax - max(i, j).
TPsiSeries zs_residual(const TPsiSeries &l, int i, int j);

// (dT(Y, k) Y^{-1} - (L^k)_+, dT(S, k) S^{-1} + (L^k)_-), truncated at vMax - k.
std::pair<TPsiSeries, TPsiSeries> log_deriv_residual(const FactorPair &f, const TPsiSeries &l, int k);

// -sum_k (L^k)_- dt_k, component k; equals the second log-derivative term
// dT(S, k) S^{-1} on a solution.
TPsiSeries zc_component(const TPsiSeries &l, int k);

// (1/k) Trace(L^{k+1}).
Scalar hamiltonian(const PsiOp &l, int k);
ScalarTSeries hamiltonian(const TPsiSeries &l, int k);

// sum_k a_k Trace(P^k) with a[k - 1] = a_k.
Scalar trace_polynomial(const std::vector<Rational> &a, const PsiOp &p, std::optional<int> floor = std::nullopt);

// sum_k a_k k P^{k-1}.
PsiOp functional_derivative(const std::vector<Rational> &a, const PsiOp &p, std::optional<int> floor = std::nullopt);

// Coefficient of e in sum_k a_k Trace((P + e Q)^k), by dual-number expansion.
Scalar directional_derivative(const std::vector<Rational> &a, const PsiOp &p, const PsiOp &q,
                              std::optional<int> floor = std::nullopt);

// S0 = 1 + sum_{n >= 1} s_{-n} d^{-n} with L0 S0 = S0 d, down to `depth`.
// Equating orders gives s_{-m}' = -[(L0 - d) S0]_{-m}, whose right side only
// involves s_{-n}, n < m. Throws NonZeroMean carrying step m when that right
// side has a non-zero mean.
PsiOp dressing(const LaxOp &l0, int depth);

// u = coefficient of d^{-1} in L, y = t_2, t = t_3:
//   (3/4) u_yy - d_x(u_t - (1/4) u_xxx - 3 u u_x),
// truncated at vMax - 3. u_yy is the t_2 derivative of the d^{-1} coefficient
// of [(L^2)_+, L]; differentiating u twice would only reach vMax - 4.
// Throws Error(insufficient_kmax) when kMax < 3.
RingTSeries kp1_residual(const TPsiSeries &l, int k_max);
inline constexpr const char *kp1_convention =
    "3/4 u_{t2 t2} - d_x(u_{t3} - 1/4 u_xxx - 3 u u_x) with u the d^{-1} coefficient of L, "
    "u_{t2} taken from the t2 flow";

// q-scaled flow: L~ = q L(q t_1, q^2 t_2, ...) at t = 1 satisfies
// (d L / d t_k)~ = [(L~^k)_+, L~] in every power of q up to vMax - k + 1.
QSeriesOp q_lax_residual(const TPsiSeries &l, int k);

enum class Check { lax, zs, logderiv, conservation, kp1, shape, dressing };
std::string to_string(Check c);
Check parse_check(const std::string &name);
const std::vector<Check> &all_checks();
// Every check except dressing, which tests the datum rather than the solve
// and is obstructed whenever some Trace(L0^k) is non-zero.
std::set<Check> solution_checks();

struct CheckOutcome {
    Check check;
    std::string name; // e.g. "lax[k=2]"
    bool pass = false;
    // Residual reliable at every order >= this depth (operator residuals).
    std::optional<int> verified_depth;
    int nonzero_slots = 0;
    std::string detail;
    std::variant<std::monostate, TPsiSeries, ScalarTSeries, RingTSeries, PsiOp> residual;
};

// Runs the requested checks on a solve. A residual passes when it vanishes
// identically and is reliable down to the solve's requested depth.
std::vector<CheckOutcome> run_checks(const LaxOp &l0, const SolveResult &r, const std::set<Check> &checks);

} // namespace kpf
