#pragma once

// Formal pseudo-differential operators P = sum_a p_a d^a over a coefficient
// ring, stored sparsely by order.
//
// Every operator carries a reliable depth d: coefficients at orders >= d are
// exact, orders below d are unknown. Operations propagate d conservatively, so
// a coefficient reported at an order >= depth() never changes when the inputs
// are recomputed to a greater depth.

#include "kpf/coeffring.hpp"

#include <map>
#include <optional>
#include <string>

namespace kpf {

// Depth of operators known at every order (finite data with no tail).
// Operations clamp depths at this value so arithmetic on it cannot overflow.
inline constexpr int kExactDepth = -(1 << 28);

inline bool is_exact_depth(int d) { return d <= kExactDepth; }

class PsiOp {
public:
    // The zero operator, reliable to `depth`.
    PsiOp(RingTag ring, int depth) : ring_(ring), depth_(depth) {}
    PsiOp(RingTag ring, int depth, std::map<int, RingElem> coeffs);

    static PsiOp identity(RingTag ring, int depth) { return monomial(RingElem::one(ring), 0, depth); }
    // d^order
    static PsiOp d(RingTag ring, int order, int depth) { return monomial(RingElem::one(ring), order, depth); }
    // coeff * d^order
    static PsiOp monomial(RingElem coeff, int order, int depth);

    const RingTag &ring() const { return ring_; }
    int depth() const { return depth_; }
    const std::map<int, RingElem> &coeffs() const { return c_; }

    // Throws Error(insufficient_depth) below depth().
    RingElem coeff(int order) const;
    void set(int order, RingElem value);

    // Zero at every reliable order.
    bool is_zero() const { return c_.empty(); }
    // Largest order with a non-zero coefficient; depth() - 1 for the zero
    // operator (an upper bound on the order of the true operator).
    int order() const { return c_.empty() ? depth_ - 1 : c_.rbegin()->first; }
    int lowest_stored_order() const { return c_.empty() ? depth_ : c_.begin()->first; }

    // Drops everything below `depth`; never lowers depth().
    PsiOp truncated(int depth) const;
    PsiOp restricted(int lo, int hi) const;

    PsiOp &operator+=(const PsiOp &o);
    PsiOp &operator-=(const PsiOp &o);
    PsiOp &operator*=(const Rational &s);
    PsiOp operator-() const;
    friend PsiOp operator+(PsiOp a, const PsiOp &b) { return a += b; }
    friend PsiOp operator-(PsiOp a, const PsiOp &b) { return a -= b; }
    friend PsiOp operator*(PsiOp a, const Rational &s) { return a *= s; }

    // Coefficients agree at every order >= max of the two depths.
    friend bool operator==(const PsiOp &a, const PsiOp &b);

    std::string str() const;

private:
    void check_ring(const PsiOp &o) const;

    RingTag ring_;
    int depth_;
    std::map<int, RingElem> c_;
};

// (P o Q)_a = sum_{k >= 0, b + c - k = a} binom(b, k) p_b d^k(q_c), computed at
// every order >= max(depth_P + order_Q, depth_Q + order_P) and >= floor.
// Throws Error(insufficient_depth) when both factors are exact, the product
// has an infinite tail and no floor is given.
PsiOp compose(const PsiOp &p, const PsiOp &q, std::optional<int> floor = std::nullopt);

PsiOp bracket(const PsiOp &p, const PsiOp &q, std::optional<int> floor = std::nullopt);

// Orders >= 0 / orders <= -1. proj_plus(P) is exact whenever depth(P) <= 0.
PsiOp proj_plus(const PsiOp &p);
PsiOp proj_minus(const PsiOp &p);

// [P, Q]_0 = [P+, Q+] - [P-, Q-]
PsiOp r_bracket(const PsiOp &p, const PsiOp &q);

// Inverse computed down to `depth`, or to depth(P) - 2*order(P) when that is
// shallower. Throws Error(not_a_unit) when the leading coefficient is not a
// unit of the ring.
PsiOp psi_inverse(const PsiOp &p, std::optional<int> depth = std::nullopt);

// k-fold composition; power(P, 0) is the identity at depth(P).
PsiOp power(const PsiOp &p, int k, std::optional<int> floor = std::nullopt);

// Coefficient of d^{-1}. Throws Error(insufficient_depth) when depth > -1.
RingElem residue(const PsiOp &p);

// integrate(residue(P)).
Scalar trace(const PsiOp &p);

// trace(P o Q).
Scalar pairing(const PsiOp &p, const PsiOp &q);

} // namespace kpf
