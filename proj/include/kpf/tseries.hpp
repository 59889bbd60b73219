#pragma once

// Operators depending formally on the times t_1, t_2, ...: series
// sum_t [U]_t t^n with t^n = t_1^{n_1} t_2^{n_2} ... and PsiOp coefficients,
// truncated at valuation |t| = sum i n_i <= vMax.
//
// Each stored slot carries its own reliable depth. An absent slot is exactly
// zero; a stored slot with no coefficients is zero down to its depth only.

#include "kpf/psido.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kpf {

class TimeMonomial {
public:
    TimeMonomial() = default;
    // exps[i - 1] is the exponent of t_i; trailing zeros are dropped.
    explicit TimeMonomial(std::vector<int> exps);
    static TimeMonomial t(int i, int n = 1);

    int exponent(int i) const { return i >= 1 && i <= static_cast<int>(e_.size()) ? e_[i - 1] : 0; }
    const std::vector<int> &exponents() const { return e_; }
    int max_index() const { return static_cast<int>(e_.size()); }
    bool is_one() const { return e_.empty(); }
    int valuation() const;

    friend TimeMonomial operator*(const TimeMonomial &a, const TimeMonomial &b);
    // a / b when b divides a.
    std::optional<TimeMonomial> divided_by(const TimeMonomial &b) const;

    // Canonical order: valuation, then lexicographic on exponents.
    friend std::strong_ordering operator<=>(const TimeMonomial &a, const TimeMonomial &b);
    friend bool operator==(const TimeMonomial &a, const TimeMonomial &b) { return a.e_ == b.e_; }

    std::string str() const;

private:
    std::vector<int> e_;
};

// All monomials in t_1..t_{k_max} of valuation <= v_max, in canonical order.
std::vector<TimeMonomial> monomials_up_to(int v_max, int k_max);

class TPsiSeries {
public:
    TPsiSeries(RingTag ring, int v_max) : ring_(ring), vmax_(v_max) {}

    // P as a series constant in t.
    static TPsiSeries constant(const PsiOp &p, int v_max);
    static TPsiSeries identity(RingTag ring, int v_max, int depth = kExactDepth);

    const RingTag &ring() const { return ring_; }
    int vmax() const { return vmax_; }
    const std::map<TimeMonomial, PsiOp> &terms() const { return terms_; }

    // Asserted membership in the barred space. Setting true on a series that
    // violates the predicate throws Error(predicate_violation).
    bool barred() const { return barred_; }
    void set_barred(bool b);

    const PsiOp *find(const TimeMonomial &m) const;
    // Slot value; exact zero when absent.
    PsiOp at(const TimeMonomial &m) const;
    // Ignored above vMax.
    void set(const TimeMonomial &m, PsiOp p);
    void add(const TimeMonomial &m, const PsiOp &p);

    // Largest slot depth, kExactDepth for a series without stored slots.
    int depth() const;
    bool is_zero() const;

    TPsiSeries truncated_valuation(int v_max) const;
    TPsiSeries truncated_depth(int depth) const;

    TPsiSeries &operator+=(const TPsiSeries &o);
    TPsiSeries &operator-=(const TPsiSeries &o);
    TPsiSeries &operator*=(const Rational &s);
    TPsiSeries operator-() const;
    friend TPsiSeries operator+(TPsiSeries a, const TPsiSeries &b) { return a += b; }
    friend TPsiSeries operator-(TPsiSeries a, const TPsiSeries &b) { return a -= b; }
    friend TPsiSeries operator*(TPsiSeries a, const Rational &s) { return a *= s; }

    // Slotwise PsiOp equality; absent slots compare as exact zeros.
    friend bool operator==(const TPsiSeries &a, const TPsiSeries &b);

    std::string str() const;

private:
    void check_compatible(const TPsiSeries &o) const;

    RingTag ring_;
    int vmax_;
    bool barred_ = false;
    std::map<TimeMonomial, PsiOp> terms_;
};

// [UW]_t = sum_{t' t'' = t} [U]_{t'} o [W]_{t''}. Throws
// Error(truncation_mismatch) when the vMax differ.
TPsiSeries t_mul(const TPsiSeries &u, const TPsiSeries &w, std::optional<int> floor = std::nullopt);
TPsiSeries t_bracket(const TPsiSeries &u, const TPsiSeries &w, std::optional<int> floor = std::nullopt);
TPsiSeries t_power(const TPsiSeries &u, int k, std::optional<int> floor = std::nullopt);

// [V]_0 = [U]_0^{-1}, [V]_t = -[U]_0^{-1} sum_{t' t'' = t, t' != 1} [U]_{t'} [V]_{t''}.
// Throws Error(not_invertible_at_zero) when [U]_0 is not invertible.
TPsiSeries t_inverse(const TPsiSeries &u, std::optional<int> floor = std::nullopt);

// exp(sum_i t_i P_i) with p[i - 1] = P_i. Throws Error(order_violation) when
// order(P_i) > i.
TPsiSeries exp_t(const std::vector<PsiOp> &p, int k_max, int v_max, std::optional<int> floor = std::nullopt);

// Formal derivative in t_k; the result is truncated at vMax - k (clamped at 0).
TPsiSeries d_t(const TPsiSeries &u, int k);

TPsiSeries t_proj_plus(const TPsiSeries &u);
TPsiSeries t_proj_minus(const TPsiSeries &u);

// A coefficient of order a > 0 occurs only in slots of valuation >= a.
bool is_barred(const TPsiSeries &u);
// 1 + (orders <= -1) in every slot.
bool in_g_at(const TPsiSeries &u);
// Barred, [U]_0 in 1 + Psi^{-1}.
bool in_group(const TPsiSeries &u);
// Barred, orders >= 0 only, [U]_0 = 1.
bool in_d_bar_times(const TPsiSeries &u);

// Series in a single formal variable q, coefficient operators by power.
class QSeriesOp {
public:
    QSeriesOp(RingTag ring, int q_max) : ring_(ring), qmax_(q_max) {}

    const RingTag &ring() const { return ring_; }
    int qmax() const { return qmax_; }
    const std::map<int, PsiOp> &terms() const { return terms_; }
    PsiOp at(int m) const;
    void add(int m, const PsiOp &p);

    // Coefficient of q^m at order a is non-zero only when m >= a.
    bool satisfies_q_predicate() const;

    friend bool operator==(const QSeriesOp &a, const QSeriesOp &b);

private:
    RingTag ring_;
    int qmax_;
    std::map<int, PsiOp> terms_;
};

QSeriesOp q_mul(const QSeriesOp &a, const QSeriesOp &b, std::optional<int> floor = std::nullopt);
QSeriesOp q_bracket(const QSeriesOp &a, const QSeriesOp &b, std::optional<int> floor = std::nullopt);
QSeriesOp q_proj_plus(const QSeriesOp &a);
QSeriesOp q_truncated(const QSeriesOp &a, int q_max);

// t_n -> q^n t_n followed by t_n -> 1, times q^shift: the coefficient of
// q^{m + shift} is the sum of all slots of valuation m.
QSeriesOp q_scale(const TPsiSeries &u, int q_max, int shift = 0);

} // namespace kpf
