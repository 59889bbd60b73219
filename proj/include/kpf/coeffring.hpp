#pragma once

// Exact differential coefficient rings.
//
//   FourierElem   trigonometric polynomials sum c_n e^{inx}, c_n in Q(i)
//   PolyElem      Q[x]
//   ZSeries<B>    sum_{m <= z_max} z^m b_m over either base, truncated at z_max
//
// RingElem is the closed sum of the four concrete rings. Binary operations on
// elements of different rings throw Error(ring_mismatch); z-series of
// different z_max meet at the smaller truncation.

#include "kpf/error.hpp"
#include "kpf/rational.hpp"

#include <compare>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kpf {

enum class BaseRing { fourier, poly };

struct RingTag {
    BaseRing base = BaseRing::fourier;
    int z_max = -1; // negative: no z-series layer

    bool has_z() const { return z_max >= 0; }
    // Same base and same presence of the z layer; z_max may differ.
    bool compatible(const RingTag &o) const { return base == o.base && has_z() == o.has_z(); }
    std::string name() const;

    static RingTag fourier() { return {BaseRing::fourier, -1}; }
    static RingTag poly() { return {BaseRing::poly, -1}; }
    static RingTag fourier_z(int z_max) { return {BaseRing::fourier, z_max}; }
    static RingTag poly_z(int z_max) { return {BaseRing::poly, z_max}; }

    friend bool operator==(const RingTag &, const RingTag &) = default;
};

// Codomain of the integration functional: Q(i), or Q(i)[z] truncated at z_max
// for the z-series rings.
class Scalar {
public:
    Scalar() : c_(1) {}
    explicit Scalar(GaussRational v) : c_{std::move(v)} {}
    explicit Scalar(std::vector<GaussRational> coeffs);

    static Scalar zero(int z_max) { return Scalar(std::vector<GaussRational>(std::max(z_max, 0) + 1)); }

    int z_max() const { return static_cast<int>(c_.size()) - 1; }
    const GaussRational &coeff(int m) const { return c_.at(m); }
    const std::vector<GaussRational> &coeffs() const { return c_; }
    bool is_zero() const;

    Scalar &operator+=(const Scalar &o);
    Scalar &operator-=(const Scalar &o);
    Scalar &operator*=(const Rational &s);
    friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Rational &s) { return a *= s; }
    friend Scalar operator*(const Scalar &a, const Scalar &b);
    friend bool operator==(const Scalar &a, const Scalar &b);

    std::string str() const;

private:
    std::vector<GaussRational> c_;
};

// The Fourier antiderivative hit a non-zero mean. `step` is filled in by
// callers that run a recursion (dressing), 0 otherwise.
class NonZeroMean : public Error {
public:
    NonZeroMean(Scalar mean, int step = 0);
    const Scalar &mean() const { return mean_; }
    int step() const { return step_; }

private:
    Scalar mean_;
    int step_;
};

class FourierElem {
public:
    using Term = std::pair<long, GaussRational>;

    FourierElem() = default;
    explicit FourierElem(std::vector<Term> terms);
    static FourierElem constant(GaussRational c) { return mode(0, std::move(c)); }
    static FourierElem mode(long n, GaussRational c);

    const std::vector<Term> &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    GaussRational coeff(long n) const;

    FourierElem &operator+=(const FourierElem &o);
    FourierElem &operator-=(const FourierElem &o);
    FourierElem &operator*=(const Rational &s);
    FourierElem operator-() const;
    friend FourierElem operator+(FourierElem a, const FourierElem &b) { return a += b; }
    friend FourierElem operator-(FourierElem a, const FourierElem &b) { return a -= b; }
    friend FourierElem operator*(const FourierElem &a, const FourierElem &b);
    friend bool operator==(const FourierElem &, const FourierElem &) = default;

    FourierElem derive(int k = 1) const;
    // Requires zero mean; the result has zero mean.
    FourierElem antiderive() const;
    GaussRational mean() const { return coeff(0); }
    // Only single modes c e^{inx} are units.
    FourierElem inverse() const;

private:
    std::vector<Term> t_; // sorted by frequency, no zero coefficients
};

class PolyElem {
public:
    using Term = std::pair<int, Rational>;

    PolyElem() = default;
    explicit PolyElem(std::vector<Term> terms);
    static PolyElem constant(Rational c) { return monomial(0, std::move(c)); }
    static PolyElem monomial(int d, Rational c);

    const std::vector<Term> &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Rational coeff(int d) const;

    PolyElem &operator+=(const PolyElem &o);
    PolyElem &operator-=(const PolyElem &o);
    PolyElem &operator*=(const Rational &s);
    PolyElem operator-() const;
    friend PolyElem operator+(PolyElem a, const PolyElem &b) { return a += b; }
    friend PolyElem operator-(PolyElem a, const PolyElem &b) { return a -= b; }
    friend PolyElem operator*(const PolyElem &a, const PolyElem &b);
    friend bool operator==(const PolyElem &, const PolyElem &) = default;

    PolyElem derive(int k = 1) const;
    // Constant of integration 0.
    PolyElem antiderive() const;
    // Only non-zero constants are units.
    PolyElem inverse() const;

private:
    std::vector<Term> t_; // sorted by degree, no zero coefficients
};

template <class Base>
class ZSeries {
public:
    ZSeries() : c_(1) {}
    explicit ZSeries(int z_max) : c_(z_max + 1) {}
    ZSeries(int z_max, std::vector<Base> coeffs);

    int z_max() const { return static_cast<int>(c_.size()) - 1; }
    const Base &coeff(int m) const { return c_.at(m); }
    const std::vector<Base> &coeffs() const { return c_; }
    bool is_zero() const;

    ZSeries &operator+=(const ZSeries &o);
    ZSeries &operator-=(const ZSeries &o);
    ZSeries &operator*=(const Rational &s);
    ZSeries operator-() const;
    friend ZSeries operator+(ZSeries a, const ZSeries &b) { return a += b; }
    friend ZSeries operator-(ZSeries a, const ZSeries &b) { return a -= b; }
    friend bool operator==(const ZSeries &, const ZSeries &) = default;

    ZSeries derive(int k = 1) const;
    ZSeries antiderive() const;
    ZSeries inverse() const;

private:
    void truncate(int z_max) { c_.resize(z_max + 1); }
    std::vector<Base> c_;
};

// Cauchy product truncated at the smaller z_max.
template <class Base>
ZSeries<Base> operator*(const ZSeries<Base> &a, const ZSeries<Base> &b);

class RingElem {
public:
    using Storage = std::variant<FourierElem, PolyElem, ZSeries<FourierElem>, ZSeries<PolyElem>>;

    RingElem() = default;
    RingElem(FourierElem e) : s_(std::move(e)) {}
    RingElem(PolyElem e) : s_(std::move(e)) {}
    RingElem(ZSeries<FourierElem> e) : s_(std::move(e)) {}
    RingElem(ZSeries<PolyElem> e) : s_(std::move(e)) {}

    static RingElem zero(const RingTag &tag);
    static RingElem constant(const RingTag &tag, const GaussRational &c);
    static RingElem one(const RingTag &tag) { return constant(tag, GaussRational(1)); }
    // Places a base-ring element at z^0 when `tag` has a z layer.
    static RingElem lift(const RingTag &tag, const RingElem &base);

    RingTag tag() const;
    const Storage &storage() const { return s_; }
    bool is_zero() const;

    RingElem &operator+=(const RingElem &o);
    RingElem &operator-=(const RingElem &o);
    RingElem &operator*=(const Rational &s);
    RingElem operator-() const;
    friend RingElem operator+(RingElem a, const RingElem &b) { return a += b; }
    friend RingElem operator-(RingElem a, const RingElem &b) { return a -= b; }
    friend RingElem operator*(const RingElem &a, const RingElem &b);
    friend RingElem operator*(RingElem a, const Rational &s) { return a *= s; }
    friend bool operator==(const RingElem &a, const RingElem &b) { return a.s_ == b.s_; }

    RingElem derive(int k = 1) const;
    // Throws NonZeroMean over Fourier bases when the mean does not vanish.
    RingElem antiderive() const;
    // Mean over S^1 (coefficient of e^{0ix}), componentwise in z.
    // Throws Error(unsupported_ring) for Q[x].
    Scalar integrate() const;
    // Throws Error(not_a_unit).
    RingElem inverse() const;

    std::string str() const;

private:
    Storage s_;
};

inline RingElem ring_add(const RingElem &a, const RingElem &b) { return a + b; }
inline RingElem ring_mul(const RingElem &a, const RingElem &b) { return a * b; }

} // namespace kpf
