#pragma once

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <limits>

#include <Eigen/Core>

#include "pst/errors.hpp"

namespace pst {

// Error-free transformations. Each returns (s, e) with s + e exactly equal to
// the operation on the inputs and s the rounded result.

struct TwoTerm {
  double hi;
  double lo;
};

inline TwoTerm two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

// Requires |a| >= |b| (or a == 0).
inline TwoTerm fast_two_sum(double a, double b) {
  const double s = a + b;
  const double e = b - (s - a);
  return {s, e};
}

inline TwoTerm two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

/// Unevaluated sum hi + lo of two doubles with |lo| <= ulp(hi)/2, giving
/// about 106 bits (31 decimal digits) of significand. Every operation
/// renormalizes its result.
class DoubleDouble {
 public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT: implicit widening is exact
  constexpr DoubleDouble(int x) : hi_(x), lo_(0.0) {}     // NOLINT

  template <std::integral I>
    requires(!std::same_as<I, int> && !std::same_as<I, bool>)
  constexpr DoubleDouble(I x)  // NOLINT
      : hi_(static_cast<double>(x)),
        lo_(static_cast<double>(x - static_cast<I>(static_cast<double>(x)))) {}

  /// Builds hi + lo and renormalizes; the parts may overlap on input.
  static DoubleDouble from_parts(double hi, double lo) {
    const TwoTerm t = two_sum(hi, lo);
    return raw(t.hi, t.lo);
  }

  /// Exact sum / product of two doubles.
  static DoubleDouble sum(double a, double b) {
    const TwoTerm t = two_sum(a, b);
    return raw(t.hi, t.lo);
  }
  static DoubleDouble product(double a, double b) {
    const TwoTerm t = two_prod(a, b);
    return raw(t.hi, t.lo);
  }

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }

  explicit constexpr operator double() const { return hi_ + lo_; }

  DoubleDouble operator-() const { return raw(-hi_, -lo_); }

  friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    TwoTerm s = two_sum(a.hi_, b.hi_);
    if (!std::isfinite(s.hi)) return raw(s.hi, 0.0);
    const TwoTerm t = two_sum(a.lo_, b.lo_);
    s.lo += t.hi;
    s = fast_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    s = fast_two_sum(s.hi, s.lo);
    return raw(s.hi, s.lo);
  }

  friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

  friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    TwoTerm p = two_prod(a.hi_, b.hi_);
    if (!std::isfinite(p.hi)) return raw(p.hi, 0.0);
    p.lo += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    p = fast_two_sum(p.hi, p.lo);
    return raw(p.hi, p.lo);
  }

  friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    if (b.hi_ == 0.0) throw DivisionByZero("double-double division by zero");
    // Three-term long division; each partial quotient removes ~53 bits.
    const double q1 = a.hi_ / b.hi_;
    if (!std::isfinite(q1)) return raw(q1, 0.0);
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi_ / b.hi_;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi_ / b.hi_;
    TwoTerm q = fast_two_sum(q1, q2);
    return DoubleDouble(raw(q.hi, q.lo)) + DoubleDouble(q3);
  }

  DoubleDouble& operator+=(const DoubleDouble& o) { return *this = *this + o; }
  DoubleDouble& operator-=(const DoubleDouble& o) { return *this = *this - o; }
  DoubleDouble& operator*=(const DoubleDouble& o) { return *this = *this * o; }
  DoubleDouble& operator/=(const DoubleDouble& o) { return *this = *this / o; }

  friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend std::partial_ordering operator<=>(const DoubleDouble& a, const DoubleDouble& b) {
    if (const auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

 private:
  static constexpr DoubleDouble raw(double hi, double lo) {
    DoubleDouble r;
    r.hi_ = hi;
    r.lo_ = lo;
    return r;
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

namespace dd_constants {
inline const DoubleDouble pi = DoubleDouble::from_parts(3.141592653589793, 1.2246467991473532e-16);
inline const DoubleDouble half_pi = DoubleDouble::from_parts(1.5707963267948966, 6.123233995736766e-17);
inline const DoubleDouble ln2 = DoubleDouble::from_parts(0.6931471805599453, 2.3190468138462996e-17);
/// 2^-104: spacing of the 106-bit significand relative to its leading bit.
inline constexpr double epsilon = 0x1p-104;
}  // namespace dd_constants

inline DoubleDouble abs(const DoubleDouble& x) { return x.hi() < 0.0 ? -x : x; }
inline bool isfinite(const DoubleDouble& x) { return std::isfinite(x.hi()); }
inline bool isnan(const DoubleDouble& x) { return std::isnan(x.hi()); }
inline DoubleDouble ldexp(const DoubleDouble& x, int e) {
  return DoubleDouble::from_parts(std::ldexp(x.hi(), e), std::ldexp(x.lo(), e));
}

DoubleDouble sqrt(const DoubleDouble& x);
DoubleDouble exp(const DoubleDouble& x);
DoubleDouble log(const DoubleDouble& x);
DoubleDouble sin(const DoubleDouble& x);
DoubleDouble cos(const DoubleDouble& x);
DoubleDouble cosh(const DoubleDouble& x);
DoubleDouble round(const DoubleDouble& x);

/// x^n by binary powering; negative n takes the reciprocal.
DoubleDouble pow(const DoubleDouble& x, int n);

std::ostream& operator<<(std::ostream& os, const DoubleDouble& x);

/// Precision tag carried by results; the scalar type decides it.
enum class Precision { standard, extended };

template <class Scalar>
inline constexpr Precision precision_of = Precision::standard;
template <>
inline constexpr Precision precision_of<DoubleDouble> = Precision::extended;

/// Unit roundoff-scale epsilon for a working scalar.
template <class Scalar>
constexpr double working_epsilon() {
  if constexpr (std::same_as<Scalar, DoubleDouble>) {
    return dd_constants::epsilon;
  } else {
    return std::numeric_limits<Scalar>::epsilon();
  }
}

template <class Scalar>
Scalar constant_pi() {
  if constexpr (std::same_as<Scalar, DoubleDouble>) {
    return dd_constants::pi;
  } else {
    return static_cast<Scalar>(3.14159265358979323846264338327950288L);
  }
}

inline double to_double(double x) { return x; }
inline double to_double(const DoubleDouble& x) { return x.hi(); }

}  // namespace pst

template <>
class std::numeric_limits<pst::DoubleDouble> {
 public:
  static constexpr bool is_specialized = true;
  static constexpr bool is_signed = true;
  static constexpr bool is_integer = false;
  static constexpr bool is_exact = false;
  static constexpr bool has_infinity = true;
  static constexpr bool has_quiet_NaN = true;
  static constexpr int digits = 106;
  static constexpr int digits10 = 31;
  static constexpr int max_digits10 = 33;
  static constexpr int radix = 2;
  static constexpr pst::DoubleDouble epsilon() { return pst::dd_constants::epsilon; }
  static constexpr pst::DoubleDouble min() { return 0x1p-969; }  // lo stays normal
  static constexpr pst::DoubleDouble max() { return std::numeric_limits<double>::max(); }
  static constexpr pst::DoubleDouble lowest() { return -std::numeric_limits<double>::max(); }
  static constexpr pst::DoubleDouble infinity() { return std::numeric_limits<double>::infinity(); }
  static constexpr pst::DoubleDouble quiet_NaN() { return std::numeric_limits<double>::quiet_NaN(); }
};

namespace Eigen {
template <>
struct NumTraits<pst::DoubleDouble> : GenericNumTraits<pst::DoubleDouble> {
  using Real = pst::DoubleDouble;
  using NonInteger = pst::DoubleDouble;
  using Nested = pst::DoubleDouble;
  using Literal = pst::DoubleDouble;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 20,
    MulCost = 10
  };
  static inline Real epsilon() { return pst::dd_constants::epsilon; }
  static inline Real dummy_precision() { return 1e-28; }
  static inline int digits10() { return 31; }
  static inline Real highest() { return std::numeric_limits<double>::max(); }
  static inline Real lowest() { return -std::numeric_limits<double>::max(); }
};
}  // namespace Eigen
