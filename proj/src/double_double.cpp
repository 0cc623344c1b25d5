#include "pst/double_double.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace pst {
namespace {

constexpr double kSeriesCutoff = 1e-34;

DoubleDouble nan_dd() { return std::numeric_limits<double>::quiet_NaN(); }

// Taylor sums for |r| <= pi/4.
DoubleDouble sin_taylor(const DoubleDouble& r) {
  const DoubleDouble r2 = r * r;
  DoubleDouble term = r;
  DoubleDouble sum = r;
  for (int k = 1; k < 40; ++k) {
    term = -(term * r2) / DoubleDouble((2 * k) * (2 * k + 1));
    sum += term;
    if (std::fabs(term.hi()) < kSeriesCutoff * std::fabs(sum.hi())) break;
  }
  return sum;
}

DoubleDouble cos_taylor(const DoubleDouble& r) {
  const DoubleDouble r2 = r * r;
  DoubleDouble term = 1.0;
  DoubleDouble sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term = -(term * r2) / DoubleDouble((2 * k - 1) * (2 * k));
    sum += term;
    if (std::fabs(term.hi()) < kSeriesCutoff) break;
  }
  return sum;
}

// Splits x = j*(pi/2) + r with |r| <= pi/4 and returns j mod 4.
int reduce_quadrant(const DoubleDouble& x, DoubleDouble& r) {
  const DoubleDouble j = round(x / dd_constants::half_pi);
  r = x - j * dd_constants::half_pi;
  const long long q = static_cast<long long>(j.hi()) + static_cast<long long>(j.lo());
  return static_cast<int>(((q % 4) + 4) % 4);
}

}  // namespace

DoubleDouble round(const DoubleDouble& x) {
  const double hi = std::nearbyint(x.hi());
  if (hi == x.hi()) {
    // hi already integral; the fraction lives in lo.
    return DoubleDouble::from_parts(hi, std::nearbyint(x.lo()));
  }
  if (std::fabs(hi - x.hi()) == 0.5) {
    // Tie on hi: lo decides the direction.
    if (x.lo() > 0.0 && hi < x.hi()) return hi + 1.0;
    if (x.lo() < 0.0 && hi > x.hi()) return hi - 1.0;
  }
  return hi;
}

DoubleDouble sqrt(const DoubleDouble& x) {
  if (x.hi() < 0.0) return nan_dd();
  if (x.hi() == 0.0) return 0.0;
  if (!std::isfinite(x.hi())) return x;
  const double s = std::sqrt(x.hi());
  const DoubleDouble residual = x - DoubleDouble::product(s, s);
  return DoubleDouble::from_parts(s, residual.hi() / (2.0 * s));
}

DoubleDouble exp(const DoubleDouble& x) {
  if (std::isnan(x.hi())) return x;
  if (x.hi() > 709.78) return std::numeric_limits<double>::infinity();
  if (x.hi() < -745.2) return 0.0;
  if (x.hi() == 0.0) return 1.0;

  const double k = std::nearbyint(x.hi() / dd_constants::ln2.hi());
  DoubleDouble r = x - dd_constants::ln2 * DoubleDouble(k);
  constexpr int kSquarings = 10;
  r = ldexp(r, -kSquarings);

  // expm1(r) by Taylor, then (1 + s)^2 = 1 + (2s + s^2) keeps the small part.
  DoubleDouble term = r;
  DoubleDouble s = r;
  for (int n = 2; n < 30; ++n) {
    term = term * r / DoubleDouble(n);
    s += term;
    if (std::fabs(term.hi()) < kSeriesCutoff * std::fabs(s.hi())) break;
  }
  for (int i = 0; i < kSquarings; ++i) s = ldexp(s, 1) + s * s;
  // Scale in two steps so 2^k never overflows before the product underflows.
  const DoubleDouble one_plus = DoubleDouble(1.0) + s;
  const int ki = static_cast<int>(k);
  return ldexp(ldexp(one_plus, ki / 2), ki - ki / 2);
}

DoubleDouble log(const DoubleDouble& x) {
  if (x.hi() < 0.0 || std::isnan(x.hi())) return nan_dd();
  if (x.hi() == 0.0) return -std::numeric_limits<double>::infinity();
  if (!std::isfinite(x.hi())) return x;
  // Newton on exp(y) = x; each step doubles the correct bits.
  DoubleDouble y = std::log(x.hi());
  for (int i = 0; i < 2; ++i) y = y + x * exp(-y) - DoubleDouble(1.0);
  return y;
}

DoubleDouble sin(const DoubleDouble& x) {
  if (!std::isfinite(x.hi())) return nan_dd();
  DoubleDouble r;
  switch (reduce_quadrant(x, r)) {
    case 0: return sin_taylor(r);
    case 1: return cos_taylor(r);
    case 2: return -sin_taylor(r);
    default: return -cos_taylor(r);
  }
}

DoubleDouble cos(const DoubleDouble& x) {
  if (!std::isfinite(x.hi())) return nan_dd();
  DoubleDouble r;
  switch (reduce_quadrant(x, r)) {
    case 0: return cos_taylor(r);
    case 1: return -sin_taylor(r);
    case 2: return -cos_taylor(r);
    default: return sin_taylor(r);
  }
}

DoubleDouble cosh(const DoubleDouble& x) {
  const DoubleDouble e = exp(abs(x));
  return ldexp(e + DoubleDouble(1.0) / e, -1);
}

DoubleDouble pow(const DoubleDouble& x, int n) {
  if (n == 0) return 1.0;
  unsigned m = n < 0 ? static_cast<unsigned>(-(n + 1)) + 1u : static_cast<unsigned>(n);
  DoubleDouble base = x;
  DoubleDouble acc = 1.0;
  while (m != 0) {
    if (m & 1u) acc *= base;
    m >>= 1;
    if (m != 0) base *= base;
  }
  return n < 0 ? DoubleDouble(1.0) / acc : acc;
}

std::ostream& operator<<(std::ostream& os, const DoubleDouble& x) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17) << x.hi() << (x.lo() < 0 ? " - " : " + ") << std::fabs(x.lo());
  os.flags(flags);
  os.precision(prec);
  return os;
}

}  // namespace pst
