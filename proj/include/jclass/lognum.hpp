#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "jclass/errors.hpp"

// Log-domain scalar arithmetic. Values are carried as (sign, ln|v|) on the
// real line and (ln|v|, arg v) in the plane, so products with exponents in
// the millions never leave the representable range; decoding back to a plain
// double is the only step that can overflow.

namespace jclass {

// Decode threshold in natural-log units. exp(700) ~ 1.01e304 is still a
// finite double; anything past it is reported as overflow/underflow.
inline constexpr double kDecodeThreshold = 700.0;

enum class OverflowPolicy { Saturate, Error };
enum class DecodeStatus { Finite, Overflow, Underflow };

template <class T>
struct Decoded {
  DecodeStatus status = DecodeStatus::Finite;
  T value{};
  bool finite() const { return status == DecodeStatus::Finite; }
};

namespace detail {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduce to (-pi, pi]. std::remainder is exact (IEEE 754), so the reduction
// itself introduces no rounding error; only -pi needs the half-open fixup.
inline double reduce_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r == -kPi) r = kPi;
  return r + 0.0;  // normalize -0.0
}

// e * arg modulo 2pi with a single rounding: split the product exactly via
// fma, reduce both halves exactly, add once. Keeps argument error per factor
// at ulp scale even for exponents ~1e6.
inline double mul_angle(std::int64_t e, double arg) {
  const double ed = static_cast<double>(e);
  const double hi = ed * arg;
  const double lo = std::fma(ed, arg, -hi);
  return reduce_angle(reduce_angle(hi) + reduce_angle(lo));
}

// Sort-then-fold summation: bit-identical under any permutation of terms.
inline double canonical_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc;
}

}  // namespace detail

// Signed real in log form. sign == 0 is the distinguished zero (log_mag 0).
struct LogSignScalar {
  int sign = 0;
  double log_mag = 0.0;

  static LogSignScalar zero() { return {0, 0.0}; }
  static LogSignScalar one() { return {1, 0.0}; }
  bool is_zero() const { return sign == 0; }
  friend bool operator==(const LogSignScalar&, const LogSignScalar&) = default;
};

// Nonzero complex in log-polar form; arg is always stored reduced to
// (-pi, pi]. is_zero set means the distinguished zero (log_mag 0, arg 0).
struct LogArgScalar {
  bool is_zero = true;
  double log_mag = 0.0;
  double arg = 0.0;

  static LogArgScalar zero() { return {}; }
  static LogArgScalar one() { return {false, 0.0, 0.0}; }
  static LogArgScalar from_parts(double log_mag, double arg) {
    return {false, log_mag, detail::reduce_angle(arg)};
  }
  friend bool operator==(const LogArgScalar&, const LogArgScalar&) = default;
};

inline LogSignScalar encode(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("encode: non-finite value");
  if (v == 0.0) return LogSignScalar::zero();
  return {v < 0.0 ? -1 : 1, std::log(std::fabs(v))};
}

inline LogArgScalar encode(std::complex<double> v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw InvalidArgument("encode: non-finite value");
  if (v.real() == 0.0 && v.imag() == 0.0) return LogArgScalar::zero();
  return LogArgScalar::from_parts(std::log(std::abs(v)), std::arg(v));
}

// Uniform zero test for generic code over both scalar kinds.
inline bool log_is_zero(const LogSignScalar& s) { return s.sign == 0; }
inline bool log_is_zero(const LogArgScalar& s) { return s.is_zero; }

template <class S>
struct PowFactor {
  S base;
  std::int64_t exp = 1;
};

// Product of base^exp over all factors. Zero base: exp > 0 absorbs to zero,
// exp == 0 contributes one, exp < 0 is singular.
inline LogSignScalar mul_pow(std::span<const PowFactor<LogSignScalar>> factors) {
  if (factors.empty()) throw InvalidArgument("mul_pow: empty factor list");
  bool zero = false;
  int sign = 1;
  std::vector<double> mags;
  mags.reserve(factors.size());
  for (const auto& f : factors) {
    if (f.base.sign == 0) {
      if (f.exp < 0) throw SingularError("mul_pow: zero base with negative exponent");
      if (f.exp > 0) zero = true;
      continue;
    }
    if (f.base.sign < 0 && (f.exp & 1)) sign = -sign;
    mags.push_back(static_cast<double>(f.exp) * f.base.log_mag);
  }
  if (zero) return LogSignScalar::zero();
  return {sign, detail::canonical_sum(mags)};
}

inline LogArgScalar mul_pow(std::span<const PowFactor<LogArgScalar>> factors) {
  if (factors.empty()) throw InvalidArgument("mul_pow: empty factor list");
  bool zero = false;
  std::vector<double> mags, args;
  mags.reserve(factors.size());
  args.reserve(factors.size());
  for (const auto& f : factors) {
    if (f.base.is_zero) {
      if (f.exp < 0) throw SingularError("mul_pow: zero base with negative exponent");
      if (f.exp > 0) zero = true;
      continue;
    }
    mags.push_back(static_cast<double>(f.exp) * f.base.log_mag);
    args.push_back(detail::mul_angle(f.exp, f.base.arg));
  }
  if (zero) return LogArgScalar::zero();
  return {false, detail::canonical_sum(mags), detail::reduce_angle(detail::canonical_sum(args))};
}

inline LogSignScalar mul_pow(std::initializer_list<PowFactor<LogSignScalar>> factors) {
  return mul_pow(std::span<const PowFactor<LogSignScalar>>(factors.begin(), factors.size()));
}
inline LogArgScalar mul_pow(std::initializer_list<PowFactor<LogArgScalar>> factors) {
  return mul_pow(std::span<const PowFactor<LogArgScalar>>(factors.begin(), factors.size()));
}

inline Decoded<double> decode(const LogSignScalar& s,
                              OverflowPolicy policy = OverflowPolicy::Saturate,
                              double threshold = kDecodeThreshold) {
  if (s.sign == 0) return {DecodeStatus::Finite, 0.0};
  if (s.log_mag > threshold) {
    if (policy == OverflowPolicy::Error)
      throw RangeError("decode: magnitude overflow", s.sign, s.log_mag);
    const double inf = std::numeric_limits<double>::infinity();
    return {DecodeStatus::Overflow, s.sign > 0 ? inf : -inf};
  }
  if (s.log_mag < -threshold) {
    if (policy == OverflowPolicy::Error)
      throw RangeError("decode: magnitude underflow", s.sign, s.log_mag);
    return {DecodeStatus::Underflow, s.sign > 0 ? 0.0 : -0.0};
  }
  return {DecodeStatus::Finite, static_cast<double>(s.sign) * std::exp(s.log_mag)};
}

inline Decoded<std::complex<double>> decode(const LogArgScalar& s,
                                            OverflowPolicy policy = OverflowPolicy::Saturate,
                                            double threshold = kDecodeThreshold) {
  using C = std::complex<double>;
  if (s.is_zero) return {DecodeStatus::Finite, C(0.0, 0.0)};
  if (s.log_mag > threshold) {
    if (policy == OverflowPolicy::Error)
      throw RangeError("decode: magnitude overflow", 1, s.log_mag);
    const double inf = std::numeric_limits<double>::infinity();
    // inf * 0 would be NaN; a vanishing direction component saturates to 0
    const double cr = std::cos(s.arg), ci = std::sin(s.arg);
    return {DecodeStatus::Overflow, C(cr == 0.0 ? 0.0 : inf * cr, ci == 0.0 ? 0.0 : inf * ci)};
  }
  if (s.log_mag < -threshold) {
    if (policy == OverflowPolicy::Error)
      throw RangeError("decode: magnitude underflow", 1, s.log_mag);
    return {DecodeStatus::Underflow, C(0.0, 0.0)};
  }
  const double m = std::exp(s.log_mag);
  return {DecodeStatus::Finite, C(m * std::cos(s.arg), m * std::sin(s.arg))};
}

// Convenience products (canonical order, so log_mul(a,b) == log_mul(b,a)
// bit for bit).
inline LogSignScalar log_mul(const LogSignScalar& a, const LogSignScalar& b) {
  return mul_pow({PowFactor<LogSignScalar>{a, 1}, PowFactor<LogSignScalar>{b, 1}});
}
inline LogArgScalar log_mul(const LogArgScalar& a, const LogArgScalar& b) {
  return mul_pow({PowFactor<LogArgScalar>{a, 1}, PowFactor<LogArgScalar>{b, 1}});
}
inline LogSignScalar log_pow(const LogSignScalar& a, std::int64_t e) {
  return mul_pow({PowFactor<LogSignScalar>{a, e}});
}
inline LogArgScalar log_pow(const LogArgScalar& a, std::int64_t e) {
  return mul_pow({PowFactor<LogArgScalar>{a, e}});
}

inline LogSignScalar log_inv(const LogSignScalar& a) {
  if (a.sign == 0) throw SingularError("log_inv: zero has no reciprocal");
  return {a.sign, -a.log_mag};
}
inline LogArgScalar log_inv(const LogArgScalar& a) {
  if (a.is_zero) throw SingularError("log_inv: zero has no reciprocal");
  return LogArgScalar::from_parts(-a.log_mag, -a.arg);
}

// Log-domain addition (log-sum-exp with sign/argument handling). Exact
// cancellation returns the distinguished zero.
inline LogSignScalar log_add(const LogSignScalar& x, const LogSignScalar& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  const bool x_big = x.log_mag >= y.log_mag;
  const LogSignScalar& big = x_big ? x : y;
  const LogSignScalar& small = x_big ? y : x;
  const double f = static_cast<double>(big.sign) +
                   static_cast<double>(small.sign) * std::exp(small.log_mag - big.log_mag);
  if (f == 0.0) return LogSignScalar::zero();
  return {f < 0.0 ? -1 : 1, big.log_mag + std::log(std::fabs(f))};
}

inline LogArgScalar log_add(const LogArgScalar& x, const LogArgScalar& y) {
  if (x.is_zero) return y;
  if (y.is_zero) return x;
  // Antipodal with equal magnitude cancels exactly; the generic polar path
  // below would leave an ~ulp(pi) residue instead.
  if (x.log_mag == y.log_mag && detail::reduce_angle(x.arg - y.arg) == detail::kPi)
    return LogArgScalar::zero();
  const bool x_big = x.log_mag >= y.log_mag;
  const LogArgScalar& big = x_big ? x : y;
  const LogArgScalar& small = x_big ? y : x;
  const std::complex<double> f =
      std::polar(1.0, big.arg) + std::polar(std::exp(small.log_mag - big.log_mag), small.arg);
  if (f.real() == 0.0 && f.imag() == 0.0) return LogArgScalar::zero();
  return LogArgScalar::from_parts(big.log_mag + std::log(std::abs(f)), std::arg(f));
}

}  // namespace jclass
