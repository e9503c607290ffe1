#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "jclass/lognum.hpp"

using namespace jclass;
using C = std::complex<double>;

namespace {

double rel_err(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

double rel_err(C got, C want) {
  if (want == C{}) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("real encode/decode round-trips across the double range") {
  const double samples[] = {1.0,    -1.0,   0.5,     -3.25,   1e-300, -1e-300,
                            1e300,  -1e300, 2.5e-17, -7e12,   1e-8,   123456789.0,
                            0.1,    -0.1,   9.99e99, -2.2e-111};
  for (double v : samples) {
    const auto d = decode(encode(v));
    CHECK(d.finite());
    CHECK(rel_err(d.value, v) < 1e-12);
    CHECK(std::signbit(d.value) == std::signbit(v));
  }
}

TEST_CASE("complex encode/decode round-trips") {
  const C samples[] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0},   {0.0, -1.0},
                       {3.0, 4.0}, {-5.0, 2.0}, {1e150, -2e150}, {-1e-200, 1e-200}};
  for (C v : samples) {
    const auto d = decode(encode(v));
    CHECK(d.finite());
    CHECK(rel_err(d.value, v) < 1e-12);
  }
}

TEST_CASE("zero is distinguished and exact") {
  CHECK(encode(0.0).is_zero());
  CHECK(encode(C{0.0, 0.0}).is_zero);
  CHECK(decode(LogSignScalar::zero()).value == 0.0);
  CHECK(decode(LogArgScalar::zero()).value == C{0.0, 0.0});
  CHECK(log_is_zero(LogSignScalar::zero()));
  CHECK(log_is_zero(LogArgScalar::zero()));
  CHECK_FALSE(log_is_zero(encode(1.0)));
  CHECK_FALSE(log_is_zero(encode(C{1.0, 0.0})));
}

TEST_CASE("encode rejects non-finite input") {
  CHECK_THROWS_AS(encode(std::numeric_limits<double>::infinity()), InvalidArgument);
  CHECK_THROWS_AS(encode(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(encode(C(1.0, std::nan(""))), InvalidArgument);
}

TEST_CASE("multiplication and powers match plain arithmetic where it is safe") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(-30.0, 30.0);
  std::uniform_int_distribution<int> sgn(0, 1);
  for (int i = 0; i < 500; ++i) {
    const double a = (sgn(rng) ? 1 : -1) * std::exp(mag(rng));
    const double b = (sgn(rng) ? 1 : -1) * std::exp(mag(rng));
    CHECK(rel_err(decode(log_mul(encode(a), encode(b))).value, a * b) < 1e-12);
  }
  for (int e = -6; e <= 6; ++e) {
    const double a = -1.37;
    CHECK(rel_err(decode(log_pow(encode(a), e)).value, std::pow(a, e)) < 1e-12);
  }
  std::uniform_real_distribution<double> re(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const C a{re(rng), re(rng)};
    const C b{re(rng), re(rng)};
    if (std::abs(a) < 1e-3 || std::abs(b) < 1e-3) continue;
    CHECK(rel_err(decode(log_mul(encode(a), encode(b))).value, a * b) < 1e-12);
    CHECK(rel_err(decode(log_pow(encode(a), 5)).value, std::pow(a, C(5.0))) < 1e-11);
  }
}

TEST_CASE("sign parity of powers is exact") {
  for (int sign : {-1, 1}) {
    const LogSignScalar base{sign, 0.7};
    for (std::int64_t e : {-3, -2, -1, 0, 1, 2, 3, 1000000, 1000001}) {
      const int want = (sign < 0 && (e & 1)) ? -1 : 1;
      CHECK(log_pow(base, e).sign == want);
    }
  }
}

TEST_CASE("mul_pow zero-base rules") {
  const auto z = LogSignScalar::zero();
  const auto two = encode(2.0);
  CHECK(mul_pow({PowFactor<LogSignScalar>{z, 3}, PowFactor<LogSignScalar>{two, 5}}).is_zero());
  // exponent 0 on a zero base contributes the empty product, not zero
  const auto r = mul_pow({PowFactor<LogSignScalar>{z, 0}, PowFactor<LogSignScalar>{two, 3}});
  CHECK(rel_err(decode(r).value, 8.0) < 1e-12);
  CHECK_THROWS_AS(mul_pow({PowFactor<LogSignScalar>{z, -1}}), SingularError);
  CHECK_THROWS_AS(mul_pow(std::span<const PowFactor<LogSignScalar>>{}), InvalidArgument);

  const auto cz = LogArgScalar::zero();
  const auto ci = encode(C{0.0, 1.0});
  CHECK(mul_pow({PowFactor<LogArgScalar>{cz, 2}, PowFactor<LogArgScalar>{ci, 1}}).is_zero);
  CHECK_THROWS_AS(mul_pow({PowFactor<LogArgScalar>{cz, -2}}), SingularError);
}

TEST_CASE("mul_pow is bitwise invariant under factor permutation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(-5.0, 5.0);
  std::uniform_int_distribution<std::int64_t> ex(-1000, 1000);
  std::uniform_int_distribution<int> sgn(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PowFactor<LogSignScalar>> f;
    for (int i = 0; i < 8; ++i)
      f.push_back({LogSignScalar{sgn(rng) ? 1 : -1, mag(rng)}, ex(rng)});
    const auto base = mul_pow(std::span<const PowFactor<LogSignScalar>>(f));
    for (int rep = 0; rep < 4; ++rep) {
      std::shuffle(f.begin(), f.end(), rng);
      const auto again = mul_pow(std::span<const PowFactor<LogSignScalar>>(f));
      CHECK(again == base);  // defaulted ==: sign and log_mag bit for bit
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PowFactor<LogArgScalar>> f;
    for (int i = 0; i < 8; ++i)
      f.push_back({LogArgScalar::from_parts(mag(rng), mag(rng)), ex(rng)});
    const auto base = mul_pow(std::span<const PowFactor<LogArgScalar>>(f));
    for (int rep = 0; rep < 4; ++rep) {
      std::shuffle(f.begin(), f.end(), rng);
      CHECK(mul_pow(std::span<const PowFactor<LogArgScalar>>(f)) == base);
    }
  }
}

TEST_CASE("decode saturates or throws at the threshold") {
  const LogSignScalar big{1, kDecodeThreshold + 1.0};
  const LogSignScalar neg_big{-1, kDecodeThreshold + 1.0};
  const LogSignScalar tiny{1, -kDecodeThreshold - 1.0};
  const LogSignScalar neg_tiny{-1, -kDecodeThreshold - 1.0};

  auto d = decode(big);
  CHECK(d.status == DecodeStatus::Overflow);
  CHECK(d.value == std::numeric_limits<double>::infinity());
  CHECK(decode(neg_big).value == -std::numeric_limits<double>::infinity());

  d = decode(tiny);
  CHECK(d.status == DecodeStatus::Underflow);
  CHECK(d.value == 0.0);
  CHECK_FALSE(std::signbit(d.value));
  CHECK(std::signbit(decode(neg_tiny).value));

  CHECK_THROWS_AS(decode(big, OverflowPolicy::Error), RangeError);
  CHECK_THROWS_AS(decode(tiny, OverflowPolicy::Error), RangeError);

  // exactly at the threshold still decodes finitely
  CHECK(decode(LogSignScalar{1, kDecodeThreshold}).finite());
  CHECK(decode(LogSignScalar{1, -kDecodeThreshold}).finite());
}

TEST_CASE("complex saturating decode never produces NaN") {
  const double pi = 3.14159265358979323846;
  for (double arg : {0.0, pi / 2, -pi / 2, pi, 1.0, -2.5}) {
    const auto d = decode(LogArgScalar::from_parts(kDecodeThreshold + 50.0, arg));
    CHECK(d.status == DecodeStatus::Overflow);
    CHECK_FALSE(std::isnan(d.value.real()));
    CHECK_FALSE(std::isnan(d.value.imag()));
  }
  const auto u = decode(LogArgScalar::from_parts(-kDecodeThreshold - 50.0, 1.0));
  CHECK(u.status == DecodeStatus::Underflow);
  CHECK(u.value == C{0.0, 0.0});
}

TEST_CASE("argument is canonicalized to (-pi, pi]") {
  const double pi = 3.14159265358979323846;
  CHECK(LogArgScalar::from_parts(0.0, pi).arg == pi);
  CHECK(LogArgScalar::from_parts(0.0, -pi).arg == pi);
  CHECK(LogArgScalar::from_parts(0.0, 3 * pi).arg == doctest::Approx(pi).epsilon(1e-15));
  CHECK(encode(C{-1.0, 0.0}).arg == pi);
  const auto sq = log_pow(encode(C{0.0, 1.0}), 2);  // i^2 = -1
  CHECK(sq.arg == doctest::Approx(pi).epsilon(1e-15));
  // arg stays in range under huge exponents
  const auto big = log_pow(LogArgScalar::from_parts(0.0, 2.399), 999983);
  CHECK(big.arg > -pi);
  CHECK(big.arg <= pi);
}

TEST_CASE("log_add matches plain addition and cancels exactly") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> val(-100.0, 100.0);
  for (int i = 0; i < 500; ++i) {
    const double a = val(rng), b = val(rng);
    if (a == 0.0 || b == 0.0) continue;
    const auto s = log_add(encode(a), encode(b));
    const double want = a + b;
    if (want == 0.0)
      CHECK(s.is_zero());
    else
      CHECK(rel_err(decode(s).value, want) < 1e-9);
    // commutativity
    CHECK(log_add(encode(b), encode(a)) == s);
  }
  CHECK(log_add(encode(3.5), encode(-3.5)).is_zero());
  CHECK(log_add(encode(C{1.0, 0.0}), encode(C{-1.0, 0.0})).is_zero);
  // opposite complex pair whose stored args are not exactly pi apart: either
  // exact zero or an ulp-scale relative residue, never a large phantom value
  const auto r = log_add(encode(C{3.0, 4.0}), encode(C{-3.0, -4.0}));
  if (!r.is_zero) CHECK(r.log_mag < std::log(5.0) - 30.0);
  CHECK(log_add(LogSignScalar::zero(), encode(4.0)) == encode(4.0));
  CHECK(log_add(encode(4.0), LogSignScalar::zero()) == encode(4.0));
  // widely separated magnitudes: the small term must not be lost to overflow
  const auto wide = log_add(encode(1e300), encode(1.0));
  CHECK(decode(wide).value == doctest::Approx(1e300));
  const auto cwide = log_add(encode(C{0.0, 1e300}), encode(C{1.0, 0.0}));
  CHECK(decode(cwide).value.imag() == doctest::Approx(1e300));
}

TEST_CASE("log_inv inverts and rejects zero") {
  CHECK(rel_err(decode(log_inv(encode(-8.0))).value, -0.125) < 1e-12);
  CHECK(rel_err(decode(log_inv(encode(C{3.0, 4.0}))).value, 1.0 / C{3.0, 4.0}) < 1e-12);
  CHECK_THROWS_AS(log_inv(LogSignScalar::zero()), SingularError);
  CHECK_THROWS_AS(log_inv(LogArgScalar::zero()), SingularError);
  // inverse of arg = pi stays canonical (-pi reduces back to pi)
  const double pi = 3.14159265358979323846;
  CHECK(log_inv(encode(C{-2.0, 0.0})).arg == pi);
}

TEST_CASE("huge exponents stay representable until decode") {
  // 2^(5e6) and its reciprocal: far outside double range, exact in log form
  const auto v = log_pow(encode(2.0), 5'000'000);
  CHECK(v.log_mag == doctest::Approx(5e6 * std::log(2.0)));
  const auto w = log_mul(v, log_inv(v));
  CHECK(decode(w).value == 1.0);
  CHECK(decode(v).status == DecodeStatus::Overflow);
}
