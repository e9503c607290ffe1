#include "jclass/dioph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jclass/convergents.hpp"
#include "jclass/errors.hpp"
#include "jclass/log.hpp"

namespace jclass {
namespace {

using detail::kPi;
using detail::kTwoPi;
using detail::mul_angle;
using detail::reduce_angle;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest value the lemma51/lemma55 quantization steps may round to; beyond
// it the witness exponent l would not fit int64.
constexpr double kMaxExponentValue = 4.6e18;  // ~2^62

void check_eps(double eps, const char* who) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw InvalidArgument(std::string(who) + ": eps must be positive and finite");
}

std::int64_t nearest(double t) { return std::llround(t); }  // ties away from zero

}  // namespace

TwoGenWitness two_gen_solve(double a, double b, double y, const SearchConfig& cfg) {
  if (!(std::isfinite(a) && a > -1.0 && a < 0.0))
    throw InvalidArgument("two_gen_solve: a must lie in (-1, 0)");
  if (!(std::isfinite(b) && b > 1.0)) throw InvalidArgument("two_gen_solve: b must be > 1");
  if (!std::isfinite(y)) throw InvalidArgument("two_gen_solve: y must be finite");
  if (y == 0.0)
    throw InvalidArgument("two_gen_solve: y = 0 is unreachable (every a^k b^l is nonzero)");
  check_eps(cfg.epsilon, "two_gen_solve");
  if (cfg.k_max < 1) throw InvalidArgument("two_gen_solve: k_max must be >= 1");
  const double la = std::log(-a);
  const double lb = std::log(b);
  if (const auto probe = probe_rationality(la / lb); probe.rational)
    throw ValidationError("two_gen_solve: ln|a|/ln b is a low-height rational (" +
                          std::to_string(probe.p) + "/" + std::to_string(probe.q) + ")");

  const double ly = std::log(std::fabs(y));
  const bool want_even = y > 0.0;
  const std::int64_t lmin = std::max<std::int64_t>(1, cfg.min_l);
  std::int64_t k = std::max<std::int64_t>(1, cfg.min_k);
  if ((k % 2 == 0) != want_even) ++k;

  TwoGenWitness out;
  out.target = y;
  double best_err = kInf;
  std::int64_t best_k = k, best_l = lmin;
  bool found = false;
  for (; k <= cfg.k_max; k += 2) {
    std::int64_t l = nearest((ly - static_cast<double>(k) * la) / lb);
    if (l < lmin) l = lmin;
    const double expo = static_cast<double>(k) * la + static_cast<double>(l) * lb;
    const double err = std::fabs(std::exp(expo) - std::fabs(y));
    if (err < best_err) {
      best_err = err;
      best_k = k;
      best_l = l;
    }
    if (err < cfg.epsilon) {
      found = true;
      break;
    }
  }
  out.k = best_k;
  out.l = best_l;
  out.exhausted = !found;
  // Bitwise identical to the tuple power-product entry for the same (k, l).
  out.value = mul_pow({PowFactor<LogSignScalar>{encode(a), best_k},
                       PowFactor<LogSignScalar>{encode(b), best_l}});
  out.abs_error = std::fabs(decode(out.value).value - y);
  JCLASS_LOG_DEBUG("two_gen: k=" + std::to_string(out.k) + " l=" + std::to_string(out.l) +
                   " err=" + std::to_string(out.abs_error) +
                   (out.exhausted ? " (exhausted)" : ""));
  return out;
}

TwoGenComplexWitness two_gen_solve_complex(std::complex<double> a, std::complex<double> b,
                                           std::complex<double> y, const SearchConfig& cfg) {
  const double ma = std::abs(a), mb = std::abs(b), my = std::abs(y);
  if (!(ma > 0.0) || !std::isfinite(ma) || !(mb > 0.0) || !std::isfinite(mb))
    throw InvalidArgument("two_gen_solve_complex: a and b must be nonzero and finite");
  if (!std::isfinite(my)) throw InvalidArgument("two_gen_solve_complex: y must be finite");
  if (my == 0.0) throw InvalidArgument("two_gen_solve_complex: y = 0 is unreachable");
  check_eps(cfg.epsilon, "two_gen_solve_complex");
  const double la = std::log(ma), lb = std::log(mb);
  if (!(la * lb < 0.0))
    throw ValidationError("two_gen_solve_complex: |a| and |b| must strictly straddle 1");
  if (const auto probe = probe_rationality(la / lb); probe.rational)
    throw ValidationError("two_gen_solve_complex: ln|a|/ln|b| is a low-height rational (" +
                          std::to_string(probe.p) + "/" + std::to_string(probe.q) + ")");

  const double ta = std::arg(a), tb = std::arg(b);
  const double ly = std::log(my);
  const std::int64_t lmin = std::max<std::int64_t>(1, cfg.min_l);
  // l window around the modulus-locked centre: a deviation d shifts the
  // modulus by roughly |y| d |ln|b||.
  const std::int64_t window = std::min<std::int64_t>(
      64, static_cast<std::int64_t>(std::ceil(cfg.epsilon / (my * std::fabs(lb)))) + 1);

  TwoGenComplexWitness out;
  out.target = y;
  double best_err = kInf;
  std::int64_t best_k = std::max<std::int64_t>(1, cfg.min_k), best_l = lmin;
  bool found = false;
  for (std::int64_t k = std::max<std::int64_t>(1, cfg.min_k); k <= cfg.k_max && !found; ++k) {
    std::int64_t l0 = nearest((ly - static_cast<double>(k) * la) / lb);
    if (l0 < lmin) l0 = lmin;
    for (std::int64_t l = std::max(lmin, l0 - window); l <= l0 + window; ++l) {
      const double expo = static_cast<double>(k) * la + static_cast<double>(l) * lb;
      const double ang = reduce_angle(mul_angle(k, ta) + mul_angle(l, tb));
      const std::complex<double> v = std::polar(std::exp(expo), ang);
      const double err = std::abs(v - y);
      if (err < best_err) {
        best_err = err;
        best_k = k;
        best_l = l;
      }
      if (err < cfg.epsilon) {
        found = true;
        break;
      }
    }
  }
  out.k = best_k;
  out.l = best_l;
  out.exhausted = !found;
  out.value = mul_pow({PowFactor<LogArgScalar>{encode(a), best_k},
                       PowFactor<LogArgScalar>{encode(b), best_l}});
  out.abs_error = std::abs(decode(out.value).value - y);
  return out;
}

Lemma51Witness lemma51_witness(double a, double x, double eps, std::int64_t min_k,
                               std::int64_t zero_l) {
  if (!(std::isfinite(a) && a > 1.0)) throw InvalidArgument("lemma51_witness: a must be > 1");
  if (!std::isfinite(x)) throw InvalidArgument("lemma51_witness: x must be finite");
  check_eps(eps, "lemma51_witness");
  if (zero_l < 1) throw InvalidArgument("lemma51_witness: zero_l must be >= 1");

  Lemma51Witness out;
  out.target = x;
  const double lna = std::log(a);

  auto evaluate = [&](std::int64_t k, std::int64_t l) {
    const double sign = (l & 1) ? -1.0 : 1.0;
    return (static_cast<double>(k) / a - static_cast<double>(l)) /
           (std::pow(a, static_cast<double>(k)) * sign);
  };

  if (x == 0.0) {
    // "keeping l fixed we can find k big enough": |value| ~ l / a^k -> 0.
    std::int64_t k = std::max<std::int64_t>(1, min_k);
    double v = evaluate(k, zero_l);
    while (!(std::fabs(v) < eps)) {
      ++k;
      if (k > 2'000'000)
        throw InvalidArgument("lemma51_witness: x = 0 search exceeded its sanity bound");
      v = evaluate(k, zero_l);
    }
    out.k = k;
    out.l = zero_l;
    out.s = 0;
    out.value = v;
    out.abs_error = std::fabs(v);
    return out;
  }

  std::int64_t k = std::max<std::int64_t>(1, min_k);
  while (std::pow(a, -static_cast<double>(k)) >= eps / 2.0) ++k;
  const double apk = std::pow(a, static_cast<double>(k));
  // s stays < 2 a^k max(|x|, k) / 2; guard the int64 range before rounding.
  if (static_cast<double>(k) * lna + std::log(std::max(std::fabs(x), 1.0)) >
      std::log(kMaxExponentValue))
    throw RangeError("lemma51_witness: witness exponent exceeds the integer range", 1,
                     static_cast<double>(k) * lna);
  std::int64_t s;
  if (x > 0.0) {
    s = nearest((x * apk + 1.0 + static_cast<double>(k) / a) / 2.0);
    if (s < 1) s = 1;
    out.l = 2 * s - 1;
  } else {
    s = nearest((static_cast<double>(k) / a - x * apk) / 2.0);
    if (s < 1) s = 1;
    out.l = 2 * s;
  }
  out.k = k;
  out.s = s;
  out.value = evaluate(out.k, out.l);
  out.abs_error = std::fabs(out.value - x);
  return out;
}

std::vector<Lemma51Witness> lemma51_sequence(double a, double x,
                                             std::span<const double> schedule) {
  if (x == 0.0)
    throw InvalidArgument(
        "lemma51_sequence: x = 0 has a fixed-l witness family; use lemma51_witness directly");
  if (schedule.empty()) throw InvalidArgument("lemma51_sequence: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0)) throw InvalidArgument("lemma51_sequence: tolerances must be > 0");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw InvalidArgument("lemma51_sequence: schedule must be strictly decreasing");
  }
  std::vector<Lemma51Witness> out;
  std::int64_t floor_k = 1;
  for (double eps : schedule) {
    out.push_back(lemma51_witness(a, x, eps, floor_k));
    floor_k = out.back().k + 1;
  }
  return out;
}

namespace {

// Signed angular error of step k: reduce(-k theta - phi).
double rotation_angle_error(std::int64_t k, double theta_r, double phi_r) {
  return reduce_angle(mul_angle(-k, theta_r) - phi_r);
}

// Exhaustive scan fallback; always correct, O(k_max - k_min).
RotationWitness rotation_scan(double theta_r, double phi_r, double delta, std::int64_t k_min,
                              std::int64_t k_max) {
  RotationWitness out;
  double best = kInf;
  std::int64_t best_k = k_min;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const double e = std::fabs(rotation_angle_error(k, theta_r, phi_r));
    if (e < best) {
      best = e;
      best_k = k;
    }
    if (e < delta) {
      out.k = k;
      out.chord = 2.0 * std::sin(e / 2.0);
      return out;
    }
  }
  out.k = best_k;
  out.chord = 2.0 * std::sin(best / 2.0);
  out.exhausted = true;
  return out;
}

// Residue decimation: pick a continued-fraction denominator q of theta/2pi
// whose angular drift eta = reduce(q theta) is below delta, then for each
// residue class mod q locate candidate steps by solving the linear drift
// equation and verify each candidate exactly.  Falls back to the plain scan
// when no usable q exists or nothing is found (exhaustion needs the full
// scan anyway to report the best step).
RotationWitness rotation_decimated(double theta_r, double phi_r, double delta,
                                   std::int64_t k_min, std::int64_t k_max) {
  const std::int64_t span = k_max - k_min;
  std::int64_t q = 0;
  double eta = 0.0;
  for (const auto& c : convergents(std::fabs(theta_r) / kTwoPi, 40)) {
    if (c.q < 1) continue;
    if (c.q > span / 2) break;
    const double e = reduce_angle(mul_angle(c.q, theta_r));
    if (std::fabs(e) < delta && e != 0.0) {
      q = c.q;
      eta = e;
      break;
    }
  }
  if (q == 0) return rotation_scan(theta_r, phi_r, delta, k_min, k_max);
  const auto width = static_cast<std::int64_t>(std::ceil(delta / std::fabs(eta))) + 1;
  if (width > 64) return rotation_scan(theta_r, phi_r, delta, k_min, k_max);

  std::int64_t best_k = -1;
  for (std::int64_t i = 0; i < q && i <= span; ++i) {
    const std::int64_t k0 = k_min + i;
    const double o = rotation_angle_error(k0, theta_r, phi_r);
    const std::int64_t jm = (k_max - k0) / q;
    // err(k0 + j q) ~ o - j eta (mod 2pi): j near (o + 2pi m)/eta.
    const double lo = std::min(0.0, static_cast<double>(jm) * eta);
    const double hi = std::max(0.0, static_cast<double>(jm) * eta);
    const auto m_lo = static_cast<std::int64_t>(std::floor((lo - o) / kTwoPi)) - 1;
    const auto m_hi = static_cast<std::int64_t>(std::ceil((hi - o) / kTwoPi)) + 1;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      const std::int64_t j_star = nearest((o + kTwoPi * static_cast<double>(m)) / eta);
      for (std::int64_t j = std::max<std::int64_t>(0, j_star - width);
           j <= std::min(jm, j_star + width); ++j) {
        const std::int64_t k = k0 + j * q;
        if (best_k >= 0 && k >= best_k) continue;
        if (std::fabs(rotation_angle_error(k, theta_r, phi_r)) < delta) best_k = k;
      }
    }
  }
  if (best_k < 0) return rotation_scan(theta_r, phi_r, delta, k_min, k_max);
  RotationWitness out;
  out.k = best_k;
  out.chord = 2.0 * std::sin(std::fabs(rotation_angle_error(best_k, theta_r, phi_r)) / 2.0);
  return out;
}

}  // namespace

RotationWitness rotation_solve(double theta, double phi, double eps, std::int64_t k_min,
                               std::int64_t k_max) {
  if (!std::isfinite(theta) || !std::isfinite(phi))
    throw InvalidArgument("rotation_solve: angles must be finite");
  check_eps(eps, "rotation_solve");
  k_min = std::max<std::int64_t>(1, k_min);
  if (k_max < k_min) throw InvalidArgument("rotation_solve: k_max must be >= k_min");
  const double theta_r = reduce_angle(theta);
  const double phi_r = reduce_angle(phi);
  // chord < eps  <=>  |angle error| < delta; eps >= 2 passes every step
  // except an exact antipode at eps == 2.
  const double delta = eps > 2.0 ? kPi + 1.0 : 2.0 * std::asin(eps / 2.0);
  if (k_max - k_min > 50'000 && delta < 0.5)
    return rotation_decimated(theta_r, phi_r, delta, k_min, k_max);
  return rotation_scan(theta_r, phi_r, delta, k_min, k_max);
}

Lemma55Witness lemma55_witness(double a, double theta, std::complex<double> w, double eps,
                               std::int64_t min_k, std::int64_t k_max) {
  if (!(std::isfinite(a) && a > 1.0)) throw InvalidArgument("lemma55_witness: a must be > 1");
  if (!std::isfinite(theta)) throw InvalidArgument("lemma55_witness: theta must be finite");
  const double mod_w = std::abs(w);
  if (!(mod_w > 0.0) || !std::isfinite(mod_w))
    throw InvalidArgument("lemma55_witness: w must be nonzero and finite");
  check_eps(eps, "lemma55_witness");

  const double phi = std::arg(w);
  const double lna = std::log(a);
  std::int64_t floor_k = std::max<std::int64_t>(1, min_k);
  RotationWitness rot;
  bool exhausted = false;
  for (;;) {
    rot = rotation_solve(theta, phi, eps / (4.0 * mod_w), floor_k, k_max);
    if (rot.exhausted) {
      exhausted = true;
      break;
    }
    const double growth = static_cast<double>(rot.k) *
                          std::pow(a, -(static_cast<double>(rot.k) - 1.0));
    if (growth < eps / 4.0) break;
    floor_k = rot.k + 1;
    if (floor_k > k_max) {
      exhausted = true;
      break;
    }
    JCLASS_LOG_DEBUG("lemma55: k=" + std::to_string(rot.k) +
                     " fails k/a^{k-1} bound; raising floor");
  }

  const std::int64_t k = rot.k;
  if (static_cast<double>(k) * lna + std::log(std::max(mod_w, 1.0)) >
      std::log(kMaxExponentValue))
    throw RangeError(
        "lemma55_witness: s = nearest((|w| a^k + 1)/2) exceeds the integer exponent range at "
        "k = " + std::to_string(k) + "; only coarser tolerances are representable",
        1, static_cast<double>(k) * lna);

  const double apk = std::pow(a, static_cast<double>(k));
  std::int64_t s = nearest((mod_w * apk + 1.0) / 2.0);
  if (s < 1) s = 1;
  Lemma55Witness out;
  out.k = k;
  out.s = s;
  out.l = 2 * s - 1;
  out.target = w;
  out.chord = rot.chord;
  out.exhausted = exhausted;
  // value = (k/(a e^{i theta}) - l)/(a^k e^{ik theta} (-1)^l), l odd.
  const std::complex<double> numer =
      static_cast<double>(k) / (a * std::polar(1.0, reduce_angle(theta))) -
      std::complex<double>(static_cast<double>(out.l), 0.0);
  const std::complex<double> denom =
      -apk * std::polar(1.0, mul_angle(k, reduce_angle(theta)));
  out.value = numer / denom;
  out.abs_error = std::abs(out.value - w);
  return out;
}

KroneckerWitness kronecker_solve(std::span<const double> alphas, std::span<const double> y,
                                 double eps, std::int64_t k_max, std::int64_t min_k) {
  const std::size_t n = alphas.size();
  if (n == 0 || y.size() != n)
    throw InvalidArgument("kronecker_solve: need matching nonempty alphas and targets");
  for (double a : alphas)
    if (!(std::isfinite(a) && a < 0.0))
      throw InvalidArgument("kronecker_solve: exponents must be negative");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (alphas[i] == alphas[j])
        throw InvalidArgument("kronecker_solve: exponents must be distinct");
  for (double v : y) {
    if (!std::isfinite(v)) throw InvalidArgument("kronecker_solve: targets must be finite");
    if (v == 0.0)
      throw InvalidArgument("kronecker_solve: zero target is unreachable (orbit values are nonzero)");
  }
  check_eps(eps, "kronecker_solve");
  if (k_max < 0) throw InvalidArgument("kronecker_solve: k_max must be >= 0");

  std::vector<double> ly(n);
  std::vector<bool> even(n);
  for (std::size_t j = 0; j < n; ++j) {
    ly[j] = std::log(std::fabs(y[j]));
    even[j] = y[j] > 0.0;
  }

  KroneckerWitness out;
  out.s.assign(n, 0);
  out.exponent_errors.assign(n, kInf);
  out.max_error = kInf;
  std::vector<std::int64_t> s(n);
  std::vector<double> errs(n);
  bool any = false;
  for (std::int64_t k = std::max<std::int64_t>(0, min_k); k <= k_max; ++k) {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = 2.0 * (ly[j] - static_cast<double>(k) * alphas[j]);
      const std::int64_t sj = even[j] ? 2 * nearest(t / 2.0) : 2 * nearest((t - 1.0) / 2.0) + 1;
      if (sj < 0) {
        ok = false;
        break;
      }
      s[j] = sj;
      errs[j] = std::fabs(static_cast<double>(k) * alphas[j] +
                          static_cast<double>(sj) / 2.0 - ly[j]);
      worst = std::max(worst, errs[j]);
    }
    if (!ok) continue;
    any = true;
    if (worst < out.max_error) {
      out.k = k;
      out.s = s;
      out.exponent_errors = errs;
      out.max_error = worst;
    }
    if (worst < eps) {
      out.exhausted = false;
      return out;
    }
  }
  out.exhausted = true;
  if (!any) {
    out.k = std::max<std::int64_t>(0, min_k);
    JCLASS_LOG_INFO("kronecker_solve: no admissible k within budget (all s_j negative)");
  }
  return out;
}

}  // namespace jclass
