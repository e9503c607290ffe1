#include "jclass/convergents.hpp"

#include <cmath>
#include <limits>

#include "jclass/errors.hpp"

namespace jclass {
namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

// x as an exact fraction num/den with den a power of two.  Returns false when
// the exact representation does not fit the 128-bit working range; those
// inputs (|x| >= 2^62 or 0 < |x| < 2^-62) are nowhere near a low-height
// rational other than 0, which the caller handles.
bool exact_fraction(double x, __int128& num, __int128& den) {
  int exp2 = 0;
  const double m = std::frexp(std::fabs(x), &exp2);  // m in [0.5, 1)
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int e2 = exp2 - 53;
  if (e2 >= 0) {
    if (exp2 > 62) return false;
    num = static_cast<__int128>(mant) << e2;
    den = 1;
  } else {
    if (-e2 > 115) return false;
    num = mant;
    den = static_cast<__int128>(1) << -e2;
  }
  if (x < 0) num = -num;
  return true;
}

}  // namespace

std::vector<Convergent> convergents(double x, int depth) {
  if (!std::isfinite(x)) throw InvalidArgument("convergents: x must be finite");
  if (depth < 1) throw InvalidArgument("convergents: depth must be >= 1");
  if (depth > 64) depth = 64;

  std::vector<Convergent> out;
  if (x == 0.0) {
    out.push_back({0, 1});
    return out;
  }

  __int128 num = 0, den = 1;
  if (!exact_fraction(x, num, den)) {
    // Magnitude out of the exact-arithmetic window: x is either gigantic or a
    // subnormal-scale speck; the only candidate convergent of interest is 0/1.
    if (std::fabs(x) < 1.0) out.push_back({0, 1});
    return out;
  }

  // p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1; p_i = a_i p_{i-1} + p_{i-2}.
  __int128 p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  for (int i = 0; i < depth && den != 0; ++i) {
    // Floor division (first quotient may be negative; remainders stay in [0, den)).
    __int128 a = num / den;
    __int128 r = num % den;
    if (r < 0) {
      a -= 1;
      r += den;
    }
    const __int128 p = a * p_prev + p_prev2;
    const __int128 q = a * q_prev + q_prev2;
    if (p > kInt64Max || p < -static_cast<__int128>(kInt64Max) || q > kInt64Max) break;
    out.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    num = den;
    den = r;
  }
  return out;
}

RationalityProbe probe_rationality(double x, int depth, std::int64_t height_bound) {
  if (!std::isfinite(x)) throw InvalidArgument("probe_rationality: x must be finite");
  if (height_bound < 1) throw InvalidArgument("probe_rationality: height bound must be >= 1");
  RationalityProbe probe;
  const auto cs = convergents(x, depth);
  probe.depth_used = static_cast<int>(cs.size());
  for (const auto& c : cs) {
    if (c.q > height_bound) break;  // denominators only grow from here
    if (static_cast<double>(c.p) / static_cast<double>(c.q) == x) {
      probe.rational = true;
      probe.p = c.p;
      probe.q = c.q;
      return probe;
    }
  }
  return probe;
}

}  // namespace jclass
