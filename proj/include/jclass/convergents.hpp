#pragma once

#include <cstdint>
#include <vector>

namespace jclass {

// One continued-fraction convergent p/q in lowest terms, q >= 1.
struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

// Convergents of the exact rational represented by the double x, computed by
// integer Euclid on its dyadic expansion (no floating-point noise).  The list
// stops at natural termination, at `depth` entries, or before an entry whose
// numerator or denominator would leave int64 range.  Denominators are strictly
// increasing from the second entry on, and each p/q is a best rational
// approximation of x.
std::vector<Convergent> convergents(double x, int depth = 64);

struct RationalityProbe {
  bool rational = false;     // true iff a low-height convergent reconstructs x exactly
  std::int64_t p = 0;        // the reconstructing convergent when rational
  std::int64_t q = 1;
  int depth_used = 0;        // entries examined
};

// Detects whether x is (bit-exactly) the rounding of a low-height rational:
// some convergent with q <= height_bound satisfies fl(p/q) == x.  Every double
// is rational, so the height bound is what separates fl(2/3) from fl(ln2/ln3);
// the latter's first half-ulp-accurate convergent already has q ~ 1e8.
RationalityProbe probe_rationality(double x, int depth = 64,
                                   std::int64_t height_bound = 1'000'000);

}  // namespace jclass
