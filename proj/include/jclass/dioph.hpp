#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "jclass/lognum.hpp"

namespace jclass {

// Budgets and extra exponent floors for the integer searches.  The pair
// solvers range over k, l in {1, 2, ...}; min_k/min_l only raise those floors
// (they force growth along witness sequences), so 0 means "no extra floor".
struct SearchConfig {
  double epsilon = 1e-3;
  std::int64_t k_max = 1'000'000;
  std::int64_t min_k = 0;
  std::int64_t min_l = 0;
};

// (k, l) with a^k b^l within epsilon of y; the sign of a^k b^l is (-1)^k, so
// k's parity is forced by sgn(y).  Ties: smallest k, then smallest l.
struct TwoGenWitness {
  std::int64_t k = 0;
  std::int64_t l = 0;
  LogSignScalar value{};
  double target = 0.0;
  double abs_error = 0.0;
  bool exhausted = false;
};

TwoGenWitness two_gen_solve(double a, double b, double y, const SearchConfig& cfg = {});

// Complex-pair analogue: scan k ascending, test l in a modulus-locked window.
struct TwoGenComplexWitness {
  std::int64_t k = 0;
  std::int64_t l = 0;
  LogArgScalar value{};
  std::complex<double> target{};
  double abs_error = 0.0;
  bool exhausted = false;
};

TwoGenComplexWitness two_gen_solve_complex(std::complex<double> a, std::complex<double> b,
                                           std::complex<double> y,
                                           const SearchConfig& cfg = {});

// Witness for {(k/a - l)/(a^k (-1)^l)} approximating x: k is the smallest
// integer (>= the floor) with a^-k < eps/2; l = 2s-1 (x > 0) or 2s (x < 0)
// with the construction's nearest-integer s, clamped >= 1; for x == 0, l is
// held at zero_l and k grows until |value| < eps.
struct Lemma51Witness {
  std::int64_t k = 0;
  std::int64_t l = 0;
  std::int64_t s = 0;  // 0 in the x == 0 branch
  double value = 0.0;
  double target = 0.0;
  double abs_error = 0.0;
};

Lemma51Witness lemma51_witness(double a, double x, double eps, std::int64_t min_k = 1,
                               std::int64_t zero_l = 1);

// Repeated witnesses under a strictly decreasing tolerance schedule, with the
// k floor raised past each step so k_i strictly increases.
std::vector<Lemma51Witness> lemma51_sequence(double a, double x,
                                             std::span<const double> schedule);

// Smallest k >= k_min with |e^{-ik theta} - e^{i phi}| < eps.
struct RotationWitness {
  std::int64_t k = 0;
  double chord = 0.0;
  bool exhausted = false;
};

RotationWitness rotation_solve(double theta, double phi, double eps, std::int64_t k_min = 1,
                               std::int64_t k_max = 1'000'000);

// Witness for {(k/(a e^{i theta}) - l)/(a^k e^{ik theta} (-1)^l)} near w:
// k satisfies both the rotation bound (tolerance eps/(4|w|) against arg w)
// and k/a^{k-1} < eps/4; l = 2s-1 with s = nearest((|w| a^k + 1)/2) >= 1.
// Throws RangeError when that s does not fit a 64-bit exponent (fine
// tolerances force k so large that s ~ |w| a^k / 2 is astronomical).
struct Lemma55Witness {
  std::int64_t k = 0;
  std::int64_t l = 0;
  std::int64_t s = 0;
  std::complex<double> value{};
  std::complex<double> target{};
  double abs_error = 0.0;
  double chord = 0.0;
  bool exhausted = false;
};

Lemma55Witness lemma55_witness(double a, double theta, std::complex<double> w, double eps,
                               std::int64_t min_k = 1, std::int64_t k_max = 1'000'000);

// Simultaneous approximation: k and nonnegative s_j (parity forced by
// sgn(y_j)) with |k a_j + s_j/2 - ln|y_j|| < eps for every j.  k and s_j
// range over {0, 1, 2, ...}; k advances when some s_j would be negative.
struct KroneckerWitness {
  std::int64_t k = 0;
  std::vector<std::int64_t> s;
  std::vector<double> exponent_errors;  // per-coordinate |k a_j + s_j/2 - ln|y_j||
  double max_error = 0.0;
  bool exhausted = false;
};

KroneckerWitness kronecker_solve(std::span<const double> alphas, std::span<const double> y,
                                 double eps, std::int64_t k_max = 100'000,
                                 std::int64_t min_k = 0);

}  // namespace jclass
