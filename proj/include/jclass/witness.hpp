#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jclass/tuple.hpp"

namespace jclass {

// One step of a witness sequence: perturbed point x_i, exponents K_i, the
// image (prod A^K_i) x_i, and the two sup-norm errors the step must keep
// under its schedule tolerance.  Points stay in log form; decode_vector gives
// plain views (deep steps underflow doubles by design).
template <class S>
struct WitnessRecord {
  int index = 0;  // 1-based schedule step
  ExponentVector K;
  std::vector<S> x;
  std::vector<S> image;
  double image_error = 0.0;  // ||decode(image) - effective_target||_inf
  double base_error = 0.0;   // ||decode(x) - base||_inf
};

// Certifies target in J(base) for the pair tuples: records approach the base
// while their images approach the target and exponent sums strictly increase.
// If the last target coordinate was zero for a triangular tuple it is
// replaced by the final schedule tolerance; the substitution is flagged, and
// errors are measured against effective_target.
template <class S>
struct WitnessSequence {
  typename scalar_traits<S>::vector_type base;
  typename scalar_traits<S>::vector_type target;
  typename scalar_traits<S>::vector_type effective_target;
  std::vector<double> schedule;
  std::vector<WitnessRecord<S>> records;
  bool complete = false;            // every schedule step produced a record
  bool target_substituted = false;  // w_n = 0 replaced by the last tolerance
  std::string note;
};

// Builds the explicit witness sequence for a diagonal or triangular pair.
// Diagonal pairs: step i solves for a^k b^l near y_1/x_1 and sets
// x_i = (x_1, y_2/(a_2^k b_2^l), ..., y_n/(a_n^k b_n^l)).  Triangular pairs:
// step i solves for (k/a_1 + l/a_2)/(a_1^k a_2^l) near -x_1/w_n and perturbs
// every coordinate by -c_j/S with c_j = w_j x_1/w_n (c_n = x_1).  Tolerances
// are tightened adaptively until both recorded errors meet the schedule
// entry.  min_k seeds the exponent floor of the first step; later steps
// always raise it past the previous k.
//
// Throws InvalidArgument for non-pair recipes (Kronecker, ZeroPair), x_1 = 0,
// or a malformed schedule; RangeError when a step's exponents leave int64.
// Solver budget exhaustion is not an error: the sequence is returned with
// complete = false and a note.
WitnessSequence<LogSignScalar> jset_witness(const RealTuple& tuple, double x1,
                                            const Eigen::VectorXd& target,
                                            std::span<const double> schedule,
                                            std::int64_t min_k = 0);
WitnessSequence<LogArgScalar> jset_witness(const ComplexTuple& tuple, std::complex<double> x1,
                                           const Eigen::VectorXcd& target,
                                           std::span<const double> schedule,
                                           std::int64_t min_k = 0);

// J(lambda x) = lambda J(x): transports a witness for (base, target) to one
// for (lambda base, lambda target) by scaling every stored point.  Errors
// scale by |lambda|.
template <class S>
WitnessSequence<S> scale_witness(const WitnessSequence<S>& seq,
                                 typename scalar_traits<S>::value_type lambda);

enum class MembershipStatus { Confirmed, NotFoundWithinBudget };

template <class S>
struct MembershipWitness {
  ExponentVector K;
  typename scalar_traits<S>::vector_type preimage;  // (prod A^K)^{-1} y
  double distance = 0.0;                            // ||preimage - x||_inf
};

template <class S>
struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::NotFoundWithinBudget;
  std::optional<MembershipWitness<S>> witness;
  double min_distance_found = 0.0;
  std::int64_t budget_used = 0;  // exponent vectors evaluated
};

// One-step membership probe: scans exponent vectors K with
// growth_floor <= sum K <= budget in ascending-total order (ties
// lexicographic) and confirms on the first (prod A^K)^{-1} y within delta of
// x in sup norm.  Members must all be invertible.
template <class S>
MembershipVerdict<S> jset_membership(const MatrixTuple<S>& tuple,
                                     const typename scalar_traits<S>::vector_type& x,
                                     const typename scalar_traits<S>::vector_type& y,
                                     double delta, std::int64_t growth_floor = 1,
                                     std::int64_t budget = 60);

enum class CertificateVerdict { NotHypercyclic, Inconclusive };

// Obstruction to hypercyclicity read off the tuple's own entries: the
// log-moduli the members can contribute to one coordinate.  Zero entries
// annihilate the coordinate and contribute no generator.
struct Certificate {
  CertificateVerdict verdict = CertificateVerdict::Inconclusive;
  int coordinate = 0;               // 1-based when NotHypercyclic
  std::vector<double> generators;   // collected log-moduli at that coordinate
  std::string reason;
};

// Necessary-condition check per coordinate: if all generators share a sign
// (at least one nonzero), the coordinate's modulus orbit lies in a one-sided
// geometric set and cannot be dense; likewise when exactly two opposite-sign
// generators have a low-height rational ratio.  Diagonal tuples report the
// first obstructed coordinate; triangular tuples skip the corner-fed first
// coordinate and report the last.  No obstruction found => Inconclusive
// (the test cannot certify hypercyclicity).
Certificate non_hc_certificate(const AnyTuple& tuple);

template <class S>
struct OrbitSample {
  std::vector<std::pair<ExponentVector, typename scalar_traits<S>::vector_type>> points;
  std::int64_t enumerated = 0;  // exponent vectors visited
  std::int64_t overflowed = 0;  // dropped: a coordinate left double range
  std::int64_t outside = 0;     // dropped: finite but not in the box
};

// All orbit points (prod A^K) x with sum K <= max_total that land in
// [-box, box]^n, paired with their exponents.  Enumeration order is
// ascending total, ties lexicographic.
template <class S>
OrbitSample<S> orbit_points(const MatrixTuple<S>& tuple,
                            const typename scalar_traits<S>::vector_type& x,
                            std::int64_t max_total, double box);

namespace detail {

// Visits all length-m nonnegative integer vectors with the given sum, in
// lexicographic order.  fn may return false to stop early; returns false on
// early stop.
template <class Fn>
bool for_each_composition_impl(std::vector<std::int64_t>& k, std::size_t pos,
                               std::int64_t remaining, Fn&& fn) {
  if (pos + 1 == k.size()) {
    k[pos] = remaining;
    return fn(std::as_const(k));
  }
  for (std::int64_t v = 0; v <= remaining; ++v) {
    k[pos] = v;
    if (!for_each_composition_impl(k, pos + 1, remaining - v, fn)) return false;
  }
  return true;
}

template <class Fn>
bool for_each_composition(std::size_t m, std::int64_t total, Fn&& fn) {
  std::vector<std::int64_t> k(m, 0);
  if (m == 0) return true;
  return for_each_composition_impl(k, 0, total, fn);
}

}  // namespace detail

}  // namespace jclass
