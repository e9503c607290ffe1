#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jclass/dioph.hpp"
#include "jclass/witness.hpp"

namespace jclass {

// Desk-scale density surrogate: cover [-M, M]^n with a uniform grid of step
// h and count the cells holding at least one point.  max_empty_gap is the
// largest Euclidean distance from an uncovered cell center to its nearest
// point (0 when fully covered, the box diagonal 2M sqrt(n) when no usable
// points exist).
struct DensityReport {
  double box_halfwidth = 0.0;
  double grid_step = 0.0;
  int dimension = 0;
  std::int64_t total_cells = 0;
  std::int64_t covered_cells = 0;
  double coverage = 0.0;
  double max_empty_gap = 0.0;
  std::int64_t points_used = 0;        // landed in some cell
  std::int64_t points_overflowed = 0;  // non-finite or outside the box
};

// dimension <= 0 means infer from the first point (an empty list then counts
// as one-dimensional).  Throws InvalidArgument for bad M/h, mixed point
// dimensions, or a grid beyond 10^8 cells.
DensityReport density_report(std::span<const Eigen::VectorXd> points, double box_halfwidth,
                             double grid_step, int dimension = 0);

enum class ProbeConclusion { ConsistentWithYes, ConsistentWithNo, Inconclusive };

// Everything the probe's conclusion depends on; echoed in the report because
// the thresholds are conventions, not mathematics.
struct ProbeConfig {
  int samples = 100;             // membership targets per spanning vector
  std::uint64_t seed = 1;
  std::int64_t budget = 60;      // membership exponent-sum budget
  double delta = 0.25;           // membership tolerance
  double box = 10.0;             // target sampling box and density box
  std::int64_t orbit_total = 600;  // exponent-sum bound for the density orbit
  double grid_step = 0.5;
  double yes_confirm_fraction = 0.9;  // per-vector Confirmed fraction needed
  double yes_coverage = 0.9;
  double no_coverage = 0.5;
};

struct ProbeVectorSummary {
  int probed = 0;
  int confirmed = 0;
  double confirm_fraction = 0.0;
  double worst_min_distance = 0.0;  // max over targets of min_distance_found
};

// Evidence for the open question "does a spanning set of J-universal vectors
// make the tuple hypercyclic?".  Never a proof: the conclusion is a
// thresholded summary of budgeted searches.
template <class S>
struct ProbeReport {
  ProbeConfig config;
  std::vector<typename scalar_traits<S>::vector_type> spanning_set;
  std::vector<ProbeVectorSummary> per_vector;
  DensityReport orbit_density;  // orbit of the first spanning vector
  ProbeConclusion conclusion = ProbeConclusion::Inconclusive;
  std::string reason;
};

// Rank-checks the spanning set (SVD, relative tolerance 1e-9), probes
// membership of uniformly sampled targets against every spanning vector, and
// samples one orbit for density.  Complex tuples are measured after
// flattening each coordinate to (re, im).  Throws InvalidArgument for a
// rank-deficient set or a non-invertible tuple.
template <class S>
ProbeReport<S> probe_open_question(
    const MatrixTuple<S>& tuple,
    std::span<const typename scalar_traits<S>::vector_type> spanning_set,
    const ProbeConfig& config = {});

// ---- serialization ----------------------------------------------------
// All numbers print via fmt17 (17 significant digits, exact round-trip);
// identical inputs give byte-identical text.

// One line-delimited JSON record per solver witness:
// {"exponents": [...], "value": ..., "target": ..., "abs_error": ..., "exhausted": ...}
std::string to_json_line(const TwoGenWitness& w);
std::string to_json_line(const TwoGenComplexWitness& w);
std::string to_json_line(const Lemma51Witness& w);
std::string to_json_line(const Lemma55Witness& w);
// Needs the solver inputs back to reconstruct the achieved point; abs_error
// reports the worst exponent-scale error (the solver's own tolerance).
std::string to_json_line(const KroneckerWitness& w, std::span<const double> alphas,
                         std::span<const double> y);

template <class S>
std::string to_json(const WitnessSequence<S>& seq);
template <class S>
std::string to_json(const MembershipVerdict<S>& verdict);
std::string to_json(const Certificate& cert);
std::string to_json(const DensityReport& report);
template <class S>
std::string to_json(const ProbeReport<S>& report);

// CSV view of a witness sequence: header row then one row per record with
// columns i, x_i, K_i, image, image_error, base_error; vector-valued columns
// are semicolon-joined decoded entries.
template <class S>
std::vector<std::string> to_csv(const WitnessSequence<S>& seq);

// Writes one line per entry (newline-terminated) to destination.  Failure to
// open or write throws IoError naming the path.
void export_records(std::span<const std::string> lines, const std::string& destination);

// Points CSV: header "x1,...,xn" then fmt17 coordinates, the format density
// --in consumes.  read_points_csv skips the header if present.
std::vector<std::string> points_csv(std::span<const Eigen::VectorXd> points);
std::vector<Eigen::VectorXd> read_points_csv(const std::string& path);

}  // namespace jclass
