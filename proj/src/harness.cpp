#include "jclass/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "jclass/io.hpp"
#include "jclass/log.hpp"
#include "jclass/rng.hpp"

namespace jclass {

DensityReport density_report(std::span<const Eigen::VectorXd> points, double box_halfwidth,
                             double grid_step, int dimension) {
  const double m = box_halfwidth, h = grid_step;
  if (!(m > 0.0) || !std::isfinite(m))
    throw InvalidArgument("density_report: box half-width must be positive and finite");
  if (!(h > 0.0) || !(h <= 2.0 * m))
    throw InvalidArgument("density_report: need 0 < grid step <= box width");
  int n = dimension;
  if (n <= 0) n = points.empty() ? 1 : static_cast<int>(points.front().size());
  for (const auto& p : points)
    if (p.size() != n)
      throw InvalidArgument("density_report: point dimension differs from the grid's");

  const auto per_dim = static_cast<std::int64_t>(std::ceil(2.0 * m / h));
  double total_d = 1.0;
  for (int d = 0; d < n; ++d) total_d *= static_cast<double>(per_dim);
  if (total_d > 1e8) throw InvalidArgument("density_report: grid exceeds 1e8 cells");
  std::int64_t total = 1;
  for (int d = 0; d < n; ++d) total *= per_dim;

  DensityReport rep;
  rep.box_halfwidth = m;
  rep.grid_step = h;
  rep.dimension = n;
  rep.total_cells = total;

  std::vector<char> covered(static_cast<std::size_t>(total), 0);
  std::vector<const Eigen::VectorXd*> usable;
  usable.reserve(points.size());
  for (const auto& p : points) {
    bool ok = true;
    for (int d = 0; d < n && ok; ++d) ok = std::isfinite(p[d]) && std::fabs(p[d]) <= m;
    if (!ok) {
      ++rep.points_overflowed;
      continue;
    }
    std::int64_t idx = 0;
    for (int d = 0; d < n; ++d) {
      auto c = static_cast<std::int64_t>(std::floor((p[d] + m) / h));
      c = std::clamp<std::int64_t>(c, 0, per_dim - 1);
      idx = idx * per_dim + c;
    }
    covered[static_cast<std::size_t>(idx)] = 1;
    usable.push_back(&p);
    ++rep.points_used;
  }

  rep.covered_cells = std::count(covered.begin(), covered.end(), char(1));
  rep.coverage = total > 0 ? static_cast<double>(rep.covered_cells) / static_cast<double>(total)
                           : 0.0;

  if (rep.covered_cells == total) {
    rep.max_empty_gap = 0.0;
    return rep;
  }
  if (usable.empty()) {
    rep.max_empty_gap = 2.0 * m * std::sqrt(static_cast<double>(n));
    return rep;
  }
  // Worst uncovered cell center's distance to its nearest point.
  double worst = 0.0;
  std::vector<std::int64_t> coord(static_cast<std::size_t>(n), 0);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    if (covered[static_cast<std::size_t>(idx)]) continue;
    std::int64_t rest = idx;
    for (int d = n - 1; d >= 0; --d) {
      coord[static_cast<std::size_t>(d)] = rest % per_dim;
      rest /= per_dim;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto* p : usable) {
      double ss = 0.0;
      for (int d = 0; d < n; ++d) {
        const double center = -m + (static_cast<double>(coord[static_cast<std::size_t>(d)]) + 0.5) * h;
        const double diff = (*p)[d] - center;
        ss += diff * diff;
      }
      best = std::min(best, ss);
    }
    worst = std::max(worst, best);
  }
  rep.max_empty_gap = std::sqrt(worst);
  return rep;
}

namespace {

Eigen::VectorXd flatten_point(const Eigen::VectorXd& v) { return v; }

Eigen::VectorXd flatten_point(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

double sample_coord(Rng& rng, double box, double*) { return rng.uniform(-box, box); }
std::complex<double> sample_coord(Rng& rng, double box, std::complex<double>*) {
  const double re = rng.uniform(-box, box);
  const double im = rng.uniform(-box, box);
  return {re, im};
}

}  // namespace

template <class S>
ProbeReport<S> probe_open_question(
    const MatrixTuple<S>& tuple,
    std::span<const typename scalar_traits<S>::vector_type> spanning_set,
    const ProbeConfig& config) {
  using Vec = typename scalar_traits<S>::vector_type;
  using Mat = typename scalar_traits<S>::matrix_type;
  using VT = typename scalar_traits<S>::value_type;

  if (spanning_set.empty())
    throw InvalidArgument("probe_open_question: spanning set must be nonempty");
  for (const auto& v : spanning_set)
    if (v.size() != tuple.dim)
      throw InvalidArgument("probe_open_question: spanning vector length must equal tuple dim");
  if (!tuple.invertible())
    throw InvalidArgument("probe_open_question: tuple members must be invertible");

  Mat span_matrix(tuple.dim, static_cast<Eigen::Index>(spanning_set.size()));
  for (std::size_t i = 0; i < spanning_set.size(); ++i)
    span_matrix.col(static_cast<Eigen::Index>(i)) = spanning_set[i];
  Eigen::JacobiSVD<Mat> svd(span_matrix);
  svd.setThreshold(1e-9);
  if (svd.rank() < tuple.dim)
    throw InvalidArgument("probe_open_question: spanning set is rank-deficient (rank " +
                          std::to_string(svd.rank()) + " < " + std::to_string(tuple.dim) + ")");

  ProbeReport<S> rep;
  rep.config = config;
  rep.spanning_set.assign(spanning_set.begin(), spanning_set.end());

  Rng rng(config.seed);
  for (const auto& v : spanning_set) {
    ProbeVectorSummary summary;
    for (int i = 0; i < config.samples; ++i) {
      Vec target(tuple.dim);
      for (Eigen::Index d = 0; d < tuple.dim; ++d)
        target[d] = sample_coord(rng, config.box, static_cast<VT*>(nullptr));
      const auto verdict = jset_membership(tuple, v, target, config.delta, 1, config.budget);
      ++summary.probed;
      if (verdict.status == MembershipStatus::Confirmed) ++summary.confirmed;
      if (std::isfinite(verdict.min_distance_found))
        summary.worst_min_distance =
            std::max(summary.worst_min_distance, verdict.min_distance_found);
    }
    summary.confirm_fraction =
        summary.probed > 0 ? static_cast<double>(summary.confirmed) / summary.probed : 0.0;
    rep.per_vector.push_back(summary);
  }

  const auto orbit = orbit_points(tuple, spanning_set.front(), config.orbit_total, config.box);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(orbit.points.size());
  for (const auto& [k, p] : orbit.points) pts.push_back(flatten_point(p));
  const int density_dim = scalar_traits<S>::is_complex ? 2 * tuple.dim : tuple.dim;
  rep.orbit_density = density_report(pts, config.box, config.grid_step, density_dim);
  rep.orbit_density.points_overflowed += orbit.overflowed;

  if (config.samples <= 0) {
    rep.conclusion = ProbeConclusion::Inconclusive;
    rep.reason = "no targets sampled";
    return rep;
  }
  bool all_universal = true;
  std::size_t failing = 0;
  for (std::size_t i = 0; i < rep.per_vector.size(); ++i) {
    if (rep.per_vector[i].confirm_fraction < config.yes_confirm_fraction) {
      all_universal = false;
      failing = i;
      break;
    }
  }
  if (!all_universal) {
    rep.conclusion = ProbeConclusion::Inconclusive;
    rep.reason = "spanning set not all J-universal: vector " + std::to_string(failing + 1) +
                 " confirmed fraction " + fmt17(rep.per_vector[failing].confirm_fraction) +
                 " < " + fmt17(config.yes_confirm_fraction);
  } else if (rep.orbit_density.coverage >= config.yes_coverage) {
    rep.conclusion = ProbeConclusion::ConsistentWithYes;
    rep.reason = "all spanning vectors look J-universal and the sampled orbit covers " +
                 fmt17(rep.orbit_density.coverage) + " of the box";
  } else if (rep.orbit_density.coverage <= config.no_coverage) {
    rep.conclusion = ProbeConclusion::ConsistentWithNo;
    rep.reason = "spanning vectors look J-universal but the sampled orbit covers only " +
                 fmt17(rep.orbit_density.coverage) + " of the box";
  } else {
    rep.conclusion = ProbeConclusion::Inconclusive;
    rep.reason = "orbit coverage " + fmt17(rep.orbit_density.coverage) +
                 " lies between the decision thresholds";
  }
  return rep;
}

template ProbeReport<LogSignScalar> probe_open_question(
    const RealTuple&, std::span<const Eigen::VectorXd>, const ProbeConfig&);
template ProbeReport<LogArgScalar> probe_open_question(
    const ComplexTuple&, std::span<const Eigen::VectorXcd>, const ProbeConfig&);

// ---- serialization ----------------------------------------------------

namespace {

std::string jesc(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string jnum(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt17(v);
}

std::string jvalue(double v) { return jnum(v); }
std::string jvalue(std::complex<double> v) {
  return "[" + jnum(v.real()) + "," + jnum(v.imag()) + "]";
}

std::string jints(std::span<const std::int64_t> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

template <class Vec>
std::string jvec(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += jvalue(v[i]);
  }
  return out + "]";
}

std::string jdoubles(std::span<const double> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += jnum(v[i]);
  }
  return out + "]";
}

std::string witness_line(std::span<const std::int64_t> exponents, const std::string& value,
                         const std::string& target, double abs_error, bool exhausted) {
  return "{\"exponents\":" + jints(exponents) + ",\"value\":" + value +
         ",\"target\":" + target + ",\"abs_error\":" + jnum(abs_error) +
         ",\"exhausted\":" + (exhausted ? "true" : "false") + "}";
}

// Plain-text scalar for CSV cells.
std::string csv_value(double v) { return fmt17(v); }
std::string csv_value(std::complex<double> v) { return fmt17(v); }

}  // namespace

std::string to_json_line(const TwoGenWitness& w) {
  const std::int64_t e[] = {w.k, w.l};
  return witness_line(e, jvalue(decode(w.value).value), jvalue(w.target), w.abs_error,
                      w.exhausted);
}

std::string to_json_line(const TwoGenComplexWitness& w) {
  const std::int64_t e[] = {w.k, w.l};
  return witness_line(e, jvalue(decode(w.value).value), jvalue(w.target), w.abs_error,
                      w.exhausted);
}

std::string to_json_line(const Lemma51Witness& w) {
  const std::int64_t e[] = {w.k, w.l};
  return witness_line(e, jvalue(w.value), jvalue(w.target), w.abs_error, false);
}

std::string to_json_line(const Lemma55Witness& w) {
  const std::int64_t e[] = {w.k, w.l};
  return witness_line(e, jvalue(w.value), jvalue(w.target), w.abs_error, w.exhausted);
}

std::string to_json_line(const KroneckerWitness& w, std::span<const double> alphas,
                         std::span<const double> y) {
  std::vector<std::int64_t> e;
  e.push_back(w.k);
  e.insert(e.end(), w.s.begin(), w.s.end());
  std::string value = "[";
  for (std::size_t j = 0; j < w.s.size(); ++j) {
    if (j) value += ",";
    if (j < alphas.size() && !w.exponent_errors.empty() &&
        std::isfinite(w.exponent_errors[j])) {
      const double mag = std::exp(static_cast<double>(w.k) * alphas[j] +
                                  static_cast<double>(w.s[j]) / 2.0);
      value += jnum((w.s[j] % 2 == 0) ? mag : -mag);
    } else {
      value += "null";
    }
  }
  value += "]";
  std::string target = "[";
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (j) target += ",";
    target += jnum(y[j]);
  }
  target += "]";
  // abs_error here is the worst exponent-scale error, matching the solver's
  // tolerance semantics.
  return witness_line(e, value, target, w.max_error, w.exhausted);
}

template <class S>
std::string to_json(const WitnessSequence<S>& seq) {
  std::string out = "{\"base\":" + jvec(seq.base) + ",\"target\":" + jvec(seq.target) +
                    ",\"effective_target\":" + jvec(seq.effective_target) +
                    ",\"schedule\":" + jdoubles(seq.schedule) +
                    ",\"complete\":" + (seq.complete ? "true" : "false") +
                    ",\"target_substituted\":" + (seq.target_substituted ? "true" : "false") +
                    ",\"note\":\"" + jesc(seq.note) + "\",\"records\":[";
  for (std::size_t i = 0; i < seq.records.size(); ++i) {
    const auto& r = seq.records[i];
    if (i) out += ",";
    out += "{\"index\":" + std::to_string(r.index) + ",\"K\":" + jints(r.K.k) +
           ",\"x\":" + jvec(decode_vector<S>(std::span<const S>(r.x))) +
           ",\"image\":" + jvec(decode_vector<S>(std::span<const S>(r.image))) +
           ",\"image_error\":" + jnum(r.image_error) +
           ",\"base_error\":" + jnum(r.base_error) + "}";
  }
  return out + "]}";
}

template std::string to_json(const WitnessSequence<LogSignScalar>&);
template std::string to_json(const WitnessSequence<LogArgScalar>&);

template <class S>
std::string to_json(const MembershipVerdict<S>& verdict) {
  std::string out = "{\"status\":\"";
  out += verdict.status == MembershipStatus::Confirmed ? "Confirmed" : "NotFoundWithinBudget";
  out += "\",\"witness\":";
  if (verdict.witness) {
    out += "{\"K\":" + jints(verdict.witness->K.k) +
           ",\"preimage\":" + jvec(verdict.witness->preimage) +
           ",\"distance\":" + jnum(verdict.witness->distance) + "}";
  } else {
    out += "null";
  }
  out += ",\"min_distance_found\":" + jnum(verdict.min_distance_found) +
         ",\"budget_used\":" + std::to_string(verdict.budget_used) + "}";
  return out;
}

template std::string to_json(const MembershipVerdict<LogSignScalar>&);
template std::string to_json(const MembershipVerdict<LogArgScalar>&);

std::string to_json(const Certificate& cert) {
  std::string out = "{\"verdict\":\"";
  out += cert.verdict == CertificateVerdict::NotHypercyclic ? "NotHypercyclic" : "Inconclusive";
  out += "\",\"coordinate\":" + std::to_string(cert.coordinate) +
         ",\"generators\":" + jdoubles(cert.generators) + ",\"reason\":\"" +
         jesc(cert.reason) + "\"}";
  return out;
}

std::string to_json(const DensityReport& report) {
  return "{\"box_halfwidth\":" + jnum(report.box_halfwidth) +
         ",\"grid_step\":" + jnum(report.grid_step) +
         ",\"dimension\":" + std::to_string(report.dimension) +
         ",\"total_cells\":" + std::to_string(report.total_cells) +
         ",\"covered_cells\":" + std::to_string(report.covered_cells) +
         ",\"coverage\":" + jnum(report.coverage) +
         ",\"max_empty_gap\":" + jnum(report.max_empty_gap) +
         ",\"points_used\":" + std::to_string(report.points_used) +
         ",\"points_overflowed\":" + std::to_string(report.points_overflowed) + "}";
}

template <class S>
std::string to_json(const ProbeReport<S>& report) {
  const auto& c = report.config;
  std::string out = "{\"config\":{\"samples\":" + std::to_string(c.samples) +
                    ",\"seed\":" + std::to_string(c.seed) +
                    ",\"budget\":" + std::to_string(c.budget) +
                    ",\"delta\":" + jnum(c.delta) + ",\"box\":" + jnum(c.box) +
                    ",\"orbit_total\":" + std::to_string(c.orbit_total) +
                    ",\"grid_step\":" + jnum(c.grid_step) +
                    ",\"yes_confirm_fraction\":" + jnum(c.yes_confirm_fraction) +
                    ",\"yes_coverage\":" + jnum(c.yes_coverage) +
                    ",\"no_coverage\":" + jnum(c.no_coverage) + "},\"spanning_set\":[";
  for (std::size_t i = 0; i < report.spanning_set.size(); ++i) {
    if (i) out += ",";
    out += jvec(report.spanning_set[i]);
  }
  out += "],\"per_vector\":[";
  for (std::size_t i = 0; i < report.per_vector.size(); ++i) {
    const auto& s = report.per_vector[i];
    if (i) out += ",";
    out += "{\"probed\":" + std::to_string(s.probed) +
           ",\"confirmed\":" + std::to_string(s.confirmed) +
           ",\"confirm_fraction\":" + jnum(s.confirm_fraction) +
           ",\"worst_min_distance\":" + jnum(s.worst_min_distance) + "}";
  }
  out += "],\"orbit_density\":" + to_json(report.orbit_density) + ",\"conclusion\":\"";
  switch (report.conclusion) {
    case ProbeConclusion::ConsistentWithYes: out += "ConsistentWithYes"; break;
    case ProbeConclusion::ConsistentWithNo: out += "ConsistentWithNo"; break;
    case ProbeConclusion::Inconclusive: out += "Inconclusive"; break;
  }
  out += "\",\"reason\":\"" + jesc(report.reason) + "\"}";
  return out;
}

template std::string to_json(const ProbeReport<LogSignScalar>&);
template std::string to_json(const ProbeReport<LogArgScalar>&);

template <class S>
std::vector<std::string> to_csv(const WitnessSequence<S>& seq) {
  std::vector<std::string> rows;
  rows.push_back("i,x,K,image,image_error,base_error");
  for (const auto& r : seq.records) {
    const auto xd = decode_vector<S>(std::span<const S>(r.x));
    const auto id = decode_vector<S>(std::span<const S>(r.image));
    std::string row = std::to_string(r.index) + ",";
    for (Eigen::Index j = 0; j < xd.size(); ++j) {
      if (j) row += ";";
      row += csv_value(xd[j]);
    }
    row += ",";
    for (std::size_t j = 0; j < r.K.size(); ++j) {
      if (j) row += ";";
      row += std::to_string(r.K[j]);
    }
    row += ",";
    for (Eigen::Index j = 0; j < id.size(); ++j) {
      if (j) row += ";";
      row += csv_value(id[j]);
    }
    row += "," + fmt17(r.image_error) + "," + fmt17(r.base_error);
    rows.push_back(row);
  }
  return rows;
}

template std::vector<std::string> to_csv(const WitnessSequence<LogSignScalar>&);
template std::vector<std::string> to_csv(const WitnessSequence<LogArgScalar>&);

void export_records(std::span<const std::string> lines, const std::string& destination) {
  std::ofstream out(destination);
  if (!out) throw IoError("cannot open " + destination + " for writing");
  for (const auto& line : lines) out << line << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + destination);
}

std::vector<std::string> points_csv(std::span<const Eigen::VectorXd> points) {
  std::vector<std::string> rows;
  if (points.empty()) return rows;
  std::string header;
  for (Eigen::Index j = 0; j < points.front().size(); ++j) {
    if (j) header += ",";
    header += "x" + std::to_string(j + 1);
  }
  rows.push_back(header);
  for (const auto& p : points) {
    std::string row;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (j) row += ",";
      row += fmt17(p[j]);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<Eigen::VectorXd> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Eigen::VectorXd> points;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> values;
    try {
      values = parse_double_list(line);
    } catch (const InvalidArgument&) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw InvalidArgument("unparseable row in " + path + ": " + line);
    }
    first = false;
    Eigen::VectorXd p(static_cast<Eigen::Index>(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) p[static_cast<Eigen::Index>(j)] = values[j];
    if (!points.empty() && points.front().size() != p.size())
      throw InvalidArgument("inconsistent row width in " + path);
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace jclass
