#include "jclass/witness.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "jclass/convergents.hpp"
#include "jclass/dioph.hpp"
#include "jclass/log.hpp"

namespace jclass {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this the adaptive tightening has hit the double rounding floor; the
// step cannot be met and the sequence stops with a note.
constexpr double kMinAdaptiveEps = 1e-280;

void check_schedule(std::span<const double> schedule) {
  if (schedule.empty()) throw InvalidArgument("jset_witness: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || !std::isfinite(schedule[i]))
      throw InvalidArgument("jset_witness: tolerances must be positive and finite");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw InvalidArgument("jset_witness: schedule must be strictly decreasing");
  }
}

template <class Vec>
double sup_distance(const Vec& a, const Vec& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

struct SolveOut {
  std::int64_t k = 0;
  std::int64_t l = 0;
  bool exhausted = false;
};

// Shared adaptive step loop.  make_record(k, l) fills a candidate record;
// the loop re-solves with a raised exponent floor when the base error or the
// growth invariant fails, and with a halved solver tolerance when the image
// error fails.
template <class S, class Solver, class MakeRecord>
bool run_step(WitnessSequence<S>& seq, int index, double delta, double eps0, Solver&& solve,
              MakeRecord&& make_record, std::int64_t& floor_k, std::int64_t& prev_sum) {
  double eps = eps0;
  for (;;) {
    if (eps < kMinAdaptiveEps) {
      seq.note = "step " + std::to_string(index) +
                 ": tolerance tightening hit the double rounding floor";
      return false;
    }
    const SolveOut sol = solve(eps, std::max<std::int64_t>(1, floor_k));
    if (sol.exhausted) {
      seq.note = "step " + std::to_string(index) + ": solver budget exhausted";
      return false;
    }
    WitnessRecord<S> rec;
    if (!make_record(sol.k, sol.l, rec)) {
      floor_k = sol.k + 1;
      continue;
    }
    rec.index = index;
    if (rec.base_error > delta) {
      JCLASS_LOG_DEBUG("witness step " + std::to_string(index) + ": base error " +
                       std::to_string(rec.base_error) + " > tolerance, raising k floor");
      floor_k = sol.k + 1;
      continue;
    }
    if (rec.image_error > delta) {
      JCLASS_LOG_DEBUG("witness step " + std::to_string(index) + ": image error " +
                       std::to_string(rec.image_error) + " > tolerance, halving inner eps");
      eps *= 0.5;
      continue;
    }
    if (sol.k + sol.l <= prev_sum) {
      floor_k = sol.k + 1;
      continue;
    }
    prev_sum = sol.k + sol.l;
    floor_k = sol.k + 1;
    seq.records.push_back(std::move(rec));
    return true;
  }
}

// Diagonal pair: x_i = (x_1, y_2/(a_2^k b_2^l), ..., y_n/(a_n^k b_n^l)).
template <class S, class Solver>
WitnessSequence<S> witness_diag(const MatrixTuple<S>& t,
                                typename scalar_traits<S>::value_type x1,
                                const typename scalar_traits<S>::vector_type& y,
                                std::span<const double> schedule, std::int64_t min_k,
                                Solver&& solve) {
  using VT = typename scalar_traits<S>::value_type;
  const auto n = static_cast<std::size_t>(t.dim);
  WitnessSequence<S> seq;
  seq.base = scalar_traits<S>::vector_type::Zero(t.dim);
  seq.base[0] = x1;
  seq.target = y;
  seq.effective_target = y;
  seq.schedule.assign(schedule.begin(), schedule.end());
  const double ax1 = std::abs(x1);

  std::int64_t floor_k = std::max<std::int64_t>(0, min_k);
  std::int64_t prev_sum = -1;
  int index = 0;
  for (double delta : schedule) {
    ++index;
    // Coordinate 1 of the image is x_1 a^k b^l, so the solver target is
    // y_1/x_1 and a solver error e costs |x_1| e.  A zero first target is
    // unreachable for a^k b^l; aim at delta/2 with slack delta/4 instead.
    VT t1;
    double eps0;
    if (y[0] == VT(0.0)) {
      t1 = VT(delta / (2.0 * ax1));
      eps0 = delta / (4.0 * ax1);
    } else {
      t1 = y[0] / VT(x1);
      eps0 = delta / ax1;
    }
    auto make_record = [&](std::int64_t k, std::int64_t l, WitnessRecord<S>& rec) {
      rec.K = ExponentVector({k, l});
      rec.x.resize(n);
      rec.x[0] = encode(VT(x1));
      for (std::size_t j = 1; j < n; ++j) {
        const S pj = mul_pow({PowFactor<S>{t.members[0].diag[j], k},
                              PowFactor<S>{t.members[1].diag[j], l}});
        rec.x[j] = log_mul(encode(y[static_cast<Eigen::Index>(j)]), log_inv(pj));
      }
      rec.image = apply_log(t, rec.K, std::span<const S>(rec.x));
      rec.base_error = sup_distance(decode_vector<S>(std::span<const S>(rec.x)), seq.base);
      rec.image_error =
          sup_distance(decode_vector<S>(std::span<const S>(rec.image)), seq.effective_target);
      return true;
    };
    if (!run_step(seq, index, delta, eps0,
                  [&](double eps, std::int64_t floor) { return solve(t1, eps, floor); },
                  make_record, floor_k, prev_sum))
      return seq;
  }
  seq.complete = true;
  return seq;
}

// Triangular pair: every coordinate perturbed by -c_j/S with S the corner
// ratio k/a_1 + l/a_2, c_j = w_j x_1 / w_n for j < n and c_n = x_1; all image
// coordinates equal -c_j D/S, which approach w as S/D approaches -x_1/w_n.
template <class S, class Solver>
WitnessSequence<S> witness_tri(const MatrixTuple<S>& t,
                               typename scalar_traits<S>::value_type x1,
                               const typename scalar_traits<S>::vector_type& w,
                               std::span<const double> schedule, std::int64_t min_k,
                               Solver&& solve) {
  using VT = typename scalar_traits<S>::value_type;
  const auto n = static_cast<std::size_t>(t.dim);
  WitnessSequence<S> seq;
  seq.base = scalar_traits<S>::vector_type::Zero(t.dim);
  seq.base[0] = x1;
  seq.target = w;
  seq.effective_target = w;
  seq.schedule.assign(schedule.begin(), schedule.end());

  VT wn = w[t.dim - 1];
  if (wn == VT(0.0)) {
    // The corner ratio formulas divide by w_n; a target with w_n = 0 is
    // reached in the limit of targets with w_n = delta (J-sets are closed).
    wn = VT(schedule.back());
    seq.effective_target[t.dim - 1] = wn;
    seq.target_substituted = true;
    seq.note = "last target coordinate was zero; substituted the final tolerance " +
               std::to_string(schedule.back());
  }
  const VT target = -VT(x1) / wn;
  const double at = std::abs(target);
  std::vector<VT> c(n);
  double maxc = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    c[j] = seq.effective_target[static_cast<Eigen::Index>(j)] * VT(x1) / wn;
    maxc = std::max(maxc, std::abs(c[j]));
  }
  c[n - 1] = VT(x1);
  maxc = std::max(maxc, std::abs(x1));

  std::int64_t floor_k = std::max<std::int64_t>(0, min_k);
  std::int64_t prev_sum = -1;
  int index = 0;
  for (double delta : schedule) {
    ++index;
    // Image error per coordinate is |c_j| |v - target| / (|v||target|) for
    // solver value v, so a tolerance of delta |target|^2 / (2 max|c|) lands
    // near delta; capped at |target|/2 to keep v away from zero.
    const double eps0 = std::min(delta * at * at / (2.0 * maxc), at / 2.0);
    auto make_record = [&](std::int64_t k, std::int64_t l, WitnessRecord<S>& rec) {
      rec.K = ExponentVector({k, l});
      const auto pp = power_product_entries(t, rec.K);
      const VT sval = pp.corner_ratio;
      if (sval == VT(0.0)) return false;  // degenerate corner; force a larger k
      const S inv_s = log_inv(encode(sval));
      rec.x.resize(n);
      rec.x[0] = log_add(encode(VT(x1)), log_mul(encode(-c[0]), inv_s));
      for (std::size_t j = 1; j < n; ++j) rec.x[j] = log_mul(encode(-c[j]), inv_s);
      rec.image = apply_log(t, rec.K, std::span<const S>(rec.x));
      rec.base_error = sup_distance(decode_vector<S>(std::span<const S>(rec.x)), seq.base);
      rec.image_error =
          sup_distance(decode_vector<S>(std::span<const S>(rec.image)), seq.effective_target);
      return true;
    };
    if (!run_step(seq, index, delta, eps0,
                  [&](double eps, std::int64_t floor) { return solve(target, eps, floor); },
                  make_record, floor_k, prev_sum))
      return seq;
  }
  seq.complete = true;
  return seq;
}

}  // namespace

WitnessSequence<LogSignScalar> jset_witness(const RealTuple& tuple, double x1,
                                            const Eigen::VectorXd& target,
                                            std::span<const double> schedule,
                                            std::int64_t min_k) {
  if (x1 == 0.0) throw InvalidArgument("jset_witness: base first coordinate must be nonzero");
  if (target.size() != tuple.dim)
    throw InvalidArgument("jset_witness: target length must equal tuple dim");
  check_schedule(schedule);
  switch (tuple.recipe.kind) {
    case TupleKind::DiagReal: {
      const auto& p = std::get<DiagRealParams>(tuple.recipe.params);
      return witness_diag<LogSignScalar>(
          tuple, x1, target, schedule, min_k,
          [&](double t1, double eps, std::int64_t floor) {
            SearchConfig cfg;
            cfg.epsilon = eps;
            cfg.min_k = floor;
            const auto w = two_gen_solve(p.a, p.b, t1, cfg);
            return SolveOut{w.k, w.l, w.exhausted};
          });
    }
    case TupleKind::TriReal: {
      const auto& p = std::get<TriRealParams>(tuple.recipe.params);
      return witness_tri<LogSignScalar>(tuple, x1, target, schedule, min_k,
                                        [&](double t1, double eps, std::int64_t floor) {
                                          const auto w = lemma51_witness(p.a1, t1, eps, floor);
                                          return SolveOut{w.k, w.l, false};
                                        });
    }
    default:
      throw InvalidArgument("jset_witness: recipe must be a diagonal or triangular pair");
  }
}

WitnessSequence<LogArgScalar> jset_witness(const ComplexTuple& tuple, std::complex<double> x1,
                                           const Eigen::VectorXcd& target,
                                           std::span<const double> schedule,
                                           std::int64_t min_k) {
  if (x1 == std::complex<double>(0.0))
    throw InvalidArgument("jset_witness: base first coordinate must be nonzero");
  if (target.size() != tuple.dim)
    throw InvalidArgument("jset_witness: target length must equal tuple dim");
  check_schedule(schedule);
  switch (tuple.recipe.kind) {
    case TupleKind::DiagComplex: {
      const auto& p = std::get<DiagComplexParams>(tuple.recipe.params);
      return witness_diag<LogArgScalar>(
          tuple, x1, target, schedule, min_k,
          [&](std::complex<double> t1, double eps, std::int64_t floor) {
            SearchConfig cfg;
            cfg.epsilon = eps;
            cfg.min_k = floor;
            const auto w = two_gen_solve_complex(p.a, p.b, t1, cfg);
            return SolveOut{w.k, w.l, w.exhausted};
          });
    }
    case TupleKind::TriComplex: {
      const auto& p = std::get<TriComplexParams>(tuple.recipe.params);
      return witness_tri<LogArgScalar>(
          tuple, x1, target, schedule, min_k,
          [&](std::complex<double> t1, double eps, std::int64_t floor) {
            const auto w = lemma55_witness(p.a, p.theta, t1, eps, floor);
            return SolveOut{w.k, w.l, w.exhausted};
          });
    }
    default:
      throw InvalidArgument("jset_witness: recipe must be a diagonal or triangular pair");
  }
}

template <class S>
WitnessSequence<S> scale_witness(const WitnessSequence<S>& seq,
                                 typename scalar_traits<S>::value_type lambda) {
  using VT = typename scalar_traits<S>::value_type;
  if (lambda == VT(0.0)) throw InvalidArgument("scale_witness: lambda must be nonzero");
  WitnessSequence<S> out = seq;
  const S factor = encode(lambda);
  const double al = std::abs(lambda);
  out.base = seq.base * lambda;
  out.target = seq.target * lambda;
  out.effective_target = seq.effective_target * lambda;
  for (auto& r : out.records) {
    for (auto& v : r.x) v = log_mul(factor, v);
    for (auto& v : r.image) v = log_mul(factor, v);
    r.base_error *= al;
    r.image_error *= al;
  }
  return out;
}

template WitnessSequence<LogSignScalar> scale_witness(const WitnessSequence<LogSignScalar>&,
                                                      double);
template WitnessSequence<LogArgScalar> scale_witness(const WitnessSequence<LogArgScalar>&,
                                                     std::complex<double>);

template <class S>
MembershipVerdict<S> jset_membership(const MatrixTuple<S>& tuple,
                                     const typename scalar_traits<S>::vector_type& x,
                                     const typename scalar_traits<S>::vector_type& y,
                                     double delta, std::int64_t growth_floor,
                                     std::int64_t budget) {
  if (x.size() != tuple.dim || y.size() != tuple.dim)
    throw InvalidArgument("jset_membership: vector lengths must equal tuple dim");
  if (!(delta > 0.0)) throw InvalidArgument("jset_membership: delta must be positive");
  if (growth_floor < 0) throw InvalidArgument("jset_membership: growth_floor must be >= 0");
  if (!tuple.invertible())
    throw InvalidArgument("jset_membership: every member must be invertible");

  MembershipVerdict<S> out;
  out.min_distance_found = kInf;
  const auto m = static_cast<std::size_t>(tuple.member_count());
  for (std::int64_t total = growth_floor; total <= budget; ++total) {
    const bool keep_going =
        detail::for_each_composition(m, total, [&](const std::vector<std::int64_t>& kv) {
          ExponentVector K(kv);
          ++out.budget_used;
          const auto pre = inverse_power_product_apply(tuple, K, y);
          const double d = sup_distance(pre, x);
          if (d < out.min_distance_found) out.min_distance_found = d;
          if (d < delta) {
            out.status = MembershipStatus::Confirmed;
            out.witness = MembershipWitness<S>{std::move(K), pre, d};
            return false;
          }
          return true;
        });
    if (!keep_going) break;
  }
  return out;
}

template MembershipVerdict<LogSignScalar> jset_membership(const RealTuple&,
                                                          const Eigen::VectorXd&,
                                                          const Eigen::VectorXd&, double,
                                                          std::int64_t, std::int64_t);
template MembershipVerdict<LogArgScalar> jset_membership(const ComplexTuple&,
                                                         const Eigen::VectorXcd&,
                                                         const Eigen::VectorXcd&, double,
                                                         std::int64_t, std::int64_t);

namespace {

bool one_sided(std::span<const double> g) {
  bool nonneg = true, nonpos = true, nonzero = false;
  for (double v : g) {
    if (v > 0.0) nonpos = false;
    if (v < 0.0) nonneg = false;
    if (v != 0.0) nonzero = true;
  }
  return nonzero && (nonneg || nonpos);
}

template <class S>
Certificate certify_impl(const MatrixTuple<S>& t) {
  const int n = t.dim;
  auto generators_at = [&](int j) {
    std::vector<double> g;
    for (const auto& m : t.members) {
      const S& e = m.form == MatrixForm::Diagonal ? m.diag[static_cast<std::size_t>(j)]
                                                  : m.scalar;
      if (log_is_zero(e)) continue;  // the member annihilates this coordinate
      g.push_back(e.log_mag);
    }
    return g;
  };

  // Triangular tuples: the corner feeds coordinate 1 from coordinate n, so
  // the pure-modulus argument only applies to the scalar-acted coordinates;
  // they all look alike, so examine the last one.  Diagonal tuples: first
  // obstructed coordinate wins.
  std::vector<int> candidates;
  if (t.triangular())
    candidates.push_back(n - 1);
  else
    for (int j = 0; j < n; ++j) candidates.push_back(j);

  for (int j : candidates) {
    Certificate cert;
    cert.coordinate = j + 1;
    cert.generators = generators_at(j);
    if (cert.generators.empty()) {
      cert.verdict = CertificateVerdict::NotHypercyclic;
      cert.reason = "every member annihilates coordinate " + std::to_string(j + 1) +
                    "; its orbit is {x_j, 0}";
      return cert;
    }
    if (one_sided(cert.generators)) {
      cert.verdict = CertificateVerdict::NotHypercyclic;
      cert.reason = "log-moduli at coordinate " + std::to_string(j + 1) +
                    " are one-sided; the modulus orbit is geometric and cannot be dense";
      return cert;
    }
    if (cert.generators.size() == 2 && cert.generators[0] * cert.generators[1] < 0.0) {
      const auto probe = probe_rationality(cert.generators[0] / cert.generators[1]);
      if (probe.rational) {
        cert.verdict = CertificateVerdict::NotHypercyclic;
        cert.reason = "log-moduli at coordinate " + std::to_string(j + 1) +
                      " have rational ratio " + std::to_string(probe.p) + "/" +
                      std::to_string(probe.q) + "; the modulus orbit lies in a discrete subgroup";
        return cert;
      }
    }
  }
  Certificate cert;
  cert.verdict = CertificateVerdict::Inconclusive;
  cert.reason =
      "no coordinate has one-sided or rationally dependent log-moduli; the necessary-condition "
      "test cannot certify hypercyclicity either way";
  return cert;
}

}  // namespace

Certificate non_hc_certificate(const AnyTuple& tuple) {
  return std::visit([](const auto& t) { return certify_impl(t); }, tuple);
}

namespace {

bool coord_in_box(double v, double box) { return std::isfinite(v) && std::fabs(v) <= box; }
bool coord_in_box(std::complex<double> v, double box) {
  return coord_in_box(v.real(), box) && coord_in_box(v.imag(), box);
}

template <class Vec>
bool finite_point(const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<typename Vec::Scalar, double>) {
      if (!std::isfinite(v[i])) return false;
    } else {
      if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    }
  }
  return true;
}

template <class Vec>
bool point_in_box(const Vec& v, double box) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!coord_in_box(v[i], box)) return false;
  return true;
}

}  // namespace

template <class S>
OrbitSample<S> orbit_points(const MatrixTuple<S>& tuple,
                            const typename scalar_traits<S>::vector_type& x,
                            std::int64_t max_total, double box) {
  if (x.size() != tuple.dim)
    throw InvalidArgument("orbit_points: vector length must equal tuple dim");
  if (max_total < 0) throw InvalidArgument("orbit_points: max_total must be >= 0");
  if (!(box > 0.0)) throw InvalidArgument("orbit_points: box half-width must be positive");
  OrbitSample<S> out;
  const auto enc = encode_vector<S>(x);
  const auto m = static_cast<std::size_t>(tuple.member_count());
  for (std::int64_t total = 0; total <= max_total; ++total) {
    detail::for_each_composition(m, total, [&](const std::vector<std::int64_t>& kv) {
      ++out.enumerated;
      ExponentVector K(kv);
      const auto img = apply_log(tuple, K, std::span<const S>(enc));
      auto dec = decode_vector<S>(std::span<const S>(img));
      if (!finite_point(dec)) {
        ++out.overflowed;
        return true;
      }
      if (!point_in_box(dec, box)) {
        ++out.outside;
        return true;
      }
      out.points.emplace_back(std::move(K), std::move(dec));
      return true;
    });
  }
  return out;
}

template OrbitSample<LogSignScalar> orbit_points(const RealTuple&, const Eigen::VectorXd&,
                                                 std::int64_t, double);
template OrbitSample<LogArgScalar> orbit_points(const ComplexTuple&, const Eigen::VectorXcd&,
                                                std::int64_t, double);

}  // namespace jclass
