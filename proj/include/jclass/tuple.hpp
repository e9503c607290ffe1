#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "jclass/errors.hpp"
#include "jclass/lognum.hpp"
#include "jclass/recipe.hpp"

namespace jclass {

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<LogSignScalar> {
  using value_type = double;
  using vector_type = Eigen::VectorXd;
  using matrix_type = Eigen::MatrixXd;
  static constexpr bool is_complex = false;
};

template <>
struct scalar_traits<LogArgScalar> {
  using value_type = std::complex<double>;
  using vector_type = Eigen::VectorXcd;
  using matrix_type = Eigen::MatrixXcd;
  static constexpr bool is_complex = true;
};

// Exponent assignment K = (k_1, ..., k_m), one entry per tuple member.
struct ExponentVector {
  std::vector<std::int64_t> k;

  ExponentVector() = default;
  explicit ExponentVector(std::vector<std::int64_t> v) : k(std::move(v)) {}
  static ExponentVector zeros(std::size_t m) { return ExponentVector(std::vector<std::int64_t>(m, 0)); }

  std::size_t size() const { return k.size(); }
  std::int64_t& operator[](std::size_t i) { return k[i]; }
  std::int64_t operator[](std::size_t i) const { return k[i]; }

  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto v : k) s += v;
    return s;
  }
  std::int64_t abs_total() const {
    std::int64_t s = 0;
    for (auto v : k) s += v < 0 ? -v : v;
    return s;
  }
  ExponentVector negated() const {
    ExponentVector out = *this;
    for (auto& v : out.k) v = -v;
    return out;
  }
  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
};

enum class MatrixForm { Diagonal, PerturbedScalar };

// One tuple member.  Diagonal stores its n diagonal entries; PerturbedScalar
// is a*I + E_{1n} and stores the scalar both in log form and as a plain value
// (the plain value feeds corner-ratio sums that must not round-trip through
// logs).
template <class S>
struct StructuredMatrix {
  MatrixForm form = MatrixForm::Diagonal;
  int dim = 0;
  std::vector<S> diag;
  S scalar{};
  typename scalar_traits<S>::value_type scalar_value{};
};

template <class S>
struct MatrixTuple {
  TupleRecipe recipe;
  int dim = 0;
  std::vector<StructuredMatrix<S>> members;

  int member_count() const { return static_cast<int>(members.size()); }
  bool triangular() const {
    return !members.empty() && members.front().form == MatrixForm::PerturbedScalar;
  }
  bool invertible() const {
    for (const auto& m : members) {
      if (m.form == MatrixForm::Diagonal) {
        for (const auto& e : m.diag)
          if (log_is_zero(e)) return false;
      } else if (log_is_zero(m.scalar)) {
        return false;
      }
    }
    return true;
  }
};

using RealTuple = MatrixTuple<LogSignScalar>;
using ComplexTuple = MatrixTuple<LogArgScalar>;
using AnyTuple = std::variant<RealTuple, ComplexTuple>;

// Entries of the power product P = prod_i A_i^{k_i}.  For diagonal tuples P is
// diag(diag).  For perturbed-scalar tuples P = D*I + D*ratio*E_{1n} with
// D = prod a_i^{k_i} and ratio = sum_i k_i/a_i; diag holds n copies of D,
// corner = D*ratio, and corner_ratio keeps ratio as a plain scalar because
// downstream formulas need it to full precision.
template <class S>
struct PowerProduct {
  std::vector<S> diag;
  bool triangular = false;
  S corner{};
  typename scalar_traits<S>::value_type corner_ratio{};
};

namespace detail {

inline double canonical_value_sum(std::vector<double>& terms) { return canonical_sum(terms); }

inline std::complex<double> canonical_value_sum(std::vector<std::complex<double>>& terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  std::complex<double> s = 0.0;
  for (const auto& t : terms) s += t;
  return s;
}

}  // namespace detail

template <class S>
PowerProduct<S> power_product_entries(const MatrixTuple<S>& t, const ExponentVector& K) {
  const auto m = static_cast<std::size_t>(t.member_count());
  if (K.size() != m)
    throw InvalidArgument("power product: exponent vector length must equal member count");
  PowerProduct<S> out;
  const auto n = static_cast<std::size_t>(t.dim);
  out.diag.resize(n);
  if (!t.triangular()) {
    std::vector<PowFactor<S>> factors(m);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) factors[i] = {t.members[i].diag[j], K[i]};
      out.diag[j] = mul_pow(std::span<const PowFactor<S>>(factors));
    }
    return out;
  }
  out.triangular = true;
  std::vector<PowFactor<S>> factors(m);
  std::vector<typename scalar_traits<S>::value_type> ratio_terms(m);
  for (std::size_t i = 0; i < m; ++i) {
    factors[i] = {t.members[i].scalar, K[i]};
    ratio_terms[i] = static_cast<typename scalar_traits<S>::value_type>(
                         static_cast<double>(K[i])) /
                     t.members[i].scalar_value;
  }
  const S d = mul_pow(std::span<const PowFactor<S>>(factors));
  out.corner_ratio = detail::canonical_value_sum(ratio_terms);
  out.corner = log_mul(d, encode(out.corner_ratio));
  std::fill(out.diag.begin(), out.diag.end(), d);
  return out;
}

// P x for log-domain x; exact structure, no dense arithmetic.
template <class S>
std::vector<S> apply_log(const MatrixTuple<S>& t, const ExponentVector& K,
                         std::span<const S> x) {
  if (static_cast<int>(x.size()) != t.dim)
    throw InvalidArgument("apply: vector length must equal tuple dim");
  const auto p = power_product_entries(t, K);
  const auto n = x.size();
  std::vector<S> out(n);
  if (!p.triangular) {
    for (std::size_t j = 0; j < n; ++j) out[j] = log_mul(p.diag[j], x[j]);
    return out;
  }
  // First coordinate picks up the corner: D*(x_1 + ratio*x_n).
  const S rx = log_mul(encode(p.corner_ratio), x[n - 1]);
  out[0] = log_mul(p.diag[0], log_add(x[0], rx));
  for (std::size_t j = 1; j < n; ++j) out[j] = log_mul(p.diag[j], x[j]);
  return out;
}

template <class S>
std::vector<S> encode_vector(const typename scalar_traits<S>::vector_type& v) {
  std::vector<S> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = encode(v[i]);
  return out;
}

template <class S>
typename scalar_traits<S>::vector_type decode_vector(std::span<const S> v,
                                                     OverflowPolicy policy = OverflowPolicy::Saturate) {
  typename scalar_traits<S>::vector_type out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (policy == OverflowPolicy::Error) {
      try {
        out[static_cast<Eigen::Index>(i)] = decode(v[i], OverflowPolicy::Error).value;
      } catch (const RangeError& e) {
        throw RangeError(std::string(e.what()) + " (coordinate " + std::to_string(i) + ")",
                         e.sign, e.log_mag, static_cast<int>(i));
      }
    } else {
      out[static_cast<Eigen::Index>(i)] = decode(v[i]).value;
    }
  }
  return out;
}

// (prod A_i^{k_i}) v for a plain vector v, via the log-domain path; overflow
// handling per policy (Saturate clamps to +-inf/+-0, Error throws RangeError
// tagged with the coordinate).
template <class S>
typename scalar_traits<S>::vector_type power_product_apply(
    const MatrixTuple<S>& t, const ExponentVector& K,
    const typename scalar_traits<S>::vector_type& v,
    OverflowPolicy policy = OverflowPolicy::Saturate) {
  const auto enc = encode_vector<S>(v);
  const auto res = apply_log(t, K, std::span<const S>(enc));
  return decode_vector<S>(std::span<const S>(res), policy);
}

// (prod A_i^{k_i})^{-1} v = (prod A_i^{-k_i}) v; members must be invertible.
template <class S>
typename scalar_traits<S>::vector_type inverse_power_product_apply(
    const MatrixTuple<S>& t, const ExponentVector& K,
    const typename scalar_traits<S>::vector_type& v,
    OverflowPolicy policy = OverflowPolicy::Saturate) {
  if (!t.invertible())
    throw SingularError("inverse power product: tuple has a non-invertible member");
  return power_product_apply(t, K.negated(), v, policy);
}

// Dense form of member i (decoded entries, saturating).
template <class S>
typename scalar_traits<S>::matrix_type dense_member(const MatrixTuple<S>& t, int i) {
  if (i < 0 || i >= t.member_count()) throw InvalidArgument("dense member: index out of range");
  const auto& m = t.members[static_cast<std::size_t>(i)];
  const auto n = static_cast<Eigen::Index>(t.dim);
  typename scalar_traits<S>::matrix_type out =
      scalar_traits<S>::matrix_type::Zero(n, n);
  if (m.form == MatrixForm::Diagonal) {
    for (Eigen::Index j = 0; j < n; ++j)
      out(j, j) = decode(m.diag[static_cast<std::size_t>(j)]).value;
  } else {
    for (Eigen::Index j = 0; j < n; ++j) out(j, j) = decode(m.scalar).value;
    out(0, n - 1) += typename scalar_traits<S>::value_type(1.0);
  }
  return out;
}

// Reference apply by literal repeated dense multiplication.  Deliberately
// naive; guarded so it stays in safe floating-point range (sum |k_i| <= 64,
// member entries bounded by 4 in modulus).  Used to cross-check the
// structured path, never for production exponents.
template <class S>
typename scalar_traits<S>::vector_type dense_oracle_apply(
    const MatrixTuple<S>& t, const ExponentVector& K,
    const typename scalar_traits<S>::vector_type& v) {
  if (K.size() != static_cast<std::size_t>(t.member_count()))
    throw InvalidArgument("dense oracle: exponent vector length must equal member count");
  if (K.abs_total() > 64)
    throw InvalidArgument("dense oracle: exponent budget is sum |k_i| <= 64");
  const auto n = static_cast<Eigen::Index>(t.dim);
  for (int i = 0; i < t.member_count(); ++i) {
    const auto mi = dense_member(t, i);
    if (mi.cwiseAbs().maxCoeff() > 4.0)
      throw InvalidArgument("dense oracle: member entries must have modulus <= 4");
  }
  typename scalar_traits<S>::matrix_type acc =
      scalar_traits<S>::matrix_type::Identity(n, n);
  for (int i = 0; i < t.member_count(); ++i) {
    const std::int64_t ki = K[static_cast<std::size_t>(i)];
    if (ki == 0) continue;
    auto mi = dense_member(t, i);
    if (ki < 0) {
      const auto& member = t.members[static_cast<std::size_t>(i)];
      const bool ok = member.form == MatrixForm::Diagonal
                          ? std::all_of(member.diag.begin(), member.diag.end(),
                                        [](const S& e) { return !log_is_zero(e); })
                          : !log_is_zero(member.scalar);
      if (!ok) throw SingularError("dense oracle: negative power of a singular member");
      mi = typename scalar_traits<S>::matrix_type(mi.inverse());
    }
    const std::int64_t reps = ki < 0 ? -ki : ki;
    for (std::int64_t r = 0; r < reps; ++r) acc = mi * acc;
  }
  return acc * v;
}

// Builds the structured tuple for a validated recipe and checks pairwise
// commutation on a dense truncation.
AnyTuple build_tuple(const TupleRecipe& recipe);

// Largest pairwise commutator entry of the dense truncation (diagnostic).
double commutation_defect(const AnyTuple& tuple);

}  // namespace jclass
