#include "jclass/tuple.hpp"

#include <cmath>

#include "jclass/log.hpp"

namespace jclass {
namespace {

template <class S>
StructuredMatrix<S> diagonal_member(int dim, std::vector<S> entries) {
  StructuredMatrix<S> m;
  m.form = MatrixForm::Diagonal;
  m.dim = dim;
  m.diag = std::move(entries);
  return m;
}

template <class S>
StructuredMatrix<S> perturbed_member(int dim, S scalar,
                                     typename scalar_traits<S>::value_type value) {
  StructuredMatrix<S> m;
  m.form = MatrixForm::PerturbedScalar;
  m.dim = dim;
  m.scalar = scalar;
  m.scalar_value = value;
  return m;
}

RealTuple build_diag_real(const TupleRecipe& recipe) {
  const auto& p = std::get<DiagRealParams>(recipe.params);
  RealTuple t;
  t.recipe = recipe;
  t.dim = recipe.dim;
  std::vector<LogSignScalar> da{encode(p.a)}, db{encode(p.b)};
  for (double v : p.tail_a) da.push_back(encode(v));
  for (double v : p.tail_b) db.push_back(encode(v));
  t.members.push_back(diagonal_member(recipe.dim, std::move(da)));
  t.members.push_back(diagonal_member(recipe.dim, std::move(db)));
  return t;
}

ComplexTuple build_diag_complex(const TupleRecipe& recipe) {
  const auto& p = std::get<DiagComplexParams>(recipe.params);
  ComplexTuple t;
  t.recipe = recipe;
  t.dim = recipe.dim;
  std::vector<LogArgScalar> da{encode(p.a)}, db{encode(p.b)};
  for (auto v : p.tail_a) da.push_back(encode(v));
  for (auto v : p.tail_b) db.push_back(encode(v));
  t.members.push_back(diagonal_member(recipe.dim, std::move(da)));
  t.members.push_back(diagonal_member(recipe.dim, std::move(db)));
  return t;
}

RealTuple build_kronecker(const TupleRecipe& recipe) {
  const auto& p = std::get<KroneckerParams>(recipe.params);
  const int n = recipe.dim;
  RealTuple t;
  t.recipe = recipe;
  t.dim = n;
  // A = diag(e^{alpha_j}); the log magnitudes are the alphas themselves, so
  // store them exactly instead of encode(exp(alpha)).
  std::vector<LogSignScalar> a(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = LogSignScalar{1, p.alphas[static_cast<std::size_t>(j)]};
  t.members.push_back(diagonal_member(n, std::move(a)));
  // B_j = I with -sqrt(e) in slot j: log magnitude exactly 1/2, sign -1.
  for (int j = 0; j < n; ++j) {
    std::vector<LogSignScalar> b(static_cast<std::size_t>(n), LogSignScalar::one());
    b[static_cast<std::size_t>(j)] = LogSignScalar{-1, 0.5};
    t.members.push_back(diagonal_member(n, std::move(b)));
  }
  return t;
}

RealTuple build_tri_real(const TupleRecipe& recipe) {
  const auto& p = std::get<TriRealParams>(recipe.params);
  RealTuple t;
  t.recipe = recipe;
  t.dim = recipe.dim;
  t.members.push_back(perturbed_member(recipe.dim, encode(p.a1), p.a1));
  t.members.push_back(perturbed_member(recipe.dim, encode(-1.0), -1.0));
  return t;
}

ComplexTuple build_tri_complex(const TupleRecipe& recipe) {
  const auto& p = std::get<TriComplexParams>(recipe.params);
  ComplexTuple t;
  t.recipe = recipe;
  t.dim = recipe.dim;
  // a e^{i theta}: log magnitude and argument are the given parameters, so
  // store them directly rather than round-tripping through cartesian form.
  const auto a1 = LogArgScalar::from_parts(std::log(p.a), p.theta);
  t.members.push_back(
      perturbed_member(recipe.dim, a1, std::polar(p.a, detail::reduce_angle(p.theta))));
  t.members.push_back(
      perturbed_member(recipe.dim, encode(std::complex<double>(-1.0, 0.0)),
                       std::complex<double>(-1.0, 0.0)));
  return t;
}

RealTuple build_zero_pair(const TupleRecipe& recipe) {
  const auto& p = std::get<ZeroPairParams>(recipe.params);
  RealTuple t;
  t.recipe = recipe;
  t.dim = recipe.dim;
  std::vector<LogSignScalar> da;
  for (double v : p.entries) da.push_back(encode(v));
  t.members.push_back(diagonal_member(recipe.dim, std::move(da)));
  t.members.push_back(diagonal_member(
      recipe.dim, std::vector<LogSignScalar>(static_cast<std::size_t>(recipe.dim),
                                             LogSignScalar::zero())));
  return t;
}

// Dense truncation of member i to d x d with the corner perturbation carried
// to (0, d-1) so the commutator check still sees the off-diagonal structure.
template <class S>
typename scalar_traits<S>::matrix_type truncated_member(const MatrixTuple<S>& t, int i, int d) {
  const auto& m = t.members[static_cast<std::size_t>(i)];
  typename scalar_traits<S>::matrix_type out =
      scalar_traits<S>::matrix_type::Zero(d, d);
  if (m.form == MatrixForm::Diagonal) {
    for (int j = 0; j < d; ++j)
      out(j, j) = decode(m.diag[static_cast<std::size_t>(j)]).value;
  } else {
    for (int j = 0; j < d; ++j) out(j, j) = decode(m.scalar).value;
    out(0, d - 1) += typename scalar_traits<S>::value_type(1.0);
  }
  return out;
}

template <class S>
double defect(const MatrixTuple<S>& t) {
  const int d = std::min(t.dim, 4);
  double worst = 0.0;
  for (int i = 0; i < t.member_count(); ++i) {
    const auto mi = truncated_member(t, i, d);
    for (int j = i + 1; j < t.member_count(); ++j) {
      const auto mj = truncated_member(t, j, d);
      worst = std::max(worst, (mi * mj - mj * mi).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

template <class S>
void check_commutation(const MatrixTuple<S>& t) {
  const double d = defect(t);
  if (d > 1e-12)
    throw ValidationError("tuple members fail to commute (defect " + std::to_string(d) + ")");
  JCLASS_LOG_DEBUG("commutation defect " + std::to_string(d));
}

}  // namespace

AnyTuple build_tuple(const TupleRecipe& recipe) {
  validate_recipe(recipe);
  AnyTuple out;
  switch (recipe.kind) {
    case TupleKind::DiagReal:
      out = build_diag_real(recipe);
      break;
    case TupleKind::DiagComplex:
      out = build_diag_complex(recipe);
      break;
    case TupleKind::Kronecker:
      out = build_kronecker(recipe);
      break;
    case TupleKind::TriReal:
      out = build_tri_real(recipe);
      break;
    case TupleKind::TriComplex:
      out = build_tri_complex(recipe);
      break;
    case TupleKind::ZeroPair:
      out = build_zero_pair(recipe);
      break;
  }
  std::visit([](const auto& t) { check_commutation(t); }, out);
  return out;
}

double commutation_defect(const AnyTuple& tuple) {
  return std::visit([](const auto& t) { return defect(t); }, tuple);
}

}  // namespace jclass
