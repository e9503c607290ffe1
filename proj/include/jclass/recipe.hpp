#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace jclass {

// Families of commuting matrix tuples the library can build.  Diagonal kinds
// act coordinatewise; Tri kinds are scalar-plus-top-right-corner perturbations;
// ZeroPair pairs an arbitrary diagonal with the zero matrix.
enum class TupleKind {
  DiagReal,      // pair diag(a, a_2..a_n), diag(b, b_2..b_n); -1<a<0, b>1
  DiagComplex,   // complex analogue; moduli straddle 1
  Kronecker,     // (n+1)-tuple: diag(e^{alpha_j}) and B_j with -sqrt(e) in slot j
  TriReal,       // pair a_1 I + E_1n, -I + E_1n; a_1 > 1
  TriComplex,    // pair a e^{i theta} I + E_1n, -I + E_1n; a > 1
  ZeroPair,      // pair diag(entries), 0
};

std::string to_string(TupleKind kind);
TupleKind tuple_kind_from_string(const std::string& name);

struct DiagRealParams {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> tail_a;  // entries 2..n of the first member
  std::vector<double> tail_b;  // entries 2..n of the second member
};

struct DiagComplexParams {
  std::complex<double> a;
  std::complex<double> b;
  std::vector<std::complex<double>> tail_a;
  std::vector<std::complex<double>> tail_b;
};

struct KroneckerParams {
  std::vector<double> alphas;  // distinct negatives; member A = diag(e^{alpha_j})
};

struct TriRealParams {
  double a1 = 0.0;  // second scalar is fixed at -1
};

struct TriComplexParams {
  double a = 0.0;      // modulus of the first scalar, > 1
  double theta = 0.0;  // its argument; theta/pi must not be low-height rational
};

struct ZeroPairParams {
  std::vector<double> entries;
};

using TupleParams = std::variant<DiagRealParams, DiagComplexParams, KroneckerParams,
                                 TriRealParams, TriComplexParams, ZeroPairParams>;

struct TupleRecipe {
  TupleKind kind = TupleKind::DiagReal;
  int dim = 0;
  TupleParams params;

  int member_count() const;  // n+1 for Kronecker, 2 otherwise
};

// Throws ValidationError naming the violated constraint.  Checks structural
// shape (tail lengths, dims) and the hypotheses the constructions rest on:
// sign/interval constraints, strict-modulus conditions, distinctness, and
// rationality probes on log-ratios and theta/pi.
void validate_recipe(const TupleRecipe& recipe);

// Canonical parameter choices with the hypotheses pre-verified.
TupleRecipe catalog_diag_real(int dim);              // a=-1/2, b=3, tails 2,3,2,3,...
TupleRecipe catalog_diag_complex(int dim);           // a=2e^{2pi i(sqrt2-1)}, b=(1/3)e^{2pi i(sqrt3-1)}
TupleRecipe catalog_kronecker(int dim);              // alpha_j = -sqrt(p_j), p_j = j-th prime
TupleRecipe catalog_tri_real(int dim, double a1 = 2.0);
TupleRecipe catalog_tri_complex(int dim, double a = 2.0);  // theta = 2pi(sqrt2-1)
TupleRecipe catalog_zero_pair(int dim);              // entries all 2

// JSON round-trip ({"kind": ..., "dim": ..., "params": {...}}; complex values
// as [re, im]).  parse_recipe validates before returning.
std::string recipe_to_json(const TupleRecipe& recipe);
TupleRecipe parse_recipe(const std::string& json_text);

}  // namespace jclass
