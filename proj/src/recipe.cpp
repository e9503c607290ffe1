#include "jclass/recipe.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "jclass/convergents.hpp"
#include "jclass/errors.hpp"
#include "jclass/io.hpp"

namespace jclass {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

void require_irrational_ratio(double num, double den, const std::string& what) {
  const auto probe = probe_rationality(num / den);
  if (probe.rational) {
    std::ostringstream msg;
    msg << what << " is a low-height rational (" << probe.p << "/" << probe.q << ")";
    throw ValidationError(msg.str());
  }
}

std::vector<double> first_primes(int n) {
  std::vector<double> out;
  for (int c = 2; static_cast<int>(out.size()) < n; ++c) {
    bool prime = true;
    for (int d = 2; d * d <= c; ++d)
      if (c % d == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(static_cast<double>(c));
  }
  return out;
}

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("recipe JSON: complex values must be [re, im]");
}

std::string num17(const json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  return fmt17(j.get<double>());
}

// Minimal serializer so every float is rendered with %.17g.
void dump17(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump17(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump17(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      out += num17(j);
      break;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string to_string(TupleKind kind) {
  switch (kind) {
    case TupleKind::DiagReal: return "DiagReal";
    case TupleKind::DiagComplex: return "DiagComplex";
    case TupleKind::Kronecker: return "Kronecker";
    case TupleKind::TriReal: return "TriReal";
    case TupleKind::TriComplex: return "TriComplex";
    case TupleKind::ZeroPair: return "ZeroPair";
  }
  throw InvalidArgument("unknown tuple kind");
}

TupleKind tuple_kind_from_string(const std::string& name) {
  if (name == "DiagReal") return TupleKind::DiagReal;
  if (name == "DiagComplex") return TupleKind::DiagComplex;
  if (name == "Kronecker") return TupleKind::Kronecker;
  if (name == "TriReal") return TupleKind::TriReal;
  if (name == "TriComplex") return TupleKind::TriComplex;
  if (name == "ZeroPair") return TupleKind::ZeroPair;
  throw InvalidArgument("unknown tuple kind: '" + name + "'");
}

int TupleRecipe::member_count() const {
  return kind == TupleKind::Kronecker ? dim + 1 : 2;
}

void validate_recipe(const TupleRecipe& r) {
  const int n = r.dim;
  switch (r.kind) {
    case TupleKind::DiagReal: {
      const auto& p = std::get<DiagRealParams>(r.params);
      require(n >= 1, "DiagReal: dim must be >= 1");
      require(std::isfinite(p.a) && p.a > -1.0 && p.a < 0.0, "DiagReal: a must lie in (-1, 0)");
      require(std::isfinite(p.b) && p.b > 1.0, "DiagReal: b must be > 1");
      require(static_cast<int>(p.tail_a.size()) == n - 1 &&
                  static_cast<int>(p.tail_b.size()) == n - 1,
              "DiagReal: tails must have dim-1 entries");
      for (double t : p.tail_a)
        require(std::isfinite(t) && std::fabs(t) > 1.0, "DiagReal: |tail_a entries| must be > 1");
      for (double t : p.tail_b)
        require(std::isfinite(t) && std::fabs(t) > 1.0, "DiagReal: |tail_b entries| must be > 1");
      require_irrational_ratio(std::log(-p.a), std::log(p.b), "DiagReal: ln|a|/ln b");
      break;
    }
    case TupleKind::DiagComplex: {
      const auto& p = std::get<DiagComplexParams>(r.params);
      require(n >= 1, "DiagComplex: dim must be >= 1");
      require(std::isfinite(std::abs(p.a)) && std::abs(p.a) > 0.0 &&
                  std::isfinite(std::abs(p.b)) && std::abs(p.b) > 0.0,
              "DiagComplex: a and b must be nonzero and finite");
      const double la = std::log(std::abs(p.a));
      const double lb = std::log(std::abs(p.b));
      require(la * lb < 0.0, "DiagComplex: |a| and |b| must strictly straddle 1");
      require(static_cast<int>(p.tail_a.size()) == n - 1 &&
                  static_cast<int>(p.tail_b.size()) == n - 1,
              "DiagComplex: tails must have dim-1 entries");
      for (const auto& t : p.tail_a)
        require(std::isfinite(std::abs(t)) && std::abs(t) > 1.0,
                "DiagComplex: |tail_a entries| must be > 1");
      for (const auto& t : p.tail_b)
        require(std::isfinite(std::abs(t)) && std::abs(t) > 1.0,
                "DiagComplex: |tail_b entries| must be > 1");
      require_irrational_ratio(la, lb, "DiagComplex: ln|a|/ln|b|");
      break;
    }
    case TupleKind::Kronecker: {
      const auto& p = std::get<KroneckerParams>(r.params);
      require(n >= 1, "Kronecker: dim must be >= 1");
      require(static_cast<int>(p.alphas.size()) == n, "Kronecker: need dim exponents");
      for (double a : p.alphas)
        require(std::isfinite(a) && a < 0.0, "Kronecker: exponents must be negative");
      for (std::size_t i = 0; i < p.alphas.size(); ++i)
        for (std::size_t j = i + 1; j < p.alphas.size(); ++j)
          require(p.alphas[i] != p.alphas[j], "Kronecker: exponents must be distinct");
      break;
    }
    case TupleKind::TriReal: {
      const auto& p = std::get<TriRealParams>(r.params);
      require(n >= 2, "TriReal: dim must be >= 2");
      require(std::isfinite(p.a1) && p.a1 > 1.0, "TriReal: a1 must be > 1");
      break;
    }
    case TupleKind::TriComplex: {
      const auto& p = std::get<TriComplexParams>(r.params);
      require(n >= 2, "TriComplex: dim must be >= 2");
      require(std::isfinite(p.a) && p.a > 1.0, "TriComplex: a must be > 1");
      require(std::isfinite(p.theta), "TriComplex: theta must be finite");
      require_irrational_ratio(p.theta, std::numbers::pi, "TriComplex: theta/pi");
      break;
    }
    case TupleKind::ZeroPair: {
      const auto& p = std::get<ZeroPairParams>(r.params);
      require(n >= 1, "ZeroPair: dim must be >= 1");
      require(static_cast<int>(p.entries.size()) == n, "ZeroPair: need dim entries");
      for (double e : p.entries) require(std::isfinite(e), "ZeroPair: entries must be finite");
      break;
    }
  }
}

TupleRecipe catalog_diag_real(int dim) {
  DiagRealParams p;
  p.a = -0.5;
  p.b = 3.0;
  p.tail_a.assign(dim > 0 ? dim - 1 : 0, 2.0);
  p.tail_b.assign(dim > 0 ? dim - 1 : 0, 3.0);
  TupleRecipe r{TupleKind::DiagReal, dim, p};
  validate_recipe(r);
  return r;
}

TupleRecipe catalog_diag_complex(int dim) {
  using std::numbers::pi;
  DiagComplexParams p;
  p.a = std::polar(2.0, 2.0 * pi * (std::sqrt(2.0) - 1.0));
  p.b = std::polar(1.0 / 3.0, 2.0 * pi * (std::sqrt(3.0) - 1.0));
  p.tail_a.assign(dim > 0 ? dim - 1 : 0, {2.0, 0.0});
  p.tail_b.assign(dim > 0 ? dim - 1 : 0, {3.0, 0.0});
  TupleRecipe r{TupleKind::DiagComplex, dim, p};
  validate_recipe(r);
  return r;
}

TupleRecipe catalog_kronecker(int dim) {
  KroneckerParams p;
  for (double q : first_primes(dim)) p.alphas.push_back(-std::sqrt(q));
  TupleRecipe r{TupleKind::Kronecker, dim, p};
  validate_recipe(r);
  return r;
}

TupleRecipe catalog_tri_real(int dim, double a1) {
  TupleRecipe r{TupleKind::TriReal, dim, TriRealParams{a1}};
  validate_recipe(r);
  return r;
}

TupleRecipe catalog_tri_complex(int dim, double a) {
  TriComplexParams p;
  p.a = a;
  p.theta = 2.0 * std::numbers::pi * (std::sqrt(2.0) - 1.0);
  TupleRecipe r{TupleKind::TriComplex, dim, p};
  validate_recipe(r);
  return r;
}

TupleRecipe catalog_zero_pair(int dim) {
  ZeroPairParams p;
  p.entries.assign(dim > 0 ? dim : 0, 2.0);
  TupleRecipe r{TupleKind::ZeroPair, dim, p};
  validate_recipe(r);
  return r;
}

std::string recipe_to_json(const TupleRecipe& r) {
  json params;
  switch (r.kind) {
    case TupleKind::DiagReal: {
      const auto& p = std::get<DiagRealParams>(r.params);
      params = {{"a", p.a}, {"b", p.b}, {"tail_a", p.tail_a}, {"tail_b", p.tail_b}};
      break;
    }
    case TupleKind::DiagComplex: {
      const auto& p = std::get<DiagComplexParams>(r.params);
      json ta = json::array(), tb = json::array();
      for (auto z : p.tail_a) ta.push_back(complex_to_json(z));
      for (auto z : p.tail_b) tb.push_back(complex_to_json(z));
      params = {{"a", complex_to_json(p.a)}, {"b", complex_to_json(p.b)},
                {"tail_a", ta}, {"tail_b", tb}};
      break;
    }
    case TupleKind::Kronecker:
      params = {{"alphas", std::get<KroneckerParams>(r.params).alphas}};
      break;
    case TupleKind::TriReal:
      params = {{"a1", std::get<TriRealParams>(r.params).a1}};
      break;
    case TupleKind::TriComplex: {
      const auto& p = std::get<TriComplexParams>(r.params);
      params = {{"a", p.a}, {"theta", p.theta}};
      break;
    }
    case TupleKind::ZeroPair:
      params = {{"entries", std::get<ZeroPairParams>(r.params).entries}};
      break;
  }
  json j = {{"kind", to_string(r.kind)}, {"dim", r.dim}, {"params", params}};
  std::string out;
  dump17(j, out);
  return out;
}

TupleRecipe parse_recipe(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw IoError(std::string("recipe JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.contains("dim"))
    throw InvalidArgument("recipe JSON: need object with 'kind' and 'dim'");
  TupleRecipe r;
  r.kind = tuple_kind_from_string(j.at("kind").get<std::string>());
  r.dim = j.at("dim").get<int>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  try {
    switch (r.kind) {
      case TupleKind::DiagReal: {
        DiagRealParams p;
        p.a = params.at("a").get<double>();
        p.b = params.at("b").get<double>();
        p.tail_a = params.value("tail_a", std::vector<double>{});
        p.tail_b = params.value("tail_b", std::vector<double>{});
        r.params = p;
        break;
      }
      case TupleKind::DiagComplex: {
        DiagComplexParams p;
        p.a = complex_from_json(params.at("a"));
        p.b = complex_from_json(params.at("b"));
        if (params.contains("tail_a"))
          for (const auto& e : params.at("tail_a")) p.tail_a.push_back(complex_from_json(e));
        if (params.contains("tail_b"))
          for (const auto& e : params.at("tail_b")) p.tail_b.push_back(complex_from_json(e));
        r.params = p;
        break;
      }
      case TupleKind::Kronecker:
        r.params = KroneckerParams{params.at("alphas").get<std::vector<double>>()};
        break;
      case TupleKind::TriReal:
        r.params = TriRealParams{params.at("a1").get<double>()};
        break;
      case TupleKind::TriComplex: {
        TriComplexParams p;
        p.a = params.at("a").get<double>();
        p.theta = params.at("theta").get<double>();
        r.params = p;
        break;
      }
      case TupleKind::ZeroPair:
        r.params = ZeroPairParams{params.at("entries").get<std::vector<double>>()};
        break;
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("recipe JSON: missing or mistyped parameter: ") + e.what());
  }
  validate_recipe(r);
  return r;
}

}  // namespace jclass
