// jclass: construct commuting matrix tuples, solve the exponent problems
// behind their density claims, and emit machine-readable witnesses.
// Results go to stdout; JCLASS_LOG={error,info,debug} diagnostics to stderr.
// Exit codes: 0 success, 1 budget exhausted / out of integer range, 2 bad
// parameters.

#include <complex>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jclass/harness.hpp"
#include "jclass/io.hpp"
#include "jclass/recipe.hpp"

namespace {

using namespace jclass;

std::string read_arg_or_file(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    const std::string path = arg.substr(1);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

double parse_one_double(const std::string& s, const char* what) {
  const auto v = parse_double_list(s);
  if (v.size() != 1) throw InvalidArgument(std::string(what) + " must be a single number");
  return v[0];
}

Eigen::VectorXd to_vecd(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

Eigen::VectorXcd to_vecc(const std::vector<std::complex<double>>& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Maps domain errors to the exit-code contract.  RangeError is a result (the
// witness exists but does not fit int64 exponents), so it prints JSON on
// stdout; parameter problems report on stderr.
template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const RangeError& e) {
    std::cout << "{\"error\":\"" << escape(e.what()) << "\",\"exhausted\":true}\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "jclass: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "jclass: " << e.what() << '\n';
    return 2;
  }
}

AnyTuple load_tuple(const std::string& arg) {
  return build_tuple(parse_recipe(read_arg_or_file(arg)));
}

Eigen::VectorXd flatten(const Eigen::VectorXd& v) { return v; }
Eigen::VectorXd flatten(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"commuting matrix tuples: constructions, exponent solvers, witnesses"};
  app.require_subcommand(1);
  int rc = 0;

  // construct -----------------------------------------------------------
  std::string c_recipe, c_out;
  auto* construct = app.add_subcommand("construct", "validate and build a tuple recipe");
  construct->add_option("--recipe", c_recipe, "recipe JSON, or @file")->required();
  construct->add_option("--out", c_out, "also write the canonical recipe JSON here");
  construct->callback([&] {
    rc = guarded([&] {
      const auto recipe = parse_recipe(read_arg_or_file(c_recipe));
      build_tuple(recipe);  // commutation-checked
      const std::string json = recipe_to_json(recipe);
      std::cout << json << '\n';
      if (!c_out.empty()) export_records(std::span<const std::string>(&json, 1), c_out);
      return 0;
    });
  });

  // solve ---------------------------------------------------------------
  double s_a = 0.0, s_b = 0.0, s_y = 0.0, s_eps = 1e-3;
  std::int64_t s_min_k = 0, s_min_l = 0, s_k_max = 1'000'000;
  auto* solve = app.add_subcommand("solve", "a^k b^l near y for a in (-1,0), b > 1");
  solve->add_option("--a", s_a)->required();
  solve->add_option("--b", s_b)->required();
  solve->add_option("--y", s_y)->required();
  solve->add_option("--eps", s_eps);
  solve->add_option("--min-k", s_min_k);
  solve->add_option("--min-l", s_min_l);
  solve->add_option("--k-max", s_k_max);
  solve->callback([&] {
    rc = guarded([&] {
      SearchConfig cfg;
      cfg.epsilon = s_eps;
      cfg.min_k = s_min_k;
      cfg.min_l = s_min_l;
      cfg.k_max = s_k_max;
      const auto w = two_gen_solve(s_a, s_b, s_y, cfg);
      std::cout << to_json_line(w) << '\n';
      return w.exhausted ? 1 : 0;
    });
  });

  // lemma51 -------------------------------------------------------------
  double l1_a = 0.0, l1_x = 0.0, l1_eps = 1e-3;
  auto* lemma51 = app.add_subcommand("lemma51", "(k/a - l)/((-1)^l a^k) near x for a > 1");
  lemma51->add_option("--a", l1_a)->required();
  lemma51->add_option("--x", l1_x)->required();
  lemma51->add_option("--eps", l1_eps);
  lemma51->callback([&] {
    rc = guarded([&] {
      std::cout << to_json_line(lemma51_witness(l1_a, l1_x, l1_eps)) << '\n';
      return 0;
    });
  });

  // lemma55 -------------------------------------------------------------
  double l5_a = 0.0, l5_theta = 0.0, l5_eps = 1e-3;
  std::string l5_w;
  auto* lemma55 = app.add_subcommand("lemma55", "complex variant with rotation angle theta");
  lemma55->add_option("--a", l5_a)->required();
  lemma55->add_option("--theta", l5_theta)->required();
  lemma55->add_option("--w", l5_w, "target as re,im")->required();
  lemma55->add_option("--eps", l5_eps);
  lemma55->callback([&] {
    rc = guarded([&] {
      const auto parts = parse_double_list(l5_w);
      if (parts.size() != 2) throw InvalidArgument("--w must be re,im");
      const auto w = lemma55_witness(l5_a, l5_theta, {parts[0], parts[1]}, l5_eps);
      std::cout << to_json_line(w) << '\n';
      return w.exhausted ? 1 : 0;
    });
  });

  // kron ----------------------------------------------------------------
  int k_n = 0;
  std::string k_y;
  double k_eps = 1e-3;
  std::int64_t k_k_max = 100'000;
  auto* kron = app.add_subcommand(
      "kron", "simultaneous e^{k alpha_j} (-sqrt(e))^{s_j} near y with alpha_j = -sqrt(p_j)");
  kron->add_option("--n", k_n)->required();
  kron->add_option("--y", k_y, "targets y1,..,yn")->required();
  kron->add_option("--eps", k_eps);
  kron->add_option("--k-max", k_k_max);
  kron->callback([&] {
    rc = guarded([&] {
      const auto recipe = catalog_kronecker(k_n);
      const auto& alphas = std::get<KroneckerParams>(recipe.params).alphas;
      const auto y = parse_double_list(k_y);
      if (static_cast<int>(y.size()) != k_n)
        throw InvalidArgument("--y must list exactly n targets");
      const auto w = kronecker_solve(alphas, y, k_eps, k_k_max);
      std::cout << to_json_line(w, alphas, y) << '\n';
      return w.exhausted ? 1 : 0;
    });
  });

  // witness -------------------------------------------------------------
  std::string w_tuple, w_x1 = "1", w_target, w_schedule;
  auto* witness = app.add_subcommand("witness", "J-set witness sequence for a pair tuple");
  witness->add_option("--tuple", w_tuple, "recipe JSON, or @file")->required();
  witness->add_option("--base-x1", w_x1, "first coordinate of the base point");
  witness->add_option("--target", w_target, "target vector")->required();
  witness->add_option("--schedule", w_schedule, "decreasing tolerances e1,e2,..")->required();
  witness->callback([&] {
    rc = guarded([&] {
      const auto tuple = load_tuple(w_tuple);
      const auto schedule = parse_double_list(w_schedule);
      return std::visit(
          [&](const auto& t) -> int {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, RealTuple>) {
              const auto seq = jset_witness(t, parse_one_double(w_x1, "--base-x1"),
                                            to_vecd(parse_double_list(w_target)),
                                            std::span<const double>(schedule));
              std::cout << to_json(seq) << '\n';
              return seq.complete ? 0 : 1;
            } else {
              const auto seq =
                  jset_witness(t, parse_complex(w_x1), to_vecc(parse_complex_list(w_target)),
                               std::span<const double>(schedule));
              std::cout << to_json(seq) << '\n';
              return seq.complete ? 0 : 1;
            }
          },
          tuple);
    });
  });

  // member --------------------------------------------------------------
  std::string m_tuple, m_x, m_y;
  double m_delta = 1e-3;
  std::int64_t m_floor = 1, m_budget = 60;
  auto* member = app.add_subcommand("member", "budgeted membership probe: is y in J(x)?");
  member->add_option("--tuple", m_tuple)->required();
  member->add_option("--x", m_x, "base vector")->required();
  member->add_option("--y", m_y, "target vector")->required();
  member->add_option("--delta", m_delta);
  member->add_option("--growth-floor", m_floor);
  member->add_option("--budget", m_budget);
  member->callback([&] {
    rc = guarded([&] {
      const auto tuple = load_tuple(m_tuple);
      return std::visit(
          [&](const auto& t) -> int {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, RealTuple>) {
              const auto v = jset_membership(t, to_vecd(parse_double_list(m_x)),
                                             to_vecd(parse_double_list(m_y)), m_delta, m_floor,
                                             m_budget);
              std::cout << to_json(v) << '\n';
              return v.status == MembershipStatus::Confirmed ? 0 : 1;
            } else {
              const auto v = jset_membership(t, to_vecc(parse_complex_list(m_x)),
                                             to_vecc(parse_complex_list(m_y)), m_delta, m_floor,
                                             m_budget);
              std::cout << to_json(v) << '\n';
              return v.status == MembershipStatus::Confirmed ? 0 : 1;
            }
          },
          tuple);
    });
  });

  // orbit ---------------------------------------------------------------
  std::string o_tuple, o_x, o_out;
  std::int64_t o_max_total = 200;
  double o_box = 10.0;
  auto* orbit = app.add_subcommand(
      "orbit", "orbit points inside a box; CSV to --out (summary on stdout) or to stdout");
  orbit->add_option("--tuple", o_tuple)->required();
  orbit->add_option("--x", o_x, "start vector")->required();
  orbit->add_option("--max-total", o_max_total, "exponent-sum bound");
  orbit->add_option("--box", o_box, "half-width of the clipping box");
  orbit->add_option("--out", o_out, "write points CSV here");
  orbit->callback([&] {
    rc = guarded([&] {
      const auto tuple = load_tuple(o_tuple);
      auto emit = [&](const auto& t, const auto& x) -> int {
        const auto sample = orbit_points(t, x, o_max_total, o_box);
        std::vector<Eigen::VectorXd> pts;
        pts.reserve(sample.points.size());
        for (const auto& [k, p] : sample.points) pts.push_back(flatten(p));
        const auto rows = points_csv(pts);
        if (o_out.empty()) {
          for (const auto& row : rows) std::cout << row << '\n';
        } else {
          export_records(std::span<const std::string>(rows), o_out);
          std::cout << "{\"points\":" << sample.points.size()
                    << ",\"enumerated\":" << sample.enumerated
                    << ",\"overflowed\":" << sample.overflowed
                    << ",\"outside\":" << sample.outside << ",\"out\":\"" << escape(o_out)
                    << "\"}\n";
        }
        return 0;
      };
      return std::visit(
          [&](const auto& t) -> int {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, RealTuple>)
              return emit(t, to_vecd(parse_double_list(o_x)));
            else
              return emit(t, to_vecc(parse_complex_list(o_x)));
          },
          tuple);
    });
  });

  // density -------------------------------------------------------------
  std::string d_in;
  double d_box = 10.0, d_res = 0.25;
  auto* density = app.add_subcommand("density", "grid-coverage report for a points CSV");
  density->add_option("--in", d_in, "points CSV (from orbit)")->required();
  density->add_option("--box", d_box);
  density->add_option("--res", d_res, "grid step");
  density->callback([&] {
    rc = guarded([&] {
      const auto points = read_points_csv(d_in);
      std::cout << to_json(density_report(points, d_box, d_res)) << '\n';
      return 0;
    });
  });

  // certify -------------------------------------------------------------
  std::string ce_tuple;
  auto* certify = app.add_subcommand("certify", "necessary-condition non-hypercyclicity check");
  certify->add_option("--tuple", ce_tuple)->required();
  certify->callback([&] {
    rc = guarded([&] {
      std::cout << to_json(non_hc_certificate(load_tuple(ce_tuple))) << '\n';
      return 0;
    });
  });

  // probe ---------------------------------------------------------------
  std::string p_tuple, p_span;
  int p_samples = 100;
  std::uint64_t p_seed = 1;
  std::int64_t p_budget = 60;
  auto* probe = app.add_subcommand("probe", "evidence probe for the spanning-set question");
  probe->add_option("--tuple", p_tuple)->required();
  probe->add_option("--span", p_span, "spanning vectors v1;v2;..")->required();
  probe->add_option("--samples", p_samples);
  probe->add_option("--seed", p_seed);
  probe->add_option("--budget", p_budget);
  probe->callback([&] {
    rc = guarded([&] {
      const auto tuple = load_tuple(p_tuple);
      ProbeConfig cfg;
      cfg.samples = p_samples;
      cfg.seed = p_seed;
      cfg.budget = p_budget;
      return std::visit(
          [&](const auto& t) -> int {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, RealTuple>) {
              std::vector<Eigen::VectorXd> vs;
              for (const auto& part : split(p_span, ';'))
                vs.push_back(to_vecd(parse_double_list(part)));
              const auto rep =
                  probe_open_question(t, std::span<const Eigen::VectorXd>(vs), cfg);
              std::cout << to_json(rep) << '\n';
            } else {
              std::vector<Eigen::VectorXcd> vs;
              for (const auto& part : split(p_span, ';'))
                vs.push_back(to_vecc(parse_complex_list(part)));
              const auto rep =
                  probe_open_question(t, std::span<const Eigen::VectorXcd>(vs), cfg);
              std::cout << to_json(rep) << '\n';
            }
            return 0;
          },
          tuple);
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return rc;
}
