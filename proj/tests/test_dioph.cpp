#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "jclass/dioph.hpp"
#include "jclass/recipe.hpp"
#include "jclass/tuple.hpp"

using namespace jclass;
using C = std::complex<double>;

namespace {

const double kTheta = 2.0 * std::numbers::pi * (std::sqrt(2.0) - 1.0);

}  // namespace

TEST_CASE("two-generator pinned witnesses") {
  // y = 1 at eps 0.05: first admissible even-k pair
  auto w = two_gen_solve(-0.5, 3.0, 1.0, {.epsilon = 0.05});
  CHECK(w.k == 38);
  CHECK(w.l == 24);
  CHECK_FALSE(w.exhausted);
  const double v = decode(w.value).value;
  CHECK(v > 1.0274);
  CHECK(v < 1.0275);
  CHECK(v == doctest::Approx(1.0274726682146145).epsilon(1e-15));
  CHECK(w.abs_error == doctest::Approx(0.0274726682146145).epsilon(1e-12));

  // y = -1.5 is hit exactly by a^1 b^1 (up to the log round trip)
  w = two_gen_solve(-0.5, 3.0, -1.5, {.epsilon = 0.05});
  CHECK(w.k == 1);
  CHECK(w.l == 1);
  CHECK(decode(w.value).value == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(w.abs_error < 1e-12);

  // y = 0.75 = a^2 b^1
  w = two_gen_solve(-0.5, 3.0, 0.75, {.epsilon = 0.05});
  CHECK(w.k == 2);
  CHECK(w.l == 1);
  CHECK(w.abs_error < 1e-12);
}

TEST_CASE("two-generator parity and floors") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(0.1, 20.0);
  std::uniform_int_distribution<int> sgn(0, 1);
  for (int i = 0; i < 30; ++i) {
    const double y = (sgn(rng) ? 1.0 : -1.0) * t(rng);
    const auto w = two_gen_solve(-0.5, 3.0, y, {.epsilon = 0.1});
    CHECK((w.k & 1) == (y < 0.0 ? 1 : 0));  // sign of a^k b^l is (-1)^k
    CHECK(w.k >= 1);
    CHECK(w.l >= 1);
    CHECK(w.abs_error < 0.1);
  }
  // extra floors push past the unconstrained solution
  const auto w = two_gen_solve(-0.5, 3.0, 1.0, {.epsilon = 0.05, .min_k = 40, .min_l = 30});
  CHECK(w.k >= 40);
  CHECK(w.l >= 30);
  CHECK((w.k & 1) == 0);
  CHECK(w.abs_error < 0.05);
}

TEST_CASE("two-generator value is bitwise the tuple power-product entry") {
  const auto t = std::get<RealTuple>(build_tuple(catalog_diag_real(2)));
  const auto w = two_gen_solve(-0.5, 3.0, 1.0, {.epsilon = 0.05});
  const auto p = power_product_entries(t, ExponentVector({w.k, w.l}));
  CHECK(w.value == p.diag[0]);
}

TEST_CASE("two-generator domain and rationality rejection") {
  CHECK_THROWS_AS(two_gen_solve(0.5, 3.0, 1.0, {}), InvalidArgument);
  CHECK_THROWS_AS(two_gen_solve(-1.5, 3.0, 1.0, {}), InvalidArgument);
  CHECK_THROWS_AS(two_gen_solve(-0.5, 0.9, 1.0, {}), InvalidArgument);
  CHECK_THROWS_AS(two_gen_solve(-0.5, 3.0, 0.0, {}), InvalidArgument);
  CHECK_THROWS_AS(two_gen_solve(-0.5, 3.0, 1.0, {.epsilon = -1.0}), InvalidArgument);
  try {
    two_gen_solve(-0.5, 2.0, 1.0, {});  // ln(1/2)/ln 2 = -1
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("-1/1") != std::string::npos);
  }
}

TEST_CASE("two-generator exhaustion reports the best pair found") {
  const auto w = two_gen_solve(-0.5, 3.0, 1.0, {.epsilon = 1e-12, .k_max = 50});
  CHECK(w.exhausted);
  CHECK(w.k <= 50);
  CHECK(w.abs_error < 0.05);  // the k=46 near-miss is already this good
  CHECK(w.abs_error > 1e-12);
}

TEST_CASE("complex two-generator solves catalog-pair targets") {
  const auto& p = std::get<DiagComplexParams>(catalog_diag_complex(1).params);
  for (const C y : {C{1.0, 0.0}, C{-2.0, 1.0}, C{0.0, -3.0}}) {
    const auto w = two_gen_solve_complex(p.a, p.b, y, {.epsilon = 0.25});
    CHECK_FALSE(w.exhausted);
    CHECK(w.abs_error < 0.25);
    CHECK(std::abs(decode(w.value).value - y) == doctest::Approx(w.abs_error));
    // determinism, field for field
    const auto w2 = two_gen_solve_complex(p.a, p.b, y, {.epsilon = 0.25});
    CHECK(w2.k == w.k);
    CHECK(w2.l == w.l);
    CHECK(w2.value == w.value);
  }
  CHECK_THROWS_AS(two_gen_solve_complex(C{2.0, 0.0}, C{3.0, 0.0}, C{1.0, 0.0}, {}),
                  ValidationError);  // both moduli above 1
  CHECK_THROWS_AS(two_gen_solve_complex(p.a, p.b, C{0.0, 0.0}, {}), InvalidArgument);
}

TEST_CASE("alternating-sign witness pins and the exact-dyadic case") {
  // a=2, x=1, eps=0.1: k=5 (2^-5 < 0.05), s=18, l=35, value exactly 65/64
  auto w = lemma51_witness(2.0, 1.0, 0.1);
  CHECK(w.k == 5);
  CHECK(w.l == 35);
  CHECK(w.s == 18);
  CHECK(w.value == 1.015625);
  CHECK(w.abs_error == 0.015625);

  // x = -1 lands on the even-l branch
  w = lemma51_witness(2.0, -1.0, 0.1);
  CHECK(w.k == 5);
  CHECK(w.l == 34);
  CHECK(w.s == 17);
  CHECK(w.value == -0.984375);

  // x = 0 holds l fixed and grows k; the value is a negative zero here
  w = lemma51_witness(2.0, 0.0, 0.1);
  CHECK(w.k == 2);
  CHECK(w.l == 1);
  CHECK(w.s == 0);
  CHECK(w.value == 0.0);
  CHECK(std::signbit(w.value));
  CHECK(w.abs_error < 0.1);
}

TEST_CASE("alternating-sign witness k is minimal and parity matches the sign") {
  for (double a : {1.5, 2.0, std::exp(1.0)}) {
    for (double eps : {0.2, 0.03, 0.004}) {
      for (double x : {2.5, -0.7, 0.31}) {
        const auto w = lemma51_witness(a, x, eps);
        CHECK(std::fabs(w.value - x) < eps);
        // smallest k with a^-k < eps/2, never smaller
        std::int64_t kmin = 1;
        while (std::pow(a, -static_cast<double>(kmin)) >= eps / 2.0) ++kmin;
        CHECK(w.k == kmin);
        CHECK((w.l & 1) == (x > 0.0 ? 1 : 0));  // odd l for positive targets
        CHECK(w.s >= 1);
      }
    }
  }
}

TEST_CASE("alternating-sign witness sequences strictly increase k") {
  const double sched[] = {0.5, 0.25, 0.1, 0.04};
  const auto seq = lemma51_sequence(2.0, 1.7, sched);
  REQUIRE(seq.size() == 4);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].abs_error < sched[i]);
    if (i) CHECK(seq[i].k > seq[i - 1].k);
  }
  CHECK_THROWS_AS(lemma51_sequence(2.0, 0.0, sched), InvalidArgument);
  const double bad[] = {0.1, 0.1};
  CHECK_THROWS_AS(lemma51_sequence(2.0, 1.0, bad), InvalidArgument);
}

TEST_CASE("alternating-sign witness refuses exponents beyond int64") {
  CHECK_THROWS_AS(lemma51_witness(2.0, 1e15, 1e-6), RangeError);
}

TEST_CASE("rotation witness pins") {
  auto w = rotation_solve(kTheta, 0.0, 0.3);
  CHECK(w.k == 12);
  CHECK(w.chord == doctest::Approx(0.18469617360668816).epsilon(1e-11));
  CHECK_FALSE(w.exhausted);

  // minimality: every smaller k misses by at least the tolerance
  for (std::int64_t k = 1; k < 12; ++k) {
    const double chord = std::abs(std::polar(1.0, -static_cast<double>(k) * kTheta) - C{1.0, 0.0});
    CHECK(chord > 0.3 - 1e-9);
  }

  w = rotation_solve(kTheta, 0.0, 1e-3);
  CHECK(w.k == 2378);
  CHECK(w.chord == doctest::Approx(0.00093416372429500473).epsilon(1e-9));
}

TEST_CASE("rotation decimated search agrees with the naive scan bitwise") {
  // k_max 50000 keeps the span below the decimation cutoff, forcing the scan
  const auto scan = rotation_solve(kTheta, 0.0, 1e-3, 1, 50'000);
  const auto fast = rotation_solve(kTheta, 0.0, 1e-3, 1, 1'000'000);
  CHECK(scan.k == fast.k);
  CHECK(scan.chord == fast.chord);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> phi(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    const double target = phi(rng);
    const auto a = rotation_solve(kTheta, target, 5e-3, 1, 40'000);
    const auto b = rotation_solve(kTheta, target, 5e-3, 1, 1'000'000);
    if (!a.exhausted) {
      CHECK(a.k == b.k);
      CHECK(a.chord == b.chord);
    }
  }
}

TEST_CASE("rotation witness floors, trivial tolerance, and exhaustion") {
  CHECK(rotation_solve(kTheta, 0.0, 0.3, 13).k >= 13);
  CHECK(rotation_solve(kTheta, 0.0, 5.0, 7).k == 7);  // eps > diameter: anything works
  const auto w = rotation_solve(kTheta, 0.0, 1e-9, 1, 1000);
  CHECK(w.exhausted);
  CHECK_THROWS_AS(rotation_solve(kTheta, 0.0, 0.3, 10, 5), InvalidArgument);
}

TEST_CASE("rotating-scalar witness pin and internal consistency") {
  const auto w = lemma55_witness(2.0, kTheta, C{1.0, 0.0}, 1.2);
  CHECK(w.k == 12);
  CHECK(w.s == 2049);
  CHECK(w.l == 4097);
  CHECK(w.abs_error == doctest::Approx(0.1855889637).epsilon(1e-8));
  CHECK_FALSE(w.exhausted);

  // construction identities: l = 2s-1 and s = nearest((|w| a^k + 1)/2)
  CHECK(w.l == 2 * w.s - 1);
  CHECK(w.s == std::llround((std::pow(2.0, 12.0) + 1.0) / 2.0));
  // the rotation part meets its budget: chord < eps/(4 |w|)
  CHECK(w.chord < 1.2 / 4.0);
  // growth condition k a^{-(k-1)} < eps/4
  CHECK(12.0 * std::pow(2.0, -11.0) < 1.2 / 4.0);
  CHECK(std::abs(w.value - w.target) == doctest::Approx(w.abs_error));
}

TEST_CASE("rotating-scalar witness rejects unrepresentable tolerances") {
  try {
    lemma55_witness(2.0, kTheta, C{1.0, 0.0}, 0.01);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("coarser tolerances") != std::string::npos);
  }
}

TEST_CASE("simultaneous-approximation pins") {
  const double alphas[] = {-std::sqrt(2.0)};
  double y1[] = {2.0};
  auto w = kronecker_solve(alphas, y1, 0.05);
  CHECK(w.k == 8);
  REQUIRE(w.s.size() == 1);
  CHECK(w.s[0] == 24);
  CHECK(w.max_error == doctest::Approx(0.0068557).epsilon(1e-4));
  CHECK_FALSE(w.exhausted);

  double y2[] = {-2.0};
  w = kronecker_solve(alphas, y2, 0.05);
  CHECK(w.k == 2);
  CHECK(w.s[0] == 7);  // odd: the slot sign must produce the negative target
  CHECK(w.max_error == doctest::Approx(0.021574).epsilon(1e-4));

  const auto r2 = catalog_kronecker(2);
  const auto& a2 = std::get<KroneckerParams>(r2.params).alphas;
  double y3[] = {1.0, 5.0};
  w = kronecker_solve(a2, y3, 0.1);
  CHECK(w.k == 17);
  CHECK(w.s[0] == 48);
  CHECK(w.s[1] == 62);
  CHECK(w.max_error < 0.1);
  CHECK(w.exponent_errors.size() == 2);
  for (double e : w.exponent_errors) CHECK(e <= w.max_error);
}

TEST_CASE("simultaneous approximation keeps exponents nonnegative with forced parity") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> t(0.2, 30.0);
  std::uniform_int_distribution<int> sgn(0, 1);
  const auto r = catalog_kronecker(3);
  const auto& alphas = std::get<KroneckerParams>(r.params).alphas;
  for (int i = 0; i < 20; ++i) {
    double y[3];
    for (auto& v : y) v = (sgn(rng) ? 1.0 : -1.0) * t(rng);
    const auto w = kronecker_solve(alphas, y, 0.2);
    CHECK(w.k >= 0);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(w.s[j] >= 0);
      CHECK((w.s[j] & 1) == (y[j] < 0.0 ? 1 : 0));
    }
    if (!w.exhausted) CHECK(w.max_error < 0.2);
  }
  // floors and exhaustion
  CHECK(kronecker_solve(alphas, std::vector<double>{1.0, 2.0, 3.0}, 0.5, 100'000, 5).k >= 5);
  CHECK(kronecker_solve(alphas, std::vector<double>{1.0, 2.0, 3.0}, 1e-9, 50).exhausted);
  double zy[] = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(kronecker_solve(alphas, zy, 0.1), InvalidArgument);
  double pos_alpha[] = {1.0};
  double oy[] = {1.0};
  CHECK_THROWS_AS(kronecker_solve(pos_alpha, oy, 0.1), InvalidArgument);
}

TEST_CASE("solvers are deterministic field for field") {
  const auto a = two_gen_solve(-0.5, 3.0, 7.25, {.epsilon = 0.01});
  const auto b = two_gen_solve(-0.5, 3.0, 7.25, {.epsilon = 0.01});
  CHECK(a.k == b.k);
  CHECK(a.l == b.l);
  CHECK(a.value == b.value);
  CHECK(a.abs_error == b.abs_error);

  const auto c = lemma55_witness(2.0, kTheta, C{0.5, -0.25}, 1.4);
  const auto d = lemma55_witness(2.0, kTheta, C{0.5, -0.25}, 1.4);
  CHECK(c.k == d.k);
  CHECK(c.s == d.s);
  CHECK(c.value == d.value);
}
