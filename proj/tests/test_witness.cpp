#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "jclass/recipe.hpp"
#include "jclass/tuple.hpp"
#include "jclass/witness.hpp"

using namespace jclass;
using C = std::complex<double>;

namespace {

RealTuple diag2() { return std::get<RealTuple>(build_tuple(catalog_diag_real(2))); }

ExponentVector kv(std::initializer_list<std::int64_t> v) {
  return ExponentVector(std::vector<std::int64_t>(v));
}

}  // namespace

TEST_CASE("diagonal witness reproduces the pinned single-step record") {
  const auto t = diag2();
  const double sched[] = {0.05};
  const auto seq = jset_witness(t, 1.0, Eigen::Vector2d(1.0, 5.0), sched);
  CHECK(seq.complete);
  CHECK_FALSE(seq.target_substituted);
  REQUIRE(seq.records.size() == 1);
  const auto& r = seq.records[0];
  CHECK(r.K == kv({38, 24}));
  CHECK(decode(r.x[0]).value == 1.0);
  // x_2 = 5 / (2^38 3^24): the vanishing perturbation that re-expands to 5
  CHECK(decode(r.x[1]).value == doctest::Approx(6.4405069887873819e-23).epsilon(1e-12));
  CHECK(decode(r.image[0]).value == doctest::Approx(1.0274726682146145).epsilon(1e-14));
  CHECK(decode(r.image[1]).value == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(r.image_error == doctest::Approx(0.02747266821).epsilon(1e-9));
  CHECK(r.base_error == doctest::Approx(6.44050698878e-23).epsilon(1e-9));
  CHECK(r.base_error < 0.05);
}

TEST_CASE("diagonal witness walks a three-step schedule with growing exponents") {
  const auto t = std::get<RealTuple>(build_tuple(catalog_diag_real(3)));
  const double sched[] = {1e-1, 1e-2, 1e-3};
  const auto seq = jset_witness(t, 1.0, Eigen::Vector3d(-2.5, 7.0, 0.3), sched);
  CHECK(seq.complete);
  REQUIRE(seq.records.size() == 3);
  CHECK(seq.records[0].K == kv({5, 4}));
  CHECK(seq.records[1].K == kv({471, 298}));
  CHECK(seq.records[2].K == kv({555, 351}));
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = seq.records[i];
    CHECK(r.index == static_cast<int>(i) + 1);
    CHECK(r.image_error <= sched[i]);
    CHECK(r.base_error <= sched[i]);
    CHECK(r.K.total() > prev);
    prev = r.K.total();
  }
}

TEST_CASE("diagonal witness handles a zero first target coordinate") {
  const auto t = diag2();
  const double sched[] = {0.1, 0.01};
  const auto seq = jset_witness(t, 1.0, Eigen::Vector2d(0.0, 3.0), sched);
  CHECK(seq.complete);
  REQUIRE(seq.records.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    // the image's first coordinate must approach 0 within the tolerance even
    // though the solver cannot target 0 directly
    CHECK(std::fabs(decode(seq.records[i].image[0]).value) <= sched[i]);
    CHECK(seq.records[i].image_error <= sched[i]);
  }
}

TEST_CASE("triangular witness matches the closed-form perturbation") {
  const auto t = std::get<RealTuple>(build_tuple(catalog_tri_real(2)));
  const double sched[] = {1e-1, 1e-2};
  const auto seq = jset_witness(t, 1.0, Eigen::Vector2d(0.0, 1.0), sched);
  CHECK(seq.complete);
  REQUIRE(seq.records.size() == 2);
  CHECK(seq.records[0].K == kv({6, 68}));
  CHECK(seq.records[1].K == kv({9, 516}));
  for (const auto& r : seq.records) {
    // x = (x1 + c/S, -x1/S) with S = k/2 - l here (w_1 = 0 collapses c_1)
    const double S = static_cast<double>(r.K[0]) / 2.0 - static_cast<double>(r.K[1]);
    CHECK(decode(r.x[1]).value == doctest::Approx(-1.0 / S).epsilon(1e-12));
  }
}

TEST_CASE("triangular witness substitutes a zero last coordinate and flags it") {
  const auto t = std::get<RealTuple>(build_tuple(catalog_tri_real(2)));
  const double sched[] = {1e-1, 1e-2};
  const auto seq = jset_witness(t, 1.0, Eigen::Vector2d(1.0, 0.0), sched);
  CHECK(seq.target_substituted);
  CHECK(seq.effective_target[1] == 0.01);  // the final tolerance
  CHECK(seq.target[1] == 0.0);             // original kept for the reader
  CHECK_FALSE(seq.note.empty());
  CHECK(seq.complete);
  for (std::size_t i = 0; i < seq.records.size(); ++i)
    CHECK(seq.records[i].image_error <= sched[i]);
}

TEST_CASE("complex diagonal witness completes on the catalog pair") {
  const auto t = std::get<ComplexTuple>(build_tuple(catalog_diag_complex(2)));
  const double sched[] = {1e-1, 1e-2};
  const auto seq =
      jset_witness(t, C{1.0, 0.0}, (Eigen::VectorXcd(2) << C{1.0, 0.0}, C{2.0, -1.0}).finished(),
                   sched);
  CHECK(seq.complete);
  REQUIRE(seq.records.size() == 2);
  CHECK(seq.records[0].K == kv({363, 229}));
  CHECK(seq.records[1].K == kv({2994, 1889}));
  for (std::size_t i = 0; i < 2; ++i) CHECK(seq.records[i].image_error <= sched[i]);
}

TEST_CASE("complex triangular witness works at representable tolerances") {
  const auto t = std::get<ComplexTuple>(build_tuple(catalog_tri_complex(2)));
  const double sched[] = {1.5, 1.2};
  const auto seq =
      jset_witness(t, C{1.0, 0.0}, (Eigen::VectorXcd(2) << C{0.5, 0.5}, C{1.0, 1.0}).finished(),
                   sched);
  CHECK(seq.complete);
  REQUIRE(seq.records.size() == 2);
  CHECK(seq.records[0].K == kv({16, 46341}));
  CHECK(seq.records[1].K == kv({45, 24879108095803}));
  for (std::size_t i = 0; i < 2; ++i) CHECK(seq.records[i].image_error <= sched[i]);
}

TEST_CASE("complex triangular witness refuses tolerances that overflow int64") {
  const auto t = std::get<ComplexTuple>(build_tuple(catalog_tri_complex(2)));
  const double sched[] = {1e-1, 1e-2};
  CHECK_THROWS_AS(jset_witness(t, C{1.0, 0.0},
                               (Eigen::VectorXcd(2) << C{0.5, 0.5}, C{1.0, 0.0}).finished(),
                               sched),
                  RangeError);
}

TEST_CASE("witness argument validation") {
  const auto t = diag2();
  const double sched[] = {0.1};
  const double bad_up[] = {0.1, 0.2};
  const double bad_zero[] = {0.0};
  const Eigen::Vector2d y(1.0, 5.0);
  CHECK_THROWS_AS(jset_witness(t, 0.0, y, sched), InvalidArgument);
  CHECK_THROWS_AS(jset_witness(t, 1.0, y, std::span<const double>{}), InvalidArgument);
  CHECK_THROWS_AS(jset_witness(t, 1.0, y, bad_up), InvalidArgument);
  CHECK_THROWS_AS(jset_witness(t, 1.0, y, bad_zero), InvalidArgument);
  CHECK_THROWS_AS(jset_witness(t, 1.0, Eigen::Vector3d(1.0, 2.0, 3.0).eval(), sched),
                  InvalidArgument);
  const auto kron = std::get<RealTuple>(build_tuple(catalog_kronecker(2)));
  CHECK_THROWS_AS(jset_witness(kron, 1.0, y, sched), InvalidArgument);
  const auto zp = std::get<RealTuple>(build_tuple(catalog_zero_pair(2)));
  CHECK_THROWS_AS(jset_witness(zp, 1.0, y, sched), InvalidArgument);
}

TEST_CASE("min_k seeds the first step's exponent floor") {
  const auto t = diag2();
  const double sched[] = {0.05};
  const auto plain = jset_witness(t, 1.0, Eigen::Vector2d(1.0, 5.0), sched);
  const auto floored = jset_witness(t, 1.0, Eigen::Vector2d(1.0, 5.0), sched, 100);
  REQUIRE(floored.records.size() == 1);
  CHECK(plain.records[0].K[0] == 38);
  CHECK(floored.records[0].K[0] >= 100);
  CHECK(floored.records[0].image_error <= 0.05);
}

TEST_CASE("witness transport scales every stored point linearly") {
  const auto t = diag2();
  const double sched[] = {0.1, 0.01};
  const auto seq = jset_witness(t, 1.0, Eigen::Vector2d(1.0, 5.0), sched);
  const double lambda = -2.5;
  const auto moved = scale_witness(seq, lambda);
  CHECK(moved.base == lambda * seq.base);
  CHECK(moved.target == lambda * seq.target);
  REQUIRE(moved.records.size() == seq.records.size());
  for (std::size_t i = 0; i < seq.records.size(); ++i) {
    const auto& a = seq.records[i];
    const auto& b = moved.records[i];
    CHECK(b.K == a.K);
    for (std::size_t j = 0; j < a.x.size(); ++j) {
      CHECK(decode(b.x[j]).value ==
            doctest::Approx(lambda * decode(a.x[j]).value).epsilon(1e-12));
      CHECK(decode(b.image[j]).value ==
            doctest::Approx(lambda * decode(a.image[j]).value).epsilon(1e-12));
    }
    CHECK(b.image_error == doctest::Approx(std::fabs(lambda) * a.image_error).epsilon(1e-12));
    CHECK(b.base_error == doctest::Approx(std::fabs(lambda) * a.base_error).epsilon(1e-12));
  }
  CHECK_THROWS_AS(scale_witness(seq, 0.0), InvalidArgument);
}

TEST_CASE("membership confirms a planted preimage exactly") {
  const auto t = diag2();
  const Eigen::Vector2d x(0.6, -0.8);
  const auto y = power_product_apply(t, kv({7, 4}), x);
  const auto v = jset_membership(t, x, y, 1e-6, 1, 15);
  CHECK(v.status == MembershipStatus::Confirmed);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->K == kv({7, 4}));
  CHECK(v.witness->distance < 1e-10);
  CHECK(v.budget_used > 0);
}

TEST_CASE("membership re-finds the pinned witness pair under a growth floor") {
  const auto t = diag2();
  const auto v = jset_membership(t, Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(1.0, 5.0),
                                 0.05, 10, 80);
  CHECK(v.status == MembershipStatus::Confirmed);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->K == kv({38, 24}));
  CHECK(v.witness->distance == doctest::Approx(0.0267381).epsilon(1e-4));
  CHECK(v.budget_used == 1937);
}

TEST_CASE("membership reports an honest miss for an unreachable target") {
  const auto t = diag2();
  // 0 is not in J(e_2): inverse orbit points keep sup-distance exactly 1
  const auto v = jset_membership(t, Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(0.0, 0.0),
                                 0.5, 1, 60);
  CHECK(v.status == MembershipStatus::NotFoundWithinBudget);
  CHECK_FALSE(v.witness.has_value());
  CHECK(v.min_distance_found == 1.0);
}

TEST_CASE("membership argument validation") {
  const auto t = diag2();
  const Eigen::Vector2d x(1.0, 0.0), y(1.0, 5.0);
  CHECK_THROWS_AS(jset_membership(t, Eigen::Vector3d(1, 0, 0).eval(), y, 0.1), InvalidArgument);
  CHECK_THROWS_AS(jset_membership(t, x, y, -0.1), InvalidArgument);
  CHECK_THROWS_AS(jset_membership(t, x, y, 0.1, -1), InvalidArgument);
  const auto zp = std::get<RealTuple>(build_tuple(catalog_zero_pair(2)));
  CHECK_THROWS_AS(jset_membership(zp, x, y, 0.1), InvalidArgument);

  // growth_floor 0 admits the identity exponent, confirming x in J-closure(x)
  const auto self = jset_membership(t, x, x, 1e-9, 0, 3);
  CHECK(self.status == MembershipStatus::Confirmed);
  CHECK(self.witness->K == kv({0, 0}));
  // an empty scan window is a well-formed miss, not an error
  const auto empty = jset_membership(t, x, y, 0.1, 10, 5);
  CHECK(empty.status == MembershipStatus::NotFoundWithinBudget);
  CHECK(empty.budget_used == 0);
}

TEST_CASE("certificates across the catalog") {
  auto c = non_hc_certificate(build_tuple(catalog_diag_real(2)));
  CHECK(c.verdict == CertificateVerdict::NotHypercyclic);
  CHECK(c.coordinate == 2);  // tail entries 2 and 3: one-sided log-moduli
  CHECK_FALSE(c.reason.empty());

  c = non_hc_certificate(build_tuple(catalog_diag_complex(2)));
  CHECK(c.verdict == CertificateVerdict::NotHypercyclic);
  CHECK(c.coordinate == 2);

  c = non_hc_certificate(build_tuple(catalog_tri_real(3)));
  CHECK(c.verdict == CertificateVerdict::NotHypercyclic);
  CHECK(c.coordinate == 3);

  c = non_hc_certificate(build_tuple(catalog_tri_complex(2)));
  CHECK(c.verdict == CertificateVerdict::NotHypercyclic);
  CHECK(c.coordinate == 2);

  c = non_hc_certificate(build_tuple(catalog_zero_pair(2)));
  CHECK(c.verdict == CertificateVerdict::NotHypercyclic);
  CHECK(c.coordinate == 1);

  // the Kronecker family passes the necessary condition: mixed-sign,
  // irrationally related generators at every coordinate
  c = non_hc_certificate(build_tuple(catalog_kronecker(2)));
  CHECK(c.verdict == CertificateVerdict::Inconclusive);
}

TEST_CASE("certificate catches a rational opposite-sign generator pair") {
  // handcrafted diag(2), diag(1/4): log-moduli ln 2 and -2 ln 2, ratio -1/2
  RealTuple t;
  t.recipe = catalog_zero_pair(1);  // placeholder recipe; members define the tuple
  t.dim = 1;
  StructuredMatrix<LogSignScalar> m1, m2;
  m1.form = m2.form = MatrixForm::Diagonal;
  m1.dim = m2.dim = 1;
  m1.diag = {encode(2.0)};
  m2.diag = {encode(0.25)};
  t.members = {m1, m2};
  const auto c = non_hc_certificate(AnyTuple(t));
  CHECK(c.verdict == CertificateVerdict::NotHypercyclic);
  CHECK(c.coordinate == 1);
  CHECK(c.reason.find("rational") != std::string::npos);
}

TEST_CASE("orbit enumeration counts and the pinned sample point") {
  const auto t = std::get<RealTuple>(build_tuple(catalog_kronecker(1)));
  const auto s = orbit_points(t, Eigen::VectorXd::Ones(1).eval(), 40, 10.0);
  CHECK(s.enumerated > 0);
  bool found = false;
  for (const auto& [K, p] : s.points) {
    if (K == kv({8, 24})) {
      found = true;
      CHECK(p[0] == doctest::Approx(1.98636).epsilon(1e-4));
    }
    CHECK(p.cwiseAbs().maxCoeff() <= 10.0);
  }
  CHECK(found);

  // max_total 0 keeps only the start point
  const auto s0 = orbit_points(t, Eigen::VectorXd::Ones(1).eval(), 0, 10.0);
  CHECK(s0.enumerated == 1);
  REQUIRE(s0.points.size() == 1);
  CHECK(s0.points[0].second[0] == 1.0);

  // growing diagonal entries overflow or exit a tight box and are counted
  const auto d = diag2();
  const auto sd = orbit_points(d, Eigen::Vector2d(1.0, 1.0), 2600, 10.0);
  CHECK(sd.overflowed > 0);
  CHECK(sd.outside > 0);
  CHECK(sd.enumerated ==
        static_cast<std::int64_t>(sd.points.size()) + sd.overflowed + sd.outside);
}
