#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bell/core.hpp"
#include "bell/npa.hpp"
#include "bell/polytopes.hpp"
#include "bell/quantum.hpp"

using namespace bell;
using namespace bell::npa;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

Behavior tsirelson_behavior() {
  Correlators c;
  c.m_a = c.m_b = 2;
  c.alice = {0, 0};
  c.bob = {0, 0};
  c.joint = {1 / kSqrt2, 1 / kSqrt2, 1 / kSqrt2, -1 / kSqrt2};
  return behavior_from_correlators(Scenario::homogeneous(2, 2, 2), c);
}

Behavior isotropic_chsh_behavior(double s) {
  // zero marginals, correlators proportional to the CHSH pattern, value s
  Correlators c;
  c.m_a = c.m_b = 2;
  c.alice = {0, 0};
  c.bob = {0, 0};
  const double e = s / 4.0;
  c.joint = {e, e, e, -e};
  return behavior_from_correlators(Scenario::homogeneous(2, 2, 2), c);
}

Behavior random_ns(Rng& rng) {
  auto verts = polytopes::ns_vertices_222();
  std::vector<double> w(verts.size());
  double tot = 0;
  for (auto& v : w) {
    v = -std::log(rng.uniform() + 1e-300);
    tot += v;
  }
  Behavior b = verts[0];
  for (auto& x : b.p) x = 0;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = 0; j < b.p.size(); ++j) b.p[j] += w[i] / tot * verts[i].p[j];
  return b;
}

}  // namespace

TEST_CASE("npa membership") {
  SUBCASE("PR box is infeasible at level 1") {
    auto r = npa_membership(polytopes::pr_box(), Level::one);
    CHECK_FALSE(r.feasible);
    CHECK(r.slack < -1e-4);
  }
  SUBCASE("Tsirelson behavior is feasible") {
    CHECK(npa_membership(tsirelson_behavior(), Level::one).feasible);
    CHECK(npa_membership(tsirelson_behavior(), Level::one_ab).feasible);
  }
  SUBCASE("CHSH value 3 is infeasible at level 1, cross-checked analytically") {
    Behavior b = isotropic_chsh_behavior(3.0);
    CHECK_FALSE(npa_membership(b, Level::one).feasible);
    CHECK_FALSE(q1_analytic_222(b));
  }
  SUBCASE("born behaviors are feasible at both levels") {
    Rng rng(5);
    quantum::SeesawOptions so;
    so.restarts = 1;
    for (int t = 0; t < 30; ++t) {
      // random two-qubit models
      Eigen::MatrixXcd g(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
      quantum::DensityMatrix rho{{2, 2}, g * g.adjoint()};
      rho.rho /= rho.rho.trace();
      quantum::QuantumModel m;
      m.state = rho;
      for (int k = 0; k < 2; ++k) {
        quantum::MeasurementSet ms;
        for (int x = 0; x < 2; ++x) {
          Eigen::MatrixXcd h(2, 2);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              h(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
          h = 0.5 * (h + h.adjoint()).eval();
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
          Eigen::MatrixXcd p0 =
              es.eigenvectors().col(1) * es.eigenvectors().col(1).adjoint();
          ms.ops.push_back({p0, Eigen::MatrixXcd::Identity(2, 2) - p0});
        }
        m.measurements.push_back(ms);
      }
      Behavior b = quantum::born_behavior(m);
      CHECK(npa_membership(b, Level::one).feasible);
      CHECK(npa_membership(b, Level::one_ab).feasible);
    }
  }
}

TEST_CASE("npa upper bounds") {
  SUBCASE("CHSH at level 1 is Tsirelson's bound") {
    auto r = npa_upper_bound(chsh(), Level::one);
    REQUIRE(r.status == optim::Status::optimal);
    CHECK(r.value == doctest::Approx(2 * kSqrt2).epsilon(1e-6));
  }
  SUBCASE("positivity expression: max p(00|00) is 1") {
    BellExpression e(Scenario::homogeneous(2, 2, 2), std::vector<double>(16, 0.0));
    e.at({0, 0}, {0, 0}) = 1.0;
    auto r = npa_upper_bound(e, Level::one);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("I3322 at level 1+AB: close to the qubit value, below the NS bound") {
    auto r = npa_upper_bound(i3322(), Level::one_ab);
    REQUIRE(r.status == optim::Status::optimal);
    // the spec reports the gap to the see-saw value rather than asserting
    // tightness; the qubit value is 1.25 and the 1+AB bound ~1.2509
    CHECK(r.value >= 1.25 - 1e-6);
    CHECK(r.value <= 1.25 + 5e-3);
    CHECK(r.value < polytopes::ns_bound(i3322()) - 0.5);
  }
  SUBCASE("nonincreasing in level") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      BellExpression e(Scenario::homogeneous(2, 2, 2), std::vector<double>(16, 0.0));
      for (auto& v : e.s) v = rng.gaussian();
      auto r1 = npa_upper_bound(e, Level::one);
      auto r2 = npa_upper_bound(e, Level::one_ab);
      CHECK(r2.value <= r1.value + 1e-6);
    }
  }
  SUBCASE("chained(2,m) quantum bounds") {
    for (int m = 2; m <= 3; ++m) {
      auto r = npa_upper_bound(chained(2, m), Level::one);
      CHECK(r.value ==
            doctest::Approx(-m * (1 - std::cos(M_PI / (2 * m)))).epsilon(1e-6));
    }
  }
  SUBCASE("CGLMP(3): see-saw value sits below the level-1 bound") {
    quantum::SeesawOptions so;
    so.restarts = 6;
    so.seed = 13;
    const double lower = quantum::seesaw_lower_bound(cglmp(3), {3, 3}, so).value;
    auto r = npa_upper_bound(cglmp(3), Level::one);
    CHECK(lower <= r.value + 1e-6);
    CHECK(lower > -2.0 + 0.05);  // strictly above the local bound
  }
}

TEST_CASE("q1 analytic test") {
  SUBCASE("Tsirelson behavior passes (asin form saturates at pi)") {
    CHECK(q1_analytic_222(tsirelson_behavior(), 1e-7));
  }
  SUBCASE("PR box fails with asin sum 2 pi") {
    CHECK_FALSE(q1_analytic_222(polytopes::pr_box()));
    CHECK(q1_analytic_margin(polytopes::pr_box()) == doctest::Approx(-M_PI));
  }
  SUBCASE("deterministic vertices pass through the degenerate branch") {
    for (const auto& v : polytopes::local_vertices(Scenario::homogeneous(2, 2, 2)))
      CHECK(q1_analytic_222(polytopes::strategy_behavior(v)));
  }
  SUBCASE("agreement with the level-1 SDP on random NS behaviors") {
    Rng rng(2);
    int disagreements = 0;
    const int total = 1000;
    for (int t = 0; t < total; ++t) {
      Behavior b = random_ns(rng);
      auto sdp = npa_membership(b, Level::one);
      const bool analytic = q1_analytic_222(b, 1e-9);
      if (analytic != sdp.feasible) {
        ++disagreements;
        // disagreements may only occur within a thin boundary band
        CHECK(std::abs(sdp.slack) <= 1e-5);
      }
    }
    CHECK(disagreements <= total / 100);
    MESSAGE("q1 vs SDP disagreements: ", disagreements, "/", total);
  }
}

TEST_CASE("tsirelson correlation membership") {
  SUBCASE("CHSH-optimal correlators are feasible") {
    std::vector<double> c = {1 / kSqrt2, 1 / kSqrt2, 1 / kSqrt2, -1 / kSqrt2};
    CHECK(tsirelson_correlation_membership(c, 2));
  }
  SUBCASE("CHSH value 3 correlators are infeasible") {
    std::vector<double> c = {0.75, 0.75, 0.75, -0.75};
    CHECK_FALSE(tsirelson_correlation_membership(c, 2));
  }
  SUBCASE("all correlators 1 is feasible (all vectors equal)") {
    std::vector<double> c(9, 1.0);
    CHECK(tsirelson_correlation_membership(c, 3));
  }
}

TEST_CASE("sandwich ordering on random expressions") {
  Rng rng(3);
  quantum::SeesawOptions so;
  so.restarts = 3;
  so.seed = 17;
  for (int t = 0; t < 25; ++t) {
    BellExpression e(Scenario::homogeneous(2, 2, 2), std::vector<double>(16, 0.0));
    for (auto& v : e.s) v = rng.gaussian();
    const double lower = quantum::seesaw_lower_bound(e, {2, 2}, so).value;
    const double u2 = npa_upper_bound(e, Level::one_ab).value;
    const double u1 = npa_upper_bound(e, Level::one).value;
    const double ns = polytopes::ns_bound(e);
    const double local = polytopes::local_bound(e).value;
    CHECK(local <= u1 + 1e-6);
    CHECK(lower <= u2 + 1e-6);
    CHECK(u2 <= u1 + 1e-6);
    CHECK(u1 <= ns + 1e-6);
  }
}
