#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bell/polytopes.hpp"
#include "bell/quantum.hpp"
#include "bell/simulate.hpp"

using namespace bell;
using namespace bell::sim;

namespace {

Behavior singlet_chained_behavior(int m) {
  using namespace bell::quantum;
  QuantumModel model;
  model.state = singlet();
  const double delta = M_PI - M_PI / (2.0 * m);
  auto planar = [](double ang) {
    return (std::cos(ang) * pauli_z() + std::sin(ang) * pauli_x()).eval();
  };
  MeasurementSet alice, bob;
  for (int k = 0; k < m; ++k) {
    auto mk_proj = [&](double ang) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(planar(ang));
      MatrixXcd p0 = es.eigenvectors().col(1) * es.eigenvectors().col(1).adjoint();
      return std::vector<MatrixXcd>{p0, MatrixXcd::Identity(2, 2) - p0};
    };
    alice.ops.push_back(mk_proj(2 * k * delta));
    bob.ops.push_back(mk_proj((2 * k + 1) * delta));
  }
  model.measurements = {alice, bob};
  return born_behavior(model);
}

}  // namespace

TEST_CASE("werner sampler marginals match the closed form") {
  SUBCASE("aligned, antipodal, orthogonal directions") {
    const std::array<double, 3> z{0, 0, 1};
    const std::array<double, 3> mz{0, 0, -1};
    const std::array<double, 3> x{1, 0, 0};
    CHECK(werner_pair_probabilities(z, z)[0] == doctest::Approx(1.0 / 8));
    CHECK(werner_pair_probabilities(z, mz)[0] == doctest::Approx(3.0 / 8));
    CHECK(werner_pair_probabilities(z, x)[0] == doctest::Approx(1.0 / 4));
    auto rep = werner_lhv_estimate({{z, z}, {z, mz}, {z, x}}, 1000000, 42);
    CHECK(rep.pass);
    CHECK(rep.pairs[0].frequency[0] == doctest::Approx(1.0 / 8).epsilon(2e-2));
    CHECK(rep.pairs[1].frequency[0] == doctest::Approx(3.0 / 8).epsilon(2e-2));
  }
  SUBCASE("fixed seed reproduces the report bit-identically") {
    const std::array<double, 3> z{0, 0, 1};
    const std::array<double, 3> x{1, 0, 0};
    auto r1 = werner_lhv_estimate({{z, x}}, 20000, 7);
    auto r2 = werner_lhv_estimate({{z, x}}, 20000, 7);
    for (int k = 0; k < 4; ++k)
      CHECK(r1.pairs[0].frequency[k] == r2.pairs[0].frequency[k]);
  }
  SUBCASE("small sample size keeps frequencies normalized") {
    const std::array<double, 3> z{0, 0, 1};
    auto rep = werner_lhv_estimate({{z, z}}, 10000, 3);
    double sum = 0;
    for (double f : rep.pairs[0].frequency) sum += f;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.standard_error > 1e-4);
  }
  SUBCASE("non-unit directions rejected") {
    Rng rng(1);
    CHECK_THROWS(werner_lhv_sample({0, 0, 2}, {0, 0, 1}, rng));
  }
  SUBCASE("50 random direction pairs at N = 2e5 stay within 5 sigma") {
    Rng rng(12345);
    std::vector<std::pair<std::array<double, 3>, std::array<double, 3>>> dirs;
    for (int i = 0; i < 50; ++i) dirs.push_back({rng.unit_vector3(), rng.unit_vector3()});
    auto rep = werner_lhv_estimate(dirs, 200000, 99);
    CHECK(rep.pass);
  }
}

TEST_CASE("detection faking") {
  SUBCASE("asymmetric click rates (1/2, 1)") {
    auto rep = detection_faking_run(200000, 11, false);
    CHECK(rep.click_rate_alice ==
          doctest::Approx(0.5).epsilon(5 * std::sqrt(0.25 / 200000) / 0.5));
    CHECK(rep.click_rate_bob == doctest::Approx(1.0));
    CHECK(rep.conditional_chsh == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.pass);
  }
  SUBCASE("symmetrized click rates 2/3 each") {
    auto rep = detection_faking_run(400000, 13, true);
    const double se = std::sqrt((2.0 / 3) * (1.0 / 3) / 400000);
    CHECK(std::abs(rep.click_rate_alice - 2.0 / 3) <= 5 * se);
    CHECK(std::abs(rep.click_rate_bob - 2.0 / 3) <= 5 * se);
    CHECK(rep.conditional_chsh == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.pass);
  }
}

TEST_CASE("PR-box protocols") {
  SUBCASE("every transcript quadruple satisfies a xor b = xy") {
    Rng rng(5);
    PrBoxState box(rng);
    for (int t = 0; t < 100; ++t) {
      int x = rng.bit(), y = rng.bit();
      auto [a, b] = box.use(x, y);
      CHECK((a ^ b) == (x & y));
    }
    CHECK(box.transcript().size() == 100);
  }
  SUBCASE("van Dam inner product: n = 3 all-ones gives 1, x = 0 gives 0") {
    Rng rng(6);
    CHECK(vandam_inner_product({1, 1, 1}, {1, 1, 1}, rng).output == 1);
    for (int t = 0; t < 8; ++t) {
      std::vector<int> y = {(t >> 2) & 1, (t >> 1) & 1, t & 1};
      CHECK(vandam_inner_product({0, 0, 0}, y, rng).output == 0);
    }
  }
  SUBCASE("exhaustive n = 4 over inputs and box randomness") {
    for (int xi = 0; xi < 16; ++xi)
      for (int yi = 0; yi < 16; ++yi) {
        std::vector<int> x = {(xi >> 3) & 1, (xi >> 2) & 1, (xi >> 1) & 1, xi & 1};
        std::vector<int> y = {(yi >> 3) & 1, (yi >> 2) & 1, (yi >> 1) & 1, yi & 1};
        int expected = 0;
        for (int k = 0; k < 4; ++k) expected ^= x[k] & y[k];
        // repeat with fresh randomness; correctness must hold for every draw
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
          Rng rng(seed * 7919 + xi * 16 + yi);
          auto r = vandam_inner_product(x, y, rng);
          CHECK(r.output == expected);
          CHECK(r.transcript.size() == 4);
        }
      }
  }
  SUBCASE("information causality retrieval: all 8 cases always correct") {
    for (int x0 = 0; x0 < 2; ++x0)
      for (int x1 = 0; x1 < 2; ++x1)
        for (int k = 0; k < 2; ++k)
          for (std::uint64_t seed = 0; seed < 8; ++seed) {
            Rng rng(seed + 100 * (4 * x0 + 2 * x1 + k));
            auto r = info_causality_retrieval(x0, x1, k, rng);
            CHECK(r.guess == (k ? x1 : x0));
          }
  }
}

TEST_CASE("EPR2 local content") {
  SUBCASE("PR box has zero local content") {
    CHECK(epr2_local_content(polytopes::pr_box()) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("local behaviors have local content 1") {
    Rng rng(3);
    auto verts = polytopes::local_vertices(Scenario::homogeneous(2, 2, 2));
    Behavior b(verts[0].scenario, std::vector<double>(16, 0.0));
    std::vector<double> w(verts.size());
    double tot = 0;
    for (auto& v : w) {
      v = -std::log(rng.uniform() + 1e-300);
      tot += v;
    }
    for (size_t i = 0; i < verts.size(); ++i) {
      Behavior d = polytopes::strategy_behavior(verts[i]);
      for (size_t j = 0; j < b.p.size(); ++j) b.p[j] += w[i] / tot * d.p[j];
    }
    CHECK(epr2_local_content(b) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("singlet behaviors under chained settings: w_max nonincreasing in m") {
    double prev = 1.0;
    for (int m = 2; m <= 4; ++m) {
      Behavior b = singlet_chained_behavior(m);
      const double w = epr2_local_content(b);
      const double upper = epr2_upper_from_inequality(b, chained(2, m));
      CHECK(w <= upper + 1e-8);
      CHECK(w <= prev + 1e-9);
      prev = w;
    }
  }
  SUBCASE("LP value never exceeds the catalog inequality bounds (random quantum)") {
    Rng rng(21);
    quantum::SeesawOptions so;
    for (int t = 0; t < 100; ++t) {
      // random two-qubit pure state + random planar measurements
      quantum::QuantumModel m;
      m.state = quantum::partially_entangled(rng.uniform(0.05, M_PI / 4));
      for (int k = 0; k < 2; ++k) {
        quantum::MeasurementSet ms;
        for (int x = 0; x < 2; ++x) {
          const double ang = rng.uniform(0, 2 * M_PI);
          quantum::MatrixXcd o = std::cos(ang) * quantum::pauli_z() +
                                 std::sin(ang) * quantum::pauli_x();
          Eigen::SelfAdjointEigenSolver<quantum::MatrixXcd> es(o);
          quantum::MatrixXcd p0 =
              es.eigenvectors().col(1) * es.eigenvectors().col(1).adjoint();
          ms.ops.push_back({p0, quantum::MatrixXcd::Identity(2, 2) - p0});
        }
        m.measurements.push_back(ms);
      }
      Behavior b = quantum::born_behavior(m);
      const double w = epr2_local_content(b);
      CHECK(w <= epr2_upper_from_inequality(b, chsh()) + 1e-8);
      CHECK(w >= -1e-9);
      CHECK(w <= 1.0 + 1e-9);
    }
  }
}
