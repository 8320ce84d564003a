#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bell/diagnostics.hpp"
#include "bell/polytopes.hpp"
#include "bell/quantum.hpp"

using namespace bell;
using namespace bell::diag;

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
}  // namespace

TEST_CASE("guessing bounds") {
  SUBCASE("quantum bound landmarks") {
    CHECK(guessing_bound_quantum(2 * kSqrt2).p_guess == doctest::Approx(0.5));
    CHECK(guessing_bound_quantum(2.0).p_guess == doctest::Approx(1.0));
    CHECK(guessing_bound_quantum(2.5).p_guess ==
          doctest::Approx(0.5 * (1 + std::sqrt(2 - 1.5625))).epsilon(1e-12));
    CHECK_THROWS(guessing_bound_quantum(2 * kSqrt2 + 1e-3));
  }
  SUBCASE("ns bound landmarks") {
    CHECK(guessing_bound_ns(4.0).p_guess == doctest::Approx(0.5));
    CHECK(guessing_bound_ns(2 * kSqrt2).p_guess ==
          doctest::Approx(1.5 - kSqrt2 / 2).epsilon(1e-12));
    CHECK(guessing_bound_ns(2 * kSqrt2).p_guess >= 0.792);
    CHECK(guessing_bound_ns(2 * kSqrt2).p_guess <= 0.793);
    CHECK(guessing_bound_ns(2.0).p_guess == doctest::Approx(1.0));
    CHECK_THROWS(guessing_bound_ns(4.1));
  }
  SUBCASE("monotone nonincreasing in S, quantum below ns") {
    double prev_q = 2, prev_ns = 2;
    for (double s = 2.0; s <= 2 * kSqrt2 + 1e-12; s += 0.001) {
      const double pq = guessing_bound_quantum(std::min(s, 2 * kSqrt2)).p_guess;
      const double pn = guessing_bound_ns(s).p_guess;
      CHECK(pq <= prev_q + 1e-12);
      CHECK(pn <= prev_ns + 1e-12);
      CHECK(pq <= pn + 1e-12);
      prev_q = pq;
      prev_ns = pn;
    }
  }
  SUBCASE("chained bound") {
    CHECK(guessing_bound_chained(2, 4, 0.0) == doctest::Approx(0.5));
    CHECK(guessing_bound_chained(3, 2, 0.0) == doctest::Approx(1.0 / 3));
    CHECK(guessing_bound_chained(2, 2, 1.0) == doctest::Approx(1.0));
    CHECK(guessing_bound_chained(3, 2, 0.4) == doctest::Approx(1.0 / 3 + 0.3));
    CHECK_THROWS(guessing_bound_chained(2, 2, -0.1));
  }
  SUBCASE("min-entropy") {
    CHECK(min_entropy(0.5) == doctest::Approx(1.0));
    CHECK(min_entropy(1.0) == doctest::Approx(0.0));
    CHECK(min_entropy(0.25 + kSqrt2 / 8) == doctest::Approx(1.2284).epsilon(1e-4));
    CHECK(chsh_global_minentropy_max() >= 1.22);
    CHECK(chsh_global_minentropy_max() <= 1.23);
    CHECK_THROWS(min_entropy(0.0));
  }
}

TEST_CASE("apply_efficiency") {
  Behavior ts = tsirelson_behavior();
  SUBCASE("eta = 1 is the identity") {
    EfficiencyModel e{{1.0, 1.0}, {0, 0}};
    Behavior out = apply_efficiency(ts, e);
    for (size_t i = 0; i < ts.p.size(); ++i)
      CHECK(out.p[i] == doctest::Approx(ts.p[i]).epsilon(1e-12));
  }
  SUBCASE("closed-form CHSH transform at eta = 0.9") {
    EfficiencyModel e{{0.9, 0.9}, {0, 0}};
    Behavior out = apply_efficiency(ts, e);
    CHECK(evaluate(chsh(), out) ==
          doctest::Approx(0.81 * 2 * kSqrt2 + 0.01 * 2).epsilon(1e-12));
  }
  SUBCASE("eta = 0 gives the deterministic assignment with CHSH 2") {
    EfficiencyModel e{{0.0, 0.0}, {0, 0}};
    Behavior out = apply_efficiency(ts, e);
    CHECK(evaluate(chsh(), out) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("no-signaling and normalization preserved exactly") {
    EfficiencyModel e{{0.73, 0.41}, {1, 0}};
    Behavior out = apply_efficiency(ts, e);
    CHECK(validate_behavior(out).normalization_residual <= 1e-12);
    CHECK(no_signaling_residual(out) <= 1e-12);
  }
}

TEST_CASE("efficiency thresholds") {
  SUBCASE("Tsirelson behavior brackets 2/(1+sqrt2)") {
    auto br = efficiency_threshold(tsirelson_behavior(), {0, 0}, 1e-6);
    const double expect = 2.0 / (1.0 + kSqrt2);
    CHECK(br.width() <= 1e-6);
    CHECK(br.lo <= expect + 1e-6);
    CHECK(br.hi >= expect - 1e-6);
  }
  SUBCASE("PR box thresholds at 2/3") {
    auto br = efficiency_threshold(polytopes::pr_box(), {0, 0}, 1e-6);
    CHECK(br.lo <= 2.0 / 3 + 1e-6);
    CHECK(br.hi >= 2.0 / 3 - 1e-6);
  }
  SUBCASE("local behavior rejected") {
    CHECK_THROWS(efficiency_threshold(Behavior::uniform(Scenario::homogeneous(2, 2, 2)),
                                      {0, 0}, 1e-4));
  }
  SUBCASE("lower bound formula") {
    CHECK(efficiency_lower_bound(2, 2) == doctest::Approx(2.0 / 3));
    CHECK(efficiency_lower_bound(3, 3) == doctest::Approx(0.5));
    CHECK(efficiency_lower_bound(2, 3) == doctest::Approx(0.6));
    CHECK(efficiency_lower_bound(4, 2) < efficiency_lower_bound(3, 2));
  }
}

TEST_CASE("eberhard scan: threshold decreases for weaker entanglement") {
  auto br_max = eberhard_threshold(M_PI / 4, 1e-4, 4, 2);
  const double expect = 2.0 / (1.0 + kSqrt2);
  CHECK(br_max.lo <= expect + 1e-4);
  CHECK(br_max.hi >= expect - 1e-4);
  auto br_small = eberhard_threshold(0.2, 1e-4, 4, 2);
  CHECK(br_small.hi < br_max.lo);
  CHECK(br_small.hi < 0.71);
}

TEST_CASE("gill bound") {
  CHECK(gill_bound(10000, 0.5) ==
        doctest::Approx(8 * std::exp(-4e4 * std::pow(0.5 / 16, 2))).epsilon(1e-12));
  CHECK(gill_bound(10000, 0.5) == doctest::Approx(8.9e-17).epsilon(0.05));
  CHECK(gill_bound(10000, 0.0) == doctest::Approx(8.0));
  SUBCASE("monotone decreasing in N and epsilon") {
    CHECK(gill_bound(20000, 0.5) < gill_bound(10000, 0.5));
    CHECK(gill_bound(10000, 0.6) < gill_bound(10000, 0.5));
  }
}

TEST_CASE("teleportation fidelity bound") {
  CHECK(teleport_fidelity_bound(2 * kSqrt2) == doctest::Approx(5.0 / 6).epsilon(1e-12));
  CHECK(teleport_fidelity_bound(2.0) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(teleport_fidelity_bound(0.0) == doctest::Approx(0.5));
  CHECK_THROWS(teleport_fidelity_bound(3.0));
}

TEST_CASE("statistical strength") {
  SUBCASE("local behaviors have zero strength") {
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
    auto r = statistical_strength(b);
    CHECK(r.converged);
    CHECK(r.bits <= 1e-6);
  }
  SUBCASE("optimal CHSH behavior: 0.0462738 bits (uniform inputs)") {
    auto r = statistical_strength(tsirelson_behavior(), 1e-8);
    CHECK(r.converged);
    CHECK(r.duality_gap <= 1e-8);
    CHECK(r.bits == doctest::Approx(0.0462738).epsilon(2e-4));
  }
  SUBCASE("Mermin-GHZ behavior: 0.208 bits (uniform inputs)") {
    Behavior b = quantum::born_behavior(quantum::ghz_model());
    auto r = statistical_strength(b, 1e-7);
    CHECK(r.converged);
    CHECK(r.bits == doctest::Approx(0.2075).epsilon(5e-3));
  }
  SUBCASE("mixing toward a local point never increases strength") {
    Behavior ts = tsirelson_behavior();
    Behavior u = Behavior::uniform(ts.scenario);
    double prev = statistical_strength(ts).bits;
    for (double w : {0.8, 0.5, 0.2}) {
      Behavior mix = ts;
      for (size_t i = 0; i < mix.p.size(); ++i)
        mix.p[i] = w * ts.p[i] + (1 - w) * u.p[i];
      const double bits = statistical_strength(mix).bits;
      CHECK(bits <= prev + 1e-7);
      prev = bits;
    }
  }
  SUBCASE("mixing with random local noise: 20 random pairs") {
    Rng rng(27);
    auto nsv = polytopes::ns_vertices_222();
    auto lverts = polytopes::local_vertices(Scenario::homogeneous(2, 2, 2));
    for (int t = 0; t < 20; ++t) {
      // random NS behavior
      Behavior b(nsv[0].scenario, std::vector<double>(16, 0.0));
      {
        std::vector<double> w(nsv.size());
        double tot = 0;
        for (auto& x : w) {
          x = -std::log(rng.uniform() + 1e-300);
          tot += x;
        }
        for (size_t i = 0; i < nsv.size(); ++i)
          for (size_t j = 0; j < b.p.size(); ++j) b.p[j] += w[i] / tot * nsv[i].p[j];
      }
      // random local behavior
      Behavior q(b.scenario, std::vector<double>(16, 0.0));
      {
        std::vector<double> w(lverts.size());
        double tot = 0;
        for (auto& x : w) {
          x = -std::log(rng.uniform() + 1e-300);
          tot += x;
        }
        for (size_t i = 0; i < lverts.size(); ++i) {
          Behavior d = polytopes::strategy_behavior(lverts[i]);
          for (size_t j = 0; j < q.p.size(); ++j) q.p[j] += w[i] / tot * d.p[j];
        }
      }
      const double w = rng.uniform();
      Behavior mix = b;
      for (size_t i = 0; i < mix.p.size(); ++i)
        mix.p[i] = w * b.p[i] + (1 - w) * q.p[i];
      CHECK(statistical_strength(mix).bits <=
            statistical_strength(b).bits + 1e-7);
    }
  }
}
