#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "bell/cli.hpp"
#include "bell/io.hpp"
#include "bell/polytopes.hpp"
#include "bell/quantum.hpp"

using namespace bell;
using cli::run;

namespace {

std::string write_temp(const std::string& name, const io::json& j) {
  std::string path = std::string("/tmp/bellscope_test_") + name;
  io::save_json_file(path, j);
  return path;
}

}  // namespace

TEST_CASE("bound subcommand landmarks") {
  SUBCASE("local bound of chsh is 2") {
    auto r = run({"bound", "--expr", "chsh", "--set", "local"});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("value").get<double>() == doctest::Approx(2.0));
  }
  SUBCASE("quantum upper bound of chsh is 2.8284271...") {
    auto r = run({"bound", "--expr", "chsh", "--set", "quantum-upper"});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("value").get<double>() ==
          doctest::Approx(2.8284271247461903).epsilon(1e-6));
  }
  SUBCASE("ns bound of chsh is 4") {
    auto r = run({"bound", "--expr", "chsh", "--set", "ns"});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("value").get<double>() == doctest::Approx(4.0).epsilon(1e-9));
  }
  SUBCASE("catalog params route through") {
    auto r = run({"bound", "--expr", "chained", "--params", "2,3", "--set", "local"});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("value").get<double>() == doctest::Approx(-1.0));
  }
}

TEST_CASE("membership subcommand") {
  std::string pr = write_temp("pr.json", io::behavior_to_json(polytopes::pr_box()));
  SUBCASE("pr box is outside local with a certificate") {
    auto r = run({"membership", "--set", "local", pr});
    CHECK(r.exit_code == 0);
    CHECK_FALSE(r.payload.at("inside").get<bool>());
    CHECK(r.payload.contains("certificate"));
  }
  SUBCASE("pr box is inside ns") {
    auto r = run({"membership", "--set", "ns", pr});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("inside").get<bool>());
  }
  SUBCASE("pr box fails q1 and npa1") {
    CHECK_FALSE(run({"membership", "--set", "q1", pr}).payload.at("inside").get<bool>());
    CHECK_FALSE(
        run({"membership", "--set", "npa1", pr}).payload.at("inside").get<bool>());
  }
}

TEST_CASE("validate subcommand and exit codes") {
  std::string ok = write_temp(
      "uniform.json",
      io::behavior_to_json(Behavior::uniform(Scenario::homogeneous(2, 2, 2))));
  auto r = run({"validate", ok});
  CHECK(r.exit_code == 0);
  CHECK(r.payload.at("pass").get<bool>());
  SUBCASE("missing file is an input error (exit 1)") {
    CHECK(run({"validate", "/nonexistent/file.json"}).exit_code == 1);
  }
  SUBCASE("unknown command prints usage with exit 1") {
    auto res = run({"frobnicate"});
    CHECK(res.exit_code == 1);
    CHECK(res.table.find("Usage") != std::string::npos);
  }
  SUBCASE("unknown catalog name is an input error") {
    CHECK(run({"bound", "--expr", "nonsense", "--set", "local"}).exit_code == 1);
  }
  SUBCASE("vertex cap exhaustion gives exit 2") {
    // a scenario with 4^10 > 1e6 local vertices would exceed the cap; emulate
    // with a large chained scenario through strength's cap
    Scenario big = Scenario::homogeneous(2, 12, 2);
    Behavior u = Behavior::uniform(big);
    std::string path = write_temp("big.json", io::behavior_to_json(u));
    CHECK(run({"strength", "--behavior", path}).exit_code == 2);
  }
}

TEST_CASE("randomness, gill, threshold, strength subcommands") {
  SUBCASE("randomness quantum at 2 sqrt 2") {
    auto r = run({"randomness", "--chsh", "2.8284271247461903", "--model", "quantum"});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("p_guess").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("gill") {
    auto r = run({"gill", "--trials", "10000", "--epsilon", "0.5"});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("bound").get<double>() == doctest::Approx(8.9e-17).epsilon(0.05));
  }
  SUBCASE("threshold on the Tsirelson behavior") {
    Correlators c;
    c.m_a = c.m_b = 2;
    c.alice = {0, 0};
    c.bob = {0, 0};
    const double s2 = 1.4142135623730951;
    c.joint = {1 / s2, 1 / s2, 1 / s2, -1 / s2};
    Behavior ts = behavior_from_correlators(Scenario::homogeneous(2, 2, 2), c);
    std::string path = write_temp("tsirelson.json", io::behavior_to_json(ts));
    auto r = run({"threshold", "--behavior", path, "--assign", "0,0", "--tol", "1e-6"});
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("lo").get<double>() <= 2 / (1 + s2) + 1e-6);
    CHECK(r.payload.at("hi").get<double>() >= 2 / (1 + s2) - 1e-6);
    SUBCASE("strength on the same file") {
      auto rs = run({"strength", "--behavior", path});
      CHECK(rs.exit_code == 0);
      CHECK(rs.payload.at("bits").get<double>() ==
            doctest::Approx(0.0462738).epsilon(1e-2));
    }
  }
}

TEST_CASE("simulate subcommands reproduce with the same seed") {
  io::json dirs{{"directions", {{{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}}}};
  std::string dpath = write_temp("dirs.json", dirs);
  auto r1 = run({"--seed", "9", "simulate", "werner", "--samples", "20000",
                 "--directions", dpath});
  auto r2 = run({"--seed", "9", "simulate", "werner", "--samples", "20000",
                 "--directions", dpath});
  CHECK(r1.exit_code == 0);
  CHECK(io::dump17(r1.payload) == io::dump17(r2.payload));
  SUBCASE("faking") {
    auto f = run({"--seed", "4", "simulate", "faking", "--samples", "50000",
                  "--symmetrized"});
    CHECK(f.exit_code == 0);
    CHECK(f.payload.at("pass").get<bool>());
    CHECK(f.payload.at("conditional_chsh").get<double>() == doctest::Approx(4.0));
  }
  SUBCASE("prbox protocols") {
    auto ip = run({"simulate", "prbox-ip", "--x", "111", "--y", "111"});
    CHECK(ip.exit_code == 0);
    CHECK(ip.payload.at("output").get<int>() == 1);
    auto ic = run({"simulate", "prbox-ic", "--x0", "1", "--x1", "0", "--k", "0"});
    CHECK(ic.exit_code == 0);
    CHECK(ic.payload.at("guess").get<int>() == 1);
  }
}

TEST_CASE("catalog and graph-bell") {
  auto l = run({"catalog", "list"});
  CHECK(l.exit_code == 0);
  CHECK(l.payload.at("names").size() >= 7);
  auto s = run({"catalog", "show", "chsh"});
  CHECK(s.exit_code == 0);
  CHECK(s.payload.at("meta").at("local_bound").get<double>() == 2.0);

  io::json graph{{"n", 3}, {"edges", {{0, 1}, {1, 2}}}};
  std::string gpath = write_temp("graph.json", graph);
  auto g = run({"graph-bell", "--edges", gpath});
  CHECK(g.exit_code == 0);
  CHECK(g.payload.at("quantum_value").get<double>() == doctest::Approx(8.0));
  CHECK(g.payload.at("l_of_g").get<double>() < 8.0);
}

TEST_CASE("json payloads round-trip through the documented schemas") {
  SUBCASE("behavior") {
    Behavior pr = polytopes::pr_box();
    io::json j = io::behavior_to_json(pr);
    Behavior back = io::behavior_from_json(io::json::parse(io::dump17(j)));
    for (size_t i = 0; i < pr.p.size(); ++i) CHECK(back.p[i] == pr.p[i]);
  }
  SUBCASE("expression with metadata") {
    BellExpression e = chsh();
    io::json j = io::expression_to_json(e);
    BellExpression back = io::expression_from_json(io::json::parse(io::dump17(j)));
    CHECK(back.s == e.s);
    CHECK(back.meta.local_bound->value == 2.0);
  }
  SUBCASE("model") {
    quantum::QuantumModel m = quantum::singlet_optimal_model();
    io::json j = io::model_to_json(m);
    double herm = -1;
    quantum::QuantumModel back =
        io::model_from_json(io::json::parse(io::dump17(j)), &herm);
    CHECK(herm <= 1e-12);
    CHECK((back.state.rho - m.state.rho).norm() <= 1e-15);
    Behavior b1 = quantum::born_behavior(m);
    Behavior b2 = quantum::born_behavior(back);
    for (size_t i = 0; i < b1.p.size(); ++i)
      CHECK(b1.p[i] == doctest::Approx(b2.p[i]).epsilon(1e-15));
  }
  SUBCASE("17-significant-digit serialization is exact for doubles") {
    const double v = 2.0 * std::sqrt(2.0) / 3.0 + 1e-17;
    io::json j = io::json::array({v});
    io::json back = io::json::parse(io::dump17(j));
    CHECK(back.at(0).get<double>() == v);
  }
}

TEST_CASE("BELLSCOPE_TOL environment override") {
  Behavior b = Behavior::uniform(Scenario::homogeneous(2, 2, 2));
  b.p[0] += 1e-7;
  b.p[1] -= 1e-7;  // normalization fine; positivity fine; slight asymmetry
  std::string path = write_temp("slight.json", io::behavior_to_json(b));
  // default tolerance 1e-9: the tiny signaling asymmetry fails ns membership
  auto strict = run({"membership", "--set", "ns", path});
  CHECK_FALSE(strict.payload.at("inside").get<bool>());
  setenv("BELLSCOPE_TOL", "1e-5", 1);
  auto loose = run({"membership", "--set", "ns", path});
  unsetenv("BELLSCOPE_TOL");
  CHECK(loose.payload.at("inside").get<bool>());
  // flag beats environment
  setenv("BELLSCOPE_TOL", "1e-5", 1);
  auto flag = run({"--tol", "1e-9", "membership", "--set", "ns", path});
  unsetenv("BELLSCOPE_TOL");
  CHECK_FALSE(flag.payload.at("inside").get<bool>());
  tolerances() = Tolerances{};  // restore defaults for other tests
}
