#include "bell/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "bell/optim.hpp"
#include "bell/polytopes.hpp"

namespace bell::sim {

namespace {
double dot3(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

void check_unit(const std::array<double, 3>& v) {
  if (std::abs(dot3(v, v) - 1.0) > 1e-9)
    throw std::invalid_argument("werner_lhv: measurement directions must be unit vectors");
}
}  // namespace

LhvSample werner_lhv_sample(const std::array<double, 3>& n_a,
                            const std::array<double, 3>& n_b, Rng& rng) {
  check_unit(n_a);
  check_unit(n_b);
  LhvSample s;
  s.lambda = rng.unit_vector3();
  // Alice: outcome 0 with probability cos^2(alpha_A/2) = (1 + n_a.lambda)/2
  const double p0 = 0.5 * (1.0 + dot3(n_a, s.lambda));
  s.a = rng.uniform() < p0 ? 0 : 1;
  // Bob: outcome 0 iff 2 cos^2(alpha_B/2) < 1, i.e. n_b.lambda < 0
  s.b = dot3(n_b, s.lambda) < 0.0 ? 0 : 1;
  return s;
}

std::array<double, 4> werner_pair_probabilities(const std::array<double, 3>& n_a,
                                                const std::array<double, 3>& n_b) {
  const double cos_alpha = dot3(n_a, n_b);
  std::array<double, 4> p{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double sa = a == 0 ? 1.0 : -1.0;
      const double sb = b == 0 ? 1.0 : -1.0;
      p[a * 2 + b] = 0.25 * (1.0 - 0.5 * sa * sb * cos_alpha);
    }
  return p;
}

SimulationReport werner_lhv_estimate(
    const std::vector<std::pair<std::array<double, 3>, std::array<double, 3>>>&
        directions,
    long samples, std::uint64_t seed) {
  if (samples < 10000)
    throw std::invalid_argument("werner_lhv_estimate: at least 1e4 samples required");
  SimulationReport rep;
  rep.samples = samples;
  rep.seed = seed;
  for (size_t d = 0; d < directions.size(); ++d) {
    Rng rng(split_seed(seed, d));
    PairReport pr;
    pr.target = werner_pair_probabilities(directions[d].first, directions[d].second);
    std::array<long, 4> counts{};
    for (long i = 0; i < samples; ++i) {
      LhvSample s = werner_lhv_sample(directions[d].first, directions[d].second, rng);
      ++counts[s.a * 2 + s.b];
    }
    for (int k = 0; k < 4; ++k) {
      pr.frequency[k] = static_cast<double>(counts[k]) / samples;
      pr.max_deviation = std::max(pr.max_deviation,
                                  std::abs(pr.frequency[k] - pr.target[k]));
      pr.standard_error = std::max(
          pr.standard_error,
          std::sqrt(pr.target[k] * (1 - pr.target[k]) / static_cast<double>(samples)));
    }
    rep.max_deviation = std::max(rep.max_deviation, pr.max_deviation);
    rep.standard_error = std::max(rep.standard_error, pr.standard_error);
    rep.pairs.push_back(pr);
  }
  rep.pass = true;
  for (const auto& pr : rep.pairs)
    if (pr.max_deviation > 5.0 * pr.standard_error) rep.pass = false;
  return rep;
}

// --- detection faking ---------------------------------------------------------

FakingReport detection_faking_run(long samples, std::uint64_t seed, bool symmetrized) {
  if (samples < 10000)
    throw std::invalid_argument("detection_faking_run: at least 1e4 samples required");
  Rng rng(seed);
  FakingReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.symmetrized = symmetrized;

  Scenario sc = Scenario::homogeneous(2, 2, 2);
  std::vector<long> joint_counts(16, 0);
  std::vector<long> both_click_counts(4, 0);
  long clicks_a = 0, clicks_b = 0;

  for (long i = 0; i < samples; ++i) {
    const int x = rng.bit() ? 1 : 0;
    const int y = rng.bit() ? 1 : 0;
    const int shared_a = rng.bit() ? 1 : 0;
    // branch: 0 = Alice guesses, 1 = Bob guesses, 2 = both guess
    int branch = 0;
    if (symmetrized) branch = rng.uniform_int(3);
    int a = -1, b = -1;  // -1 marks no-click
    if (branch == 0) {
      const int x_guess = rng.bit() ? 1 : 0;
      if (x == x_guess) a = shared_a;
      b = shared_a ^ (x_guess & y);
    } else if (branch == 1) {
      const int y_guess = rng.bit() ? 1 : 0;
      if (y == y_guess) b = shared_a;
      a = shared_a ^ (y_guess & x);
    } else {
      const int x_guess = rng.bit() ? 1 : 0;
      const int y_guess = rng.bit() ? 1 : 0;
      if (x == x_guess) a = shared_a;
      if (y == y_guess) b = shared_a ^ (x_guess & y_guess);
    }
    if (a >= 0) ++clicks_a;
    if (b >= 0) ++clicks_b;
    if (a >= 0 && b >= 0) {
      ++both_click_counts[x * 2 + y];
      ++joint_counts[sc.index({a, b}, {x, y})];
    }
  }

  rep.click_rate_alice = static_cast<double>(clicks_a) / samples;
  rep.click_rate_bob = static_cast<double>(clicks_b) / samples;
  std::vector<double> table(16, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const long n = both_click_counts[x * 2 + y];
          table[sc.index({a, b}, {x, y})] =
              n ? static_cast<double>(joint_counts[sc.index({a, b}, {x, y})]) / n : 0.25;
        }
  rep.conditional = Behavior(sc, table);
  rep.conditional_chsh = evaluate(chsh(), rep.conditional);

  Behavior pr = polytopes::pr_box();
  long min_cond = samples;
  for (long n : both_click_counts) min_cond = std::min(min_cond, n);
  for (size_t i = 0; i < table.size(); ++i)
    rep.max_deviation_from_pr =
        std::max(rep.max_deviation_from_pr, std::abs(table[i] - pr.p[i]));
  rep.standard_error =
      std::sqrt(0.25 / std::max<long>(1, min_cond));  // p(1-p) <= 1/4
  rep.pass = rep.max_deviation_from_pr <= 5.0 * rep.standard_error;
  return rep;
}

// --- PR-box protocols ------------------------------------------------------------

std::pair<int, int> PrBoxState::use(int x, int y) {
  if ((x & ~1) || (y & ~1)) throw std::invalid_argument("pr box: binary inputs required");
  const int a = rng_->bit() ? 1 : 0;
  const int b = a ^ (x & y);
  transcript_.push_back({x, y, a, b});
  if ((a ^ b) != (x & y)) throw std::logic_error("pr box: a xor b != xy");
  return {a, b};
}

VanDamResult vandam_inner_product(const std::vector<int>& x, const std::vector<int>& y,
                                  Rng& rng) {
  if (x.size() != y.size())
    throw dimension_error("vandam_inner_product: input length mismatch");
  PrBoxState boxes(rng);
  int xa = 0, xb = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    auto [a, b] = boxes.use(x[i], y[i]);
    xa ^= a;
    xb ^= b;
  }
  VanDamResult r;
  r.message = xa;          // Alice -> Bob, one bit
  r.output = xa ^ xb;      // equals sum x_i y_i mod 2
  r.transcript = boxes.transcript();
  return r;
}

InfoCausalityResult info_causality_retrieval(int x0, int x1, int k, Rng& rng) {
  if ((x0 & ~1) || (x1 & ~1) || (k & ~1))
    throw std::invalid_argument("info_causality_retrieval: bits required");
  PrBoxState box(rng);
  auto [a, b] = box.use(x0 ^ x1, k);
  InfoCausalityResult r;
  r.message = a ^ x0;
  r.guess = b ^ r.message;
  r.transcript = box.transcript();
  return r;
}

// --- EPR2 --------------------------------------------------------------------------

double epr2_local_content(const Behavior& b, long cap) {
  const Scenario& sc = b.scenario;
  if (no_signaling_residual(b) > tolerances().no_signaling)
    throw std::invalid_argument("epr2_local_content: no-signaling behavior required");
  const long nvert = polytopes::local_vertex_count(sc);
  if (nvert < 0 || nvert > cap)
    throw cap_error("epr2_local_content: vertex cap exceeded");

  CollinsGisin cg(sc);
  const long t = cg.dimension();
  std::vector<double> pcg = cg.to_cg_unchecked(b);
  std::vector<std::vector<double>> rows;
  std::vector<double> a0;
  cg.reconstruction_rows(rows, a0);
  const long nentries = sc.table_size();

  // variables: [c_lambda (nvert) | r_cg (t, free) | mu (>= 0)]
  // maximize sum c subject to:
  //   sum_l c_l d_cg(l) + r_cg = p_cg           (t equality rows)
  //   sum_l c_l + mu = 1                         (mass)
  //   A r_cg + mu a0 >= 0                        (residual positivity)
  const long nvars = nvert + t + 1;
  optim::LpProblem p;
  p.A = Eigen::MatrixXd::Zero(t + 1 + nentries, nvars);
  p.b = Eigen::VectorXd::Zero(t + 1 + nentries);
  p.c = Eigen::VectorXd::Zero(nvars);
  p.free_vars.assign(nvars, false);
  for (long j = 0; j < t; ++j) p.free_vars[nvert + j] = true;

  long col = 0;
  polytopes::for_each_local_vertex(sc, [&](const polytopes::DeterministicStrategy& s) {
    std::vector<double> d = cg.to_cg_unchecked(polytopes::strategy_behavior(s));
    for (long r = 0; r < t; ++r) p.A(r, col) = d[r];
    p.A(t, col) = 1.0;
    p.c[col] = 1.0;
    ++col;
  }, cap);
  for (long r = 0; r < t; ++r) {
    p.A(r, nvert + r) = 1.0;
    p.b[r] = pcg[r];
  }
  p.A(t, nvert + t) = 1.0;
  p.b[t] = 1.0;
  for (long e = 0; e < nentries; ++e) {
    for (long j = 0; j < t; ++j) p.A(t + 1 + e, nvert + j) = rows[e][j];
    p.A(t + 1 + e, nvert + t) = a0[e];
  }
  p.senses.assign(t + 1, optim::RowSense::eq);
  for (long e = 0; e < nentries; ++e) p.senses.push_back(optim::RowSense::ge);

  auto sol = optim::lp_solve(p);
  if (sol.status != optim::Status::optimal)
    throw std::runtime_error("epr2_local_content: LP failed (" +
                             std::string(optim::status_name(sol.status)) + ")");
  return std::clamp(sol.objective, 0.0, 1.0);
}

double epr2_upper_from_inequality(const Behavior& b, const BellExpression& expr) {
  const double q = evaluate(expr, b);
  const double sl = polytopes::local_bound(expr).value;
  const double sns = polytopes::ns_bound(expr);
  if (sns - sl < 1e-12)
    throw std::invalid_argument("epr2_upper_from_inequality: expression has S_ns == S_l");
  return std::clamp((sns - q) / (sns - sl), 0.0, 1.0);
}

}  // namespace bell::sim
