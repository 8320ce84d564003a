#include "bell/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bell/polytopes.hpp"
#include "bell/quantum.hpp"

namespace bell::diag {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLn2 = 0.6931471805599453;
}  // namespace

RandomnessBound guessing_bound_quantum(double s) {
  if (s > 2 * kSqrt2 + 1e-9)
    throw std::invalid_argument("guessing_bound_quantum: S above the Tsirelson bound");
  RandomnessBound r;
  r.bell_value = s;
  r.adversary = "quantum";
  if (s <= 2.0) {
    r.p_guess = 1.0;
  } else {
    r.p_guess = 0.5 * (1.0 + std::sqrt(std::max(0.0, 2.0 - s * s / 4.0)));
  }
  r.min_entropy_bits = min_entropy(r.p_guess);
  return r;
}

RandomnessBound guessing_bound_ns(double s) {
  if (s > 4.0 + 1e-9)
    throw std::invalid_argument("guessing_bound_ns: S above the algebraic maximum");
  RandomnessBound r;
  r.bell_value = s;
  r.adversary = "no-signaling";
  r.p_guess = std::min(1.0, 1.5 - s / 4.0);
  r.min_entropy_bits = min_entropy(r.p_guess);
  return r;
}

double guessing_bound_chained(int d, int m, double s_chained) {
  if (d < 2 || m < 2) throw std::invalid_argument("guessing_bound_chained: d, m >= 2");
  if (s_chained < 0)
    throw std::invalid_argument("guessing_bound_chained: bracket value must be >= 0");
  (void)m;  // the bound depends on the inequality only through its value
  return std::min(1.0, 1.0 / d + d / 4.0 * s_chained);
}

double min_entropy(double p_guess) {
  if (p_guess <= 0.0 || p_guess > 1.0)
    throw std::invalid_argument("min_entropy: p in (0,1] required");
  return -std::log2(p_guess);
}

double chsh_global_minentropy_max() { return -std::log2(0.25 + kSqrt2 / 8.0); }

// --- efficiency ---------------------------------------------------------------

Behavior apply_efficiency(const Behavior& b, const EfficiencyModel& e) {
  const Scenario& sc = b.scenario;
  const int n = sc.parties;
  if (static_cast<int>(e.eta.size()) != n ||
      static_cast<int>(e.assignment.size()) != n)
    throw dimension_error("apply_efficiency: one efficiency/assignment per party");
  for (int k = 0; k < n; ++k) {
    if (e.eta[k] < 0 || e.eta[k] > 1)
      throw std::invalid_argument("apply_efficiency: efficiencies in [0,1]");
    if (e.assignment[k] < 0 || e.assignment[k] >= sc.outputs[k])
      throw std::invalid_argument("apply_efficiency: assignment outcome out of range");
  }
  Behavior out(sc, std::vector<double>(sc.table_size(), 0.0));
  const long nin = sc.input_tuples();
  const long nout = sc.output_tuples();
  for (unsigned subset = 0; subset < (1u << n); ++subset) {
    double w = 1.0;
    std::vector<int> detected;
    for (int k = 0; k < n; ++k) {
      if (subset & (1u << k)) {
        w *= e.eta[k];
        detected.push_back(k);
      } else {
        w *= 1.0 - e.eta[k];
      }
    }
    if (w == 0.0) continue;
    for (long i = 0; i < nin; ++i) {
      std::vector<int> x = sc.decode_input(i);
      for (long o = 0; o < nout; ++o) {
        std::vector<int> a = sc.decode_output(o);
        bool match = true;
        for (int k = 0; k < n; ++k)
          if (!(subset & (1u << k)) && a[k] != e.assignment[k]) {
            match = false;
            break;
          }
        if (!match) continue;
        std::vector<int> as, xs;
        for (int k : detected) {
          as.push_back(a[k]);
          xs.push_back(x[k]);
        }
        out.p[i * nout + o] += w * b.marginal(detected, as, xs);
      }
    }
  }
  return out;
}

optim::Bracket efficiency_threshold(const Behavior& b,
                                    const std::vector<int>& assignment,
                                    double tol) {
  EfficiencyModel e;
  e.assignment = assignment;
  auto nonlocal_at = [&](double eta) {
    e.eta.assign(b.scenario.parties, eta);
    return !polytopes::local_membership(apply_efficiency(b, e)).inside;
  };
  if (!nonlocal_at(1.0))
    throw std::invalid_argument("efficiency_threshold: behavior is local at eta = 1");
  auto br = optim::bisect(nonlocal_at, 0.0, 1.0, tol);
  // re-verify the bracket with two explicit LP membership calls
  if (nonlocal_at(br.lo) || !nonlocal_at(br.hi))
    throw std::runtime_error("efficiency_threshold: bracket failed re-verification");
  return br;
}

double efficiency_lower_bound(int m_a, int m_b) {
  if (m_a < 2 || m_b < 2)
    throw std::invalid_argument("efficiency_lower_bound: m >= 2 required");
  return static_cast<double>(m_a + m_b - 2) / (m_a * m_b - 1);
}

namespace {

// CHSH expression deflated by the efficiency map with no-click assigned to
// outcome 0 on both sides: evaluate(chsh, apply_efficiency(b, eta)) ==
// evaluate(deflated, b) + constant for every no-signaling b.
BellExpression efficiency_deflated_chsh(double eta, double& constant) {
  BellExpression s = chsh();
  BellExpression out = s;
  for (auto& v : out.s) v = 0.0;
  constant = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          out.at({a, b}, {x, y}) += eta * eta * s.at({a, b}, {x, y});
          out.at({a, b}, {x, y}) += eta * (1 - eta) * s.at({a, 0}, {x, y});
          out.at({a, b}, {x, y}) += (1 - eta) * eta * s.at({0, b}, {x, y});
        }
      constant += (1 - eta) * (1 - eta) * s.at({0, 0}, {x, y});
    }
  return out;
}

}  // namespace

optim::Bracket eberhard_threshold(double theta, double tol, int restarts,
                                  std::uint64_t seed) {
  quantum::DensityMatrix psi = quantum::partially_entangled(theta);
  long step = 0;
  auto nonlocal_at = [&](double eta) {
    double constant = 0.0;
    BellExpression deflated = efficiency_deflated_chsh(eta, constant);
    quantum::SeesawOptions opt;
    opt.restarts = restarts;
    opt.seed = split_seed(seed, ++step);
    auto best = quantum::seesaw_fixed_state(deflated, psi, opt);
    quantum::QuantumModel model = best.model;
    EfficiencyModel e;
    e.eta = {eta, eta};
    e.assignment = {0, 0};
    Behavior b = apply_efficiency(quantum::born_behavior(model), e);
    return !polytopes::local_membership(b).inside;
  };
  if (!nonlocal_at(1.0))
    throw std::invalid_argument("eberhard_threshold: no violation found at eta = 1");
  return optim::bisect(nonlocal_at, 0.5, 1.0, tol);
}

// --- finite statistics / teleportation -----------------------------------------

double gill_bound(long n, double epsilon) {
  if (n < 1 || epsilon < 0)
    throw std::invalid_argument("gill_bound: N >= 1 and epsilon >= 0 required");
  const double e16 = epsilon / 16.0;
  return 8.0 * std::exp(-4.0 * static_cast<double>(n) * e16 * e16);
}

double teleport_fidelity_bound(double s) {
  if (s < 0 || s > 2 * kSqrt2 + 1e-9)
    throw std::invalid_argument("teleport_fidelity_bound: S in [0, 2 sqrt 2] required");
  return 0.5 * (1.0 + s * s / 12.0);
}

// --- statistical strength --------------------------------------------------------

namespace {

struct ActiveVertex {
  polytopes::DeterministicStrategy strategy;
  std::vector<double> table;
  double weight;
};

double kl_bits(const Behavior& p, const std::vector<double>& q, double pi) {
  double f = 0.0;
  for (size_t e = 0; e < p.p.size(); ++e) {
    if (p.p[e] <= 0) continue;
    f += pi * p.p[e] * std::log2(p.p[e] / std::max(q[e], 1e-300));
  }
  return f;
}

}  // namespace

StrengthResult statistical_strength(const Behavior& b, double gap_tol, long cap) {
  const Scenario& sc = b.scenario;
  const double pi = 1.0 / static_cast<double>(sc.input_tuples());
  const long nvert = polytopes::local_vertex_count(sc);
  if (nvert < 0 || nvert > cap)
    throw cap_error("statistical_strength: vertex cap exceeded");

  // active set: all vertices, uniform start (strictly positive q)
  std::map<std::vector<int>, ActiveVertex> active;
  std::vector<double> q(sc.table_size(), 0.0);
  polytopes::for_each_local_vertex(sc, [&](const polytopes::DeterministicStrategy& s) {
    ActiveVertex av;
    av.strategy = s;
    av.table = polytopes::strategy_behavior(s).p;
    av.weight = 1.0 / static_cast<double>(nvert);
    std::vector<int> key;
    for (const auto& row : s.assignment) key.insert(key.end(), row.begin(), row.end());
    for (size_t e = 0; e < q.size(); ++e) q[e] += av.weight * av.table[e];
    active.emplace(std::move(key), std::move(av));
  }, cap);

  auto grad = [&](std::vector<double>& g) {
    for (size_t e = 0; e < q.size(); ++e)
      g[e] = (b.p[e] > 0) ? -pi * b.p[e] / (std::max(q[e], 1e-300) * kLn2) : 0.0;
  };

  StrengthResult res;
  std::vector<double> g(q.size());
  const int max_iters = 200000;
  for (res.iterations = 0; res.iterations < max_iters; ++res.iterations) {
    grad(g);
    // Frank-Wolfe vertex: minimize <g, d> == maximize <-g, d>
    BellExpression neg(sc, std::vector<double>(q.size()));
    for (size_t e = 0; e < q.size(); ++e) neg.s[e] = -g[e];
    auto lmo = polytopes::local_bound(neg, cap);
    std::vector<double> s_table = polytopes::strategy_behavior(lmo.maximizer).p;

    double gq = 0, gs = 0;
    for (size_t e = 0; e < q.size(); ++e) {
      gq += g[e] * q[e];
      gs += g[e] * s_table[e];
    }
    const double fw_gap = gq - gs;
    res.duality_gap = fw_gap;
    if (fw_gap <= gap_tol) {
      res.converged = true;
      break;
    }

    // away vertex: active vertex maximizing <g, v>
    auto away = active.begin();
    double best_away = -std::numeric_limits<double>::infinity();
    for (auto it = active.begin(); it != active.end(); ++it) {
      double gv = 0;
      for (size_t e = 0; e < q.size(); ++e) gv += g[e] * it->second.table[e];
      if (gv > best_away) {
        best_away = gv;
        away = it;
      }
    }
    const double away_gap = best_away - gq;

    std::vector<double> delta(q.size());
    double gamma_max = 1.0;
    bool is_away = away_gap > fw_gap && active.size() > 1;
    if (is_away) {
      const double alpha = away->second.weight;
      if (alpha >= 1.0 - 1e-15) is_away = false;
      if (is_away) {
        for (size_t e = 0; e < q.size(); ++e) delta[e] = q[e] - away->second.table[e];
        gamma_max = alpha / (1.0 - alpha);
      }
    }
    if (!is_away)
      for (size_t e = 0; e < q.size(); ++e) delta[e] = s_table[e] - q[e];

    // line search on the convex 1-d slice: bisection on the derivative
    auto deriv = [&](double gamma) {
      double d = 0;
      for (size_t e = 0; e < q.size(); ++e) {
        if (b.p[e] <= 0 || delta[e] == 0.0) continue;
        d -= pi * b.p[e] * delta[e] / (std::max(q[e] + gamma * delta[e], 1e-300) * kLn2);
      }
      return d;
    };
    double gamma = gamma_max;
    if (deriv(gamma_max) > 0) {
      double lo = 0, hi = gamma_max;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) <= 0 ? lo : hi) = mid;
      }
      gamma = 0.5 * (lo + hi);
    }
    if (gamma <= 0) {
      res.converged = true;  // numerically stuck at optimum
      break;
    }

    // weight updates
    if (is_away) {
      for (auto& [k, av] : active) av.weight *= (1.0 + gamma);
      away->second.weight -= gamma;
      if (away->second.weight <= 1e-15) active.erase(away);
    } else {
      for (auto& [k, av] : active) av.weight *= (1.0 - gamma);
      std::vector<int> key;
      for (const auto& row : lmo.maximizer.assignment)
        key.insert(key.end(), row.begin(), row.end());
      auto [it, inserted] = active.try_emplace(key);
      if (inserted) {
        it->second.strategy = lmo.maximizer;
        it->second.table = s_table;
        it->second.weight = 0.0;
      }
      it->second.weight += gamma;
    }
    for (size_t e = 0; e < q.size(); ++e) q[e] += gamma * delta[e];
  }

  res.bits = kl_bits(b, q, pi);
  res.closest_local = Behavior(sc, q);
  return res;
}

}  // namespace bell::diag
