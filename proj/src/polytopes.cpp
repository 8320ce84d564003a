#include "bell/polytopes.hpp"

#include <algorithm>
#include <cmath>

namespace bell::polytopes {

using optim::LpProblem;
using optim::LpSolution;
using optim::RowSense;
using optim::Status;

// --- deterministic strategies -------------------------------------------------

Behavior strategy_behavior(const DeterministicStrategy& s) {
  const Scenario& sc = s.scenario;
  Behavior b(sc, std::vector<double>(sc.table_size(), 0.0));
  const long nin = sc.input_tuples();
  std::vector<int> a(sc.parties);
  for (long i = 0; i < nin; ++i) {
    std::vector<int> x = sc.decode_input(i);
    for (int k = 0; k < sc.parties; ++k) a[k] = s.assignment[k][x[k]];
    b.p[i * sc.output_tuples() + sc.output_index(a)] = 1.0;
  }
  return b;
}

long local_vertex_count(const Scenario& sc) {
  double count = 1;
  for (int k = 0; k < sc.parties; ++k)
    count *= std::pow(static_cast<double>(sc.outputs[k]), sc.inputs[k]);
  if (count > 9e18) return -1;
  long c = 1;
  for (int k = 0; k < sc.parties; ++k)
    for (int x = 0; x < sc.inputs[k]; ++x) c *= sc.outputs[k];
  return c;
}

void for_each_local_vertex(const Scenario& sc,
                           const std::function<void(const DeterministicStrategy&)>& fn,
                           long cap) {
  const long count = local_vertex_count(sc);
  if (count < 0 || count > cap)
    throw cap_error("local_vertices: vertex cap exceeded");
  DeterministicStrategy s;
  s.scenario = sc;
  s.assignment.resize(sc.parties);
  for (int k = 0; k < sc.parties; ++k) s.assignment[k].assign(sc.inputs[k], 0);
  for (;;) {
    fn(s);
    // lexicographic increment, party-major then input
    int k = sc.parties - 1, x = sc.inputs[k] - 1;
    for (;;) {
      if (++s.assignment[k][x] < sc.outputs[k]) break;
      s.assignment[k][x] = 0;
      if (--x < 0) {
        if (--k < 0) return;
        x = sc.inputs[k] - 1;
      }
    }
  }
}

std::vector<DeterministicStrategy> local_vertices(const Scenario& sc, long cap) {
  std::vector<DeterministicStrategy> out;
  out.reserve(static_cast<size_t>(std::min(local_vertex_count(sc), cap)));
  for_each_local_vertex(sc, [&](const DeterministicStrategy& s) { out.push_back(s); },
                        cap);
  return out;
}

// --- certificates ----------------------------------------------------------------

namespace {

// Full-table expression realizing a linear functional given in Collins-Gisin
// coordinates (plus constant), with marginals pinned to remote input 0.
BellExpression expression_from_cg_coeffs(const CollinsGisin& cg,
                                         const std::vector<double>& coeffs,
                                         double constant) {
  const Scenario& sc = cg.scenario();
  BellExpression e(sc, std::vector<double>(sc.table_size(), 0.0));
  const long nout = sc.output_tuples();
  for (size_t j = 0; j < cg.coords().size(); ++j) {
    const auto& c = cg.coords()[j];
    if (coeffs[j] == 0.0) continue;
    std::vector<int> x(sc.parties, 0);
    for (size_t i = 0; i < c.parties.size(); ++i) x[c.parties[i]] = c.x[i];
    const long base = sc.input_index(x) * nout;
    for (long o = 0; o < nout; ++o) {
      std::vector<int> a = sc.decode_output(o);
      bool match = true;
      for (size_t i = 0; i < c.parties.size(); ++i)
        if (a[c.parties[i]] != c.a[i]) { match = false; break; }
      if (match) e.s[base + o] += coeffs[j];
    }
  }
  if (constant != 0.0) {
    std::vector<int> x0(sc.parties, 0);
    const long base = sc.input_index(x0) * nout;
    for (long o = 0; o < nout; ++o) e.s[base + o] += constant;
  }
  return e;
}

template <typename VertexEval>
SeparatingCertificate make_certificate(BellExpression expr, const Behavior& b,
                                       const VertexEval& max_over_vertices) {
  SeparatingCertificate cert;
  // gauge fix: zero coefficient mean per input tuple. On normalized behaviors
  // this shifts the expression and every vertex value by the same constant,
  // so the violation margin is untouched while the certificate loses its
  // arbitrary normalization-direction component.
  {
    const long nout = expr.scenario.output_tuples();
    const long nin = expr.scenario.input_tuples();
    for (long i = 0; i < nin; ++i) {
      double mean = 0.0;
      for (long o = 0; o < nout; ++o) mean += expr.s[i * nout + o];
      mean /= static_cast<double>(nout);
      for (long o = 0; o < nout; ++o) expr.s[i * nout + o] -= mean;
    }
  }
  double bound = max_over_vertices(expr);
  double margin = evaluate(expr, b) - bound;
  if (margin > 1e-12) {  // rescale to the unit-violation normalization
    for (auto& v : expr.s) v /= margin;
    bound /= margin;
    margin = 1.0;
  }
  cert.expression = std::move(expr);
  cert.expression.meta.name = "separating";
  cert.bound = bound;
  cert.violation = margin;
  cert.expression.meta.local_bound = {bound, "derived"};
  return cert;
}

}  // namespace

// --- local membership ---------------------------------------------------------------

MembershipVerdict local_membership(const Behavior& b, long cap) {
  const Scenario& sc = b.scenario;
  const long nvert = local_vertex_count(sc);
  if (nvert < 0 || nvert > cap)
    throw cap_error("local_membership: vertex cap exceeded");

  const bool signaling = no_signaling_residual(b) > tolerances().no_signaling;
  MembershipVerdict verdict;

  // columns: vertices (in CG coordinates when b is no-signaling, full table
  // otherwise), rows: coordinates plus the convexity row.
  CollinsGisin cg(sc);
  const long t = signaling ? sc.table_size() : cg.dimension();
  LpProblem p;
  p.A = Eigen::MatrixXd(t + 1, nvert);
  long col = 0;
  for_each_local_vertex(sc, [&](const DeterministicStrategy& s) {
    Behavior d = strategy_behavior(s);
    if (signaling) {
      for (long r = 0; r < t; ++r) p.A(r, col) = d.p[r];
    } else {
      std::vector<double> v = cg.to_cg_unchecked(d);
      for (long r = 0; r < t; ++r) p.A(r, col) = v[r];
    }
    p.A(t, col) = 1.0;
    ++col;
  }, cap);
  p.b = Eigen::VectorXd(t + 1);
  if (signaling) {
    for (long r = 0; r < t; ++r) p.b[r] = b.p[r];
  } else {
    std::vector<double> v = cg.to_cg_unchecked(b);
    for (long r = 0; r < t; ++r) p.b[r] = v[r];
  }
  p.b[t] = 1.0;
  p.c = Eigen::VectorXd::Zero(nvert);
  p.senses.assign(t + 1, RowSense::eq);

  LpSolution sol = optim::lp_solve(p);
  if (sol.status == Status::optimal) {
    verdict.inside = true;
    Behavior mix(sc, std::vector<double>(sc.table_size(), 0.0));
    long idx = 0;
    for_each_local_vertex(sc, [&](const DeterministicStrategy& s) {
      const double w = sol.x[idx];
      if (w > 1e-12) {
        verdict.weights.push_back({idx, w});
        Behavior d = strategy_behavior(s);
        for (size_t i = 0; i < mix.p.size(); ++i) mix.p[i] += w * d.p[i];
      }
      ++idx;
    }, cap);
    double res = 0.0;
    for (size_t i = 0; i < mix.p.size(); ++i)
      res = std::max(res, std::abs(mix.p[i] - b.p[i]));
    verdict.reconstruction_residual = res;
    return verdict;
  }
  if (sol.status != Status::infeasible)
    throw std::runtime_error("local_membership: LP did not converge");

  // Farkas row vector -> separating Bell expression
  BellExpression expr(sc, std::vector<double>(sc.table_size(), 0.0));
  if (signaling) {
    for (long r = 0; r < t; ++r) expr.s[r] = sol.farkas[r];
  } else {
    std::vector<double> coeffs(t);
    for (long r = 0; r < t; ++r) coeffs[r] = sol.farkas[r];
    expr = expression_from_cg_coeffs(cg, coeffs, 0.0);
  }
  verdict.inside = false;
  verdict.certificate = make_certificate(std::move(expr), b, [&](const BellExpression& e) {
    return local_bound(e, cap).value;
  });
  return verdict;
}

// --- local bound -----------------------------------------------------------------------

BoundResult local_bound(const BellExpression& expr, long cap) {
  const Scenario& sc = expr.scenario;
  if (local_vertex_count(sc) < 0 || local_vertex_count(sc) > cap)
    throw cap_error("local_bound: vertex cap exceeded");
  const int n = sc.parties;
  const int last = n - 1;
  const long nin = sc.input_tuples();
  const long nout = sc.output_tuples();

  BoundResult best;
  best.value = -std::numeric_limits<double>::infinity();

  // enumerate assignments of parties 0..n-2; last party responds per input
  std::vector<std::vector<int>> assign(n);
  for (int k = 0; k < n; ++k) assign[k].assign(sc.inputs[k], 0);

  std::vector<double> w(static_cast<size_t>(sc.inputs[last]) * sc.outputs[last]);
  std::vector<int> a(n);

  const auto evaluate_prefix = [&]() {
    std::fill(w.begin(), w.end(), 0.0);
    for (long i = 0; i < nin; ++i) {
      std::vector<int> x = sc.decode_input(i);
      for (int k = 0; k < last; ++k) a[k] = assign[k][x[k]];
      for (int al = 0; al < sc.outputs[last]; ++al) {
        a[last] = al;
        w[x[last] * sc.outputs[last] + al] += expr.s[i * nout + sc.output_index(a)];
      }
    }
    double total = 0.0;
    std::vector<int> response(sc.inputs[last], 0);
    for (int xl = 0; xl < sc.inputs[last]; ++xl) {
      double bestv = -std::numeric_limits<double>::infinity();
      for (int al = 0; al < sc.outputs[last]; ++al) {
        const double v = w[xl * sc.outputs[last] + al];
        if (v > bestv) { bestv = v; response[xl] = al; }
      }
      total += bestv;
    }
    if (total > best.value) {
      best.value = total;
      best.maximizer.scenario = sc;
      best.maximizer.assignment = assign;
      best.maximizer.assignment[last] = response;
    }
  };

  if (n == 1) {
    evaluate_prefix();
    return best;
  }
  for (;;) {
    evaluate_prefix();
    int k = last - 1, x = sc.inputs[k] - 1;
    for (;;) {
      if (++assign[k][x] < sc.outputs[k]) break;
      assign[k][x] = 0;
      if (--x < 0) {
        if (--k < 0) return best;
        x = sc.inputs[k] - 1;
      }
    }
  }
}

// --- no-signaling set ---------------------------------------------------------------------

double ns_bound(const BellExpression& expr) {
  CollinsGisin cg(expr.scenario);
  std::vector<std::vector<double>> rows;
  std::vector<double> a0;
  cg.reconstruction_rows(rows, a0);
  std::vector<double> obj;
  double constant = 0.0;
  cg.expression_in_cg(expr, obj, constant);

  const long t = cg.dimension();
  const long nrows = expr.scenario.table_size();
  LpProblem p;
  p.A = Eigen::MatrixXd(nrows, t);
  p.b = Eigen::VectorXd(nrows);
  for (long r = 0; r < nrows; ++r) {
    for (long j = 0; j < t; ++j) p.A(r, j) = rows[r][j];
    p.b[r] = -a0[r];
  }
  p.senses.assign(nrows, RowSense::ge);
  p.c = Eigen::Map<Eigen::VectorXd>(obj.data(), t);
  p.free_vars.assign(t, true);
  LpSolution sol = optim::lp_solve(p);
  if (sol.status != Status::optimal)
    throw std::runtime_error("ns_bound: LP failed (" +
                             std::string(optim::status_name(sol.status)) + ")");
  return sol.objective + constant;
}

NsVerdict ns_membership(const Behavior& b) {
  NsVerdict v;
  v.ns_residual = no_signaling_residual(b);
  double minent = 0.0;
  for (double x : b.p) minent = std::min(minent, x);
  v.positivity_residual = std::max(0.0, -minent);
  v.inside = v.ns_residual <= tolerances().no_signaling &&
             v.positivity_residual <= tolerances().positivity &&
             validate_behavior(b).normalization_residual <= tolerances().normalization;
  return v;
}

Behavior pr_box() {
  Scenario sc = Scenario::homogeneous(2, 2, 2);
  Behavior b(sc, std::vector<double>(16, 0.0));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb)
          if ((a ^ bb) == (x & y)) b.at({a, bb}, {x, y}) = 0.5;
  return b;
}

std::vector<Behavior> ns_vertices_222() {
  Scenario sc = Scenario::homogeneous(2, 2, 2);
  std::vector<Behavior> out;
  for (const auto& s : local_vertices(sc)) out.push_back(strategy_behavior(s));
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int beta = 0; beta < 2; ++beta)
      for (int gamma = 0; gamma < 2; ++gamma) {
        Behavior b(sc, std::vector<double>(16, 0.0));
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
              for (int bb = 0; bb < 2; ++bb)
                if ((a ^ bb) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma))
                  b.at({a, bb}, {x, y}) = 0.5;
        out.push_back(b);
      }
  return out;
}

// --- Svetlichny hybrid model -----------------------------------------------------------------

Behavior hybrid_behavior(const HybridStrategy& s) {
  const Scenario& sc = s.scenario;
  int i = -1, j = -1;
  for (int k = 0; k < sc.parties; ++k)
    if (k != s.lone_party) (i < 0 ? i : j) = k;
  Behavior b(sc, std::vector<double>(sc.table_size(), 0.0));
  const long nin = sc.input_tuples();
  std::vector<int> a(sc.parties);
  for (long ii = 0; ii < nin; ++ii) {
    std::vector<int> x = sc.decode_input(ii);
    const int pair_in = x[i] * sc.inputs[j] + x[j];
    const int pair_out = s.pair_assignment[pair_in];
    a[i] = pair_out / sc.outputs[j];
    a[j] = pair_out % sc.outputs[j];
    a[s.lone_party] = s.lone_assignment[x[s.lone_party]];
    b.p[ii * sc.output_tuples() + sc.output_index(a)] = 1.0;
  }
  return b;
}

std::vector<HybridStrategy> svetlichny_vertices(const Scenario& sc, long cap) {
  if (sc.parties != 3)
    throw dimension_error("svetlichny model: exactly three parties required");
  std::vector<HybridStrategy> out;
  for (int lone = 0; lone < 3; ++lone) {
    int i = -1, j = -1;
    for (int k = 0; k < 3; ++k)
      if (k != lone) (i < 0 ? i : j) = k;
    const int pair_inputs = sc.inputs[i] * sc.inputs[j];
    const int pair_outputs = sc.outputs[i] * sc.outputs[j];
    double cnt = std::pow(static_cast<double>(pair_outputs), pair_inputs) *
                 std::pow(static_cast<double>(sc.outputs[lone]), sc.inputs[lone]);
    if (cnt > static_cast<double>(cap))
      throw cap_error("svetlichny_vertices: vertex cap exceeded");
    HybridStrategy s;
    s.scenario = sc;
    s.lone_party = lone;
    s.pair_assignment.assign(pair_inputs, 0);
    s.lone_assignment.assign(sc.inputs[lone], 0);
    for (;;) {
      out.push_back(s);
      // increment (pair assignment, lone assignment) lexicographically
      int pos = pair_inputs + sc.inputs[lone] - 1;
      for (;;) {
        if (pos >= pair_inputs) {
          int li = pos - pair_inputs;
          if (++s.lone_assignment[li] < sc.outputs[lone]) break;
          s.lone_assignment[li] = 0;
        } else {
          if (++s.pair_assignment[pos] < pair_outputs) break;
          s.pair_assignment[pos] = 0;
        }
        if (--pos < 0) break;
      }
      if (pos < 0) break;
    }
  }
  return out;
}

double svetlichny_bound(const BellExpression& expr, long cap) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : svetlichny_vertices(expr.scenario, cap))
    best = std::max(best, evaluate(expr, hybrid_behavior(v)));
  return best;
}

MembershipVerdict svetlichny_membership(const Behavior& b, long cap) {
  const Scenario& sc = b.scenario;
  auto verts = svetlichny_vertices(sc, cap);
  const long t = sc.table_size();
  LpProblem p;
  p.A = Eigen::MatrixXd(t + 1, verts.size());
  for (size_t c = 0; c < verts.size(); ++c) {
    Behavior d = hybrid_behavior(verts[c]);
    for (long r = 0; r < t; ++r) p.A(r, c) = d.p[r];
    p.A(t, c) = 1.0;
  }
  p.b = Eigen::VectorXd(t + 1);
  for (long r = 0; r < t; ++r) p.b[r] = b.p[r];
  p.b[t] = 1.0;
  p.c = Eigen::VectorXd::Zero(verts.size());
  p.senses.assign(t + 1, RowSense::eq);

  LpSolution sol = optim::lp_solve(p);
  MembershipVerdict verdict;
  if (sol.status == Status::optimal) {
    verdict.inside = true;
    Behavior mix(sc, std::vector<double>(sc.table_size(), 0.0));
    for (long c = 0; c < static_cast<long>(verts.size()); ++c) {
      if (sol.x[c] > 1e-12) {
        verdict.weights.push_back({c, sol.x[c]});
        Behavior d = hybrid_behavior(verts[c]);
        for (size_t i = 0; i < mix.p.size(); ++i) mix.p[i] += sol.x[c] * d.p[i];
      }
    }
    for (size_t i = 0; i < mix.p.size(); ++i)
      verdict.reconstruction_residual =
          std::max(verdict.reconstruction_residual, std::abs(mix.p[i] - b.p[i]));
    return verdict;
  }
  if (sol.status != Status::infeasible)
    throw std::runtime_error("svetlichny_membership: LP did not converge");
  BellExpression expr(sc, std::vector<double>(sc.table_size(), 0.0));
  for (long r = 0; r < t; ++r) expr.s[r] = sol.farkas[r];
  verdict.inside = false;
  verdict.certificate =
      make_certificate(std::move(expr), b, [&](const BellExpression& e) {
        return svetlichny_bound(e, cap);
      });
  return verdict;
}

}  // namespace bell::polytopes
