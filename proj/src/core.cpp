#include "bell/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace bell {

// --- Scenario ----------------------------------------------------------------

Scenario::Scenario(std::vector<int> m, std::vector<int> d)
    : parties(static_cast<int>(m.size())), inputs(std::move(m)), outputs(std::move(d)) {
  if (inputs.size() != outputs.size() || inputs.empty())
    throw dimension_error("scenario: inputs/outputs size mismatch");
  for (int k = 0; k < parties; ++k)
    if (inputs[k] < 1 || outputs[k] < 1)
      throw dimension_error("scenario: all input/output counts must be >= 1");
}

Scenario Scenario::homogeneous(int n, int m, int d) {
  return Scenario(std::vector<int>(n, m), std::vector<int>(n, d));
}

long Scenario::input_tuples() const {
  long t = 1;
  for (int m : inputs) t *= m;
  return t;
}

long Scenario::output_tuples() const {
  long t = 1;
  for (int d : outputs) t *= d;
  return t;
}

long Scenario::input_index(const std::vector<int>& x) const {
  long idx = 0;
  for (int k = 0; k < parties; ++k) idx = idx * inputs[k] + x[k];
  return idx;
}

long Scenario::output_index(const std::vector<int>& a) const {
  long idx = 0;
  for (int k = 0; k < parties; ++k) idx = idx * outputs[k] + a[k];
  return idx;
}

long Scenario::index(const std::vector<int>& a, const std::vector<int>& x) const {
  return input_index(x) * output_tuples() + output_index(a);
}

std::vector<int> Scenario::decode_input(long idx) const {
  std::vector<int> x(parties);
  for (int k = parties - 1; k >= 0; --k) {
    x[k] = static_cast<int>(idx % inputs[k]);
    idx /= inputs[k];
  }
  return x;
}

std::vector<int> Scenario::decode_output(long idx) const {
  std::vector<int> a(parties);
  for (int k = parties - 1; k >= 0; --k) {
    a[k] = static_cast<int>(idx % outputs[k]);
    idx /= outputs[k];
  }
  return a;
}

bool Scenario::nonlocality_capable() const {
  int capable = 0;
  for (int k = 0; k < parties; ++k)
    if (inputs[k] >= 2 && outputs[k] >= 2) ++capable;
  return capable >= 2;
}

// --- Behavior ----------------------------------------------------------------

Behavior::Behavior(Scenario sc, std::vector<double> table)
    : scenario(std::move(sc)), p(std::move(table)) {
  if (static_cast<long>(p.size()) != scenario.table_size())
    throw dimension_error("behavior: table length does not match scenario");
}

Behavior Behavior::uniform(const Scenario& sc) {
  const double v = 1.0 / static_cast<double>(sc.output_tuples());
  return Behavior(sc, std::vector<double>(sc.table_size(), v));
}

double Behavior::marginal(const std::vector<int>& sub, const std::vector<int>& a_sub,
                          const std::vector<int>& x_sub) const {
  std::vector<int> x(scenario.parties, 0);
  for (size_t i = 0; i < sub.size(); ++i) x[sub[i]] = x_sub[i];
  const long nout = scenario.output_tuples();
  const long base = scenario.input_index(x) * nout;
  double total = 0.0;
  for (long o = 0; o < nout; ++o) {
    std::vector<int> a = scenario.decode_output(o);
    bool match = true;
    for (size_t i = 0; i < sub.size(); ++i)
      if (a[sub[i]] != a_sub[i]) { match = false; break; }
    if (match) total += p[base + o];
  }
  return total;
}

ValidationReport validate_behavior(const Behavior& b) {
  ValidationReport r;
  if (static_cast<long>(b.p.size()) != b.scenario.table_size())
    throw dimension_error("validate_behavior: table length mismatch");
  double min_entry = 0.0;
  for (double v : b.p) min_entry = std::min(min_entry, v);
  r.positivity_residual = std::max(0.0, -min_entry);
  const long nin = b.scenario.input_tuples();
  const long nout = b.scenario.output_tuples();
  for (long i = 0; i < nin; ++i) {
    double s = 0.0;
    for (long o = 0; o < nout; ++o) s += b.p[i * nout + o];
    r.normalization_residual = std::max(r.normalization_residual, std::abs(s - 1.0));
  }
  r.pass = r.positivity_residual <= tolerances().positivity &&
           r.normalization_residual <= tolerances().normalization;
  return r;
}

double no_signaling_residual(const Behavior& b) {
  const Scenario& sc = b.scenario;
  const long nin = sc.input_tuples();
  const long nout = sc.output_tuples();
  double worst = 0.0;
  for (int k = 0; k < sc.parties; ++k) {
    // marginal m(a_k | x_k ; x_rest) for every full input tuple
    for (int xk = 0; xk < sc.inputs[k]; ++xk) {
      for (int ak = 0; ak < sc.outputs[k]; ++ak) {
        double lo = 2.0, hi = -2.0;
        for (long i = 0; i < nin; ++i) {
          std::vector<int> x = sc.decode_input(i);
          if (x[k] != xk) continue;
          double m = 0.0;
          for (long o = 0; o < nout; ++o) {
            std::vector<int> a = sc.decode_output(o);
            if (a[k] == ak) m += b.p[i * nout + o];
          }
          lo = std::min(lo, m);
          hi = std::max(hi, m);
        }
        if (hi >= lo) worst = std::max(worst, hi - lo);
      }
    }
  }
  return worst;
}

// --- BellExpression ------------------------------------------------------------

BellExpression::BellExpression(Scenario sc, std::vector<double> coeffs, ExpressionMeta m)
    : scenario(std::move(sc)), s(std::move(coeffs)), meta(std::move(m)) {
  if (static_cast<long>(s.size()) != scenario.table_size())
    throw dimension_error("expression: coefficient length does not match scenario");
}

double evaluate(const BellExpression& expr, const Behavior& b) {
  if (!(expr.scenario == b.scenario))
    throw dimension_error("evaluate: scenario mismatch");
  double v = 0.0;
  for (size_t i = 0; i < expr.s.size(); ++i) v += expr.s[i] * b.p[i];
  return v;
}

BellExpression lift_merge_outcome(const BellExpression& expr, int party, int source,
                                  int sink) {
  const Scenario& sc = expr.scenario;
  if (party < 0 || party >= sc.parties) throw dimension_error("lift: bad party");
  const int d = sc.outputs[party];
  if (sink < 0 || sink >= d || source < 0 || source > d || source == sink)
    throw dimension_error("lift: invalid outcome index");

  if (source < d) {
    // Same scenario: source takes sink's coefficients, so evaluating on p
    // equals evaluating the original on p with source's mass merged into sink.
    BellExpression out = expr;
    const long nin = sc.input_tuples();
    const long nout = sc.output_tuples();
    for (long i = 0; i < nin; ++i)
      for (long o = 0; o < nout; ++o) {
        std::vector<int> a = sc.decode_output(o);
        if (a[party] != source) continue;
        a[party] = sink;
        out.s[i * nout + o] = expr.s[i * nout + sc.output_index(a)];
      }
    out.meta.name = expr.meta.name.empty() ? "lifted" : expr.meta.name + "_lifted";
    return out;
  }

  // Extend the party's outcome set by one (the new index is `source` == d);
  // the new outcome duplicates sink's coefficients.
  Scenario out_sc = sc;
  out_sc.outputs[party] = d + 1;
  std::vector<double> coeffs(out_sc.table_size(), 0.0);
  const long nin = out_sc.input_tuples();
  const long nout = out_sc.output_tuples();
  for (long i = 0; i < nin; ++i) {
    std::vector<int> x = out_sc.decode_input(i);
    for (long o = 0; o < nout; ++o) {
      std::vector<int> a = out_sc.decode_output(o);
      if (a[party] == d) a[party] = sink;
      coeffs[i * nout + o] = expr.at(a, x);
    }
  }
  ExpressionMeta meta = expr.meta;
  meta.name = expr.meta.name.empty() ? "lifted" : expr.meta.name + "_lifted";
  return BellExpression(out_sc, std::move(coeffs), std::move(meta));
}

// --- Correlators ----------------------------------------------------------------

Correlators correlators_of(const Behavior& b) {
  const Scenario& sc = b.scenario;
  if (sc.parties != 2 || sc.outputs[0] != 2 || sc.outputs[1] != 2)
    throw dimension_error("correlators_of: requires a bipartite binary-output scenario");
  Correlators c;
  c.m_a = sc.inputs[0];
  c.m_b = sc.inputs[1];
  c.alice.assign(c.m_a, 0.0);
  c.bob.assign(c.m_b, 0.0);
  c.joint.assign(static_cast<size_t>(c.m_a) * c.m_b, 0.0);
  auto sgn = [](int a) { return a == 0 ? 1.0 : -1.0; };
  for (int x = 0; x < c.m_a; ++x)
    for (int y = 0; y < c.m_b; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb)
          c.joint[x * c.m_b + y] += sgn(a) * sgn(bb) * b.at({a, bb}, {x, y});
  // marginals from pinned remote input 0 (exact under no-signaling)
  for (int x = 0; x < c.m_a; ++x)
    for (int a = 0; a < 2; ++a)
      c.alice[x] += sgn(a) * b.marginal({0}, {a}, {x});
  for (int y = 0; y < c.m_b; ++y)
    for (int bb = 0; bb < 2; ++bb)
      c.bob[y] += sgn(bb) * b.marginal({1}, {bb}, {y});
  return c;
}

Behavior behavior_from_correlators(const Scenario& sc, const Correlators& c) {
  if (sc.parties != 2 || sc.outputs[0] != 2 || sc.outputs[1] != 2 ||
      sc.inputs[0] != c.m_a || sc.inputs[1] != c.m_b)
    throw dimension_error("behavior_from_correlators: scenario mismatch");
  Behavior b(sc, std::vector<double>(sc.table_size(), 0.0));
  auto sgn = [](int a) { return a == 0 ? 1.0 : -1.0; };
  for (int x = 0; x < c.m_a; ++x)
    for (int y = 0; y < c.m_b; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb)
          b.at({a, bb}, {x, y}) =
              (1.0 + sgn(a) * c.a(x) + sgn(bb) * c.b(y) + sgn(a) * sgn(bb) * c.ab(x, y)) / 4.0;
  return b;
}

BellExpression expression_from_correlator_terms(const Scenario& sc,
                                                const std::vector<CorrelatorTerm>& terms,
                                                ExpressionMeta meta) {
  for (int k = 0; k < sc.parties; ++k)
    if (sc.outputs[k] != 2)
      throw dimension_error("correlator terms require binary outputs");
  std::vector<double> s(sc.table_size(), 0.0);
  const long nout = sc.output_tuples();
  for (const auto& t : terms) {
    if (static_cast<int>(t.input_per_party.size()) != sc.parties)
      throw dimension_error("correlator term arity mismatch");
    std::vector<int> x(sc.parties, 0);
    for (int k = 0; k < sc.parties; ++k)
      if (t.input_per_party[k]) x[k] = *t.input_per_party[k];
    const long base = sc.input_index(x) * nout;
    for (long o = 0; o < nout; ++o) {
      std::vector<int> a = sc.decode_output(o);
      double w = t.coefficient;
      for (int k = 0; k < sc.parties; ++k)
        if (t.input_per_party[k] && a[k] == 1) w = -w;
      s[base + o] += w;
    }
  }
  return BellExpression(sc, std::move(s), std::move(meta));
}

// --- Collins-Gisin ---------------------------------------------------------------

CollinsGisin::CollinsGisin(Scenario sc) : sc_(std::move(sc)) {
  const int n = sc_.parties;
  // subsets ordered by (size, lexicographic by ascending party indices)
  std::vector<unsigned> masks;
  for (unsigned m = 1; m < (1u << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  for (unsigned m : masks) {
    std::vector<int> parties;
    for (int k = 0; k < n; ++k)
      if (m & (1u << k)) parties.push_back(k);
    // inputs lexicographic (party-major), then outcomes (< d-1) lexicographic
    std::vector<int> x(parties.size(), 0);
    for (;;) {
      std::vector<int> a(parties.size(), 0);
      bool a_ok = true;
      for (size_t i = 0; i < parties.size(); ++i)
        if (sc_.outputs[parties[i]] - 1 <= 0) a_ok = false;
      if (a_ok) {
        for (;;) {
          coords_.push_back({parties, x, a});
          int i = static_cast<int>(parties.size()) - 1;
          while (i >= 0 && ++a[i] >= sc_.outputs[parties[i]] - 1) a[i--] = 0;
          if (i < 0) break;
        }
      }
      int i = static_cast<int>(parties.size()) - 1;
      while (i >= 0 && ++x[i] >= sc_.inputs[parties[i]]) x[i--] = 0;
      if (i < 0) break;
    }
  }
}

long CollinsGisin::coord_index(const std::vector<int>& parties, const std::vector<int>& x,
                               const std::vector<int>& a) const {
  // linear scan index map built once; desk-scale dimensions keep this cheap
  for (size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i].parties == parties && coords_[i].x == x && coords_[i].a == a)
      return static_cast<long>(i);
  throw std::logic_error("collins-gisin: coordinate not found");
}

std::vector<double> CollinsGisin::to_cg(const Behavior& b, double tol) const {
  if (!(b.scenario == sc_)) throw dimension_error("to_cg: scenario mismatch");
  const double r = no_signaling_residual(b);
  if (r > tol)
    throw std::invalid_argument("to_cg: behavior is signaling (residual " +
                                std::to_string(r) + ")");
  return to_cg_unchecked(b);
}

std::vector<double> CollinsGisin::to_cg_unchecked(const Behavior& b) const {
  std::vector<double> cg(coords_.size());
  for (size_t i = 0; i < coords_.size(); ++i)
    cg[i] = b.marginal(coords_[i].parties, coords_[i].a, coords_[i].x);
  return cg;
}

Behavior CollinsGisin::from_cg(const std::vector<double>& cg, double mass) const {
  std::vector<std::vector<double>> rows;
  std::vector<double> a0;
  reconstruction_rows(rows, a0);
  std::vector<double> table(sc_.table_size(), 0.0);
  for (long idx = 0; idx < sc_.table_size(); ++idx) {
    double v = mass * a0[idx];
    const auto& row = rows[idx];
    for (size_t j = 0; j < cg.size(); ++j) v += row[j] * cg[j];
    table[idx] = v;
  }
  return Behavior(sc_, std::move(table));
}

void CollinsGisin::reconstruction_rows(std::vector<std::vector<double>>& A,
                                       std::vector<double>& a0) const {
  const long size = sc_.table_size();
  const long t = dimension();
  A.assign(size, std::vector<double>(t, 0.0));
  a0.assign(size, 0.0);
  const long nout = sc_.output_tuples();
  for (long idx = 0; idx < size; ++idx) {
    std::vector<int> x = sc_.decode_input(idx / nout);
    std::vector<int> a = sc_.decode_output(idx % nout);
    std::vector<int> D;  // parties sitting at their last outcome
    std::vector<int> keep;
    for (int k = 0; k < sc_.parties; ++k)
      (a[k] == sc_.outputs[k] - 1 ? D : keep).push_back(k);
    const size_t nd = D.size();
    for (unsigned tm = 0; tm < (1u << nd); ++tm) {
      std::vector<int> sub = keep;
      for (size_t i = 0; i < nd; ++i)
        if (tm & (1u << i)) sub.push_back(D[i]);
      std::sort(sub.begin(), sub.end());
      const double sgn = (__builtin_popcount(tm) % 2 == 0) ? 1.0 : -1.0;
      if (sub.empty()) {
        a0[idx] += sgn;
        continue;
      }
      // enumerate outcomes over the T-part (all < d-1), keep-part fixed;
      // a T-party with a single outcome contributes an empty sum
      bool empty_sum = false;
      for (int k : sub)
        if (sc_.outputs[k] < 2 && a[k] == sc_.outputs[k] - 1) empty_sum = true;
      if (empty_sum) continue;
      std::vector<int> sx(sub.size()), sa(sub.size());
      std::vector<int> tpos;  // positions within sub that range
      for (size_t i = 0; i < sub.size(); ++i) {
        sx[i] = x[sub[i]];
        bool fixed = std::find(keep.begin(), keep.end(), sub[i]) != keep.end();
        if (fixed)
          sa[i] = a[sub[i]];
        else {
          sa[i] = 0;
          tpos.push_back(static_cast<int>(i));
        }
      }
      for (;;) {
        A[idx][coord_index(sub, sx, sa)] += sgn;
        int i = static_cast<int>(tpos.size()) - 1;
        while (i >= 0 && ++sa[tpos[i]] >= sc_.outputs[sub[tpos[i]]] - 1)
          sa[tpos[i--]] = 0;
        if (i < 0) break;
      }
    }
  }
}

void CollinsGisin::expression_in_cg(const BellExpression& expr,
                                    std::vector<double>& cg_coeffs,
                                    double& constant) const {
  if (!(expr.scenario == sc_)) throw dimension_error("expression_in_cg: scenario mismatch");
  std::vector<std::vector<double>> A;
  std::vector<double> a0;
  reconstruction_rows(A, a0);
  cg_coeffs.assign(dimension(), 0.0);
  constant = 0.0;
  for (long idx = 0; idx < sc_.table_size(); ++idx) {
    constant += expr.s[idx] * a0[idx];
    for (long j = 0; j < dimension(); ++j) cg_coeffs[j] += expr.s[idx] * A[idx][j];
  }
}

// --- games -----------------------------------------------------------------------

double Game::pi_at(int x, int y) const { return pi[x * scenario.inputs[1] + y]; }

int Game::v_at(int a, int b, int x, int y) const {
  return predicate[scenario.index({a, b}, {x, y})];
}

Game chsh_game() {
  Game g;
  g.scenario = Scenario::homogeneous(2, 2, 2);
  g.pi.assign(4, 0.25);
  g.predicate.assign(16, 0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          g.predicate[g.scenario.index({a, b}, {x, y})] = ((a ^ b) == (x & y)) ? 1 : 0;
  return g;
}

Game xor_game(int m, const std::vector<int>& v_c_xy, const std::vector<double>& pi) {
  if (static_cast<int>(v_c_xy.size()) != 2 * m * m)
    throw dimension_error("xor_game: predicate must have 2*m*m entries");
  Game g;
  g.scenario = Scenario::homogeneous(2, m, 2);
  g.pi = pi.empty() ? std::vector<double>(m * m, 1.0 / (m * m)) : pi;
  if (static_cast<int>(g.pi.size()) != m * m)
    throw dimension_error("xor_game: pi must have m*m entries");
  g.predicate.assign(g.scenario.table_size(), 0);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          g.predicate[g.scenario.index({a, b}, {x, y})] = v_c_xy[(a ^ b) * m * m + x * m + y];
  return g;
}

BellExpression game_to_expression(const Game& g) {
  double total = std::accumulate(g.pi.begin(), g.pi.end(), 0.0);
  if (std::abs(total - 1.0) > tolerances().normalization)
    throw std::invalid_argument("game: input distribution not normalized");
  for (int v : g.predicate)
    if (v != 0 && v != 1) throw std::invalid_argument("game: predicate must be binary");
  std::vector<double> s(g.scenario.table_size(), 0.0);
  const long nout = g.scenario.output_tuples();
  for (long idx = 0; idx < g.scenario.table_size(); ++idx) {
    std::vector<int> x = g.scenario.decode_input(idx / nout);
    s[idx] = g.pi_at(x[0], x[1]) * g.predicate[idx];
  }
  ExpressionMeta meta;
  meta.name = "game";
  return BellExpression(g.scenario, std::move(s), std::move(meta));
}

double winning_probability(const Game& g, const Behavior& b) {
  return evaluate(game_to_expression(g), b);
}

// --- catalog ------------------------------------------------------------------------

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

std::optional<int> id_factor() { return std::nullopt; }

BoundInfo paper(double v) { return {v, "paper"}; }
BoundInfo derived(double v) { return {v, "derived"}; }
}  // namespace

BellExpression chsh() {
  Scenario sc = Scenario::homogeneous(2, 2, 2);
  std::vector<CorrelatorTerm> terms;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      terms.push_back({{x, y}, (x == 1 && y == 1) ? -1.0 : 1.0});
  ExpressionMeta meta;
  meta.name = "chsh";
  meta.local_bound = paper(2.0);
  meta.quantum_bound = paper(2.0 * kSqrt2);
  meta.ns_bound = paper(4.0);
  meta.kl_strength_bits = 0.046;
  return expression_from_correlator_terms(sc, terms, std::move(meta));
}

std::vector<BellExpression> chsh_relabelings() {
  Scenario sc = Scenario::homogeneous(2, 2, 2);
  std::vector<BellExpression> out;
  for (int fx = 0; fx < 2; ++fx)
    for (int fy = 0; fy < 2; ++fy)
      for (int g = 0; g < 2; ++g) {
        std::vector<CorrelatorTerm> terms;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            double w = ((x ^ fx) == 1 && (y ^ fy) == 1) ? -1.0 : 1.0;
            if (g) w = -w;
            terms.push_back({{x, y}, w});
          }
        ExpressionMeta meta;
        meta.name = "chsh_relabeling_" + std::to_string(fx * 4 + fy * 2 + g);
        meta.local_bound = derived(2.0);
        out.push_back(expression_from_correlator_terms(sc, terms, std::move(meta)));
      }
  return out;
}

BellExpression i3322() {
  // Standard I3322 facet in Collins-Gisin form, shifted by +1 so the stored
  // maximize-form local bound is 1 (the "-1" normalization of the inequality).
  Scenario sc = Scenario::homogeneous(2, 3, 2);
  std::vector<double> s(sc.table_size(), 0.0);
  BellExpression e(sc, s);
  const double c[3][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) e.at({0, 0}, {x, y}) += c[x][y];
  for (int b = 0; b < 2; ++b) e.at({0, b}, {0, 0}) -= 1.0;  // - pA(0|x=0)
  for (int a = 0; a < 2; ++a) e.at({a, 0}, {0, 0}) -= 2.0;  // - 2 pB(0|y=0)
  for (int a = 0; a < 2; ++a) e.at({a, 0}, {0, 1}) -= 1.0;  // - pB(0|y=1)
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) e.at({a, b}, {0, 0}) += 1.0;  // + 1
  e.meta.name = "i3322";
  e.meta.local_bound = paper(1.0);
  e.meta.ns_bound = derived(2.0);
  return e;
}

namespace {
// Bracket term [lhs - rhs - off] of the CGLMP/chained family:
// sum_j j * p(a - b - off == j mod d | x y) when a_side, else with roles of
// a and b swapped. Added into `e` with sign `sgn`.
void add_bracket(BellExpression& e, int x, int y, bool a_minus_b, int off, double sgn) {
  const int d = e.scenario.outputs[0];
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      int j = a_minus_b ? (a - b - off) : (b - a - off);
      j = ((j % d) + d) % d;
      e.at({a, b}, {x, y}) += sgn * j;
    }
}
}  // namespace

BellExpression cglmp(int d) {
  if (d < 2) throw std::invalid_argument("cglmp: d >= 2 required");
  return chained(d, 2);
}

BellExpression chained(int d, int m) {
  if (d < 2 || m < 2) throw std::invalid_argument("chained: d >= 2 and m >= 2 required");
  Scenario sc = Scenario::homogeneous(2, m, d);
  BellExpression e(sc, std::vector<double>(sc.table_size(), 0.0));
  // [a_k - b_k] for k = 0..m-1 ; [b_k - a_{k+1}] for k = 0..m-2 ;
  // [b_{m-1} - a_0 - 1]. Stored negated (maximize form).
  for (int k = 0; k < m; ++k) add_bracket(e, k, k, true, 0, -1.0);
  for (int k = 0; k + 1 < m; ++k) add_bracket(e, k + 1, k, false, 0, -1.0);
  add_bracket(e, 0, m - 1, false, 1, -1.0);
  e.meta.name = (m == 2) ? ("cglmp" + std::to_string(d))
                         : ("chained_" + std::to_string(d) + "_" + std::to_string(m));
  e.meta.negated_ge_form = true;
  e.meta.local_bound = paper(-(d - 1.0));
  e.meta.ns_bound = paper(0.0);
  if (d == 2)
    e.meta.quantum_bound = derived(-m * (1.0 - std::cos(M_PI / (2.0 * m))));
  if (d == 3 && m == 2) e.meta.kl_strength_bits = 0.058;
  return e;
}

BellExpression mermin3() {
  Scenario sc = Scenario::homogeneous(3, 2, 2);
  std::vector<CorrelatorTerm> terms = {
      {{0, 0, 0}, 1.0}, {{0, 1, 1}, -1.0}, {{1, 0, 1}, -1.0}, {{1, 1, 0}, -1.0}};
  ExpressionMeta meta;
  meta.name = "mermin3";
  meta.local_bound = paper(2.0);
  meta.quantum_bound = paper(4.0);
  meta.ns_bound = derived(4.0);
  meta.kl_strength_bits = 0.208;
  return expression_from_correlator_terms(sc, terms, std::move(meta));
}

BellExpression svetlichny(int n) {
  if (n < 2) throw std::invalid_argument("svetlichny: n >= 2 required");
  Scenario sc = Scenario::homogeneous(n, 2, 2);
  // Full-correlator family: the coefficient of the input tuple x depends on
  // the number of primed settings k = sum(x) through the period-4 pattern
  // (-,+,+,-); at n = 3 this is exactly the printed S_3.
  std::vector<CorrelatorTerm> terms;
  const double signs[4] = {-1.0, 1.0, 1.0, -1.0};
  std::vector<int> x(n, 0);
  for (;;) {
    int k = std::accumulate(x.begin(), x.end(), 0);
    CorrelatorTerm t;
    t.input_per_party.assign(x.begin(), x.end());
    t.coefficient = signs[k % 4];
    terms.push_back(t);
    int i = n - 1;
    while (i >= 0 && ++x[i] >= 2) x[i--] = 0;
    if (i < 0) break;
  }
  ExpressionMeta meta;
  meta.name = "svetlichny" + std::to_string(n);
  meta.local_bound = derived(std::pow(2.0, n - 1));
  meta.svetlichny_bound = paper(std::pow(2.0, n - 1));
  meta.quantum_bound = paper(std::pow(2.0, n - 1) * kSqrt2);
  meta.ns_bound = derived(std::pow(2.0, n));
  return expression_from_correlator_terms(sc, terms, std::move(meta));
}

BellExpression cluster4_expression() {
  Scenario sc = Scenario::homogeneous(4, 2, 2);
  std::vector<CorrelatorTerm> terms = {
      {{0, id_factor(), 1, 0}, 1.0},
      {{0, id_factor(), 0, 1}, 1.0},
      {{1, 0, 0, 0}, 1.0},
      {{1, 0, 1, 1}, -1.0}};
  ExpressionMeta meta;
  meta.name = "cluster4";
  meta.local_bound = paper(2.0);
  meta.quantum_bound = paper(4.0);
  meta.ns_bound = derived(4.0);
  return expression_from_correlator_terms(sc, terms, std::move(meta));
}

std::vector<std::string> catalog_names() {
  return {"chsh", "i3322", "cglmp", "chained", "mermin", "svetlichny", "cluster4"};
}

BellExpression catalog(const std::string& name, const std::vector<int>& params) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(c)));
  if (n == "chsh") return chsh();
  if (n == "i3322") return i3322();
  if (n == "cglmp") {
    if (params.size() != 1) throw std::invalid_argument("cglmp requires d");
    return cglmp(params[0]);
  }
  if (n == "chained") {
    if (params.size() != 2) throw std::invalid_argument("chained requires d, m");
    return chained(params[0], params[1]);
  }
  if (n == "mermin") {
    if (!params.empty() && params[0] != 3)
      throw std::invalid_argument("mermin: only n = 3 is cataloged");
    return mermin3();
  }
  if (n == "svetlichny") {
    if (params.size() != 1) throw std::invalid_argument("svetlichny requires n");
    return svetlichny(params[0]);
  }
  if (n == "cluster4") return cluster4_expression();
  throw std::invalid_argument("catalog: unknown inequality '" + name + "'");
}

}  // namespace bell
