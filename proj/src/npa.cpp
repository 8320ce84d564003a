#include "bell/npa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace bell::npa {

namespace {

using optim::LmiProblem;
using optim::SdpProblem;
using optim::SparseSym;
using optim::Status;

// A projector in a monomial word: party (0 = Alice, 1 = Bob), input, outcome
// (always < d-1 in the Collins-Gisin reduction).
struct Op {
  int party, input, outcome;
  bool operator==(const Op& o) const {
    return party == o.party && input == o.input && outcome == o.outcome;
  }
  bool operator<(const Op& o) const {
    return std::tie(party, input, outcome) < std::tie(o.party, o.input, o.outcome);
  }
};

using Word = std::vector<Op>;  // Alice ops first, then Bob ops (they commute)

// Reduce a single-party run by projector algebra; returns false on
// orthogonality (the moment is identically zero).
bool reduce_run(Word& w) {
  for (size_t i = 0; i + 1 < w.size();) {
    if (w[i].input == w[i + 1].input) {
      if (w[i].outcome != w[i + 1].outcome) return false;
      w.erase(w.begin() + static_cast<long>(i) + 1);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }
  return true;
}

struct Key {
  Word word;  // canonical representative (empty + zero flag handled outside)
  bool operator<(const Key& o) const { return word < o.word; }
  bool operator==(const Key& o) const { return word == o.word; }
};

// moment of O_i^dag O_j; zero -> nullopt
std::optional<Key> entry_key(const Word& wi, const Word& wj) {
  Word a, b;
  auto append = [&](const Op& op) { (op.party == 0 ? a : b).push_back(op); };
  for (auto it = wi.rbegin(); it != wi.rend(); ++it) append(*it);  // adjoint
  for (const auto& op : wj) append(op);
  if (!reduce_run(a) || !reduce_run(b)) return std::nullopt;
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  Word rev_a(a.rbegin(), a.rend()), rev_b(b.rbegin(), b.rend());
  Word wr = rev_a;
  wr.insert(wr.end(), rev_b.begin(), rev_b.end());
  // real parts of a moment and its adjoint coincide
  return Key{std::min(w, wr)};
}

std::string op_label(const Op& op) {
  return std::string(op.party == 0 ? "A" : "B") + std::to_string(op.outcome) + "|" +
         std::to_string(op.input);
}

std::string word_label(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& op : w) {
    if (!s.empty()) s += ".";
    s += op_label(op);
  }
  return s;
}

struct MomentStructure {
  Scenario scenario;
  std::vector<Word> monomials;
  std::vector<std::string> labels;
  // key -> entries (i <= j) sharing the moment
  std::map<Key, std::vector<std::pair<int, int>>> moments;
  std::vector<std::pair<int, int>> zero_entries;

  int size() const { return static_cast<int>(monomials.size()); }
};

MomentStructure build_structure(const Scenario& sc, Level level) {
  if (sc.parties != 2)
    throw dimension_error("npa: bipartite scenarios only");
  MomentStructure st;
  st.scenario = sc;
  st.monomials.push_back({});  // identity
  for (int party = 0; party < 2; ++party)
    for (int x = 0; x < sc.inputs[party]; ++x)
      for (int a = 0; a < sc.outputs[party] - 1; ++a)
        st.monomials.push_back({Op{party, x, a}});
  if (level == Level::one_ab) {
    for (int x = 0; x < sc.inputs[0]; ++x)
      for (int a = 0; a < sc.outputs[0] - 1; ++a)
        for (int y = 0; y < sc.inputs[1]; ++y)
          for (int b = 0; b < sc.outputs[1] - 1; ++b)
            st.monomials.push_back({Op{0, x, a}, Op{1, y, b}});
  }
  for (const auto& w : st.monomials) st.labels.push_back(word_label(w));
  const int k = st.size();
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      auto key = entry_key(st.monomials[i], st.monomials[j]);
      if (!key)
        st.zero_entries.push_back({i, j});
      else
        st.moments[*key].push_back({i, j});
    }
  return st;
}

// Behavior moment lookup for keys of the form [], [A], [B], [A,B].
std::optional<double> behavior_moment(const Key& key, const Behavior& b) {
  const Word& w = key.word;
  if (w.empty()) return 1.0;
  if (w.size() == 1) {
    const Op& op = w[0];
    return b.marginal({op.party}, {op.outcome}, {op.input});
  }
  if (w.size() == 2 && w[0].party == 0 && w[1].party == 1)
    return b.at({w[0].outcome, w[1].outcome}, {w[0].input, w[1].input});
  return std::nullopt;
}

// CG-coordinate handle of a key (same classification, used for objectives).
std::optional<long> cg_index(const Key& key, const CollinsGisin& cg) {
  const Word& w = key.word;
  const auto& coords = cg.coords();
  auto find = [&](const std::vector<int>& parties, const std::vector<int>& x,
                  const std::vector<int>& a) -> std::optional<long> {
    for (size_t i = 0; i < coords.size(); ++i)
      if (coords[i].parties == parties && coords[i].x == x && coords[i].a == a)
        return static_cast<long>(i);
    return std::nullopt;
  };
  if (w.size() == 1) return find({w[0].party}, {w[0].input}, {w[0].outcome});
  if (w.size() == 2 && w[0].party == 0 && w[1].party == 1)
    return find({0, 1}, {w[0].input, w[1].input}, {w[0].outcome, w[1].outcome});
  return std::nullopt;
}

}  // namespace

MembershipResult npa_membership(const Behavior& b, Level level) {
  MomentStructure st = build_structure(b.scenario, level);
  const int k = st.size();
  // LMI: maximize t s.t. Gamma0 + sum_u u G_u - t I >= 0
  LmiProblem p;
  p.block_dims = {k};
  std::vector<SparseSym> fs;
  for (const auto& [key, entries] : st.moments) {
    auto val = behavior_moment(key, b);
    if (val) {
      for (auto [i, j] : entries) p.F0.add(0, i, j, *val);
    } else {
      SparseSym g;
      for (auto [i, j] : entries) g.add(0, i, j, 1.0);
      fs.push_back(g);
    }
  }
  SparseSym minus_i;
  for (int i = 0; i < k; ++i) minus_i.add(0, i, i, -1.0);
  fs.push_back(minus_i);
  p.F = fs;
  p.c = Eigen::VectorXd::Zero(fs.size());
  p.c[fs.size() - 1] = 1.0;

  auto sol = optim::lmi_solve(p);
  MembershipResult out;
  out.status = sol.status;
  out.labels = st.labels;
  if (sol.status != Status::optimal && sol.status != Status::stalled)
    throw std::runtime_error("npa_membership: SDP failed");
  out.slack = sol.objective;
  out.feasible = out.slack >= -1e-7;
  // reconstruct Gamma = slack block + t I
  if (!sol.slack.empty()) {
    out.gamma = sol.slack[0] + out.slack * Eigen::MatrixXd::Identity(k, k);
  }
  return out;
}

UpperBoundResult npa_upper_bound(const BellExpression& expr, Level level) {
  MomentStructure st = build_structure(expr.scenario, level);
  const int k = st.size();
  CollinsGisin cg(expr.scenario);
  std::vector<double> cg_coeffs;
  double constant = 0.0;
  cg.expression_in_cg(expr, cg_coeffs, constant);

  // representative Gamma entry per CG coordinate
  std::vector<std::pair<int, int>> cg_entry(cg.dimension(), {-1, -1});
  for (const auto& [key, entries] : st.moments) {
    auto idx = cg_index(key, cg);
    if (idx) cg_entry[*idx] = entries[0];
  }

  SdpProblem p;
  p.block_dims = {k};
  // objective: constant on Gamma_00 (fixed to 1) plus CG coefficients on the
  // representative entries of the behavior moments
  if (constant != 0.0) p.C.add(0, 0, 0, constant);
  for (const auto& [key, entries] : st.moments) {
    auto idx = cg_index(key, cg);
    if (!idx) continue;
    const double c = cg_coeffs[*idx];
    if (c == 0.0) continue;
    auto [i, j] = entries[0];
    p.C.add(0, i, j, (i == j) ? c : 0.5 * c);
  }
  // positivity of the probability space: every reconstructed table entry is
  // nonnegative (PSD of Gamma alone does not imply it for derived outcomes);
  // one 1x1 slack block per entry
  {
    std::vector<std::vector<double>> rows;
    std::vector<double> a0;
    cg.reconstruction_rows(rows, a0);
    for (size_t r = 0; r < rows.size(); ++r) {
      SparseSym a;
      if (a0[r] != 0.0) a.add(0, 0, 0, a0[r]);
      for (long j = 0; j < cg.dimension(); ++j) {
        if (rows[r][j] == 0.0) continue;
        auto [ei, ej] = cg_entry[j];
        a.add(0, ei, ej, (ei == ej) ? rows[r][j] : 0.5 * rows[r][j]);
      }
      const int slack_block = static_cast<int>(p.block_dims.size());
      p.block_dims.push_back(1);
      a.add(slack_block, 0, 0, -1.0);
      p.constraints.push_back(a);
      p.rhs.push_back(0.0);
    }
  }
  // Gamma_00 = 1
  {
    SparseSym a;
    a.add(0, 0, 0, 1.0);
    p.constraints.push_back(a);
    p.rhs.push_back(1.0);
  }
  // zero entries
  for (auto [i, j] : st.zero_entries) {
    SparseSym a;
    a.add(0, i, j, 1.0);
    p.constraints.push_back(a);
    p.rhs.push_back(0.0);
  }
  // shared-moment identifications against the representative entry
  for (const auto& [key, entries] : st.moments) {
    for (size_t e = 1; e < entries.size(); ++e) {
      SparseSym a;
      auto [i0, j0] = entries[0];
      auto [i1, j1] = entries[e];
      a.add(0, i0, j0, (i0 == j0) ? 1.0 : 0.5);
      a.add(0, i1, j1, (i1 == j1) ? -1.0 : -0.5);
      p.constraints.push_back(a);
      p.rhs.push_back(0.0);
    }
  }

  auto sol = optim::sdp_solve(p);
  UpperBoundResult out;
  out.status = sol.status;
  out.labels = st.labels;
  if (sol.status != Status::optimal && sol.status != Status::stalled)
    throw std::runtime_error("npa_upper_bound: SDP failed");
  out.value = sol.objective;
  out.gap = sol.gap;
  if (!sol.X.empty()) out.gamma = sol.X[0];
  return out;
}

double q1_analytic_margin(const Behavior& b) {
  const Scenario& sc = b.scenario;
  if (sc.parties != 2 || sc.inputs != std::vector<int>{2, 2} ||
      sc.outputs != std::vector<int>{2, 2})
    throw dimension_error("q1_analytic_222: (2,2,2) scenario required");
  Correlators c = correlators_of(b);
  for (int i = 0; i < 2; ++i)
    if (c.a(i) * c.a(i) >= 1.0 - 1e-12 || c.b(i) * c.b(i) >= 1.0 - 1e-12)
      return std::numeric_limits<double>::infinity();
  double d[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double num = c.ab(i, j) - c.a(i) * c.b(j);
      const double den =
          std::sqrt((1 - c.a(i) * c.a(i)) * (1 - c.b(j) * c.b(j)));
      d[i][j] = std::clamp(num / den, -1.0, 1.0);
    }
  double margin = std::numeric_limits<double>::infinity();
  for (int mi = 0; mi < 2; ++mi)
    for (int mj = 0; mj < 2; ++mj) {
      double s = 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s += ((i == mi && j == mj) ? -1.0 : 1.0) * std::asin(d[i][j]);
      margin = std::min(margin, M_PI - std::abs(s));
    }
  return margin;
}

bool q1_analytic_222(const Behavior& b, double tol) {
  const double m = q1_analytic_margin(b);
  return m >= -tol;
}

bool tsirelson_correlation_membership(const std::vector<double>& correlators,
                                      int m, double tol) {
  if (static_cast<int>(correlators.size()) != m * m)
    throw dimension_error("tsirelson: m*m correlators required");
  const int k = 2 * m;
  LmiProblem p;
  p.block_dims = {k};
  for (int i = 0; i < k; ++i) p.F0.add(0, i, i, 1.0);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      p.F0.add(0, x, m + y, correlators[x * m + y]);
  std::vector<SparseSym> fs;
  for (int side = 0; side < 2; ++side)
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        SparseSym g;
        g.add(0, side * m + i, side * m + j, 1.0);
        fs.push_back(g);
      }
  SparseSym minus_i;
  for (int i = 0; i < k; ++i) minus_i.add(0, i, i, -1.0);
  fs.push_back(minus_i);
  p.F = fs;
  p.c = Eigen::VectorXd::Zero(fs.size());
  p.c[fs.size() - 1] = 1.0;
  auto sol = optim::lmi_solve(p);
  if (sol.status != Status::optimal && sol.status != Status::stalled)
    throw std::runtime_error("tsirelson membership: SDP failed");
  return sol.objective >= -tol;
}

}  // namespace bell::npa
