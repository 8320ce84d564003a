#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bell/common.hpp"

namespace bell {

// ---------------------------------------------------------------------------
// Scenario: party count plus per-party input and output counts. Every table
// in the library is indexed against one of these.
//
// Index convention (inputs-major, then outputs-major, both lexicographic by
// party): bipartite index = ((x*m_B + y)*d_A + a)*d_B + b.
// Outcome labels are 0-based; the +-1 convention is 0 -> +1, 1 -> -1.
// ---------------------------------------------------------------------------
struct Scenario {
  int parties = 0;
  std::vector<int> inputs;   // m_k >= 1
  std::vector<int> outputs;  // d_k >= 1

  Scenario() = default;
  Scenario(std::vector<int> m, std::vector<int> d);
  // Homogeneous scenario: n parties, m inputs, d outputs each.
  static Scenario homogeneous(int n, int m, int d);

  long input_tuples() const;
  long output_tuples() const;
  long table_size() const { return input_tuples() * output_tuples(); }

  long input_index(const std::vector<int>& x) const;
  long output_index(const std::vector<int>& a) const;
  long index(const std::vector<int>& a, const std::vector<int>& x) const;
  std::vector<int> decode_input(long idx) const;
  std::vector<int> decode_output(long idx) const;

  // Nonlocality requires at least two parties with m >= 2 and d >= 2.
  bool nonlocality_capable() const;

  bool operator==(const Scenario& o) const {
    return inputs == o.inputs && outputs == o.outputs;
  }
};

// ---------------------------------------------------------------------------
// Behavior: dense table p(a...|x...) over a scenario.
// ---------------------------------------------------------------------------
struct Behavior {
  Scenario scenario;
  std::vector<double> p;

  Behavior() = default;
  Behavior(Scenario sc, std::vector<double> table);
  static Behavior uniform(const Scenario& sc);

  double& at(const std::vector<int>& a, const std::vector<int>& x) {
    return p[scenario.index(a, x)];
  }
  double at(const std::vector<int>& a, const std::vector<int>& x) const {
    return p[scenario.index(a, x)];
  }

  // Marginal p(a_S | x_S) for the party subset S. For parties outside S the
  // table is summed with their inputs pinned to 0; exact for no-signaling
  // behaviors, a convention otherwise.
  double marginal(const std::vector<int>& parties_subset,
                  const std::vector<int>& a_sub,
                  const std::vector<int>& x_sub) const;
};

struct ValidationReport {
  double positivity_residual = 0.0;     // max(0, -min entry)
  double normalization_residual = 0.0;  // max |sum_a p(a|x) - 1|
  bool pass = false;
};

ValidationReport validate_behavior(const Behavior& b);
// Max over parties, their (input,outcome) pairs, and remote-input choices of
// the marginal mismatch; 0 exactly iff the no-signaling equalities hold.
double no_signaling_residual(const Behavior& b);

// ---------------------------------------------------------------------------
// BellExpression: real coefficient table over the same index space.
// Inequalities natively in ">=" form (CGLMP, chained) are stored negated so
// that every expression is maximize-form; `negated_ge_form` records this.
// ---------------------------------------------------------------------------
struct BoundInfo {
  double value = 0.0;
  std::string provenance;  // "paper" | "derived" | "trivial"
};

struct ExpressionMeta {
  std::string name;
  std::optional<BoundInfo> local_bound;
  std::optional<BoundInfo> quantum_bound;
  std::optional<BoundInfo> ns_bound;
  std::optional<BoundInfo> svetlichny_bound;  // multipartite hybrid bound
  std::optional<double> kl_strength_bits;     // Table-of-KL metadata
  bool negated_ge_form = false;
};

struct BellExpression {
  Scenario scenario;
  std::vector<double> s;
  ExpressionMeta meta;

  BellExpression() = default;
  BellExpression(Scenario sc, std::vector<double> coeffs, ExpressionMeta m = {});

  double& at(const std::vector<int>& a, const std::vector<int>& x) {
    return s[scenario.index(a, x)];
  }
  double at(const std::vector<int>& a, const std::vector<int>& x) const {
    return s[scenario.index(a, x)];
  }
};

double evaluate(const BellExpression& expr, const Behavior& b);

// Lifting by outcome merging for `party`:
//  - source == d(party): extends the scenario by one outcome whose
//    coefficients duplicate `sink` (e.g. CHSH + no-click -> Clauser-Horne).
//  - source <  d(party): same scenario, source's coefficients replaced by
//    sink's, so evaluate(lift(e), p) == evaluate(e, merge source into sink).
// Either way the local bound is preserved.
BellExpression lift_merge_outcome(const BellExpression& expr, int party,
                                  int source, int sink);

// ---------------------------------------------------------------------------
// Correlator view for binary-output scenarios (0 -> +1, 1 -> -1).
// ---------------------------------------------------------------------------
struct Correlators {
  int m_a = 0, m_b = 0;
  std::vector<double> alice;  // <A_x>
  std::vector<double> bob;    // <B_y>
  std::vector<double> joint;  // <A_x B_y>, x-major

  double a(int x) const { return alice[x]; }
  double b(int y) const { return bob[y]; }
  double ab(int x, int y) const { return joint[x * m_b + y]; }
};

Correlators correlators_of(const Behavior& b);
Behavior behavior_from_correlators(const Scenario& sc, const Correlators& c);

// Generic correlator-polynomial builder for binary-output scenarios. A term
// assigns an input per participating party (identity factors are omitted and
// realized as marginal terms with absent parties pinned to input 0). The
// empty term is the constant 1.
struct CorrelatorTerm {
  std::vector<std::optional<int>> input_per_party;
  double coefficient = 0.0;
};
BellExpression expression_from_correlator_terms(
    const Scenario& sc, const std::vector<CorrelatorTerm>& terms,
    ExpressionMeta meta = {});

// ---------------------------------------------------------------------------
// Collins-Gisin parametrization of the no-signaling affine subspace.
// Coordinates are marginals p(a_S|x_S) over nonempty party subsets S with all
// outcomes < d_k - 1; for the bipartite case this is {p(a|x), p(b|y),
// p(ab|xy)} of length t = 2(d-1)m + (d-1)^2 m^2.
// ---------------------------------------------------------------------------
class CollinsGisin {
 public:
  explicit CollinsGisin(Scenario sc);

  long dimension() const { return static_cast<long>(coords_.size()); }

  // Requires no_signaling_residual(b) <= tol (throws otherwise).
  std::vector<double> to_cg(const Behavior& b, double tol) const;
  std::vector<double> to_cg_unchecked(const Behavior& b) const;
  // Inverse; `mass` scales the affine constant (1 for normalized behaviors,
  // free for unnormalized no-signaling components as in the EPR2 program).
  Behavior from_cg(const std::vector<double>& cg, double mass = 1.0) const;

  // Writes the full-table reconstruction as rows of an affine map:
  // p_full = A * cg + mass * a0. Used to assemble LPs in CG coordinates.
  void reconstruction_rows(std::vector<std::vector<double>>& A,
                           std::vector<double>& a0) const;

  // Expression transport: evaluate(expr, b) == dot(cg_coeffs, to_cg(b)) +
  // constant for every no-signaling b.
  void expression_in_cg(const BellExpression& expr,
                        std::vector<double>& cg_coeffs,
                        double& constant) const;

  const Scenario& scenario() const { return sc_; }

  struct Coord {
    std::vector<int> parties;  // nonempty, ascending
    std::vector<int> x;        // input per listed party
    std::vector<int> a;        // outcome per listed party, < d-1
  };
  const std::vector<Coord>& coords() const { return coords_; }

 private:
  Scenario sc_;
  std::vector<Coord> coords_;
  long coord_index(const std::vector<int>& parties, const std::vector<int>& x,
                   const std::vector<int>& a) const;
  std::vector<long> offsets_;  // by subset rank
};

// ---------------------------------------------------------------------------
// Nonlocal games.
// ---------------------------------------------------------------------------
struct Game {
  Scenario scenario;             // bipartite
  std::vector<double> pi;        // pi(x,y), x-major, normalized
  std::vector<int> predicate;    // V(a,b|x,y) in {0,1}, behavior index order

  double pi_at(int x, int y) const;
  int v_at(int a, int b, int x, int y) const;
};

Game chsh_game();
// XOR game from a predicate V(c|x,y) on the XOR of the answers.
Game xor_game(int m, const std::vector<int>& v_c_xy,
              const std::vector<double>& pi = {});

BellExpression game_to_expression(const Game& g);
double winning_probability(const Game& g, const Behavior& b);

// ---------------------------------------------------------------------------
// Named-inequality catalog. All entries are maximize-form.
// ---------------------------------------------------------------------------
BellExpression chsh();                      // local 2, quantum 2*sqrt(2), ns 4
BellExpression i3322();                     // local 1 (offset facet form)
BellExpression cglmp(int d);                // stored negated; local -(d-1)
BellExpression chained(int d, int m);       // stored negated; local -(d-1)
BellExpression mermin3();                   // local 2, quantum 4
BellExpression svetlichny(int n);           // hybrid 2^(n-1)
BellExpression cluster4_expression();       // local 2, quantum 4

// The 8 CHSH relabelings (input flips on either side, global sign).
std::vector<BellExpression> chsh_relabelings();

// catalog(name, params): names are case-insensitive; params interpreted per
// family (cglmp: d; chained: d,m; svetlichny: n). Unknown name throws.
BellExpression catalog(const std::string& name,
                       const std::vector<int>& params = {});
std::vector<std::string> catalog_names();

}  // namespace bell
