#pragma once

#include <optional>
#include <vector>

#include "bell/core.hpp"
#include "bell/optim.hpp"

namespace bell::polytopes {

// ---------------------------------------------------------------------------
// Deterministic local strategies: one output assignment per party and input.
// assignment[k][x] is party k's output for input x.
// ---------------------------------------------------------------------------
struct DeterministicStrategy {
  Scenario scenario;
  std::vector<std::vector<int>> assignment;
};

Behavior strategy_behavior(const DeterministicStrategy& s);

long local_vertex_count(const Scenario& sc);

// All deterministic strategies in lexicographic order. Enumeration beyond the
// cap throws. (Materialized; desk-scale scenarios stay far below the cap.)
std::vector<DeterministicStrategy> local_vertices(const Scenario& sc,
                                                  long cap = 10000000);

// Visit vertices lazily without materializing them.
void for_each_local_vertex(const Scenario& sc,
                           const std::function<void(const DeterministicStrategy&)>& fn,
                           long cap = 10000000);

// ---------------------------------------------------------------------------
// Membership verdicts with certificates.
// ---------------------------------------------------------------------------
struct VertexWeight {
  long vertex_index = 0;  // lexicographic strategy index
  double weight = 0.0;
};

struct SeparatingCertificate {
  BellExpression expression;  // normalized so that violation margin == 1
  double bound = 0.0;         // max over model vertices of expression . d
  double violation = 0.0;     // expression . p - bound (== 1 after scaling)
};

struct MembershipVerdict {
  bool inside = false;
  std::vector<VertexWeight> weights;          // when inside
  double reconstruction_residual = 0.0;       // when inside
  std::optional<SeparatingCertificate> certificate;  // when outside
};

// Local-polytope membership via the linear program in Collins-Gisin
// coordinates; outside verdicts carry a separating Bell inequality.
MembershipVerdict local_membership(const Behavior& b, long cap = 10000000);

struct BoundResult {
  double value = 0.0;
  DeterministicStrategy maximizer;  // attaining strategy (local/svetlichny)
};

// Exact local bound by vertex enumeration with last-party best-response
// pruning; returns an attaining strategy.
BoundResult local_bound(const BellExpression& expr, long cap = 10000000);

// No-signaling bound via LP over positivity in Collins-Gisin coordinates.
double ns_bound(const BellExpression& expr);

// No-signaling membership: no-signaling residual plus positivity of the
// Collins-Gisin reconstruction.
struct NsVerdict {
  bool inside = false;
  double ns_residual = 0.0;
  double positivity_residual = 0.0;
};
NsVerdict ns_membership(const Behavior& b);

// The 24 vertices of the (2,2,2) no-signaling polytope: 16 deterministic
// points followed by the 8 PR-box relabelings.
std::vector<Behavior> ns_vertices_222();
Behavior pr_box();

// ---------------------------------------------------------------------------
// Svetlichny (hybrid) model for three parties: in each term one bipartition's
// pair may share arbitrary -- even signaling -- correlations; grouped-pair
// outputs are deterministic functions of both pair inputs.
// ---------------------------------------------------------------------------
struct HybridStrategy {
  Scenario scenario;
  int lone_party = 0;  // the singleton of the bipartition
  // pair_assignment[(x_i, x_j) joint input index] = (a_i, a_j) joint output
  std::vector<int> pair_assignment;
  std::vector<int> lone_assignment;  // per lone-party input
};

Behavior hybrid_behavior(const HybridStrategy& s);
std::vector<HybridStrategy> svetlichny_vertices(const Scenario& sc, long cap = 10000000);

MembershipVerdict svetlichny_membership(const Behavior& b, long cap = 10000000);
double svetlichny_bound(const BellExpression& expr, long cap = 10000000);

}  // namespace bell::polytopes
