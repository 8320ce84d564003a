#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "bell/core.hpp"

namespace bell::quantum {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b);
MatrixXcd kron_all(const std::vector<MatrixXcd>& ops);
const MatrixXcd& pauli_x();
const MatrixXcd& pauli_y();
const MatrixXcd& pauli_z();

// Partial trace of an operator on a tensor-product space, keeping `keep`.
MatrixXcd partial_trace_keep(const MatrixXcd& m, const std::vector<int>& dims,
                             int keep);

// ---------------------------------------------------------------------------
// Quantum model types.
// ---------------------------------------------------------------------------
struct DensityMatrix {
  std::vector<int> dims;  // local dimension per party
  MatrixXcd rho;

  int total_dim() const;
  // Hermiticity within 1e-10, unit trace within 1e-10, min eigenvalue >= -1e-9.
  void validate() const;
};

struct MeasurementSet {
  // ops[input][outcome]: POVM elements on the party's local space.
  std::vector<std::vector<MatrixXcd>> ops;
  void validate(int dim) const;
};

struct QuantumModel {
  DensityMatrix state;
  std::vector<MeasurementSet> measurements;  // one per party

  Scenario scenario() const;
  void validate() const;
};

// Born rule: p(a...|x...) = tr(rho (x) M). The output is no-signaling by
// construction.
Behavior born_behavior(const QuantumModel& m);

// ---------------------------------------------------------------------------
// Bell operators.
// ---------------------------------------------------------------------------
MatrixXcd bell_operator(const BellExpression& expr,
                        const std::vector<MeasurementSet>& measurements,
                        const std::vector<int>& dims);
double bell_operator_value(const BellExpression& expr, const QuantumModel& m);
double bell_operator_norm(const MatrixXcd& op);  // largest eigenvalue

// Dichotomic observable O = M0 - M1 for binary measurements.
MatrixXcd observable(const MeasurementSet& m, int input);

// ---------------------------------------------------------------------------
// See-saw lower bounds on the quantum value.
// ---------------------------------------------------------------------------
struct SeesawOptions {
  int restarts = 20;
  int max_sweeps = 500;
  double improvement_tol = 1e-10;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct SeesawResult {
  double value = 0.0;
  QuantumModel model;
  bool converged = false;
  int sweeps = 0;
};

// Alternate per-party measurement updates (closed-form sign-operator update
// for binary outcomes, an inner SDP for more) with state updates to the Bell
// operator's top eigenvector.
SeesawResult seesaw_lower_bound(const BellExpression& expr,
                                const std::vector<int>& dims,
                                const SeesawOptions& opt = {});

// Same, but the state stays fixed (measurement optimization only).
SeesawResult seesaw_fixed_state(const BellExpression& expr, const DensityMatrix& rho,
                                const SeesawOptions& opt = {});

// ---------------------------------------------------------------------------
// Two-qubit criteria and canonical states.
// ---------------------------------------------------------------------------

// Horodecki criterion: S = 2 sqrt(m11 + m22), the two largest eigenvalues of
// T^T T with t_ij = tr[rho (sigma_i x sigma_j)].
double chsh_horodecki(const DensityMatrix& rho);

struct StateInfo {
  DensityMatrix state;
  std::map<std::string, double> bounds;  // named metadata bounds
};

DensityMatrix singlet();
StateInfo werner_2q(double p);
StateInfo werner_d(double p, int d);
StateInfo isotropic(double p, int d);
DensityMatrix ghz_state(int n, int d = 2);
DensityMatrix partially_entangled(double theta);  // cos t |00> + sin t |11>
DensityMatrix hardy_state(double theta);          // a(|01>+|10>) + b|00>, a = b tan t
DensityMatrix cluster4_state();

// Local filtering: (FA (x) FB) rho (.)^dag renormalized, with success
// probability; filters must satisfy ||F|| <= 1.
std::pair<DensityMatrix, double> local_filter(const DensityMatrix& rho,
                                              const MatrixXcd& fa,
                                              const MatrixXcd& fb);

// ---------------------------------------------------------------------------
// Paradoxes.
// ---------------------------------------------------------------------------

// GHZ state with sigma_x (input 0) / sigma_y (input 1) measurements.
QuantumModel ghz_model(double visibility = 1.0);

struct GhzCheck {
  double residuals[4];  // |<XXX>-1|, |<XYY>+1|, |<YXY>+1|, |<YYX>+1|
  double mermin_value;
};
GhzCheck ghz_paradox_check(const QuantumModel& m);

QuantumModel hardy_model(double theta);

struct HardyCheck {
  double zero_residuals[3];
  double p_hardy;          // Born-rule value (= b^2 sin^4 t for this family)
  double p_hardy_printed;  // the 2 b sin^2 t closed form, kept for comparison
};
HardyCheck hardy_check(double theta);

// Maximum of p_hardy over theta by golden-section search on (0, pi/2).
struct HardyMaximum {
  double theta;
  double value;
};
HardyMaximum hardy_maximum(double tol = 1e-10);

// CHSH optimal singlet model (the introduction's measurement directions).
QuantumModel singlet_optimal_model();
// GHZ model attaining the Svetlichny value 4 sqrt(2).
QuantumModel ghz_svetlichny_model();
// Cluster state model attaining 4 on the cluster4 inequality.
QuantumModel cluster4_model();

// ---------------------------------------------------------------------------
// CHSH monogamy: Alice's observables shared between the AB and AC pairs.
// ---------------------------------------------------------------------------
struct MonogamyResult {
  double chsh_ab;
  double chsh_ac;
  double quadratic_sum;  // chsh_ab^2 + chsh_ac^2 <= 8 for quantum models
};
MonogamyResult monogamy_chsh(const QuantumModel& m);

// ---------------------------------------------------------------------------
// Graph states and stabilizer Bell expressions.
// ---------------------------------------------------------------------------
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> neighbors(int v) const;
  bool connected() const;
};

DensityMatrix graph_state(const Graph& g);       // n <= 10
VectorXcd graph_state_vector(const Graph& g);

// Sum of all 2^n stabilizer elements mapped onto the (n, 3 inputs {X,Y,Z},
// 2 outputs) scenario; identity factors become marginal terms.
BellExpression stabilizer_bell_expression(const Graph& g);

// Classical bound L(G) = max over +-1 assignments of |<B(G)>|; n <= 6.
double l_of_g(const Graph& g);

// <G| B(G) |G> (equals 2^n for every graph).
double stabilizer_quantum_value(const Graph& g);

// Model measuring X, Y, Z (inputs 0,1,2) on the graph state.
QuantumModel graph_model(const Graph& g);

}  // namespace bell::quantum
