#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bell/core.hpp"
#include "bell/optim.hpp"

namespace bell::npa {

// Relaxation levels: level 1 uses {1, Alice projectors, Bob projectors} (one
// projector per input and outcome < d-1, the Collins-Gisin reduction); level
// 1+AB adds the products A_{a|x} B_{b|y}.
enum class Level { one, one_ab };

struct MembershipResult {
  bool feasible = false;
  double slack = 0.0;  // optimal t in max t s.t. Gamma - t I >= 0
  optim::Status status = optim::Status::stalled;
  Eigen::MatrixXd gamma;
  std::vector<std::string> labels;  // monomial labels for verbose dumps
};

// SDP feasibility: does a PSD moment matrix exist whose behavior entries
// match b? Phase-1 formulation; feasible iff slack >= -1e-7.
MembershipResult npa_membership(const Behavior& b, Level level);

struct UpperBoundResult {
  double value = 0.0;
  optim::Status status = optim::Status::stalled;
  double gap = 0.0;
  Eigen::MatrixXd gamma;
  std::vector<std::string> labels;
};

// Upper bound on the quantum value of a Bell expression by maximizing its
// linear functional over moment matrices.
UpperBoundResult npa_upper_bound(const BellExpression& expr, Level level);

// Analytic Q1 test for the (2,2,2) scenario: degenerate branch when some
// marginal is deterministic, otherwise the asin inequality over the
// normalized covariances D_ij, including all sign placements.
bool q1_analytic_222(const Behavior& b, double tol = 1e-9);

// Margin of the analytic test: min over sign placements of pi - |asin sum|
// (positive inside, negative outside); +inf on the degenerate branch.
double q1_analytic_margin(const Behavior& b);

// Tsirelson Gram-matrix test for zero-marginal correlation behaviors:
// feasibility of a PSD 2m x 2m Gram matrix with unit diagonal whose
// off-diagonal block equals the given correlators (x-major m x m table).
bool tsirelson_correlation_membership(const std::vector<double>& correlators,
                                      int m, double tol = 1e-7);

}  // namespace bell::npa
