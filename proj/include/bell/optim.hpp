#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "bell/common.hpp"

namespace bell::optim {

enum class Status { optimal, infeasible, unbounded, stalled };

const char* status_name(Status s);

// ---------------------------------------------------------------------------
// Dense LP, solved by a two-phase revised simplex with Bland's anti-cycling
// rule. Deterministic given its input. Variables are >= 0 unless marked free.
//
//   maximize c.x  s.t.  A_i . x  (<= | == | >=)  b_i
// ---------------------------------------------------------------------------
enum class RowSense { le, eq, ge };

struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<RowSense> senses;
  std::vector<bool> free_vars;  // empty => all variables >= 0

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
};

struct LpSolution {
  Status status = Status::stalled;
  Eigen::VectorXd x;          // primal (original variables)
  Eigen::VectorXd dual;       // row multipliers
  double objective = 0.0;
  double feasibility_residual = 0.0;
  double duality_gap = 0.0;
  long pivots = 0;
  // Farkas certificate when infeasible: y with y.A acting as a separating
  // functional (y.b > 0 while y.A x <= 0 for all feasible x of the
  // homogenized system). Used by membership routines.
  Eigen::VectorXd farkas;
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-8;
  long max_pivots = 1000000;
};

LpSolution lp_solve(const LpProblem& p, const LpOptions& opt = {});

// ---------------------------------------------------------------------------
// Dense SDP over block-diagonal symmetric matrices.
//
// Primal form (the public contract):
//   maximize <C, X>  s.t.  <A_i, X> = b_i,  X >= 0 (PSD),
// solved together with its dual by an infeasible-start primal-dual
// path-following method (HKM direction, Mehrotra predictor-corrector,
// 0.98 fraction-to-the-boundary). Intended for block dimensions <= 64.
// ---------------------------------------------------------------------------
struct SymEntry {
  int block;
  int row, col;  // row <= col; off-diagonal entries are mirrored
  double value;
};

struct SparseSym {
  std::vector<SymEntry> entries;
  void add(int block, int r, int c, double v) {
    entries.push_back({block, std::min(r, c), std::max(r, c), v});
  }
};

struct SdpProblem {
  std::vector<int> block_dims;
  SparseSym C;                        // objective, maximized
  std::vector<SparseSym> constraints; // <A_i, X> = b_i
  std::vector<double> rhs;
};

struct SdpSolution {
  Status status = Status::stalled;
  std::vector<Eigen::MatrixXd> X;  // primal blocks
  Eigen::VectorXd y;               // dual multipliers
  std::vector<Eigen::MatrixXd> Z;  // dual slack blocks
  double objective = 0.0;          // primal objective (maximize convention)
  double dual_objective = 0.0;
  double gap = 0.0;                // relative duality gap achieved
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

struct SdpOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
};

SdpSolution sdp_solve(const SdpProblem& p, const SdpOptions& opt = {});

// LMI form: maximize c.y subject to F0 + sum_i y_i F_i >= 0. Internally the
// dual side of the standard pair above; the reported objective is c.y.
struct LmiProblem {
  std::vector<int> block_dims;
  SparseSym F0;
  std::vector<SparseSym> F;
  Eigen::VectorXd c;
};

struct LmiSolution {
  Status status = Status::stalled;
  Eigen::VectorXd y;
  double objective = 0.0;
  double gap = 0.0;
  std::vector<Eigen::MatrixXd> slack;  // F0 + sum y_i F_i
  int iterations = 0;
};

LmiSolution lmi_solve(const LmiProblem& p, const SdpOptions& opt = {});

// ---------------------------------------------------------------------------
// Nearest PSD matrix in Frobenius norm: symmetrize, eigendecompose, clip
// negative eigenvalues to zero. Idempotent.
// ---------------------------------------------------------------------------
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);

// ---------------------------------------------------------------------------
// Bisection on a monotone boolean predicate. Returns the certified bracket
// [lo, hi] with width <= tol; pred(lo) != pred(hi) is required.
// ---------------------------------------------------------------------------
struct Bracket {
  double lo, hi;
  double width() const { return hi - lo; }
};

Bracket bisect(const std::function<bool(double)>& pred, double lo, double hi,
               double tol);

}  // namespace bell::optim
