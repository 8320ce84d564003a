#include <algorithm>
#include <cmath>
#include <limits>

#include "bell/optim.hpp"

namespace bell::optim {

const char* status_name(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::stalled: return "stalled";
  }
  return "?";
}

namespace {

// Dense two-phase simplex on the standard form  min c.x, Ax = b, x >= 0.
// Pricing uses Dantzig's rule and falls back to Bland's rule after a run of
// non-improving pivots, which keeps the method deterministic and cycle-free.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, long max_pivots,
          double pivot_tol)
      : m_(static_cast<int>(A.rows())),
        n_(static_cast<int>(A.cols())),
        max_pivots_(max_pivots),
        tol_(pivot_tol) {
    T_.resize(m_ + 1, n_ + m_ + 1);
    T_.setZero();
    T_.block(0, 0, m_, n_) = A;
    T_.col(n_ + m_).head(m_) = b;
    for (int i = 0; i < m_; ++i)  // b >= 0 before installing the identity
      if (T_(i, n_ + m_) < 0) T_.row(i) = -T_.row(i);
    T_.block(0, n_, m_, m_).setIdentity();
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Phase 1: drive artificials to zero. Returns infeasibility measure.
  double phase1() {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_ + m_);
    cost.tail(m_).setOnes();
    price_out(cost);
    run(/*ban_artificials=*/false);
    const double infeas = -T_(m_, n_ + m_);
    if (infeas > 1e-7) {
      // Farkas vector: simplex multipliers of the phase-1 optimum.
      farkas_ = multipliers(cost);
      return infeas;
    }
    // pivot remaining basic artificials out where possible
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(T_(i, j)) > tol_) { enter = j; break; }
      if (enter >= 0) pivot(i, enter);
      // all-zero row: redundant constraint, the artificial stays basic at 0
    }
    return infeas;
  }

  // Phase 2 with real costs; artificials banned from entering.
  Status phase2(const Eigen::VectorXd& cost_orig) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_ + m_);
    cost.head(n_) = cost_orig;
    price_out(cost);
    return run(/*ban_artificials=*/true);
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = T_(i, n_ + m_);
    return x;
  }

  // y = c_B B^{-1}, read off the artificial columns (they hold B^{-1}).
  Eigen::VectorXd multipliers(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      for (int k = 0; k < m_; ++k) v += cost[basis_[k]] * T_(k, n_ + i);
      y[i] = v;
    }
    return y;
  }

  Eigen::VectorXd phase2_duals(const Eigen::VectorXd& cost_orig) const {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_ + m_);
    cost.head(n_) = cost_orig;
    return multipliers(cost);
  }

  const Eigen::VectorXd& farkas() const { return farkas_; }
  long pivots() const { return pivots_; }

 private:
  void price_out(const Eigen::VectorXd& cost) {
    T_.row(m_).setZero();
    T_.row(m_).head(n_ + m_) = cost.transpose();
    for (int i = 0; i < m_; ++i)
      if (cost[basis_[i]] != 0.0) T_.row(m_) -= cost[basis_[i]] * T_.row(i);
  }

  void pivot(int r, int c) {
    T_.row(r) /= T_(r, c);
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = T_(i, c);
      if (f != 0.0) T_.row(i) -= f * T_.row(r);
    }
    basis_[r] = c;
    ++pivots_;
  }

  Status run(bool ban_artificials) {
    const int ncols = ban_artificials ? n_ : n_ + m_;
    int stall_count = 0;
    double last_obj = -T_(m_, n_ + m_);
    while (pivots_ < max_pivots_) {
      const bool bland = stall_count >= 50;
      int enter = -1;
      double best = -tol_;
      for (int j = 0; j < ncols; ++j) {
        const double rc = T_(m_, j);
        if (rc < -tol_) {
          if (bland) { enter = j; break; }
          if (rc < best) { best = rc; enter = j; }
        }
      }
      if (enter < 0) return Status::optimal;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, enter);
        if (a > tol_) {
          const double ratio = T_(i, n_ + m_) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && leave >= 0 && basis_[i] < basis_[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
      const double obj = -T_(m_, n_ + m_);
      stall_count = (obj < last_obj - 1e-12) ? 0 : stall_count + 1;
      last_obj = obj;
    }
    return Status::stalled;
  }

  int m_, n_;
  long max_pivots_;
  double tol_;
  Eigen::MatrixXd T_;
  std::vector<int> basis_;
  Eigen::VectorXd farkas_;
  long pivots_ = 0;
};

}  // namespace

LpSolution lp_solve(const LpProblem& p, const LpOptions& opt) {
  const int m = p.rows();
  const int n = p.cols();
  if (p.c.size() != n || p.b.size() != m ||
      static_cast<int>(p.senses.size()) != m ||
      (!p.free_vars.empty() && static_cast<int>(p.free_vars.size()) != n))
    throw dimension_error("lp_solve: inconsistent dimensions");

  // Standard form: split free variables, add slack/surplus columns, minimize.
  std::vector<int> split_col(n, -1);
  int ns = n;
  for (int j = 0; j < n; ++j)
    if (!p.free_vars.empty() && p.free_vars[j]) split_col[j] = ns++;
  int nslack = 0;
  for (auto s : p.senses)
    if (s != RowSense::eq) ++nslack;
  const int ntot = ns + nslack;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, ntot);
  Eigen::VectorXd b = p.b;
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ntot);
  for (int j = 0; j < n; ++j) {
    A.col(j).head(m) = p.A.col(j);
    cost[j] = -p.c[j];  // maximize -> minimize
    if (split_col[j] >= 0) {
      A.col(split_col[j]) = -p.A.col(j);
      cost[split_col[j]] = p.c[j];
    }
  }
  int sl = ns;
  // Row sign flips to get b >= 0 happen inside the tableau; slack signs here.
  for (int i = 0; i < m; ++i) {
    if (p.senses[i] == RowSense::le)
      A(i, sl++) = 1.0;
    else if (p.senses[i] == RowSense::ge)
      A(i, sl++) = -1.0;
  }

  Tableau tab(A, b, opt.max_pivots, opt.pivot_tol);
  LpSolution sol;
  const double infeas = tab.phase1();
  if (infeas > 1e-7) {
    sol.status = Status::infeasible;
    // Farkas vector y of the (row-sign normalized) system: y.A <= 0 columnwise
    // and y.b > 0. Undo the internal b >= 0 sign flips.
    sol.farkas = tab.farkas();
    for (int i = 0; i < m; ++i)
      if (p.b[i] < 0) sol.farkas[i] = -sol.farkas[i];
    return sol;
  }
  const Status st = tab.phase2(cost);
  sol.status = st;
  sol.pivots = tab.pivots();
  if (st != Status::optimal) return sol;

  Eigen::VectorXd xs = tab.solution();
  sol.x = Eigen::VectorXd(n);
  for (int j = 0; j < n; ++j)
    sol.x[j] = xs[j] - (split_col[j] >= 0 ? xs[split_col[j]] : 0.0);
  sol.objective = p.c.dot(sol.x);

  Eigen::VectorXd y = tab.phase2_duals(cost);
  for (int i = 0; i < m; ++i)
    if (p.b[i] < 0) y[i] = -y[i];
  sol.dual = -y;  // back to the maximize convention

  // residuals
  Eigen::VectorXd r = p.A * sol.x - p.b;
  double feas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (p.senses[i] == RowSense::eq)
      feas = std::max(feas, std::abs(r[i]));
    else if (p.senses[i] == RowSense::le)
      feas = std::max(feas, std::max(0.0, r[i]));
    else
      feas = std::max(feas, std::max(0.0, -r[i]));
  }
  if (p.free_vars.empty())
    for (int j = 0; j < n; ++j) feas = std::max(feas, std::max(0.0, -sol.x[j]));
  else
    for (int j = 0; j < n; ++j)
      if (!p.free_vars[j]) feas = std::max(feas, std::max(0.0, -sol.x[j]));
  sol.feasibility_residual = feas;
  sol.duality_gap = std::abs(sol.objective - sol.dual.dot(p.b)) /
                    (1.0 + std::abs(sol.objective));
  return sol;
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw dimension_error("psd_project: matrix not square");
  Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_project: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Bracket bisect(const std::function<bool(double)>& pred, double lo, double hi,
               double tol) {
  if (!(lo < hi)) throw std::invalid_argument("bisect: lo < hi required");
  const bool plo = pred(lo);
  const bool phi = pred(hi);
  if (plo == phi)
    throw std::invalid_argument("bisect: predicate equal at both endpoints");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid) == plo)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace bell::optim
