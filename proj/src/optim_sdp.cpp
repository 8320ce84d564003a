#include <algorithm>
#include <cmath>
#include <limits>

#include "bell/optim.hpp"

namespace bell::optim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using Blocks = std::vector<MatrixXd>;

Blocks zeros(const std::vector<int>& dims) {
  Blocks b;
  b.reserve(dims.size());
  for (int d : dims) b.push_back(MatrixXd::Zero(d, d));
  return b;
}

Blocks identity(const std::vector<int>& dims, double scale) {
  Blocks b;
  b.reserve(dims.size());
  for (int d : dims) b.push_back(scale * MatrixXd::Identity(d, d));
  return b;
}

Blocks to_dense(const SparseSym& s, const std::vector<int>& dims) {
  Blocks b = zeros(dims);
  for (const auto& e : s.entries) {
    if (e.block < 0 || e.block >= static_cast<int>(dims.size()) ||
        e.row >= dims[e.block] || e.col >= dims[e.block])
      throw dimension_error("sdp: constraint entry out of range");
    b[e.block](e.row, e.col) += e.value;
    if (e.row != e.col) b[e.block](e.col, e.row) += e.value;
  }
  return b;
}

double inner(const Blocks& a, const Blocks& b) {
  double v = 0.0;
  for (size_t k = 0; k < a.size(); ++k) v += (a[k].array() * b[k].array()).sum();
  return v;
}

double fro_norm(const Blocks& a) { return std::sqrt(std::max(0.0, inner(a, a))); }

void axpy(Blocks& y, double alpha, const Blocks& x) {
  for (size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

// Max alpha with S + alpha * dS staying PSD, via the Cholesky-whitened
// minimum eigenvalue.
double max_step(const Blocks& S, const Blocks& dS) {
  double alpha = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < S.size(); ++k) {
    Eigen::LLT<MatrixXd> llt(S[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    MatrixXd L = llt.matrixL();
    MatrixXd W = L.triangularView<Eigen::Lower>().solve(dS[k]);
    W = L.triangularView<Eigen::Lower>().solve(W.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (W + W.transpose()),
                                               Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

struct Engine {
  // Internal convention: minimize <C, X> s.t. <A_i, X> = b_i, X >= 0.
  std::vector<int> dims;
  Blocks C;
  std::vector<Blocks> A;
  VectorXd b;
  SdpOptions opt;

  int n_total = 0;

  Status status = Status::stalled;
  Blocks X, Z;
  VectorXd y;
  double pobj = 0.0, dobj = 0.0, gap = 0.0, pres = 0.0, dres = 0.0;
  int iters = 0;

  void drop_dependent_constraints() {
    // Gaussian elimination on vec(A_i); dependent rows with consistent rhs
    // are dropped, inconsistent ones flag the problem infeasible.
    const int m = static_cast<int>(A.size());
    long vdim = 0;
    for (int d : dims) vdim += static_cast<long>(d) * d;
    Eigen::MatrixXd V(m, vdim);
    for (int i = 0; i < m; ++i) {
      long off = 0;
      for (size_t k = 0; k < dims.size(); ++k) {
        V.block(i, off, 1, dims[k] * dims[k]) =
            Eigen::Map<const Eigen::RowVectorXd>(A[i][k].data(),
                                                 dims[k] * dims[k]);
        off += static_cast<long>(dims[k]) * dims[k];
      }
    }
    VectorXd rr = b;
    std::vector<int> keep;
    Eigen::MatrixXd R = V;
    for (int i = 0; i < m; ++i) {
      // eliminate row i against previously kept rows
      for (int kept : keep) {
        const double piv = R.row(kept).squaredNorm();
        if (piv > 0) {
          const double f = R.row(i).dot(R.row(kept)) / piv;
          R.row(i) -= f * R.row(kept);
          rr[i] -= f * rr[kept];
        }
      }
      if (R.row(i).norm() > 1e-10 * (1.0 + V.row(i).norm()))
        keep.push_back(i);
      else if (std::abs(rr[i]) > 1e-8)
        status = Status::infeasible;
    }
    if (static_cast<int>(keep.size()) == m) return;
    std::vector<Blocks> A2;
    VectorXd b2(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) {
      A2.push_back(A[keep[i]]);
      b2[i] = b[keep[i]];
    }
    kept_rows = keep;
    A = std::move(A2);
    b = b2;
  }

  std::vector<int> kept_rows;

  void solve() {
    for (int d : dims) n_total += d;
    drop_dependent_constraints();
    if (status == Status::infeasible) return;
    const int m = static_cast<int>(A.size());

    double scale = 1.0;
    for (const auto& Ai : A) scale = std::max(scale, fro_norm(Ai));
    scale = std::max(scale, fro_norm(C));
    scale = std::max(scale, b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
    const double init = std::max(10.0, std::sqrt(scale) * 2.0);

    X = identity(dims, init);
    Z = identity(dims, init);
    y = VectorXd::Zero(m);

    Eigen::MatrixXd M(m, m);
    std::vector<Blocks> W(m);  // X * A_j * Z^{-1}

    for (iters = 0; iters < opt.max_iterations; ++iters) {
      // residuals and objective values
      VectorXd rp(m);
      for (int i = 0; i < m; ++i) rp[i] = b[i] - inner(A[i], X);
      Blocks Rd = C;
      for (size_t k = 0; k < Rd.size(); ++k) Rd[k] -= Z[k];
      for (int i = 0; i < m; ++i) axpy(Rd, -y[i], A[i]);

      pobj = inner(C, X);
      dobj = b.dot(y);
      const double mu = inner(X, Z) / n_total;
      pres = (m ? rp.cwiseAbs().maxCoeff() : 0.0) /
             (1.0 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0));
      dres = fro_norm(Rd) / (1.0 + fro_norm(C));
      gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

      if (pres <= opt.feas_tol && dres <= opt.feas_tol && gap <= opt.gap_tol) {
        status = Status::optimal;
        return;
      }
      if (!std::isfinite(mu) || mu > 1e14 || std::abs(pobj) > 1e14) {
        status = Status::stalled;
        return;
      }

      // Cholesky of Z for Z^{-1} products
      std::vector<Eigen::LLT<MatrixXd>> zllt;
      zllt.reserve(dims.size());
      bool ok = true;
      for (size_t k = 0; k < dims.size(); ++k) {
        zllt.emplace_back(Z[k]);
        if (zllt.back().info() != Eigen::Success) ok = false;
      }
      if (!ok) {
        status = Status::stalled;
        return;
      }
      auto zinv_mult = [&](const MatrixXd& R, size_t k) {
        // R * Z^{-1} for symmetric Z: solve Z * T' = R' then transpose
        return zllt[k].solve(R.transpose()).transpose().eval();
      };

      for (int j = 0; j < m; ++j) {
        W[j].resize(dims.size());
        for (size_t k = 0; k < dims.size(); ++k)
          W[j][k] = zinv_mult(X[k] * A[j][k], k);
      }
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) M(i, j) = inner(A[i], W[j]);
      M = 0.5 * (M + M.transpose()).eval();

      Eigen::LLT<MatrixXd> mllt(M);
      double ridge = 1e-13;
      while (mllt.info() != Eigen::Success && ridge < 1e-4) {
        mllt.compute(M + ridge * MatrixXd::Identity(m, m));
        ridge *= 10;
      }
      if (mllt.info() != Eigen::Success) {
        status = Status::stalled;
        return;
      }

      // X * Rd * Z^{-1}, reused by both predictor and corrector
      Blocks XRdZ(dims.size());
      for (size_t k = 0; k < dims.size(); ++k)
        XRdZ[k] = zinv_mult(X[k] * Rd[k], k);

      auto solve_direction = [&](double nu, const Blocks* corr, VectorXd& dy,
                                 Blocks& dX, Blocks& dZ) {
        // H = nu Z^{-1} - X - corr Z^{-1}
        Blocks H(dims.size());
        for (size_t k = 0; k < dims.size(); ++k) {
          H[k] = -X[k];
          if (nu != 0.0)
            H[k] += nu * zllt[k].solve(MatrixXd::Identity(dims[k], dims[k]));
          if (corr) H[k] -= zinv_mult((*corr)[k], k);
        }
        VectorXd rhs(m);
        for (int i = 0; i < m; ++i)
          rhs[i] = rp[i] - inner(A[i], H) + inner(A[i], XRdZ);
        dy = mllt.solve(rhs);
        dZ = Rd;
        for (int i = 0; i < m; ++i) axpy(dZ, -dy[i], A[i]);
        dX.resize(dims.size());
        for (size_t k = 0; k < dims.size(); ++k) {
          MatrixXd raw = H[k] - zinv_mult(X[k] * dZ[k], k);
          dX[k] = 0.5 * (raw + raw.transpose());
        }
      };

      // Predictor (affine scaling)
      VectorXd dy_a;
      Blocks dX_a, dZ_a;
      solve_direction(0.0, nullptr, dy_a, dX_a, dZ_a);
      double ap = std::min(1.0, opt.step_fraction * max_step(X, dX_a));
      double ad = std::min(1.0, opt.step_fraction * max_step(Z, dZ_a));
      Blocks Xa = X, Za = Z;
      axpy(Xa, ap, dX_a);
      axpy(Za, ad, dZ_a);
      const double mu_aff = inner(Xa, Za) / n_total;
      double sigma = std::pow(mu_aff / mu, 3.0);
      sigma = std::min(1.0, std::max(1e-8, sigma));

      // Corrector
      Blocks corr(dims.size());
      for (size_t k = 0; k < dims.size(); ++k) corr[k] = dX_a[k] * dZ_a[k];
      VectorXd dy;
      Blocks dX, dZ;
      solve_direction(sigma * mu, &corr, dy, dX, dZ);

      ap = std::min(1.0, opt.step_fraction * max_step(X, dX));
      ad = std::min(1.0, opt.step_fraction * max_step(Z, dZ));
      if (!(ap > 1e-12) || !(ad > 1e-12)) {
        status = Status::stalled;
        return;
      }
      axpy(X, ap, dX);
      axpy(Z, ad, dZ);
      y += ad * dy;
    }
    status = Status::stalled;
  }
};

}  // namespace

SdpSolution sdp_solve(const SdpProblem& p, const SdpOptions& opt) {
  if (p.constraints.size() != p.rhs.size())
    throw dimension_error("sdp_solve: constraints/rhs size mismatch");
  Engine e;
  e.dims = p.block_dims;
  e.opt = opt;
  // public form maximizes <C, X>; engine minimizes
  e.C = to_dense(p.C, p.block_dims);
  for (auto& blk : e.C) blk = -blk;
  for (const auto& a : p.constraints) e.A.push_back(to_dense(a, p.block_dims));
  e.b = Eigen::Map<const VectorXd>(p.rhs.data(), p.rhs.size());
  e.solve();

  SdpSolution sol;
  sol.status = e.status;
  sol.iterations = e.iters;
  if (e.status == Status::infeasible) return sol;
  sol.X = e.X;
  sol.Z = e.Z;
  sol.objective = -e.pobj;
  sol.dual_objective = -e.dobj;
  sol.gap = e.gap;
  sol.primal_residual = e.pres;
  sol.dual_residual = e.dres;
  // expand duals over dropped (dependent) rows
  sol.y = VectorXd::Zero(p.constraints.size());
  if (e.kept_rows.empty()) {
    for (int i = 0; i < e.y.size(); ++i) sol.y[i] = -e.y[i];
  } else {
    for (size_t i = 0; i < e.kept_rows.size(); ++i) sol.y[e.kept_rows[i]] = -e.y[i];
  }
  return sol;
}

LmiSolution lmi_solve(const LmiProblem& p, const SdpOptions& opt) {
  if (static_cast<int>(p.F.size()) != p.c.size())
    throw dimension_error("lmi_solve: F/c size mismatch");
  // max c.y s.t. F0 + sum y_i F_i >= 0  is the dual of
  // min <F0, X> s.t. <F_i, X> = -c_i, X >= 0.
  Engine e;
  e.dims = p.block_dims;
  e.opt = opt;
  e.C = to_dense(p.F0, p.block_dims);
  for (const auto& f : p.F) {
    Blocks a = to_dense(f, p.block_dims);
    for (auto& blk : a) blk = -blk;
    e.A.push_back(std::move(a));
  }
  e.b = p.c;
  e.solve();

  LmiSolution sol;
  sol.status = e.status;
  sol.iterations = e.iters;
  if (e.status == Status::infeasible) return sol;
  sol.y = VectorXd::Zero(p.c.size());
  if (e.kept_rows.empty()) {
    sol.y = e.y;
  } else {
    for (size_t i = 0; i < e.kept_rows.size(); ++i) sol.y[e.kept_rows[i]] = e.y[i];
  }
  sol.objective = p.c.dot(sol.y);
  sol.gap = e.gap;
  sol.slack = e.Z;
  return sol;
}

}  // namespace bell::optim
