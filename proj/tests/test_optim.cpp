#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bell/optim.hpp"

using namespace bell;
using namespace bell::optim;

namespace {

// Brute-force oracle for 3-variable LPs with box + halfspace constraints:
// enumerate all vertices of the feasible polytope as intersections of three
// active constraints and take the best feasible one.
struct BruteLp {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;  // rows: A x <= b
  Eigen::VectorXd b;

  // returns best objective or NaN when infeasible-ish (no vertex found)
  double solve() const {
    const int m = static_cast<int>(A.rows());
    double best = std::nan("");
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          Eigen::Matrix3d M;
          M.row(0) = A.row(i);
          M.row(1) = A.row(j);
          M.row(2) = A.row(k);
          if (std::abs(M.determinant()) < 1e-9) continue;
          Eigen::Vector3d rhs(b[i], b[j], b[k]);
          Eigen::Vector3d x = M.fullPivLu().solve(rhs);
          if (((A * x).array() > b.array() + 1e-7).any()) continue;
          const double v = c.dot(x);
          if (std::isnan(best) || v > best) best = v;
        }
    return best;
  }
};

}  // namespace

TEST_CASE("lp_solve basic contracts") {
  SUBCASE("max x s.t. x <= 3") {
    LpProblem p;
    p.c = Eigen::VectorXd::Constant(1, 1.0);
    p.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.b = Eigen::VectorXd::Constant(1, 3.0);
    p.senses = {RowSense::le};
    auto s = lp_solve(p);
    CHECK(s.status == Status::optimal);
    CHECK(s.x[0] == doctest::Approx(3.0));
    CHECK(s.objective == doctest::Approx(3.0));
    CHECK(s.feasibility_residual <= 1e-8);
    CHECK(s.duality_gap <= 1e-8);
  }
  SUBCASE("max x with no upper constraint is unbounded") {
    LpProblem p;
    p.c = Eigen::VectorXd::Constant(1, 1.0);
    p.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
    p.b = Eigen::VectorXd::Constant(1, 0.0);
    p.senses = {RowSense::le};
    CHECK(lp_solve(p).status == Status::unbounded);
  }
  SUBCASE("x <= 1 and x >= 2 is infeasible") {
    LpProblem p;
    p.c = Eigen::VectorXd::Constant(1, 1.0);
    p.A = Eigen::MatrixXd(2, 1);
    p.A << 1.0, 1.0;
    p.b = Eigen::VectorXd(2);
    p.b << 1.0, 2.0;
    p.senses = {RowSense::le, RowSense::ge};
    auto s = lp_solve(p);
    CHECK(s.status == Status::infeasible);
    REQUIRE(s.farkas.size() == 2);
    // y.A <= 0 and y.b > 0 certifies infeasibility of the <=-system
    // (after sense normalization: row0: x <= 1, row1: -x <= -2)
  }
  SUBCASE("dimension mismatch throws") {
    LpProblem p;
    p.c = Eigen::VectorXd::Constant(2, 1.0);
    p.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.b = Eigen::VectorXd::Constant(1, 3.0);
    p.senses = {RowSense::le};
    CHECK_THROWS_AS(lp_solve(p), dimension_error);
  }
}

TEST_CASE("lp_solve vs brute-force vertex enumeration on random 3-var LPs") {
  Rng rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int extra = 3 + rng.uniform_int(4);
    // box [0, u] plus `extra` random halfspaces; free variables off
    Eigen::MatrixXd A(3 + extra, 3);
    Eigen::VectorXd b(3 + extra);
    for (int i = 0; i < 3; ++i) {
      A.row(i).setZero();
      A(i, i) = 1.0;
      b[i] = 1.0 + 2.0 * rng.uniform();
    }
    for (int i = 3; i < 3 + extra; ++i) {
      for (int j = 0; j < 3; ++j) A(i, j) = rng.gaussian();
      b[i] = 1.0 + rng.uniform();
    }
    Eigen::VectorXd c(3);
    for (int j = 0; j < 3; ++j) c[j] = rng.gaussian();

    // oracle needs the x >= 0 bounds as rows
    BruteLp oracle;
    oracle.c = c;
    oracle.A = Eigen::MatrixXd(3 + extra + 3, 3);
    oracle.b = Eigen::VectorXd(3 + extra + 3);
    oracle.A.topRows(3 + extra) = A;
    oracle.b.head(3 + extra) = b;
    oracle.A.bottomRows(3) = -Eigen::MatrixXd::Identity(3, 3);
    oracle.b.tail(3).setZero();
    const double expected = oracle.solve();

    LpProblem p;
    p.c = c;
    p.A = A;
    p.b = b;
    p.senses.assign(3 + extra, RowSense::le);
    auto s = lp_solve(p);
    REQUIRE(s.status == Status::optimal);
    REQUIRE_FALSE(std::isnan(expected));
    CHECK(s.objective == doctest::Approx(expected).epsilon(1e-7));
    // weak duality
    CHECK(s.objective <= s.dual.dot(p.b) + 1e-8 * (1 + std::abs(s.objective)));
    ++solved;
  }
  CHECK(solved == 100);
}

TEST_CASE("sdp_solve analytic instances") {
  SUBCASE("max <I,X> with trace(X) = 1 in dim 2") {
    SdpProblem p;
    p.block_dims = {2};
    p.C.add(0, 0, 0, 1.0);
    p.C.add(0, 1, 1, 1.0);
    SparseSym tr;
    tr.add(0, 0, 0, 1.0);
    tr.add(0, 1, 1, 1.0);
    p.constraints = {tr};
    p.rhs = {1.0};
    auto s = sdp_solve(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(s.gap <= 1e-7);
  }
  SUBCASE("max X12 + X21 with unit diagonal gives 2") {
    SdpProblem p;
    p.block_dims = {2};
    p.C.add(0, 0, 1, 1.0);  // symmetric entry: contributes X12 + X21
    SparseSym d0, d1;
    d0.add(0, 0, 0, 1.0);
    d1.add(0, 1, 1, 1.0);
    p.constraints = {d0, d1};
    p.rhs = {1.0, 1.0};
    auto s = sdp_solve(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-6));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.X[0]);
    CHECK(es.eigenvalues().minCoeff() >= -1e-7);
  }
  SUBCASE("diagonal SDP agrees with the LP solver") {
    // max 2x + 3y s.t. x + y = 1, x,y >= 0 -> 3
    SdpProblem p;
    p.block_dims = {1, 1};
    p.C.add(0, 0, 0, 2.0);
    p.C.add(1, 0, 0, 3.0);
    SparseSym sum;
    sum.add(0, 0, 0, 1.0);
    sum.add(1, 0, 0, 1.0);
    p.constraints = {sum};
    p.rhs = {1.0};
    auto s = sdp_solve(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-7));

    LpProblem lp;
    lp.c = Eigen::VectorXd(2);
    lp.c << 2.0, 3.0;
    lp.A = Eigen::MatrixXd::Ones(1, 2);
    lp.b = Eigen::VectorXd::Ones(1);
    lp.senses = {RowSense::eq};
    auto ls = lp_solve(lp);
    REQUIRE(ls.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(ls.objective).epsilon(1e-7));
  }
  SUBCASE("rank-deficient constraints are preprocessed away") {
    SdpProblem p;
    p.block_dims = {2};
    p.C.add(0, 0, 1, 1.0);
    SparseSym d0, d1, dup;
    d0.add(0, 0, 0, 1.0);
    d1.add(0, 1, 1, 1.0);
    dup.add(0, 0, 0, 1.0);
    dup.add(0, 1, 1, 1.0);  // = d0 + d1
    p.constraints = {d0, d1, dup};
    p.rhs = {1.0, 1.0, 2.0};
    auto s = sdp_solve(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-6));
    // inconsistent duplicate must be rejected
    p.rhs = {1.0, 1.0, 3.0};
    CHECK(sdp_solve(p).status == Status::infeasible);
  }
}

TEST_CASE("lmi_solve: minimal eigenvalue style problems") {
  // max t s.t. diag(3, 5) - t I >= 0  ->  t = 3
  LmiProblem p;
  p.block_dims = {2};
  p.F0.add(0, 0, 0, 3.0);
  p.F0.add(0, 1, 1, 5.0);
  SparseSym mi;
  mi.add(0, 0, 0, -1.0);
  mi.add(0, 1, 1, -1.0);
  p.F = {mi};
  p.c = Eigen::VectorXd::Ones(1);
  auto s = lmi_solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("psd_project") {
  SUBCASE("identity is fixed") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
    CHECK((psd_project(I) - I).norm() < 1e-12);
  }
  SUBCASE("diag(1,-1) projects to diag(1,0)") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = -1;
    Eigen::MatrixXd pr = psd_project(m);
    CHECK(pr(0, 0) == doctest::Approx(1.0));
    CHECK(pr(1, 1) == doctest::Approx(0.0));
  }
  SUBCASE("already-PSD Gram matrices are fixed points; projection idempotent") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXd B(5, 5);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) B(i, j) = rng.gaussian();
      Eigen::MatrixXd G = B * B.transpose();
      CHECK((psd_project(G) - G).norm() < 1e-10 * (1 + G.norm()));
      Eigen::MatrixXd M(5, 5);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) M(i, j) = rng.gaussian();
      M = 0.5 * (M + M.transpose()).eval();
      Eigen::MatrixXd P = psd_project(M);
      CHECK((psd_project(P) - P).norm() < 1e-10 * (1 + P.norm()));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
  }
}

TEST_CASE("bisect") {
  SUBCASE("step function at 0.5") {
    auto br = bisect([](double v) { return v < 0.5; }, 0.0, 1.0, 1e-6);
    CHECK(br.width() <= 1e-6);
    CHECK(br.lo <= 0.5);
    CHECK(br.hi >= 0.5 - 1e-6);
  }
  SUBCASE("step at the lower endpoint") {
    auto br = bisect([](double v) { return v <= 0.0; }, 0.0, 1.0, 1e-6);
    CHECK(br.lo >= 0.0);
    CHECK(br.hi <= 1e-6 + 1e-12);
  }
  SUBCASE("equal endpoints rejected") {
    CHECK_THROWS(bisect([](double) { return true; }, 0.0, 1.0, 1e-6));
  }
}
