#include "bell/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bell/optim.hpp"

namespace bell::quantum {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using std::complex;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
const complex<double> kI(0.0, 1.0);
}  // namespace

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatrixXcd kron_all(const std::vector<MatrixXcd>& ops) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (const auto& o : ops) out = kron(out, o);
  return out;
}

const MatrixXcd& pauli_x() {
  static const MatrixXcd m = [] {
    MatrixXcd x(2, 2);
    x << 0, 1, 1, 0;
    return x;
  }();
  return m;
}

const MatrixXcd& pauli_y() {
  static const MatrixXcd m = [] {
    MatrixXcd y(2, 2);
    y << 0, -kI, kI, 0;
    return y;
  }();
  return m;
}

const MatrixXcd& pauli_z() {
  static const MatrixXcd m = [] {
    MatrixXcd z(2, 2);
    z << 1, 0, 0, -1;
    return z;
  }();
  return m;
}

MatrixXcd partial_trace_keep(const MatrixXcd& m, const std::vector<int>& dims,
                             int keep) {
  const int n = static_cast<int>(dims.size());
  long total = 1;
  for (int d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw dimension_error("partial_trace: dimension mismatch");
  // strides for the kept party and for the rest
  long stride = 1;
  for (int k = n - 1; k > keep; --k) stride *= dims[k];
  const int dk = dims[keep];
  const long rest = total / dk;
  MatrixXcd out = MatrixXcd::Zero(dk, dk);
  // iterate over all indices of the other parties
  for (long r = 0; r < rest; ++r) {
    // expand r into a full index with a hole at `keep`
    const long hi = r / stride;      // index part above the kept party
    const long lo = r % stride;      // below
    const long base = hi * stride * dk + lo;
    for (int a = 0; a < dk; ++a)
      for (int b = 0; b < dk; ++b)
        out(a, b) += m(base + a * stride, base + b * stride);
  }
  return out;
}

// --- types ------------------------------------------------------------------

int DensityMatrix::total_dim() const {
  int t = 1;
  for (int d : dims) t *= d;
  return t;
}

void DensityMatrix::validate() const {
  if (rho.rows() != total_dim() || rho.cols() != total_dim())
    throw dimension_error("density matrix: dimension mismatch");
  if ((rho - rho.adjoint()).norm() > 1e-10)
    throw std::invalid_argument("density matrix: not Hermitian within 1e-10");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument("density matrix: trace != 1 within 1e-10");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("density matrix: negative eigenvalue below -1e-9");
}

void MeasurementSet::validate(int dim) const {
  for (const auto& input : ops) {
    MatrixXcd sum = MatrixXcd::Zero(dim, dim);
    for (const auto& m : input) {
      if (m.rows() != dim || m.cols() != dim)
        throw dimension_error("measurement: operator dimension mismatch");
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                  Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("measurement: POVM element not PSD");
      sum += m;
    }
    if ((sum - MatrixXcd::Identity(dim, dim)).norm() > 1e-9)
      throw std::invalid_argument("measurement: POVM does not sum to identity");
  }
}

Scenario QuantumModel::scenario() const {
  std::vector<int> m, d;
  for (const auto& party : measurements) {
    m.push_back(static_cast<int>(party.ops.size()));
    d.push_back(party.ops.empty() ? 1 : static_cast<int>(party.ops[0].size()));
  }
  return Scenario(m, d);
}

void QuantumModel::validate() const {
  state.validate();
  if (measurements.size() != state.dims.size())
    throw dimension_error("model: one measurement set per party required");
  for (size_t k = 0; k < measurements.size(); ++k)
    measurements[k].validate(state.dims[k]);
}

Behavior born_behavior(const QuantumModel& m) {
  const Scenario sc = m.scenario();
  Behavior b(sc, std::vector<double>(sc.table_size(), 0.0));
  const long nin = sc.input_tuples();
  const long nout = sc.output_tuples();
  for (long i = 0; i < nin; ++i) {
    std::vector<int> x = sc.decode_input(i);
    for (long o = 0; o < nout; ++o) {
      std::vector<int> a = sc.decode_output(o);
      std::vector<MatrixXcd> ops;
      ops.reserve(sc.parties);
      for (int k = 0; k < sc.parties; ++k) ops.push_back(m.measurements[k].ops[x[k]][a[k]]);
      b.p[i * nout + o] = (m.state.rho * kron_all(ops)).trace().real();
    }
  }
  return b;
}

// --- Bell operators ------------------------------------------------------------

MatrixXcd bell_operator(const BellExpression& expr,
                        const std::vector<MeasurementSet>& measurements,
                        const std::vector<int>& dims) {
  const Scenario& sc = expr.scenario;
  if (static_cast<int>(measurements.size()) != sc.parties ||
      static_cast<int>(dims.size()) != sc.parties)
    throw dimension_error("bell_operator: party count mismatch");
  long total = 1;
  for (int d : dims) total *= d;
  MatrixXcd op = MatrixXcd::Zero(total, total);
  const long nin = sc.input_tuples();
  const long nout = sc.output_tuples();
  for (long i = 0; i < nin; ++i) {
    std::vector<int> x = sc.decode_input(i);
    for (long o = 0; o < nout; ++o) {
      const double c = expr.s[i * nout + o];
      if (c == 0.0) continue;
      std::vector<int> a = sc.decode_output(o);
      std::vector<MatrixXcd> ops;
      for (int k = 0; k < sc.parties; ++k) ops.push_back(measurements[k].ops[x[k]][a[k]]);
      op += c * kron_all(ops);
    }
  }
  return op;
}

double bell_operator_value(const BellExpression& expr, const QuantumModel& m) {
  return (m.state.rho * bell_operator(expr, m.measurements, m.state.dims))
      .trace()
      .real();
}

double bell_operator_norm(const MatrixXcd& op) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (op + op.adjoint()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

MatrixXcd observable(const MeasurementSet& m, int input) {
  if (m.ops[input].size() != 2)
    throw dimension_error("observable: binary measurement required");
  return m.ops[input][0] - m.ops[input][1];
}

// --- see-saw ----------------------------------------------------------------------

namespace {

MatrixXcd random_hermitian(int d, Rng& rng) {
  MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = complex<double>(rng.gaussian(), rng.gaussian());
  return 0.5 * (m + m.adjoint());
}

// Projector onto the nonnegative eigenspace (sign-operator update).
void sign_projectors(const MatrixXcd& h, MatrixXcd& m0, MatrixXcd& m1) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const int d = static_cast<int>(h.rows());
  m0 = MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    if (es.eigenvalues()[i] >= 0)
      m0 += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  m1 = MatrixXcd::Identity(d, d) - m0;
}

MeasurementSet random_measurements(int dim, int inputs, int outcomes, Rng& rng) {
  MeasurementSet ms;
  ms.ops.resize(inputs);
  for (int x = 0; x < inputs; ++x) {
    if (outcomes == 2) {
      MatrixXcd m0, m1;
      sign_projectors(random_hermitian(dim, rng), m0, m1);
      ms.ops[x] = {m0, m1};
    } else {
      // random unitary via QR of a complex Ginibre matrix; columns are
      // distributed round-robin over the outcomes
      MatrixXcd g(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          g(i, j) = complex<double>(rng.gaussian(), rng.gaussian());
      Eigen::HouseholderQR<MatrixXcd> qr(g);
      MatrixXcd q = qr.householderQ();
      ms.ops[x].assign(outcomes, MatrixXcd::Zero(dim, dim));
      for (int col = 0; col < dim; ++col) {
        const int a = col % outcomes;
        ms.ops[x][a] += q.col(col) * q.col(col).adjoint();
      }
    }
  }
  return ms;
}

// real embedding of a Hermitian matrix: [[Re, -Im],[Im, Re]]
MatrixXd embed(const MatrixXcd& m) {
  const int d = static_cast<int>(m.rows());
  MatrixXd e(2 * d, 2 * d);
  e.topLeftCorner(d, d) = m.real();
  e.bottomRightCorner(d, d) = m.real();
  e.topRightCorner(d, d) = -m.imag();
  e.bottomLeftCorner(d, d) = m.imag();
  return e;
}

MatrixXcd unembed(const MatrixXd& e) {
  const int d = static_cast<int>(e.rows()) / 2;
  MatrixXcd m(d, d);
  MatrixXd re = 0.5 * (e.topLeftCorner(d, d) + e.bottomRightCorner(d, d));
  MatrixXd im = 0.5 * (e.bottomLeftCorner(d, d) - e.topRightCorner(d, d));
  m.real() = re;
  m.imag() = im;
  return 0.5 * (m + m.adjoint()).eval();
}

// Optimal POVM for max sum_a tr(M_a R_a), sum_a M_a = I, M_a >= 0, via a
// small SDP on real embeddings.
std::vector<MatrixXcd> optimal_povm(const std::vector<MatrixXcd>& r) {
  const int outcomes = static_cast<int>(r.size());
  const int d = static_cast<int>(r[0].rows());
  optim::SdpProblem p;
  p.block_dims.assign(outcomes, 2 * d);
  for (int a = 0; a < outcomes; ++a) {
    // tr(M_a R_a) = <E(R_a), E(M_a)> / 2
    MatrixXd e = embed(0.5 * (r[a] + r[a].adjoint()).eval());
    for (int i = 0; i < 2 * d; ++i)
      for (int j = i; j < 2 * d; ++j)
        if (e(i, j) != 0.0) p.C.add(a, i, j, 0.5 * e(i, j));
  }
  // completeness: sum over outcome blocks equals the identity embedding
  for (int i = 0; i < 2 * d; ++i)
    for (int j = i; j < 2 * d; ++j) {
      optim::SparseSym c;
      for (int a = 0; a < outcomes; ++a) c.add(a, i, j, 1.0);
      p.constraints.push_back(c);
      p.rhs.push_back(i == j ? 1.0 : 0.0);
    }
  optim::SdpOptions opt;
  opt.gap_tol = 1e-9;
  opt.feas_tol = 1e-9;
  auto sol = optim::sdp_solve(p, opt);
  if (sol.status != optim::Status::optimal && sol.status != optim::Status::stalled)
    throw std::runtime_error("see-saw POVM update failed");
  std::vector<MatrixXcd> out;
  out.reserve(outcomes);
  for (int a = 0; a < outcomes; ++a) out.push_back(unembed(sol.X[a]));
  // clean up: clip tiny negative parts and re-normalize completeness
  MatrixXcd sum = MatrixXcd::Zero(d, d);
  for (auto& m : out) sum += m;
  MatrixXcd corr = MatrixXcd::Identity(d, d) - sum;
  out[0] += corr;  // absorb solver slack into one element (norm ~ feas tol)
  return out;
}

struct SeesawWorkspace {
  const BellExpression& expr;
  std::vector<int> dims;
  QuantumModel model;

  explicit SeesawWorkspace(const BellExpression& e) : expr(e) {}

  double value() const { return bell_operator_value(expr, model); }

  // conditioned operators R_{a|x} for party k given everyone else
  std::vector<std::vector<MatrixXcd>> conditioned(int k) const {
    const Scenario& sc = expr.scenario;
    const int dk = dims[k];
    std::vector<std::vector<MatrixXcd>> r(
        sc.inputs[k], std::vector<MatrixXcd>(sc.outputs[k], MatrixXcd::Zero(dk, dk)));
    const long nin = sc.input_tuples();
    const long nout = sc.output_tuples();
    for (long i = 0; i < nin; ++i) {
      std::vector<int> x = sc.decode_input(i);
      // enumerate the other parties' outcomes once per input tuple
      std::vector<int> others;
      for (int j = 0; j < sc.parties; ++j)
        if (j != k) others.push_back(j);
      std::vector<int> a(sc.parties, 0);
      for (;;) {
        // tr(rho (A_k x M_others)) = tr_k(A_k T) with
        // T = Tr_{!=k}[rho (I_k x M_others)]
        std::vector<MatrixXcd> ops(sc.parties);
        for (int j : others) ops[j] = model.measurements[j].ops[x[j]][a[j]];
        ops[k] = MatrixXcd::Identity(dk, dk);
        MatrixXcd t = partial_trace_keep(model.state.rho * kron_all(ops),
                                         dims, k);
        for (int ak = 0; ak < sc.outputs[k]; ++ak) {
          a[k] = ak;
          const double c = expr.s[i * nout + sc.output_index(a)];
          if (c != 0.0) r[x[k]][ak] += c * t;
        }
        a[k] = 0;
        int pos = static_cast<int>(others.size()) - 1;
        while (pos >= 0 && ++a[others[pos]] >= sc.outputs[others[pos]])
          a[others[pos--]] = 0;
        if (pos < 0) break;
      }
    }
    return r;
  }

  void update_party(int k) {
    auto r = conditioned(k);
    const Scenario& sc = expr.scenario;
    for (int x = 0; x < sc.inputs[k]; ++x) {
      if (sc.outputs[k] == 2) {
        MatrixXcd h = 0.5 * (r[x][0] - r[x][1]);
        h = 0.5 * (h + h.adjoint()).eval();
        MatrixXcd m0, m1;
        sign_projectors(h, m0, m1);
        model.measurements[k].ops[x] = {m0, m1};
      } else {
        model.measurements[k].ops[x] = optimal_povm(r[x]);
      }
    }
  }

  void update_state() {
    MatrixXcd op = bell_operator(expr, model.measurements, dims);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (op + op.adjoint()).eval());
    const int top = static_cast<int>(op.rows()) - 1;
    VectorXcd v = es.eigenvectors().col(top);
    model.state.rho = v * v.adjoint();
  }
};

SeesawResult seesaw_run(const BellExpression& expr, const std::vector<int>& dims,
                        const DensityMatrix* fixed_state, const SeesawOptions& opt) {
  const Scenario& sc = expr.scenario;
  if (static_cast<int>(dims.size()) != sc.parties)
    throw dimension_error("seesaw: one local dimension per party required");
  for (int d : dims)
    if (d < 2) throw dimension_error("seesaw: local dimensions must be >= 2");
  if (opt.restarts < 1) throw std::invalid_argument("seesaw: restarts >= 1 required");

  std::vector<SeesawResult> results(opt.restarts);
  parallel_for(opt.jobs, opt.restarts, [&](int restart) {
    Rng rng(split_seed(opt.seed, restart));
    SeesawWorkspace w(expr);
    w.dims = dims;
    w.model.measurements.clear();
    if (fixed_state) {
      w.model.state = *fixed_state;
    } else {
      long total = 1;
      for (int d : dims) total *= d;
      VectorXcd v(total);
      for (long i = 0; i < total; ++i)
        v[i] = complex<double>(rng.gaussian(), rng.gaussian());
      v.normalize();
      w.model.state.dims = dims;
      w.model.state.rho = v * v.adjoint();
    }
    w.model.state.dims = dims;
    for (int k = 0; k < sc.parties; ++k)
      w.model.measurements.push_back(
          random_measurements(dims[k], sc.inputs[k], sc.outputs[k], rng));

    SeesawResult res;
    double value = w.value();
    for (res.sweeps = 0; res.sweeps < opt.max_sweeps; ++res.sweeps) {
      for (int k = 0; k < sc.parties; ++k) w.update_party(k);
      if (!fixed_state) w.update_state();
      const double next = w.value();
      if (next < value + opt.improvement_tol) {
        value = std::max(value, next);
        res.converged = true;
        break;
      }
      value = next;
    }
    res.value = w.value();
    res.model = w.model;
    results[restart] = std::move(res);
  });

  int best = 0;
  for (int i = 1; i < opt.restarts; ++i)
    if (results[i].value > results[best].value) best = i;
  return results[best];
}

}  // namespace

SeesawResult seesaw_lower_bound(const BellExpression& expr,
                                const std::vector<int>& dims,
                                const SeesawOptions& opt) {
  return seesaw_run(expr, dims, nullptr, opt);
}

SeesawResult seesaw_fixed_state(const BellExpression& expr, const DensityMatrix& rho,
                                const SeesawOptions& opt) {
  return seesaw_run(expr, rho.dims, &rho, opt);
}

// --- two-qubit criteria ----------------------------------------------------------

double chsh_horodecki(const DensityMatrix& rho) {
  if (rho.dims != std::vector<int>{2, 2})
    throw dimension_error("chsh_horodecki: two qubits required");
  const MatrixXcd* sig[3] = {&pauli_x(), &pauli_y(), &pauli_z()};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t(i, j) = (rho.rho * kron(*sig[i], *sig[j])).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
  const auto& ev = es.eigenvalues();
  return 2.0 * std::sqrt(ev[2] + ev[1]);
}

// --- canonical states ----------------------------------------------------------

DensityMatrix singlet() {
  VectorXcd psi = VectorXcd::Zero(4);
  psi[1] = 1 / kSqrt2;
  psi[2] = -1 / kSqrt2;
  return {{2, 2}, psi * psi.adjoint()};
}

StateInfo werner_2q(double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("werner_2q: p in [0,1] required");
  VectorXcd phi = VectorXcd::Zero(4);
  phi[0] = phi[3] = 1 / kSqrt2;
  StateInfo info;
  info.state = {{2, 2},
                p * (phi * phi.adjoint()) + (1 - p) / 4.0 * MatrixXcd::Identity(4, 4)};
  info.bounds["separable"] = 1.0 / 3.0;
  info.bounds["local_projective"] = 0.5;
  info.bounds["chsh_violation_above"] = 1.0 / kSqrt2;
  return info;
}

StateInfo werner_d(double p, int d) {
  if (p < 0 || p > 1 || d < 2) throw std::invalid_argument("werner_d: bad parameters");
  const int n = d * d;
  // projector on the antisymmetric subspace: (I - F)/2 with F the swap
  MatrixXcd f = MatrixXcd::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  MatrixXcd panti = 0.5 * (MatrixXcd::Identity(n, n) - f);
  StateInfo info;
  info.state = {{d, d},
                p * 2.0 / (d * (d - 1.0)) * panti +
                    (1 - p) / static_cast<double>(n) * MatrixXcd::Identity(n, n)};
  info.bounds["separable"] = 1.0 / (d + 1.0);
  info.bounds["local_projective"] = (d - 1.0) / d;
  info.bounds["local_povm"] =
      std::pow(d - 1.0, d - 1.0) * (3.0 * d - 1.0) / ((d + 1.0) * std::pow(d, d));
  return info;
}

StateInfo isotropic(double p, int d) {
  if (p < 0 || p > 1 || d < 2) throw std::invalid_argument("isotropic: bad parameters");
  const int n = d * d;
  VectorXcd phi = VectorXcd::Zero(n);
  for (int i = 0; i < d; ++i) phi[i * d + i] = 1.0 / std::sqrt(d);
  StateInfo info;
  info.state = {{d, d},
                p * (phi * phi.adjoint()) +
                    (1 - p) / static_cast<double>(n) * MatrixXcd::Identity(n, n)};
  info.bounds["separable"] = 1.0 / (d + 1.0);
  double harmonic = 0;
  for (int k = 1; k <= d; ++k) harmonic += 1.0 / k;
  info.bounds["local_projective"] = (harmonic - 1.0) / (d - 1.0);
  info.bounds["local_povm"] =
      std::pow(d - 1.0, d - 1.0) * (3.0 * d - 1.0) / ((d + 1.0) * std::pow(d, d));
  return info;
}

DensityMatrix ghz_state(int n, int d) {
  if (n < 2 || d < 2) throw std::invalid_argument("ghz: n, d >= 2 required");
  long total = 1;
  for (int k = 0; k < n; ++k) total *= d;
  VectorXcd psi = VectorXcd::Zero(total);
  for (int j = 0; j < d; ++j) {
    long idx = 0;
    for (int k = 0; k < n; ++k) idx = idx * d + j;
    psi[idx] = 1.0 / std::sqrt(d);
  }
  return {std::vector<int>(n, d), psi * psi.adjoint()};
}

DensityMatrix partially_entangled(double theta) {
  VectorXcd psi = VectorXcd::Zero(4);
  psi[0] = std::cos(theta);
  psi[3] = std::sin(theta);
  return {{2, 2}, psi * psi.adjoint()};
}

DensityMatrix hardy_state(double theta) {
  if (!(theta > 0 && theta < M_PI / 2))
    throw std::invalid_argument("hardy_state: theta in (0, pi/2) required");
  const double beta = 1.0 / std::sqrt(1.0 + 2.0 * std::pow(std::tan(theta), 2));
  const double alpha = beta * std::tan(theta);
  VectorXcd psi = VectorXcd::Zero(4);
  psi[0] = beta;
  psi[1] = alpha;
  psi[2] = alpha;
  return {{2, 2}, psi * psi.adjoint()};
}

DensityMatrix cluster4_state() {
  VectorXcd psi = VectorXcd::Zero(16);
  psi[0b0000] = 0.5;
  psi[0b0011] = 0.5;
  psi[0b1100] = 0.5;
  psi[0b1111] = -0.5;
  return {{2, 2, 2, 2}, psi * psi.adjoint()};
}

std::pair<DensityMatrix, double> local_filter(const DensityMatrix& rho,
                                              const MatrixXcd& fa,
                                              const MatrixXcd& fb) {
  if (rho.dims.size() != 2) throw dimension_error("local_filter: bipartite state required");
  Eigen::JacobiSVD<MatrixXcd> sa(fa), sb(fb);
  if (sa.singularValues().maxCoeff() > 1 + 1e-9 ||
      sb.singularValues().maxCoeff() > 1 + 1e-9)
    throw std::invalid_argument("local_filter: filters must satisfy ||F|| <= 1");
  MatrixXcd f = kron(fa, fb);
  MatrixXcd out = f * rho.rho * f.adjoint();
  const double prob = out.trace().real();
  if (prob < 1e-14) throw std::runtime_error("local_filter: zero success probability");
  return {{rho.dims, out / prob}, prob};
}

// --- paradoxes -------------------------------------------------------------------

namespace {
MeasurementSet projective_from_observables(const std::vector<MatrixXcd>& obs) {
  MeasurementSet ms;
  for (const auto& o : obs) {
    MatrixXcd m0, m1;
    sign_projectors(o, m0, m1);
    ms.ops.push_back({m0, m1});
  }
  return ms;
}
}  // namespace

QuantumModel ghz_model(double visibility) {
  QuantumModel m;
  m.state = ghz_state(3, 2);
  if (visibility < 1.0)
    m.state.rho = visibility * m.state.rho +
                  (1 - visibility) / 8.0 * MatrixXcd::Identity(8, 8);
  for (int k = 0; k < 3; ++k)
    m.measurements.push_back(projective_from_observables({pauli_x(), pauli_y()}));
  return m;
}

GhzCheck ghz_paradox_check(const QuantumModel& m) {
  const Scenario sc = m.scenario();
  if (sc.parties != 3 || sc.inputs != std::vector<int>{2, 2, 2} ||
      sc.outputs != std::vector<int>{2, 2, 2})
    throw dimension_error("ghz_paradox_check: (3,2,2) model required");
  Behavior b = born_behavior(m);
  auto corr = [&](int x, int y, int z) {
    double e = 0;
    for (int a = 0; a < 2; ++a)
      for (int bb = 0; bb < 2; ++bb)
        for (int c = 0; c < 2; ++c)
          e += ((a + bb + c) % 2 ? -1.0 : 1.0) * b.at({a, bb, c}, {x, y, z});
    return e;
  };
  GhzCheck out{};
  out.residuals[0] = std::abs(corr(0, 0, 0) - 1.0);
  out.residuals[1] = std::abs(corr(0, 1, 1) + 1.0);
  out.residuals[2] = std::abs(corr(1, 0, 1) + 1.0);
  out.residuals[3] = std::abs(corr(1, 1, 0) + 1.0);
  out.mermin_value = evaluate(mermin3(), b);
  return out;
}

QuantumModel hardy_model(double theta) {
  QuantumModel m;
  m.state = hardy_state(theta);
  // input 0: computational with outcome 0 = |1><1|; input 1: outcome 0 is the
  // projector orthogonal to phi = cos t |0> + sin t |1>.
  MatrixXcd p1 = MatrixXcd::Zero(2, 2);
  p1(1, 1) = 1.0;
  VectorXcd phi(2), phip(2);
  phi << std::cos(theta), std::sin(theta);
  phip << std::sin(theta), -std::cos(theta);
  MeasurementSet ms;
  ms.ops.push_back({p1, MatrixXcd::Identity(2, 2) - p1});
  ms.ops.push_back({phip * phip.adjoint(), phi * phi.adjoint()});
  m.measurements = {ms, ms};
  return m;
}

HardyCheck hardy_check(double theta) {
  QuantumModel m = hardy_model(theta);
  Behavior b = born_behavior(m);
  HardyCheck out{};
  out.zero_residuals[0] = std::abs(b.at({0, 0}, {0, 0}));
  out.zero_residuals[1] = std::abs(b.at({0, 1}, {1, 0}));
  out.zero_residuals[2] = std::abs(b.at({1, 0}, {0, 1}));
  out.p_hardy = b.at({0, 0}, {1, 1});
  const double beta = 1.0 / std::sqrt(1.0 + 2.0 * std::pow(std::tan(theta), 2));
  out.p_hardy_printed = 2.0 * beta * std::pow(std::sin(theta), 2);
  return out;
}

HardyMaximum hardy_maximum(double tol) {
  // golden-section search on the Born-rule p_hardy over (0, pi/2)
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-6, b = M_PI / 2 - 1e-6;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  auto f = [](double t) { return hardy_check(t).p_hardy; };
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

QuantumModel singlet_optimal_model() {
  QuantumModel m;
  m.state = singlet();
  MatrixXcd b0 = -(pauli_x() + pauli_z()) / kSqrt2;
  MatrixXcd b1 = (pauli_z() - pauli_x()) / kSqrt2;
  m.measurements = {projective_from_observables({pauli_x(), pauli_z()}),
                    projective_from_observables({b0, b1})};
  return m;
}

QuantumModel ghz_svetlichny_model() {
  QuantumModel m;
  m.state = ghz_state(3, 2);
  auto planar = [](double phase) {
    return (std::cos(phase) * pauli_x() + std::sin(phase) * pauli_y()).eval();
  };
  m.measurements = {
      projective_from_observables({planar(0), planar(M_PI / 2)}),
      projective_from_observables({planar(0), planar(M_PI / 2)}),
      projective_from_observables({planar(-3 * M_PI / 4), planar(-M_PI / 4)})};
  return m;
}

QuantumModel cluster4_model() {
  // Settings matched to the stabilizers of the printed |Cl4> (which is only
  // locally equivalent to the lattice cluster state): the four inequality
  // terms evaluate the stabilizer elements Z I X X, -Z I Y Y, Y X Y X and
  // Y X X Y, the sign absorbed into party 4's primed observable.
  QuantumModel m;
  m.state = cluster4_state();
  m.measurements = {projective_from_observables({pauli_z(), pauli_y()}),
                    projective_from_observables({pauli_x(), pauli_x()}),
                    projective_from_observables({pauli_y(), pauli_x()}),
                    projective_from_observables({pauli_x(), (-pauli_y()).eval()})};
  return m;
}

MonogamyResult monogamy_chsh(const QuantumModel& m) {
  const Scenario sc = m.scenario();
  if (sc.parties != 3) throw dimension_error("monogamy_chsh: three parties required");
  for (int k = 0; k < 3; ++k)
    if (sc.inputs[k] != 2 || sc.outputs[k] != 2)
      throw dimension_error("monogamy_chsh: two binary settings per party required");
  auto corr2 = [&](int other, int x, int xo) {
    std::vector<MatrixXcd> ops(3, MatrixXcd::Identity(2, 2));
    ops[0] = observable(m.measurements[0], x);
    ops[other] = observable(m.measurements[other], xo);
    return (m.state.rho * kron_all(ops)).trace().real();
  };
  auto chsh_pair = [&](int other) {
    double v = 0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        v += ((x == 1 && y == 1) ? -1.0 : 1.0) * corr2(other, x, y);
    return v;
  };
  MonogamyResult r{};
  r.chsh_ab = chsh_pair(1);
  r.chsh_ac = chsh_pair(2);
  r.quadratic_sum = r.chsh_ab * r.chsh_ab + r.chsh_ac * r.chsh_ac;
  return r;
}

// --- graph states -------------------------------------------------------------------

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  for (auto [a, b] : edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::connected() const {
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : neighbors(u))
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n;
}

VectorXcd graph_state_vector(const Graph& g) {
  if (g.n < 1 || g.n > 10)
    throw std::invalid_argument("graph_state: 1 <= n <= 10 required");
  const long total = 1L << g.n;
  VectorXcd psi = VectorXcd::Constant(total, 1.0 / std::sqrt(double(total)));
  for (auto [a, b] : g.edges)
    for (long idx = 0; idx < total; ++idx)
      if (((idx >> (g.n - 1 - a)) & 1) && ((idx >> (g.n - 1 - b)) & 1)) psi[idx] = -psi[idx];
  return psi;
}

DensityMatrix graph_state(const Graph& g) {
  VectorXcd psi = graph_state_vector(g);
  return {std::vector<int>(g.n, 2), psi * psi.adjoint()};
}

namespace {

// single-qubit Pauli algebra on codes 0=I,1=X,2=Y,3=Z with phases
struct PauliProduct {
  int code;
  complex<double> phase;
};

PauliProduct pauli_mul(int a, int b) {
  if (a == 0) return {b, 1.0};
  if (b == 0) return {a, 1.0};
  if (a == b) return {0, 1.0};
  // XY=iZ, YZ=iX, ZX=iY and anti-cyclic with -i
  static const int res[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const bool cyclic = (a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1);
  return {res[a][b], cyclic ? complex<double>(0, 1) : complex<double>(0, -1)};
}

// Stabilizer elements as (sign, code per qubit); 2^n of them.
struct StabilizerElement {
  double sign;
  std::vector<int> codes;
};

std::vector<StabilizerElement> stabilizer_group(const Graph& g) {
  std::vector<StabilizerElement> out;
  out.reserve(1L << g.n);
  for (long subset = 0; subset < (1L << g.n); ++subset) {
    std::vector<int> codes(g.n, 0);
    complex<double> phase = 1.0;
    for (int i = 0; i < g.n; ++i) {
      if (!((subset >> i) & 1)) continue;
      // multiply by g_i = X_i prod_{j in neigh(i)} Z_j
      auto mul_at = [&](int q, int c) {
        PauliProduct pr = pauli_mul(codes[q], c);
        codes[q] = pr.code;
        phase *= pr.phase;
      };
      mul_at(i, 1);
      for (int j : g.neighbors(i)) mul_at(j, 3);
    }
    if (std::abs(phase.imag()) > 1e-12)
      throw std::logic_error("stabilizer element with non-real phase");
    out.push_back({phase.real(), std::move(codes)});
  }
  return out;
}

}  // namespace

BellExpression stabilizer_bell_expression(const Graph& g) {
  Scenario sc = Scenario::homogeneous(g.n, 3, 2);
  std::vector<CorrelatorTerm> terms;
  for (const auto& el : stabilizer_group(g)) {
    CorrelatorTerm t;
    t.coefficient = el.sign;
    t.input_per_party.resize(g.n);
    for (int q = 0; q < g.n; ++q) {
      if (el.codes[q] == 0)
        t.input_per_party[q] = std::nullopt;
      else
        t.input_per_party[q] = el.codes[q] - 1;  // X->0, Y->1, Z->2
    }
    terms.push_back(std::move(t));
  }
  ExpressionMeta meta;
  meta.name = "graph_state_bell";
  meta.quantum_bound = {std::pow(2.0, g.n), "paper"};
  return expression_from_correlator_terms(sc, terms, std::move(meta));
}

double l_of_g(const Graph& g) {
  if (g.n > 6) throw std::invalid_argument("l_of_g: n <= 6 required");
  auto group = stabilizer_group(g);
  // precompute per element and qubit the pauli code
  const long nassign = 1L << (3 * g.n);  // 8 options per qubit
  double best = 0;
  std::vector<double> v(3 * g.n);
  for (long mask = 0; mask < nassign; ++mask) {
    for (int q = 0; q < g.n; ++q)
      for (int p = 0; p < 3; ++p)
        v[3 * q + p] = ((mask >> (3 * q + p)) & 1) ? -1.0 : 1.0;
    double total = 0;
    for (const auto& el : group) {
      double t = el.sign;
      for (int q = 0; q < g.n; ++q)
        if (el.codes[q] != 0) t *= v[3 * q + el.codes[q] - 1];
      total += t;
    }
    best = std::max(best, std::abs(total));
  }
  return best;
}

double stabilizer_quantum_value(const Graph& g) {
  VectorXcd psi = graph_state_vector(g);
  const long total = psi.size();
  double value = 0;
  for (const auto& el : stabilizer_group(g)) {
    // apply the pauli string to psi
    VectorXcd out = VectorXcd::Zero(total);
    for (long idx = 0; idx < total; ++idx) {
      long target = idx;
      complex<double> amp = psi[idx];
      for (int q = 0; q < g.n; ++q) {
        const int bitpos = g.n - 1 - q;
        const int bit = (idx >> bitpos) & 1;
        switch (el.codes[q]) {
          case 0: break;
          case 1: target ^= (1L << bitpos); break;              // X
          case 2:                                               // Y
            target ^= (1L << bitpos);
            amp *= bit ? -kI : kI;
            break;
          case 3: amp *= bit ? -1.0 : 1.0; break;               // Z
        }
      }
      out[target] += amp;
    }
    value += el.sign * (psi.adjoint() * out).value().real();
  }
  return value;
}

QuantumModel graph_model(const Graph& g) {
  QuantumModel m;
  m.state = graph_state(g);
  for (int q = 0; q < g.n; ++q)
    m.measurements.push_back(
        projective_from_observables({pauli_x(), pauli_y(), pauli_z()}));
  return m;
}

}  // namespace bell::quantum
