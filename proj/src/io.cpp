#include "bell/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace bell::io {

json scenario_to_json(const Scenario& sc) {
  return json{{"parties", sc.parties}, {"inputs", sc.inputs}, {"outputs", sc.outputs}};
}

Scenario scenario_from_json(const json& j) {
  Scenario sc(j.at("inputs").get<std::vector<int>>(),
              j.at("outputs").get<std::vector<int>>());
  if (j.contains("parties") && j.at("parties").get<int>() != sc.parties)
    throw std::invalid_argument("scenario: parties field inconsistent with inputs");
  return sc;
}

json behavior_to_json(const Behavior& b) {
  return json{{"scenario", scenario_to_json(b.scenario)}, {"p", b.p}};
}

Behavior behavior_from_json(const json& j) {
  return Behavior(scenario_from_json(j.at("scenario")),
                  j.at("p").get<std::vector<double>>());
}

json expression_to_json(const BellExpression& e) {
  json meta = json::object();
  if (e.meta.local_bound) meta["local_bound"] = e.meta.local_bound->value;
  if (e.meta.quantum_bound) meta["quantum_bound"] = e.meta.quantum_bound->value;
  if (e.meta.ns_bound) meta["ns_bound"] = e.meta.ns_bound->value;
  if (e.meta.svetlichny_bound) meta["svetlichny_bound"] = e.meta.svetlichny_bound->value;
  if (!e.meta.name.empty()) meta["name"] = e.meta.name;
  if (e.meta.negated_ge_form) meta["negated_ge_form"] = true;
  if (e.meta.kl_strength_bits) meta["kl_strength_bits"] = *e.meta.kl_strength_bits;
  return json{{"scenario", scenario_to_json(e.scenario)}, {"s", e.s}, {"meta", meta}};
}

BellExpression expression_from_json(const json& j) {
  BellExpression e(scenario_from_json(j.at("scenario")),
                   j.at("s").get<std::vector<double>>());
  if (j.contains("meta")) {
    const json& m = j.at("meta");
    if (m.contains("local_bound"))
      e.meta.local_bound = BoundInfo{m.at("local_bound").get<double>(), "file"};
    if (m.contains("quantum_bound"))
      e.meta.quantum_bound = BoundInfo{m.at("quantum_bound").get<double>(), "file"};
    if (m.contains("ns_bound"))
      e.meta.ns_bound = BoundInfo{m.at("ns_bound").get<double>(), "file"};
    if (m.contains("svetlichny_bound"))
      e.meta.svetlichny_bound = BoundInfo{m.at("svetlichny_bound").get<double>(), "file"};
    if (m.contains("name")) e.meta.name = m.at("name").get<std::string>();
    if (m.contains("negated_ge_form"))
      e.meta.negated_ge_form = m.at("negated_ge_form").get<bool>();
    if (m.contains("kl_strength_bits"))
      e.meta.kl_strength_bits = m.at("kl_strength_bits").get<double>();
  }
  return e;
}

json matrix_to_json(const quantum::MatrixXcd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      rows.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return rows;
}

quantum::MatrixXcd matrix_from_json(const json& j, int dim) {
  if (static_cast<int>(j.size()) != dim * dim)
    throw std::invalid_argument("matrix: expected dim^2 (re,im) pairs");
  quantum::MatrixXcd m(dim, dim);
  long k = 0;
  for (int i = 0; i < dim; ++i)
    for (int jj = 0; jj < dim; ++jj) {
      m(i, jj) = std::complex<double>(j.at(k).at(0).get<double>(),
                                      j.at(k).at(1).get<double>());
      ++k;
    }
  return m;
}

json model_to_json(const quantum::QuantumModel& m) {
  json meas = json::array();
  for (const auto& party : m.measurements) {
    json inputs = json::array();
    for (const auto& input : party.ops) {
      json outcomes = json::array();
      for (const auto& op : input) outcomes.push_back(matrix_to_json(op));
      inputs.push_back(outcomes);
    }
    meas.push_back(inputs);
  }
  return json{{"dims", m.state.dims},
              {"rho", matrix_to_json(m.state.rho)},
              {"measurements", meas}};
}

quantum::QuantumModel model_from_json(const json& j, double* hermiticity_residual) {
  quantum::QuantumModel m;
  m.state.dims = j.at("dims").get<std::vector<int>>();
  const int total = m.state.total_dim();
  quantum::MatrixXcd rho = matrix_from_json(j.at("rho"), total);
  double res = (rho - rho.adjoint()).norm();
  m.state.rho = 0.5 * (rho + rho.adjoint());
  const json& meas = j.at("measurements");
  if (static_cast<int>(meas.size()) != static_cast<int>(m.state.dims.size()))
    throw std::invalid_argument("model: one measurement list per party required");
  for (size_t party = 0; party < meas.size(); ++party) {
    quantum::MeasurementSet ms;
    for (const auto& input : meas.at(party)) {
      std::vector<quantum::MatrixXcd> ops;
      for (const auto& op : input) {
        quantum::MatrixXcd o = matrix_from_json(op, m.state.dims[party]);
        res = std::max(res, (o - o.adjoint()).norm());
        ops.push_back(0.5 * (o + o.adjoint()));
      }
      ms.ops.push_back(std::move(ops));
    }
    m.measurements.push_back(std::move(ms));
  }
  if (hermiticity_residual) *hermiticity_residual = res;
  return m;
}

namespace {

std::string format_double(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    // integral value: still emit a decimal so the field stays a float
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_rec(const json& j, std::string& out, int indent, int depth) {
  auto pad = [&](int d) {
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<size_t>(indent) * d, ' ');
    }
  };
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += (indent >= 0) ? ": " : ":";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      if (!first) pad(depth);
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        dump_rec(v, out, indent, depth + 1);
      }
      if (!first) pad(depth);
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();
      break;
  }
}

}  // namespace

std::string dump17(const json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << dump17(j, 1) << "\n";
}

}  // namespace bell::io
