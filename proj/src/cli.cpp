#include "bell/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "bell/diagnostics.hpp"
#include "bell/npa.hpp"
#include "bell/polytopes.hpp"
#include "bell/quantum.hpp"
#include "bell/simulate.hpp"

namespace bell::cli {

namespace {

using io::json;

std::string num6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

BellExpression resolve_expression(const std::string& spec, const std::string& params) {
  if (std::filesystem::exists(spec))
    return io::expression_from_json(io::load_json_file(spec));
  return catalog(spec, parse_int_list(params));
}

json certificate_json(const polytopes::SeparatingCertificate& c) {
  return json{{"expression", io::expression_to_json(c.expression)},
              {"bound", c.bound},
              {"violation", c.violation}};
}

json membership_json(const polytopes::MembershipVerdict& v) {
  json out{{"inside", v.inside}};
  if (v.inside) {
    json w = json::array();
    for (const auto& vw : v.weights)
      w.push_back(json{{"vertex", vw.vertex_index}, {"weight", vw.weight}});
    out["weights"] = w;
    out["reconstruction_residual"] = v.reconstruction_residual;
  } else if (v.certificate) {
    out["certificate"] = certificate_json(*v.certificate);
  }
  return out;
}

struct Ctx {
  bool json_only = false;
  bool verbose = false;
  std::uint64_t seed = 1;
  int jobs = 1;
  CommandResult result;
};

void cmd_validate(Ctx& ctx, const std::string& file) {
  Behavior b = io::behavior_from_json(io::load_json_file(file));
  auto rep = validate_behavior(b);
  const double ns = no_signaling_residual(b);
  ctx.result.payload = json{{"pass", rep.pass},
                            {"positivity_residual", rep.positivity_residual},
                            {"normalization_residual", rep.normalization_residual},
                            {"ns_residual", ns}};
  std::ostringstream t;
  t << "validate: " << (rep.pass ? "pass" : "FAIL") << "\n"
    << "  positivity residual    " << num6(rep.positivity_residual) << "\n"
    << "  normalization residual " << num6(rep.normalization_residual) << "\n"
    << "  no-signaling residual  " << num6(ns) << "\n";
  ctx.result.table = t.str();
}

void cmd_membership(Ctx& ctx, const std::string& set, const std::string& file,
                    const std::string& level) {
  Behavior b = io::behavior_from_json(io::load_json_file(file));
  std::ostringstream t;
  if (set == "local" || set == "svetlichny") {
    auto v = set == "local" ? polytopes::local_membership(b)
                            : polytopes::svetlichny_membership(b);
    ctx.result.payload = membership_json(v);
    ctx.result.payload["set"] = set;
    t << set << " membership: " << (v.inside ? "inside" : "outside") << "\n";
    if (v.inside) {
      t << "  support size " << v.weights.size() << ", reconstruction residual "
        << num6(v.reconstruction_residual) << "\n";
    } else if (v.certificate) {
      t << "  separating inequality: bound " << num6(v.certificate->bound)
        << ", violation " << num6(v.certificate->violation) << "\n";
    }
  } else if (set == "ns") {
    auto v = polytopes::ns_membership(b);
    ctx.result.payload = json{{"set", "ns"},
                              {"inside", v.inside},
                              {"ns_residual", v.ns_residual},
                              {"positivity_residual", v.positivity_residual}};
    t << "ns membership: " << (v.inside ? "inside" : "outside") << "\n"
      << "  ns residual " << num6(v.ns_residual) << ", positivity residual "
      << num6(v.positivity_residual) << "\n";
  } else if (set == "q1") {
    const double margin = npa::q1_analytic_margin(b);
    const bool inside = margin >= -1e-9;
    ctx.result.payload = json{{"set", "q1"}, {"inside", inside}, {"margin", margin}};
    t << "q1 analytic membership: " << (inside ? "inside" : "outside")
      << " (margin " << num6(margin) << ")\n";
  } else if (set == "npa1") {
    auto r = npa::npa_membership(
        b, level == "1+ab" ? npa::Level::one_ab : npa::Level::one);
    ctx.result.payload =
        json{{"set", "npa1"}, {"inside", r.feasible}, {"slack", r.slack}};
    if (ctx.verbose) {
      json gamma = json::array();
      for (int i = 0; i < r.gamma.rows(); ++i)
        for (int j = 0; j < r.gamma.cols(); ++j) gamma.push_back(r.gamma(i, j));
      ctx.result.payload["gamma"] = gamma;
      ctx.result.payload["monomials"] = r.labels;
    }
    t << "npa level-" << (level == "1+ab" ? "1+AB" : "1")
      << " membership: " << (r.feasible ? "feasible" : "infeasible") << " (slack "
      << num6(r.slack) << ")\n";
  } else {
    throw CLI::ValidationError("membership", "unknown set: " + set);
  }
  ctx.result.table = t.str();
}

void cmd_bound(Ctx& ctx, const std::string& expr_spec, const std::string& params,
               const std::string& set, const std::string& level, int restarts,
               const std::string& dims_str) {
  BellExpression e = resolve_expression(expr_spec, params);
  std::ostringstream t;
  json payload{{"expression", e.meta.name.empty() ? expr_spec : e.meta.name},
               {"set", set}};
  double value = 0.0;
  if (set == "local") {
    value = polytopes::local_bound(e).value;
  } else if (set == "ns") {
    value = polytopes::ns_bound(e);
  } else if (set == "svetlichny") {
    value = polytopes::svetlichny_bound(e);
  } else if (set == "quantum-upper") {
    auto r = npa::npa_upper_bound(
        e, level == "1+ab" ? npa::Level::one_ab : npa::Level::one);
    if (r.status == optim::Status::stalled)
      throw cap_error("npa upper bound: SDP stalled");
    value = r.value;
    payload["sdp_gap"] = r.gap;
    if (ctx.verbose) payload["monomials"] = r.labels;
  } else if (set == "quantum-lower") {
    std::vector<int> dims = dims_str.empty() ? std::vector<int>(e.scenario.parties, 2)
                                             : parse_int_list(dims_str);
    quantum::SeesawOptions opt;
    opt.restarts = restarts;
    opt.seed = ctx.seed;
    opt.jobs = ctx.jobs;
    auto r = quantum::seesaw_lower_bound(e, dims, opt);
    value = r.value;
    payload["converged"] = r.converged;
    if (ctx.verbose) payload["model"] = io::model_to_json(r.model);
  } else {
    throw CLI::ValidationError("bound", "unknown set: " + set);
  }
  payload["value"] = value;
  ctx.result.payload = payload;
  t << "bound[" << set << "] of " << (e.meta.name.empty() ? expr_spec : e.meta.name)
    << " = " << num6(value) << "\n";
  ctx.result.table = t.str();
}

void cmd_quantum_value(Ctx& ctx, const std::string& model_file,
                       const std::string& expr_spec, const std::string& params) {
  double herm = 0;
  quantum::QuantumModel m = io::model_from_json(io::load_json_file(model_file), &herm);
  m.validate();
  BellExpression e = resolve_expression(expr_spec, params);
  Behavior b = quantum::born_behavior(m);
  const double via_behavior = evaluate(e, b);
  const double via_operator = quantum::bell_operator_value(e, m);
  ctx.result.payload = json{{"value", via_behavior},
                            {"bell_operator_value", via_operator},
                            {"hermiticity_residual", herm}};
  std::ostringstream t;
  t << "quantum value = " << num6(via_behavior) << " (Bell operator: "
    << num6(via_operator) << ", load symmetrization residual " << num6(herm) << ")\n";
  ctx.result.table = t.str();
}

void cmd_catalog(Ctx& ctx, const std::string& action, const std::string& name,
                 const std::string& params) {
  if (action == "list") {
    ctx.result.payload = json{{"names", catalog_names()}};
    std::ostringstream t;
    t << "catalog entries:\n";
    for (const auto& n : catalog_names()) t << "  " << n << "\n";
    ctx.result.table = t.str();
    return;
  }
  BellExpression e = catalog(name, parse_int_list(params));
  ctx.result.payload = io::expression_to_json(e);
  std::ostringstream t;
  t << e.meta.name << " on (" << e.scenario.parties << " parties, m="
    << e.scenario.inputs[0] << ", d=" << e.scenario.outputs[0] << ")\n";
  if (e.meta.local_bound)
    t << "  local bound      " << num6(e.meta.local_bound->value) << "  ["
      << e.meta.local_bound->provenance << "]\n";
  if (e.meta.quantum_bound)
    t << "  quantum bound    " << num6(e.meta.quantum_bound->value) << "  ["
      << e.meta.quantum_bound->provenance << "]\n";
  if (e.meta.ns_bound)
    t << "  ns bound         " << num6(e.meta.ns_bound->value) << "  ["
      << e.meta.ns_bound->provenance << "]\n";
  if (e.meta.svetlichny_bound)
    t << "  svetlichny bound " << num6(e.meta.svetlichny_bound->value) << "  ["
      << e.meta.svetlichny_bound->provenance << "]\n";
  if (e.meta.kl_strength_bits)
    t << "  KL strength      " << num6(*e.meta.kl_strength_bits) << " bits\n";
  if (e.meta.negated_ge_form)
    t << "  stored negated (native form is a >= inequality)\n";
  ctx.result.table = t.str();
}

void cmd_simulate_werner(Ctx& ctx, long samples, const std::string& directions_file) {
  json dj = io::load_json_file(directions_file);
  std::vector<std::pair<std::array<double, 3>, std::array<double, 3>>> dirs;
  for (const auto& pair : dj.at("directions")) {
    std::array<double, 3> a{}, b{};
    for (int i = 0; i < 3; ++i) {
      a[i] = pair.at(0).at(i).get<double>();
      b[i] = pair.at(1).at(i).get<double>();
    }
    dirs.push_back({a, b});
  }
  auto rep = sim::werner_lhv_estimate(dirs, samples, ctx.seed);
  json pairs = json::array();
  for (const auto& pr : rep.pairs)
    pairs.push_back(json{{"frequency", pr.frequency},
                         {"target", pr.target},
                         {"max_deviation", pr.max_deviation},
                         {"standard_error", pr.standard_error}});
  ctx.result.payload = json{{"samples", rep.samples}, {"seed", rep.seed},
                            {"pass", rep.pass},       {"max_deviation", rep.max_deviation},
                            {"standard_error", rep.standard_error}, {"pairs", pairs}};
  std::ostringstream t;
  t << "werner lhv simulation: " << (rep.pass ? "pass" : "FAIL") << " ("
    << rep.pairs.size() << " direction pairs, N=" << rep.samples << ")\n"
    << "  max deviation " << num6(rep.max_deviation) << " vs 5 sigma = "
    << num6(5 * rep.standard_error) << "\n";
  ctx.result.table = t.str();
}

void cmd_simulate_faking(Ctx& ctx, long samples, bool symmetrized) {
  auto rep = sim::detection_faking_run(samples, ctx.seed, symmetrized);
  ctx.result.payload = json{{"samples", rep.samples},
                            {"seed", rep.seed},
                            {"symmetrized", rep.symmetrized},
                            {"click_rate_alice", rep.click_rate_alice},
                            {"click_rate_bob", rep.click_rate_bob},
                            {"conditional_chsh", rep.conditional_chsh},
                            {"max_deviation_from_pr", rep.max_deviation_from_pr},
                            {"standard_error", rep.standard_error},
                            {"pass", rep.pass},
                            {"conditional", io::behavior_to_json(rep.conditional)}};
  std::ostringstream t;
  t << "detection faking (" << (symmetrized ? "symmetrized" : "asymmetric")
    << "): " << (rep.pass ? "pass" : "FAIL") << "\n"
    << "  click rates (" << num6(rep.click_rate_alice) << ", "
    << num6(rep.click_rate_bob) << ")\n"
    << "  conditional CHSH " << num6(rep.conditional_chsh) << "\n";
  ctx.result.table = t.str();
}

void cmd_prbox_ip(Ctx& ctx, const std::string& xs, const std::string& ys) {
  std::vector<int> x, y;
  for (char c : xs) x.push_back(c - '0');
  for (char c : ys) y.push_back(c - '0');
  Rng rng(ctx.seed);
  auto r = sim::vandam_inner_product(x, y, rng);
  json tr = json::array();
  for (const auto& u : r.transcript)
    tr.push_back(json{{"x", u.x}, {"y", u.y}, {"a", u.a}, {"b", u.b}});
  ctx.result.payload = json{{"output", r.output}, {"message", r.message},
                            {"transcript", tr}};
  std::ostringstream t;
  t << "van Dam inner product: output " << r.output << " (one message bit: "
    << r.message << ", " << r.transcript.size() << " PR boxes)\n";
  ctx.result.table = t.str();
}

void cmd_prbox_ic(Ctx& ctx, int x0, int x1, int k) {
  Rng rng(ctx.seed);
  auto r = sim::info_causality_retrieval(x0, x1, k, rng);
  ctx.result.payload = json{{"guess", r.guess}, {"message", r.message}};
  std::ostringstream t;
  t << "information-causality retrieval: guess " << r.guess << " (x" << k
    << " requested)\n";
  ctx.result.table = t.str();
}

void cmd_randomness(Ctx& ctx, double s, const std::string& model) {
  diag::RandomnessBound r = model == "ns" ? diag::guessing_bound_ns(s)
                                          : diag::guessing_bound_quantum(s);
  ctx.result.payload = json{{"S", r.bell_value},
                            {"model", r.adversary},
                            {"p_guess", r.p_guess},
                            {"min_entropy_bits", r.min_entropy_bits}};
  std::ostringstream t;
  t << "randomness at S=" << num6(s) << " (" << r.adversary << "): p_guess <= "
    << num6(r.p_guess) << ", H_min >= " << num6(r.min_entropy_bits) << " bits\n";
  ctx.result.table = t.str();
}

void cmd_threshold(Ctx& ctx, const std::string& behavior_file,
                   const std::string& assign, double tol) {
  Behavior b = io::behavior_from_json(io::load_json_file(behavior_file));
  auto br = diag::efficiency_threshold(b, parse_int_list(assign), tol);
  ctx.result.payload = json{{"lo", br.lo}, {"hi", br.hi}, {"tol", tol}};
  std::ostringstream t;
  t << "efficiency threshold bracket: [" << num6(br.lo) << ", " << num6(br.hi)
    << "]\n";
  ctx.result.table = t.str();
}

void cmd_strength(Ctx& ctx, const std::string& behavior_file, double gap_tol) {
  Behavior b = io::behavior_from_json(io::load_json_file(behavior_file));
  auto r = diag::statistical_strength(b, gap_tol);
  if (!r.converged) throw cap_error("statistical_strength: Frank-Wolfe stalled");
  ctx.result.payload = json{{"bits", r.bits},
                            {"duality_gap", r.duality_gap},
                            {"iterations", r.iterations}};
  std::ostringstream t;
  t << "statistical strength: " << num6(r.bits) << " bits (gap "
    << num6(r.duality_gap) << ", " << r.iterations << " iterations)\n";
  ctx.result.table = t.str();
}

void cmd_gill(Ctx& ctx, long trials, double epsilon) {
  const double bound = diag::gill_bound(trials, epsilon);
  ctx.result.payload = json{{"trials", trials}, {"epsilon", epsilon}, {"bound", bound}};
  std::ostringstream t;
  t << "gill bound: P(S_obs > 2 + " << num6(epsilon) << ") <= " << num6(bound)
    << " over N=" << trials << " trials\n";
  ctx.result.table = t.str();
}

void cmd_graph_bell(Ctx& ctx, const std::string& edges_file) {
  json j = io::load_json_file(edges_file);
  quantum::Graph g;
  g.n = j.at("n").get<int>();
  for (const auto& e : j.at("edges"))
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  BellExpression e = quantum::stabilizer_bell_expression(g);
  const double lg = g.n <= 6 ? quantum::l_of_g(g) : -1.0;
  const double qv = quantum::stabilizer_quantum_value(g);
  ctx.result.payload = json{{"n", g.n},
                            {"connected", g.connected()},
                            {"quantum_value", qv},
                            {"expression", io::expression_to_json(e)}};
  if (lg >= 0) ctx.result.payload["l_of_g"] = lg;
  std::ostringstream t;
  t << "graph-state Bell expression on " << g.n << " vertices ("
    << (g.connected() ? "connected" : "disconnected") << ")\n"
    << "  quantum value " << num6(qv) << " = 2^n\n";
  if (lg >= 0) t << "  classical bound L(G) " << num6(lg) << "\n";
  ctx.result.table = t.str();
}

void cmd_epr2(Ctx& ctx, const std::string& behavior_file, const std::string& expr_spec,
              const std::string& params) {
  Behavior b = io::behavior_from_json(io::load_json_file(behavior_file));
  const double w = sim::epr2_local_content(b);
  ctx.result.payload = json{{"w_max", w}};
  std::ostringstream t;
  t << "EPR2 local content w_max = " << num6(w) << "\n";
  if (!expr_spec.empty()) {
    BellExpression e = resolve_expression(expr_spec, params);
    const double upper = sim::epr2_upper_from_inequality(b, e);
    ctx.result.payload["inequality_upper_bound"] = upper;
    t << "  inequality upper bound " << num6(upper) << "\n";
  }
  ctx.result.table = t.str();
}

void cmd_scan_eberhard(Ctx& ctx, const std::string& thetas_str, double tol,
                       int restarts) {
  std::vector<double> thetas = parse_double_list(thetas_str);
  json rows = json::array();
  std::ostringstream csv;
  csv << "theta,eta_lo,eta_hi\n";
  for (double th : thetas) {
    auto br = diag::eberhard_threshold(th, tol, restarts, ctx.seed);
    rows.push_back(json{{"theta", th}, {"eta_lo", br.lo}, {"eta_hi", br.hi}});
    csv << num17(th) << "," << num17(br.lo) << "," << num17(br.hi) << "\n";
  }
  ctx.result.payload = json{{"rows", rows}, {"csv", csv.str()}};
  ctx.result.table = csv.str();
}

void cmd_scan_epr2_chained(Ctx& ctx, int max_m) {
  json rows = json::array();
  std::ostringstream csv;
  csv << "m,w_max,inequality_upper\n";
  for (int m = 2; m <= max_m; ++m) {
    quantum::QuantumModel model;
    model.state = quantum::singlet();
    const double delta = M_PI - M_PI / (2.0 * m);
    quantum::MeasurementSet alice, bob;
    auto proj = [&](double ang) {
      quantum::MatrixXcd o =
          std::cos(ang) * quantum::pauli_z() + std::sin(ang) * quantum::pauli_x();
      Eigen::SelfAdjointEigenSolver<quantum::MatrixXcd> es(o);
      quantum::MatrixXcd p0 =
          es.eigenvectors().col(1) * es.eigenvectors().col(1).adjoint();
      return std::vector<quantum::MatrixXcd>{
          p0, quantum::MatrixXcd::Identity(2, 2) - p0};
    };
    for (int k = 0; k < m; ++k) {
      alice.ops.push_back(proj(2 * k * delta));
      bob.ops.push_back(proj((2 * k + 1) * delta));
    }
    model.measurements = {alice, bob};
    Behavior b = quantum::born_behavior(model);
    const double w = sim::epr2_local_content(b);
    const double upper = sim::epr2_upper_from_inequality(b, chained(2, m));
    rows.push_back(json{{"m", m}, {"w_max", w}, {"inequality_upper", upper}});
    csv << m << "," << num17(w) << "," << num17(upper) << "\n";
  }
  ctx.result.payload = json{{"rows", rows}, {"csv", csv.str()}};
  ctx.result.table = csv.str();
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  Ctx ctx;
  CLI::App app{"bellscope: Bell nonlocality toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  double tol_flag = -1.0;
  app.add_flag("--json", ctx.json_only, "emit the JSON payload only");
  app.add_flag("--verbose", ctx.verbose, "include solver statistics in the payload");
  app.add_option("--tol", tol_flag, "override the central tolerance record");
  app.add_option("--seed", ctx.seed, "seed for stochastic commands");
  app.add_option("--jobs", ctx.jobs, "worker parallelism for scans and restarts");

  // validate
  std::string v_file;
  auto* validate = app.add_subcommand("validate", "check a behavior file");
  validate->fallthrough();
  validate->add_option("file", v_file)->required();

  // membership
  std::string m_set = "local", m_file, m_level = "1";
  auto* membership = app.add_subcommand("membership", "correlation-set membership");
  membership->fallthrough();
  membership->add_option("--set", m_set, "local|ns|svetlichny|q1|npa1");
  membership->add_option("--level", m_level, "npa level: 1|1+ab");
  membership->add_option("file", m_file)->required();

  // bound
  std::string b_expr, b_params, b_set = "local", b_level = "1", b_dims;
  int b_restarts = 20;
  auto* bound = app.add_subcommand("bound", "bounds of a Bell expression");
  bound->fallthrough();
  bound->add_option("--expr", b_expr, "catalog name or expression file")->required();
  bound->add_option("--params", b_params, "catalog parameters, comma separated");
  bound->add_option("--set", b_set, "local|ns|quantum-lower|quantum-upper|svetlichny");
  bound->add_option("--level", b_level, "npa level: 1|1+ab");
  bound->add_option("--restarts", b_restarts, "see-saw restarts");
  bound->add_option("--dims", b_dims, "see-saw local dimensions, comma separated");

  // quantum-value
  std::string qv_model, qv_expr, qv_params;
  auto* qv = app.add_subcommand("quantum-value", "evaluate a model on an expression");
  qv->fallthrough();
  qv->add_option("--model", qv_model)->required();
  qv->add_option("--expr", qv_expr)->required();
  qv->add_option("--params", qv_params);

  // catalog
  std::string c_action, c_name, c_params;
  auto* cat = app.add_subcommand("catalog", "named-inequality catalog");
  cat->fallthrough();
  cat->add_option("action", c_action, "list|show")->required();
  cat->add_option("name", c_name);
  cat->add_option("--params", c_params);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "runnable models");
  simulate->fallthrough();
  simulate->require_subcommand(1);
  long s_samples = 1000000;
  std::string s_directions;
  auto* werner = simulate->add_subcommand("werner", "Werner LHV sampler");
  werner->fallthrough();
  werner->add_option("--samples", s_samples);
  werner->add_option("--directions", s_directions)->required();
  long f_samples = 1000000;
  bool f_symmetrized = false;
  auto* faking = simulate->add_subcommand("faking", "detection-loophole faking");
  faking->fallthrough();
  faking->add_option("--samples", f_samples);
  faking->add_flag("--symmetrized", f_symmetrized);
  std::string ip_x, ip_y;
  auto* prbox_ip = simulate->add_subcommand("prbox-ip", "van Dam inner product");
  prbox_ip->fallthrough();
  prbox_ip->add_option("--x", ip_x)->required();
  prbox_ip->add_option("--y", ip_y)->required();
  int ic_x0 = 0, ic_x1 = 0, ic_k = 0;
  auto* prbox_ic = simulate->add_subcommand("prbox-ic", "information causality");
  prbox_ic->fallthrough();
  prbox_ic->add_option("--x0", ic_x0)->required();
  prbox_ic->add_option("--x1", ic_x1)->required();
  prbox_ic->add_option("--k", ic_k)->required();

  // randomness
  double r_s = 2.0;
  std::string r_model = "quantum";
  auto* randomness = app.add_subcommand("randomness", "guessing-probability bounds");
  randomness->fallthrough();
  randomness->add_option("--chsh", r_s, "CHSH value S")->required();
  randomness->add_option("--model", r_model, "quantum|ns");

  // threshold
  std::string t_behavior, t_assign = "0,0";
  double t_tol = 1e-6;
  auto* threshold = app.add_subcommand("threshold", "detection-efficiency threshold");
  threshold->fallthrough();
  threshold->add_option("--behavior", t_behavior)->required();
  threshold->add_option("--assign", t_assign, "no-click outcome per party");
  threshold->add_option("--tol", t_tol);

  // strength
  std::string st_behavior;
  double st_gap = 1e-6;
  auto* strength = app.add_subcommand("strength", "KL statistical strength");
  strength->fallthrough();
  strength->add_option("--behavior", st_behavior)->required();
  strength->add_option("--gap-tol", st_gap);

  // gill
  long g_trials = 10000;
  double g_eps = 0.5;
  auto* gill = app.add_subcommand("gill", "finite-statistics bound");
  gill->fallthrough();
  gill->add_option("--trials", g_trials)->required();
  gill->add_option("--epsilon", g_eps)->required();

  // graph-bell
  std::string gb_edges;
  auto* graph_bell = app.add_subcommand("graph-bell", "graph-state Bell expression");
  graph_bell->fallthrough();
  graph_bell->add_option("--edges", gb_edges)->required();

  // epr2
  std::string e_behavior, e_expr, e_params;
  auto* epr2 = app.add_subcommand("epr2", "EPR2 local content");
  epr2->fallthrough();
  epr2->add_option("--behavior", e_behavior)->required();
  epr2->add_option("--expr", e_expr);
  epr2->add_option("--params", e_params);

  // scan
  auto* scan = app.add_subcommand("scan", "plot-data scans (CSV)");
  scan->fallthrough();
  scan->require_subcommand(1);
  std::string sc_thetas = "0.05,0.2,0.4,0.785398163";
  double sc_tol = 1e-3;
  int sc_restarts = 5;
  auto* scan_eb = scan->add_subcommand("eberhard", "theta vs eta* scan");
  scan_eb->fallthrough();
  scan_eb->add_option("--thetas", sc_thetas);
  scan_eb->add_option("--tol", sc_tol);
  scan_eb->add_option("--restarts", sc_restarts);
  int sc_maxm = 4;
  auto* scan_epr2 = scan->add_subcommand("epr2-chained", "m vs w_max scan");
  scan_epr2->fallthrough();
  scan_epr2->add_option("--max-m", sc_maxm);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    ctx.result.table = app.help();
    ctx.result.exit_code = 0;
    return ctx.result;
  } catch (const CLI::ParseError& e) {
    ctx.result.table = std::string(e.what()) + "\n\n" + app.help();
    ctx.result.exit_code = 1;
    return ctx.result;
  }

  // tolerance precedence: flag > environment > default
  if (tol_flag > 0) {
    tolerances().positivity = tolerances().normalization = tolerances().no_signaling =
        tol_flag;
  } else if (const char* env = std::getenv("BELLSCOPE_TOL")) {
    const double t = std::atof(env);
    if (t > 0)
      tolerances().positivity = tolerances().normalization =
          tolerances().no_signaling = t;
  }

  try {
    if (*validate) cmd_validate(ctx, v_file);
    else if (*membership) cmd_membership(ctx, m_set, m_file, m_level);
    else if (*bound) cmd_bound(ctx, b_expr, b_params, b_set, b_level, b_restarts, b_dims);
    else if (*qv) cmd_quantum_value(ctx, qv_model, qv_expr, qv_params);
    else if (*cat) cmd_catalog(ctx, c_action, c_name, c_params);
    else if (*werner) cmd_simulate_werner(ctx, s_samples, s_directions);
    else if (*faking) cmd_simulate_faking(ctx, f_samples, f_symmetrized);
    else if (*prbox_ip) cmd_prbox_ip(ctx, ip_x, ip_y);
    else if (*prbox_ic) cmd_prbox_ic(ctx, ic_x0, ic_x1, ic_k);
    else if (*randomness) cmd_randomness(ctx, r_s, r_model);
    else if (*threshold) cmd_threshold(ctx, t_behavior, t_assign, t_tol);
    else if (*strength) cmd_strength(ctx, st_behavior, st_gap);
    else if (*gill) cmd_gill(ctx, g_trials, g_eps);
    else if (*graph_bell) cmd_graph_bell(ctx, gb_edges);
    else if (*epr2) cmd_epr2(ctx, e_behavior, e_expr, e_params);
    else if (*scan_eb) cmd_scan_eberhard(ctx, sc_thetas, sc_tol, sc_restarts);
    else if (*scan_epr2) cmd_scan_epr2_chained(ctx, sc_maxm);
  } catch (const cap_error& e) {
    ctx.result.payload = json{{"error", e.what()}};
    ctx.result.table = std::string("solver stall/cap: ") + e.what() + "\n";
    ctx.result.exit_code = 2;
    return ctx.result;
  } catch (const CLI::ValidationError& e) {
    ctx.result.payload = json{{"error", e.what()}};
    ctx.result.table = std::string("input error: ") + e.what() + "\n";
    ctx.result.exit_code = 1;
    return ctx.result;
  } catch (const std::invalid_argument& e) {
    ctx.result.payload = json{{"error", e.what()}};
    ctx.result.table = std::string("input error: ") + e.what() + "\n";
    ctx.result.exit_code = 1;
    return ctx.result;
  } catch (const io::json::exception& e) {
    ctx.result.payload = json{{"error", e.what()}};
    ctx.result.table = std::string("input error: ") + e.what() + "\n";
    ctx.result.exit_code = 1;
    return ctx.result;
  } catch (const std::exception& e) {
    ctx.result.payload = json{{"error", e.what()}};
    ctx.result.table = std::string("solver stall/cap: ") + e.what() + "\n";
    ctx.result.exit_code = 2;
    return ctx.result;
  }
  return ctx.result;
}

}  // namespace bell::cli
