// tsybnet: quantized sparse ReLU set classifiers, Tsybakov-noise experiment
// harness. Subcommands: count, compose-check, approx, gen-dist, sample, erm,
// rates, lower-bound, audit. CSV for tabular results, JSON for structured
// objects; every run writes one manifest.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsybnet/enumerate.hpp"
#include "tsybnet/erm.hpp"
#include "tsybnet/harness.hpp"
#include "tsybnet/serialize.hpp"

namespace fs = std::filesystem;
using namespace tsybnet;

namespace {

constexpr const char* kVersion = "tsybnet 0.1.0";

int log_level() {
  const char* env = std::getenv("TSYB_LOG");
  return env ? std::atoi(env) : 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[tsybnet] %s\n", msg.c_str());
}

struct RunContext {
  std::string subcommand;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int workers = 1;
  int quad_res = 1024;
  std::string config_path;
  std::vector<std::string> outputs;
  Json config_blob;

  std::string path(const std::string& name) const {
    return (fs::path(out_dir) / name).string();
  }

  void emit(const std::string& name, const std::string& content) {
    fs::create_directories(out_dir);
    write_text_file(path(name), content);
    outputs.push_back(path(name));
  }

  void write_manifest() {
    Json m;
    m["subcommand"] = subcommand;
    m["config_digest"] = fnv1a_digest(config_blob.dump());
    m["seed"] = seed;
    const auto now = std::chrono::system_clock::now();
    m["timestamp"] =
        static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                      now.time_since_epoch())
                                      .count());
    m["tool_version"] = kVersion;
    m["outputs"] = outputs;
    fs::create_directories(out_dir);
    write_text_file(path("run_manifest.json"), m.dump(2) + "\n");
  }
};

Json load_config(const std::string& path) {
  return Json::parse(read_text_file(path));
}

BudgetRule budget_rule_from_json(const Json& j, double kappa, double rho) {
  BudgetRule rule;
  rule.kappa = kappa;
  rule.rho = rho;
  if (j.contains("a")) rule.a = j["a"].get<double>();
  if (j.contains("b")) rule.b = j["b"].get<double>();
  if (j.contains("c0")) rule.c0 = j["c0"].get<int>();
  if (j.contains("c1")) rule.c1 = j["c1"].get<double>();
  if (j.contains("pure_power")) rule.pure_power = j["pure_power"].get<bool>();
  return rule;
}

// boundary approximator for a distribution spec: exact realizer when the
// boundary is piecewise linear, grid interpolation otherwise
BoundaryApproximator approximator_for(const Json& spec) {
  const Json b = spec.at("boundary");
  const std::string kind = b.at("kind").get<std::string>();
  if (kind == "flat") {
    const double level = b.at("level").get<double>();
    return [level](const Fragment&, double) {
      PiecewiseLinear pl;
      pl.t = {0.0, 1.0};
      pl.v = {level, level};
      return pw_linear_boundary_net(pl).net;
    };
  }
  if (kind == "pwlinear") {
    PiecewiseLinear pl;
    pl.t = b.at("t").get<std::vector<double>>();
    pl.v = b.at("v").get<std::vector<double>>();
    return [pl](const Fragment&, double) { return pw_linear_boundary_net(pl).net; };
  }
  // generic evaluable boundary: Lipschitz grid interpolation
  const double B2 = b.value("B2", 1.0);
  return [B2](const Fragment& fr, double eps) {
    auto g1 = [&fr](double y) {
      const double p[] = {y};
      return fr.gamma(p);
    };
    return grid_interp_boundary_net(g1, 1.0, B2, eps).net;
  };
}

std::string rates_csv(const RateExperimentResult& r) {
  std::ostringstream os;
  os << "n,metric,mean,stderr,slope_target,erm_mode\n";
  for (const auto& p : r.points) {
    os << p.n << ",d_delta," << format_full(p.mean_d_delta) << ","
       << format_full(p.stderr_d_delta) << "," << format_full(r.target_d_delta) << ","
       << p.erm_mode << "\n";
    os << p.n << ",d_fq," << format_full(p.mean_d_fq) << "," << format_full(p.stderr_d_fq)
       << "," << format_full(r.target_d_fq) << "," << p.erm_mode << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

int run_count(RunContext& ctx, int d, int s0, int L0, int c) {
  ClassBudget b{L0, s0, c, d};
  const BigInt bound = count_bound(b);
  std::printf("%s\n", bound.str().c_str());
  Json j;
  j["d"] = d;
  j["s0"] = s0;
  j["L0"] = L0;
  j["c"] = c;
  j["count_bound"] = bound.str();
  ctx.emit("count.json", j.dump(2) + "\n");
  return 0;
}

int run_compose_check(RunContext& ctx, int pairs, int probes) {
  SplitRng root(ctx.seed);
  const WeightGrid grid(2);
  const auto vals = grid.values();
  double max_err = 0.0;
  bool budgets_ok = true;

  auto random_net = [&](SplitRng& rng, int in, int out, int layers) {
    std::vector<Layer> hidden;
    int prev = in;
    for (int s = 0; s < layers; ++s) {
      const int w = 1 + static_cast<int>(rng.next_below(4));
      Layer l;
      l.W = Mat(w, prev);
      for (double& v : l.W.a) v = vals[rng.next_below(vals.size())];
      l.b.resize(static_cast<std::size_t>(w));
      for (double& v : l.b) v = vals[rng.next_below(vals.size())];
      hidden.push_back(std::move(l));
      prev = w;
    }
    Mat f(out, prev);
    for (double& v : f.a) v = vals[rng.next_below(vals.size())];
    return Network(in, std::move(hidden), std::move(f), 2);
  };

  for (int p = 0; p < pairs; ++p) {
    SplitRng rng = root.split(0xCC, static_cast<std::uint64_t>(p));
    const int d = 2 + static_cast<int>(rng.next_below(3));
    const int mid = 1 + static_cast<int>(rng.next_below(4));
    Network inner = random_net(rng, d, mid, static_cast<int>(rng.next_below(4)));
    Network outer = random_net(rng, mid, 1, static_cast<int>(rng.next_below(4)));
    Network comp = concatenate(outer, inner);
    Network par = parallelize(inner, inner);
    budgets_ok = budgets_ok && comp.layer_count() == outer.layer_count() + inner.layer_count() + 1;
    budgets_ok = budgets_ok && sparsity(comp) <= 2 * sparsity(outer) + 2 * sparsity(inner);
    budgets_ok = budgets_ok && par.layer_count() == inner.layer_count();
    budgets_ok =
        budgets_ok && sparsity(par) <= 2 * sparsity(inner) + 2 * d * par.layer_count();
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int t = 0; t < probes; ++t) {
      for (double& xi : x) xi = rng.next_unit();
      const double direct = realize1(outer, realize(inner, x));
      max_err = std::max(max_err, std::abs(realize1(comp, x) - direct));
      auto vp = realize(par, x);
      auto vi = realize(inner, x);
      for (int k = 0; k < mid; ++k) {
        max_err = std::max(max_err, std::abs(vp[static_cast<std::size_t>(k)] -
                                             vi[static_cast<std::size_t>(k)]));
        max_err = std::max(max_err, std::abs(vp[static_cast<std::size_t>(mid + k)] -
                                             vi[static_cast<std::size_t>(k)]));
      }
    }
  }
  const bool pass = budgets_ok && max_err <= 1e-9;
  std::ostringstream os;
  os << "pairs,probes,max_error,budgets_ok,pass\n"
     << pairs << "," << probes << "," << format_full(max_err) << "," << budgets_ok << ","
     << pass << "\n";
  ctx.emit("compose_check.csv", os.str());
  std::printf("compose-check: pairs=%d max_error=%.3g budgets=%s => %s\n", pairs, max_err,
              budgets_ok ? "ok" : "violated", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int run_gen_dist(RunContext& ctx, const Json& spec) {
  TsybakovDistribution q = distribution_from_json(spec);
  const bool lower_family = spec.at("boundary").at("kind").get<std::string>() == "bumps";
  validate_distribution(q, lower_family);
  ctx.emit("dist.json", spec.dump(2) + "\n");
  log_info("distribution spec validated");
  return 0;
}

int run_sample(RunContext& ctx, const Json& spec, int n) {
  TsybakovDistribution q = distribution_from_json(spec);
  Dataset data = sample(q, n, ctx.seed);
  std::ostringstream os;
  dataset_to_csv(data, os);
  ctx.emit("dataset.csv", os.str());
  return 0;
}

int run_approx(RunContext& ctx, const Json& spec, const std::vector<double>& eps_list) {
  TsybakovDistribution q = distribution_from_json(spec);
  const BoundaryFragmentSet set =
      spec.contains("fragments") ? fragment_set_from_json(spec["fragments"]) : q.bayes_set();
  const BoundaryApproximator approx = approximator_for(spec);
  const double bconst = approx_error_constant(q, set.r);

  std::ostringstream os;
  os << "epsilon,L,s,c,d_fq_bound,d_fq_measured\n";
  for (double eps : eps_list) {
    auto res = bayes_approx_net(set, eps, q.kappa(), approx);
    const double measured = approx_metrics_columns(q, res, ctx.quad_res).d_fq;
    os << format_full(eps) << "," << res.layers << "," << res.nonzeros << "," << res.grid_c
       << "," << format_full(bconst * std::pow(eps, q.kappa())) << ","
       << format_full(measured) << "\n";
  }
  ctx.emit("approx.csv", os.str());
  return 0;
}

int run_erm(RunContext& ctx, const std::string& data_path, int L0, int s0, int c,
            const std::string& mode, int restarts, int iters, std::uint64_t limit) {
  std::stringstream ss(read_text_file(data_path));
  Dataset data = dataset_from_csv(ss);
  ClassBudget budget{L0, s0, c, data.d};

  ErmReport rep;
  if (mode == "exact") {
    rep = erm_exact(budget, data, limit);
  } else if (mode == "heuristic") {
    HeuristicConfig cfg;
    cfg.seed = ctx.seed;
    cfg.restarts = restarts;
    cfg.iters = iters;
    rep = erm_heuristic(budget, data, cfg);
  } else {
    throw error("unknown ERM mode: " + mode);
  }

  Json j;
  j["risk"] = rep.risk;
  j["mode"] = rep.mode;
  j["candidates"] = rep.candidates;
  j["seed"] = ctx.seed;
  j["provenance"] = rep.chosen.provenance;
  if (rep.chosen.net) j["network"] = network_to_json(*rep.chosen.net);
  ctx.emit("erm_report.json", j.dump(2) + "\n");
  std::printf("risk=%.17g mode=%s candidates=%llu\n", rep.risk, rep.mode.c_str(),
              static_cast<unsigned long long>(rep.candidates));
  return 0;
}

int run_rates(RunContext& ctx, const Json& cfg_json) {
  RateExperimentConfig cfg;
  cfg.kappa = cfg_json.at("kappa").get<double>();
  cfg.rho = cfg_json.at("rho").get<double>();
  cfg.d = cfg_json.value("d", 2);
  if (cfg_json.contains("n_grid")) cfg.n_grid = cfg_json["n_grid"].get<std::vector<std::int64_t>>();
  cfg.replications = cfg_json.value("replications", 20);
  cfg.p = cfg_json.value("p", 1.0);
  cfg.seed = cfg_json.value("seed", ctx.seed);
  cfg.erm_mode = cfg_json.value("erm_mode", std::string("heuristic"));
  cfg.cells_per_tau = cfg_json.value("cells_per_tau", 1.0);
  cfg.quad = QuadratureSpec{ctx.quad_res};
  cfg.workers = ctx.workers;
  cfg.rule = budget_rule_from_json(cfg_json.value("budget_rule", Json::object()), cfg.kappa,
                                   cfg.rho);
  if (cfg_json.contains("heuristic")) {
    const Json& h = cfg_json["heuristic"];
    cfg.heuristic.restarts = h.value("restarts", 0);
    cfg.heuristic.iters = h.value("iters", 0);
    cfg.heuristic.anneal_temp = h.value("anneal_temp", 0.0);
  } else {
    cfg.heuristic.restarts = 0;
    cfg.heuristic.iters = 0;
  }

  TsybakovDistribution dist = distribution_from_json(cfg_json.at("dist"));
  auto result = run_rate_experiment(dist, cfg);
  ctx.emit("rates.csv", rates_csv(result));

  Json summary;
  summary["d_delta_slope"] = result.d_delta_fit.slope;
  summary["d_delta_stderr"] = result.d_delta_fit.stderr_slope;
  summary["d_fq_slope"] = result.d_fq_fit.slope;
  summary["d_fq_stderr"] = result.d_fq_fit.stderr_slope;
  summary["target_d_delta"] = result.target_d_delta;
  summary["target_d_fq"] = result.target_d_fq;
  summary["mammen2_target_a"] = result.mammen2_target_a;
  summary["mammen2_target_b"] = result.mammen2_target_b;
  summary["d_delta_rss"] = result.d_delta_fit.rss;
  summary["d_fq_rss"] = result.d_fq_fit.rss;
  ctx.emit("rates_summary.json", summary.dump(2) + "\n");
  std::printf("d_delta slope %+0.4f (target %+0.4f), d_fq slope %+0.4f (target %+0.4f)\n",
              result.d_delta_fit.slope, result.target_d_delta, result.d_fq_fit.slope,
              result.target_d_fq);
  return 0;
}

int run_lower_bound(RunContext& ctx, const Json& cfg) {
  const double kappa = cfg.at("kappa").get<double>();
  const double beta2 = cfg.at("beta2").get<double>();
  const int d = cfg.value("d", 2);
  std::vector<std::int64_t> grid = cfg.value("n_grid", std::vector<std::int64_t>{
                                                           128, 256, 512, 1024, 2048, 4096, 8192});
  const double k1 = cfg.value("k1", 0.1);
  const double k2 = cfg.value("k2", 0.5);
  const double k3 = cfg.value("k3", 0.5);
  const int res = cfg.value("resolution", 128);

  auto lb = lower_bound_experiment(kappa, beta2, d, grid, k1, k2, k3, res);
  std::ostringstream os;
  os << "n,K,I1,I2,I_bound,affinity1,affinity_product,affinity_analytic,assouad_product\n";
  for (const auto& p : lb.points) {
    os << p.n << "," << p.K << "," << format_full(p.report.I1) << ","
       << format_full(p.report.I2) << "," << format_full(p.report.I_bound) << ","
       << format_full(p.report.affinity1) << "," << format_full(p.report.affinity_product)
       << "," << format_full(p.report.affinity_analytic) << ","
       << format_full(p.report.assouad_product) << "\n";
  }
  ctx.emit("lower_bound.csv", os.str());

  Json summary;
  summary["curve_slope"] = lb.curve_fit.slope;
  summary["target_slope"] = lb.target_slope;
  summary["min_affinity_product"] = lb.min_affinity_product;
  summary["bounds_pass"] = lb.bounds_pass;
  summary["stable"] = lb.stable;
  ctx.emit("lower_bound_summary.json", summary.dump(2) + "\n");
  std::printf("lower-bound slope %+0.4f (target %+0.4f), min affinity %0.4f\n",
              lb.curve_fit.slope, lb.target_slope, lb.min_affinity_product);
  return 0;
}

int run_audit(RunContext& ctx, const Json& cfg) {
  TsybakovDistribution q = distribution_from_json(cfg.at("dist"));
  const BoundaryApproximator approx = approximator_for(cfg.at("dist"));
  std::vector<double> eps_list = cfg.value("eps_list", std::vector<double>{0.125, 0.0625});
  const double margin_floor = cfg.value("margin_floor", 1e-3);
  const double noise_tol = cfg.value("noise_tol", 0.1);

  auto audit = condition_audit(q, approx, eps_list, margin_floor, noise_tol, ctx.quad_res);

  const double rho = cfg.value("rho", 1.0);
  BudgetRule rule = budget_rule_from_json(cfg.value("budget_rule", Json::object()), q.kappa(), rho);
  rule.pure_power = cfg.value("budget_rule", Json::object()).value("pure_power", false);
  std::vector<std::int64_t> grid = cfg.value("n_grid", std::vector<std::int64_t>{});
  if (grid.empty())
    for (int k = 10; k <= 26; k += 2) grid.push_back(std::int64_t{1} << k);
  auto growth = class_growth_audit(rule, grid, q.d);

  std::ostringstream os;
  os << "check,value,target,pass\n";
  os << "margin_c1," << format_full(audit.margin_c1) << "," << format_full(margin_floor) << ","
     << audit.margin_pass << "\n";
  if (audit.noise_skipped)
    os << "noise_slope,skipped,,1\n";
  else
    os << "noise_slope," << format_full(audit.noise_slope) << ","
       << format_full(audit.noise_target) << "," << audit.noise_pass << "\n";
  for (std::size_t i = 0; i < audit.approx_eps.size(); ++i)
    os << "approx_d_fq_eps_" << format_full(audit.approx_eps[i]) << ","
       << format_full(audit.approx_d_fq[i]) << "," << format_full(audit.approx_bound[i])
       << "," << (audit.approx_d_fq[i] <= audit.approx_bound[i]) << "\n";
  os << "class_growth_bounded," << format_full(growth.c3.back()) << ","
     << format_full(growth.c3.front()) << "," << growth.bounded << "\n";
  ctx.emit("audit.csv", os.str());

  Json j;
  j["margin_c1"] = audit.margin_c1;
  j["margin_pass"] = audit.margin_pass;
  j["noise_skipped"] = audit.noise_skipped;
  j["noise_slope"] = audit.noise_slope;
  j["noise_target"] = audit.noise_target;
  j["noise_pass"] = audit.noise_pass;
  j["approx_pass"] = audit.approx_pass;
  j["class_growth_bounded"] = growth.bounded;
  j["c3_sequence"] = growth.c3;
  j["all_pass"] = audit.all_pass && growth.bounded;
  ctx.emit("audit.json", j.dump(2) + "\n");
  std::printf("audit: %s\n", (audit.all_pass && growth.bounded) ? "PASS" : "FAIL");
  return (audit.all_pass && growth.bounded) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{kVersion};
  app.require_subcommand(1);
  app.fallthrough(true);

  RunContext ctx;
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_option("--seed", ctx.seed, "random seed");
  app.add_option("--workers", ctx.workers, "worker thread count");
  app.add_option("--quad-res", ctx.quad_res, "quadrature resolution per axis");

  auto* count_cmd = app.add_subcommand("count", "closed-form class size bound");
  int cd = 2, cs0 = 2, cL0 = 1, cc = 1;
  count_cmd->add_option("--d", cd, "input dimension");
  count_cmd->add_option("--s0", cs0, "sparsity budget");
  count_cmd->add_option("--L0", cL0, "layer budget");
  count_cmd->add_option("--c", cc, "grid exponent");

  auto* comp_cmd = app.add_subcommand("compose-check", "composition calculus audit");
  int pairs = 200, probes = 1000;
  comp_cmd->add_option("--pairs", pairs, "random net pairs");
  comp_cmd->add_option("--probes", probes, "probe points per pair");

  auto* gen_cmd = app.add_subcommand("gen-dist", "validate and save a distribution spec");
  std::string gen_config;
  gen_cmd->add_option("--config", gen_config, "distribution spec JSON")->required();

  auto* sample_cmd = app.add_subcommand("sample", "draw a labelled dataset");
  std::string sample_config;
  int sample_n = 100;
  sample_cmd->add_option("--config", sample_config, "distribution spec JSON")->required();
  sample_cmd->add_option("--n", sample_n, "sample count");

  auto* approx_cmd = app.add_subcommand("approx", "Bayes-set approximation budget report");
  std::string approx_config;
  std::vector<double> approx_eps{0.125, 0.0625, 0.03125};
  approx_cmd->add_option("--config", approx_config, "distribution spec JSON")->required();
  approx_cmd->add_option("--eps", approx_eps, "epsilon list");

  auto* erm_cmd = app.add_subcommand("erm", "empirical risk minimization");
  std::string erm_data, erm_mode = "exact";
  int eL0 = 1, es0 = 2, ec = 1, erm_restarts = 4, erm_iters = 200;
  std::uint64_t erm_limit = 2000000;
  erm_cmd->add_option("--data", erm_data, "dataset CSV")->required();
  erm_cmd->add_option("--L0", eL0, "layer budget");
  erm_cmd->add_option("--s0", es0, "sparsity budget");
  erm_cmd->add_option("--c", ec, "grid exponent");
  erm_cmd->add_option("--mode", erm_mode, "exact | heuristic");
  erm_cmd->add_option("--restarts", erm_restarts, "heuristic restarts");
  erm_cmd->add_option("--iters", erm_iters, "heuristic iteration cap");
  erm_cmd->add_option("--limit", erm_limit, "enumeration limit for exact mode");

  auto* rates_cmd = app.add_subcommand("rates", "convergence rate experiment");
  std::string rates_config;
  rates_cmd->add_option("--config", rates_config, "experiment config JSON")->required();

  auto* lb_cmd = app.add_subcommand("lower-bound", "Assouad lower-bound diagnostics");
  std::string lb_config;
  lb_cmd->add_option("--config", lb_config, "experiment config JSON")->required();

  auto* audit_cmd = app.add_subcommand("audit", "condition and class-growth audit");
  std::string audit_config;
  audit_cmd->add_option("--config", audit_config, "audit config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;  // unknown subcommand or flag: usage already printed
  }

  try {
    int rc = 0;
    if (count_cmd->parsed()) {
      ctx.subcommand = "count";
      ctx.config_blob = {{"d", cd}, {"s0", cs0}, {"L0", cL0}, {"c", cc}};
      rc = run_count(ctx, cd, cs0, cL0, cc);
    } else if (comp_cmd->parsed()) {
      ctx.subcommand = "compose-check";
      ctx.config_blob = {{"pairs", pairs}, {"probes", probes}, {"seed", ctx.seed}};
      rc = run_compose_check(ctx, pairs, probes);
    } else if (gen_cmd->parsed()) {
      ctx.subcommand = "gen-dist";
      ctx.config_path = gen_config;
      ctx.config_blob = load_config(gen_config);
      rc = run_gen_dist(ctx, ctx.config_blob);
    } else if (sample_cmd->parsed()) {
      ctx.subcommand = "sample";
      ctx.config_path = sample_config;
      ctx.config_blob = load_config(sample_config);
      rc = run_sample(ctx, ctx.config_blob, sample_n);
    } else if (approx_cmd->parsed()) {
      ctx.subcommand = "approx";
      ctx.config_path = approx_config;
      ctx.config_blob = load_config(approx_config);
      rc = run_approx(ctx, ctx.config_blob, approx_eps);
    } else if (erm_cmd->parsed()) {
      ctx.subcommand = "erm";
      ctx.config_blob = {{"data", erm_data}, {"L0", eL0},   {"s0", es0},
                         {"c", ec},          {"mode", erm_mode}};
      rc = run_erm(ctx, erm_data, eL0, es0, ec, erm_mode, erm_restarts, erm_iters, erm_limit);
    } else if (rates_cmd->parsed()) {
      ctx.subcommand = "rates";
      ctx.config_path = rates_config;
      ctx.config_blob = load_config(rates_config);
      rc = run_rates(ctx, ctx.config_blob);
    } else if (lb_cmd->parsed()) {
      ctx.subcommand = "lower-bound";
      ctx.config_path = lb_config;
      ctx.config_blob = load_config(lb_config);
      rc = run_lower_bound(ctx, ctx.config_blob);
    } else if (audit_cmd->parsed()) {
      ctx.subcommand = "audit";
      ctx.config_path = audit_config;
      ctx.config_blob = load_config(audit_config);
      rc = run_audit(ctx, ctx.config_blob);
    }
    ctx.write_manifest();
    return rc;
  } catch (const infeasible_budget_error& e) {
    std::fprintf(stderr, "refused: %s\n", e.what());
    return 2;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
