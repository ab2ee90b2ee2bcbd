#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>

#include <CLI11.hpp>

#include "ebc/analysis.hpp"
#include "ebc/delivery.hpp"
#include "ebc/experiments.hpp"
#include "ebc/identities.hpp"
#include "ebc/linear_system.hpp"
#include "ebc/placement.hpp"
#include "ebc/serialize.hpp"

namespace ebc::cli {

namespace {

constexpr std::int64_t kAutoExactLimit = 20000;

struct Args {
  std::string config;
  std::string output = "json";
  std::uint64_t seed = 0;
  int trials = 1;
  std::int64_t F = 0;  // 0 keeps the config's sizes
  int jobs = 0;
  std::string trace;
  int start_phase = 1;
  std::vector<double> rates;
  int K = 4;
  int samples = 1000;
  std::string vary = "mem";
  std::vector<double> grid;
  bool no_sim = false;
  std::vector<double> budgets;
  double step = 0.0;
  std::string mode = "auto";
  std::string placement = "decentralized";
  std::string export_placement;
  std::size_t payload_len = 1;
};

SystemConfig load(const Args& a) {
  if (a.config.empty()) throw ConfigError("config", "--config is required");
  SystemConfig cfg = load_config(a.config);
  if (a.F > 0) {
    cfg.file_sizes.assign(cfg.N, a.F);
  } else if (a.F < 0) {
    throw ConfigError("F", "must be positive");
  }
  return cfg;
}

void require_json(const Args& a, const char* verb) {
  if (a.output != "json") {
    throw ConfigError("output", std::string(verb) + " only emits json");
  }
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

bool symmetric(const SystemConfig& cfg) {
  for (int k = 1; k < cfg.K; ++k) {
    if (cfg.delta[k] != cfg.delta[0] || cfg.mem[k] != cfg.mem[0]) return false;
  }
  return true;
}

int do_region(const Args& a, std::ostream& out) {
  require_json(a, "region");
  SystemConfig cfg = load(a);
  Json j;
  if (cfg.K <= kMaxPermutationUsers) j["region"] = to_json(rate_region(cfg));
  if (cfg.K == 2) {
    try {
      j["vertices"] = to_json(vertices_two_user(cfg));
    } catch (const std::domain_error& e) {
      j["vertices_error"] = e.what();
    }
  }
  if (cfg.K <= 4) {
    Json vs = Json::array();
    for (const auto& v : enumerate_vertices(cfg)) {
      Json pt = Json::array();
      for (double x : v.rates) pt.push_back(round_sig(x));
      vs.push_back(std::move(pt));
    }
    j["polytope_vertices"] = std::move(vs);
  }
  if (symmetric(cfg)) {
    j["symmetric_rate"] = round_sig(symmetric_rate(cfg.K, cfg.delta[0], cfg.p(0)));
  }
  emit(out, j);
  return kOk;
}

int do_feasible(const Args& a, std::ostream& out) {
  require_json(a, "feasible");
  SystemConfig cfg = load(a);
  RateVector r{a.rates};
  Json j = to_json(feasible(cfg, r));
  try {
    j["one_sided_fair"] = is_one_sided_fair(cfg, r);
  } catch (const std::domain_error& e) {
    j["one_sided_fair"] = nullptr;
    j["one_sided_fair_error"] = e.what();
  }
  emit(out, j);
  return kOk;
}

int do_ttot(const Args& a, std::ostream& out) {
  require_json(a, "ttot");
  SystemConfig cfg = load(a);
  auto sizes = demand_sizes(cfg, Demand::identity(cfg.K));
  auto cmp = compare_plan(cfg, sizes);
  Json j{{"sizes", Json::array()}};
  for (double s : sizes) j["sizes"].push_back(s);
  j["closed_form"] = to_json(ttot_closed_form(cfg, sizes));
  j["plan_total"] = round_sig(cmp.plan_total);
  j["gap"] = round_sig(cmp.gap);
  emit(out, j);
  return kOk;
}

int do_plan(const Args& a, std::ostream& out) {
  SystemConfig cfg = load(a);
  auto plan = phase_plan(cfg, Demand::identity(cfg.K));
  if (a.output == "csv") {
    write_plan_csv(out, plan);
  } else if (a.output == "json") {
    emit(out, to_json(plan));
  } else {
    throw ConfigError("output", "expected json or csv");
  }
  return kOk;
}

SimMode resolve_mode(const Args& a, const SystemConfig& cfg) {
  if (a.mode == "exact") return SimMode::kExact;
  if (a.mode == "count") return SimMode::kCount;
  if (a.mode != "auto") throw ConfigError("mode", "expected auto, exact or count");
  std::int64_t demanded = 0;
  for (int k = 0; k < cfg.K; ++k) demanded += cfg.file_sizes[k];
  return demanded <= kAutoExactLimit ? SimMode::kExact : SimMode::kCount;
}

int do_simulate(const Args& a, std::ostream& out, std::ostream& err) {
  require_json(a, "simulate");
  SystemConfig cfg = load(a);
  const Demand d = Demand::identity(cfg.K);
  const PlacementScheme scheme = placement_scheme_from_string(a.placement);
  SimOptions sim;
  sim.mode = resolve_mode(a, cfg);
  sim.start_phase = a.start_phase;
  sim.payload_len = a.payload_len;
  const double F = cfg.average_file_size();
  // Centralized placement is deterministic, so its plan uses the realized
  // sub-file sizes; decentralized runs compare against the expectation.
  std::optional<PlacementMap> central;
  if (scheme == PlacementScheme::kCentralized) central = centralized_place(cfg);
  const double plan =
      central ? phase_plan(cfg, *central, d, {false}).total : phase_plan(cfg, d, {false}).total;

  if (a.trials > 1) {
    if (!a.trace.empty() || !a.export_placement.empty()) {
      throw ConfigError("trials", "--trace and --export-placement need a single trial");
    }
    MonteCarloOptions mc;
    mc.trials = a.trials;
    mc.seed = a.seed;
    mc.jobs = a.jobs;
    mc.scheme = scheme;
    mc.sim = sim;
    Json j = to_json(monte_carlo(cfg, d, mc));
    j["plan_over_F"] = F > 0 ? Json(round_sig(plan / F)) : Json(nullptr);
    emit(out, j);
    return kOk;
  }

  PlacementMap pm = central ? *central : decentralized_place(cfg, a.seed, d.file_of);
  if (!a.export_placement.empty()) {
    std::ofstream pf(a.export_placement);
    if (!pf) throw ConfigError("export-placement", "cannot write " + a.export_placement);
    pf << placement_to_json(pm).dump() << '\n';
  }
  std::ofstream trace;
  if (!a.trace.empty()) {
    trace.open(a.trace);
    if (!trace) throw ConfigError("trace", "cannot write " + a.trace);
    write_trace_header(trace);
    sim.on_slot = [&trace](const SlotEvent& e) { write_trace_row(trace, e); };
  }
  SimResult r = run_delivery(cfg, pm, d, a.seed, sim);
  Json j = to_json(r, F);
  j["plan_over_F"] = F > 0 ? Json(round_sig(plan / F)) : Json(nullptr);
  emit(out, j);
  if (!r.all_decoded()) {
    err << "decode failure: " << r.failure << '\n';
    return kDecodeFailure;
  }
  return kOk;
}

int do_sweep(const Args& a, std::ostream& out) {
  SweepSpec spec;
  spec.fixed = load_config(a.config.empty() ? throw ConfigError("config", "--config is required")
                                            : a.config);
  spec.varying = sweep_parameter_from_string(a.vary);
  spec.grid = a.grid;
  spec.trials = std::max(1, a.trials);
  spec.seed = a.seed;
  spec.jobs = a.jobs;
  spec.simulate = !a.no_sim;
  if (a.F > 0) spec.file_size = a.F;
  if (a.mode == "exact") {
    spec.sim_mode = SimMode::kExact;
  } else if (a.mode == "count" || a.mode == "auto") {
    spec.sim_mode = SimMode::kCount;
  } else {
    throw ConfigError("mode", "expected auto, exact or count");
  }
  auto rows = sweep(spec);
  if (a.output == "csv") {
    write_sweep_csv(out, rows);
  } else if (a.output == "json") {
    emit(out, to_json(rows));
  } else {
    throw ConfigError("output", "expected json or csv");
  }
  return kOk;
}

int do_optimize(const Args& a, std::ostream& out) {
  SystemConfig cfg = load(a);
  if (a.budgets.empty()) throw ConfigError("budget", "--budget is required");
  std::vector<MemoryOptimization> rows;
  for (double b : a.budgets) rows.push_back(optimize_memory(cfg, b, a.step, a.jobs));
  if (a.output == "csv") {
    write_memory_csv(out, rows);
  } else if (a.output == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    emit(out, arr);
  } else {
    throw ConfigError("output", "expected json or csv");
  }
  return kOk;
}

int do_verify(const Args& a, std::ostream& out) {
  require_json(a, "verify");
  auto report = run_identity_suite(a.K, a.samples, a.seed);
  Json j = to_json(report);
  std::string verdict = report.passed() ? "max residual < 1e-9" : "identity check failed";
  j["summary"] = verdict + " (max residual " + format_number(report.max_residual(), 3) + ")";
  emit(out, j);
  return report.passed() ? kOk : kDecodeFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cache-aided erasure broadcast channel calculator and simulator", "ebc"};
  app.require_subcommand(1, 1);
  Args a;

  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", a.config, "System config JSON");
  };
  auto add_output = [&](CLI::App* c) {
    c->add_option("--output", a.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_F = [&](CLI::App* c) {
    c->add_option("--F", a.F, "Override every file size (packets)");
  };

  auto* region = app.add_subcommand("region", "Rate-region inequalities and vertices");
  add_config(region);
  add_output(region);

  auto* feas = app.add_subcommand("feasible", "Check a rate vector against the region");
  add_config(feas);
  add_output(feas);
  feas->add_option("--rates", a.rates, "Comma-separated rates R_1,...,R_K")
      ->delimiter(',')
      ->required();

  auto* ttot = app.add_subcommand("ttot", "Closed-form and scheme transmission length");
  add_config(ttot);
  add_output(ttot);
  add_F(ttot);

  auto* plan = app.add_subcommand("plan", "Expected sub-phase lengths of the delivery scheme");
  add_config(plan);
  add_output(plan);
  add_F(plan);

  auto* simulate = app.add_subcommand("simulate", "Run the packet-level delivery simulation");
  add_config(simulate);
  add_output(simulate);
  add_F(simulate);
  simulate->add_option("--seed", a.seed, "Base seed (default 0)");
  simulate->add_option("--trials", a.trials, "Independent trials (default 1)");
  simulate->add_option("--jobs", a.jobs, "Worker threads (default: processors)");
  simulate->add_option("--trace", a.trace, "Per-slot CSV trace path (single trial)");
  simulate->add_option("--start-phase", a.start_phase, "First phase to run");
  simulate->add_option("--mode", a.mode, "auto, exact or count");
  simulate->add_option("--placement", a.placement, "decentralized or centralized");
  simulate->add_option("--export-placement", a.export_placement, "Write placement JSON here");
  simulate->add_option("--payload-len", a.payload_len, "Field elements per packet");

  auto* sw = app.add_subcommand("sweep", "Parameter sweep table");
  add_config(sw);
  add_output(sw);
  add_F(sw);
  sw->add_option("--vary", a.vary, "delta, mem or K");
  sw->add_option("--grid", a.grid, "Comma-separated grid values")->delimiter(',')->required();
  sw->add_option("--trials", a.trials, "Trials per grid point");
  sw->add_option("--seed", a.seed, "Base seed (default 0)");
  sw->add_option("--jobs", a.jobs, "Worker threads (default: processors)");
  sw->add_option("--mode", a.mode, "Simulation mode: count (default) or exact");
  sw->add_flag("--no-sim", a.no_sim, "Analytic columns only");

  auto* opt = app.add_subcommand("optimize-mem", "Exhaustive cache-size allocation search");
  add_config(opt);
  add_output(opt);
  add_F(opt);
  opt->add_option("--budget", a.budgets, "Total cache budget(s), comma-separated")
      ->delimiter(',')
      ->required();
  opt->add_option("--step", a.step, "Grid step (default N/20)");
  opt->add_option("--jobs", a.jobs, "Worker threads (default: processors)");

  auto* verify = app.add_subcommand("verify", "Run the identity suite");
  add_output(verify);
  verify->add_option("--K", a.K, "Largest user count for randomized checks");
  verify->add_option("--samples", a.samples, "Random configurations per check");
  verify->add_option("--seed", a.seed, "Base seed (default 0)");

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (*region) return do_region(a, out);
    if (*feas) return do_feasible(a, out);
    if (*ttot) return do_ttot(a, out);
    if (*plan) return do_plan(a, out);
    if (*simulate) return do_simulate(a, out, err);
    if (*sw) return do_sweep(a, out);
    if (*opt) return do_optimize(a, out);
    if (*verify) return do_verify(a, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const DecodeFailure& e) {
    err << "decode failure: " << e.what() << '\n';
    return kDecodeFailure;
  } catch (const InconsistentSystem& e) {
    err << "decode failure: " << e.what() << '\n';
    return kDecodeFailure;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kDecodeFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace ebc::cli
