#include "ebc/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace ebc {

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string format_number(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json users_json(UserSet s) {
  Json a = Json::array();
  for (int k : s) a.push_back(k + 1);
  return a;
}

Json perm_json(const std::vector<int>& perm) {
  Json a = Json::array();
  for (int k : perm) a.push_back(k + 1);
  return a;
}

namespace {

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_sig(x);
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json opt(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

std::string opt_csv(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

}  // namespace

Json to_json(const SystemConfig& cfg) {
  return Json{{"K", cfg.K},
              {"N", cfg.N},
              {"delta", nums(cfg.delta)},
              {"mem", nums(cfg.mem)},
              {"file_sizes", cfg.file_sizes},
              {"field_order", cfg.field_order}};
}

Json to_json(const RateRegion& region) {
  Json ineqs = Json::array();
  for (const auto& q : region.inequalities) {
    ineqs.push_back({{"perm", perm_json(q.perm)}, {"coeffs", nums(q.coeffs)}});
  }
  return Json{{"K", region.K}, {"inequalities", std::move(ineqs)}};
}

Json to_json(const TwoUserVertices& v) {
  auto pt = [](const std::array<double, 2>& p) { return Json::array({num(p[0]), num(p[1])}); };
  return Json{{"axis1", pt(v.axis1)},
              {"intersection", pt(v.intersection)},
              {"axis2", pt(v.axis2)},
              {"coincident", v.coincident},
              {"sum_rate", num(v.sum_rate())},
              {"ratio", num(v.ratio())}};
}

Json to_json(const FeasibilityResult& f) {
  return Json{{"feasible", f.feasible}, {"worst_perm", perm_json(f.worst_perm)},
              {"max_lhs", num(f.max_lhs)}};
}

Json to_json(const ClosedFormLength& c) {
  return Json{{"total", num(c.total)}, {"perm", perm_json(c.perm)}};
}

Json to_json(const PhasePlan& plan) {
  Json subs = Json::array();
  for (UserSet J : canonical_subsets(plan.K)) {
    Json tu = Json::object();
    for (int k : J) tu[std::to_string(k + 1)] = num(plan.tk(J, k));
    subs.push_back({{"subphase", users_json(J)}, {"t", num(plan.t(J))}, {"t_user", std::move(tu)}});
  }
  Json tr = Json::array();
  for (const auto& [key, n] : plan.transfers) {
    const auto& [I, J, k] = key;
    tr.push_back({{"from", users_json(I)}, {"to", users_json(J)}, {"user", k + 1}, {"n", num(n)}});
  }
  return Json{{"K", plan.K},
              {"sizes", nums(plan.sizes)},
              {"total", num(plan.total)},
              {"subphases", std::move(subs)},
              {"transfers", std::move(tr)}};
}

Json to_json(const SimResult& r, double F) {
  Json per = Json::object();
  for (const auto& [J, n] : r.slots_per_subphase) per[J.to_string()] = n;
  Json ok = Json::array();
  for (bool b : r.decode_ok) ok.push_back(b);
  Json tr = Json::array();
  for (const auto& [key, n] : r.realized_transfers) {
    const auto& [I, J, k] = key;
    tr.push_back({{"from", users_json(I)}, {"to", users_json(J)}, {"user", k + 1}, {"n", n}});
  }
  Json out{{"seed", r.seed},
           {"mode", r.mode == SimMode::kExact ? "exact" : "count"},
           {"slots_total", r.slots_total},
           {"slots_over_F", F > 0 ? num(static_cast<double>(r.slots_total) / F) : Json(nullptr)},
           {"slots_per_subphase", std::move(per)},
           {"decode_ok", std::move(ok)},
           {"cleanup_slots", r.cleanup_slots},
           {"realized_transfers", std::move(tr)}};
  if (!r.failure.empty()) out["failure"] = r.failure;
  return out;
}

Json to_json(const MonteCarloResult& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"seed", t.seed},
                      {"slots_total", t.slots_total},
                      {"cleanup_slots", t.cleanup_slots},
                      {"decoded", t.decoded}});
  }
  return Json{{"F", num(r.F)},
              {"mean", num(r.mean)},
              {"stddev", num(r.stddev)},
              {"stderr", num(r.stderr_mean)},
              {"ci95", num(r.ci95)},
              {"trials", std::move(trials)}};
}

Json to_json(const IdentityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"max_residual", num(c.max_residual)},
                      {"tolerance", num(c.tolerance)},
                      {"cases", c.cases},
                      {"violations", c.violations},
                      {"passed", c.passed()}});
  }
  return Json{{"passed", r.passed()}, {"max_residual", num(r.max_residual())},
              {"checks", std::move(checks)}};
}

Json to_json(const MemoryAllocation& a) {
  return Json{{"mem", nums(a.mem)}, {"objective", num(a.objective)}, {"budget", num(a.budget)}};
}

Json to_json(const MemoryOptimization& m) {
  return Json{{"best", to_json(m.best)},
              {"lower_bound", to_json(m.lower_bound)},
              {"symmetric_objective", opt(m.symmetric_objective)},
              {"points", m.points}};
}

Json to_json(const std::vector<SweepRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    Json row{{"param", num(r.param)},         {"T_fb", opt(r.t_fb)},
             {"T_nofb", opt(r.t_nofb)},       {"T_cent", opt(r.t_cent)},
             {"T_sim_mean", opt(r.sim_mean)}, {"T_sim_ci95", opt(r.sim_ci95)},
             {"trials", r.trials},            {"F", r.F},
             {"seed", r.seed}};
    if (!r.error.empty()) row["error"] = r.error;
    a.push_back(std::move(row));
  }
  return a;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "param,T_fb,T_nofb,T_cent,T_sim_mean,T_sim_ci95,trials,F,seed\r\n";
  for (const auto& r : rows) {
    os << format_number(r.param) << ',' << opt_csv(r.t_fb) << ',' << opt_csv(r.t_nofb) << ','
       << opt_csv(r.t_cent) << ',' << opt_csv(r.sim_mean) << ',' << opt_csv(r.sim_ci95) << ','
       << r.trials << ',' << r.F << ',' << r.seed << "\r\n";
  }
}

void write_plan_csv(std::ostream& os, const PhasePlan& plan) {
  os << "subphase,user,t_user,t\r\n";
  for (UserSet J : canonical_subsets(plan.K)) {
    for (int k : J) {
      os << csv_field(J.to_string()) << ',' << k + 1 << ',' << format_number(plan.tk(J, k)) << ','
         << format_number(plan.t(J)) << "\r\n";
    }
  }
}

void write_memory_csv(std::ostream& os, const std::vector<MemoryOptimization>& rows) {
  os << "budget,best_mem,best_T,symmetric_T,bound_mem,bound_T,points\r\n";
  auto mem = [](const std::vector<double>& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + format_number(m[i]);
    return csv_field(s + "]");
  };
  for (const auto& r : rows) {
    os << format_number(r.best.budget) << ',' << mem(r.best.mem) << ','
       << format_number(r.best.objective) << ',' << opt_csv(r.symmetric_objective) << ','
       << mem(r.lower_bound.mem) << ',' << format_number(r.lower_bound.objective) << ','
       << r.points << "\r\n";
  }
}

void write_trace_header(std::ostream& os) { os << "slot,subphase,receivers,action\r\n"; }

void write_trace_row(std::ostream& os, const SlotEvent& e) {
  os << e.slot << ',' << csv_field(e.subphase.to_string()) << ','
     << csv_field(e.receivers.to_string()) << ',' << to_string(e.action) << "\r\n";
}

}  // namespace ebc
