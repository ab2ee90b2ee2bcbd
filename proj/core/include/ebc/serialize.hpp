#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ebc/analysis.hpp"
#include "ebc/delivery.hpp"
#include "ebc/experiments.hpp"
#include "ebc/identities.hpp"
#include "ebc/model.hpp"

namespace ebc {

using Json = nlohmann::ordered_json;

inline constexpr int kOutputDigits = 12;

// x rounded to `digits` significant digits (non-finite values pass through).
double round_sig(double x, int digits = kOutputDigits);
std::string format_number(double x, int digits = kOutputDigits);
// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

Json users_json(UserSet s);
Json perm_json(const std::vector<int>& perm);

Json to_json(const SystemConfig& cfg);
Json to_json(const RateRegion& region);
Json to_json(const TwoUserVertices& v);
Json to_json(const FeasibilityResult& f);
Json to_json(const ClosedFormLength& c);
Json to_json(const PhasePlan& plan);
Json to_json(const SimResult& r, double F);
Json to_json(const MonteCarloResult& r);
Json to_json(const IdentityReport& r);
Json to_json(const MemoryAllocation& a);
Json to_json(const MemoryOptimization& m);
Json to_json(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_plan_csv(std::ostream& os, const PhasePlan& plan);
void write_memory_csv(std::ostream& os, const std::vector<MemoryOptimization>& rows);
void write_trace_header(std::ostream& os);
void write_trace_row(std::ostream& os, const SlotEvent& e);

}  // namespace ebc
