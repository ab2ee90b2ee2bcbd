#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "ebc/model.hpp"
#include "ebc/placement.hpp"
#include "ebc/user_set.hpp"

namespace ebc {

// Permutation-family functions enumerate K! orders; refuse beyond this.
inline constexpr int kMaxPermutationUsers = 8;
inline constexpr double kFeasibilityTolerance = 1e-9;

// w_J = prod_{j in J}(1 - p_j) / (1 - prod_{j in J} delta_j). Throws on empty J.
double weight(const SystemConfig& cfg, UserSet J);
double delta_product(const SystemConfig& cfg, UserSet J);

struct RegionInequality {
  std::vector<int> perm;       // 0-based user order
  std::vector<double> coeffs;  // coeffs[i] multiplies R_{perm[i]}
  double lhs(const RateVector& r) const;
};

struct RateRegion {
  int K = 0;
  std::vector<RegionInequality> inequalities;
};

RateRegion rate_region(const SystemConfig& cfg);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<int> worst_perm;
  double max_lhs = 0.0;
};

FeasibilityResult feasible(const SystemConfig& cfg, const RateVector& r,
                           double tol = kFeasibilityTolerance);

struct TwoUserVertices {
  std::array<double, 2> axis1{};         // on the R_1 axis
  std::array<double, 2> intersection{};  // both permutation inequalities tight
  std::array<double, 2> axis2{};         // on the R_2 axis
  // Both inequalities describe the same line; `intersection` is then the
  // point of that line with R_1 = R_2.
  bool coincident = false;
  double sum_rate() const { return intersection[0] + intersection[1]; }
  // F_{d_2} / F_{d_1} at the intersection, i.e. R_2 / R_1.
  double ratio() const { return intersection[1] / intersection[0]; }
};

// Corner points of the two-user region. Throws std::domain_error when the two
// permutation inequalities are parallel.
TwoUserVertices vertices_two_user(const SystemConfig& cfg);

// Vertices of the region polytope (with R >= 0), K <= 4.
std::vector<RateVector> enumerate_vertices(const SystemConfig& cfg);

struct ClosedFormLength {
  double total = 0.0;
  std::vector<int> perm;
};

// max over permutations of sum_k w_{pi_1..pi_k} F_{pi_k}; sizes[k] = F_{d_k}.
ClosedFormLength ttot_closed_form(const SystemConfig& cfg, const std::vector<double>& sizes);

struct PlanOptions {
  bool record_transfers = true;
};

struct PhasePlan {
  int K = 0;
  std::vector<double> sizes;   // F_{d_k} used for the plan
  std::vector<double> t_sub;   // indexed by mask
  std::vector<double> t_user;  // indexed by mask * K + k
  std::map<std::tuple<UserSet, UserSet, int>, double> transfers;  // (I, J, k)
  double total = 0.0;

  double t(UserSet J) const { return t_sub[J.mask()]; }
  double tk(UserSet J, int k) const { return t_user[J.mask() * K + k]; }
  double transfer(UserSet I, UserSet J, int k) const;
};

// Expected sub-file sizes from the placement probabilities.
PhasePlan phase_plan(const SystemConfig& cfg, const std::vector<double>& sizes,
                     const PlanOptions& opts = {});
PhasePlan phase_plan(const SystemConfig& cfg, const Demand& d, const PlanOptions& opts = {});
// Realized sub-file sizes from a placement.
PhasePlan phase_plan(const SystemConfig& cfg, const PlacementMap& pm, const Demand& d,
                     const PlanOptions& opts = {});

double subphase_length_alternating(const SystemConfig& cfg, UserSet J, int k, double F_k);

// User attaining t_J when user k's file size is R_k; ties go to the smaller index.
int worst_user(const SystemConfig& cfg, UserSet J, const RateVector& r);
int worst_user(const PhasePlan& unit_plan, UserSet J, const RateVector& r);

struct PlanComparison {
  double plan_total = 0.0;
  double closed_form = 0.0;
  double gap = 0.0;  // plan_total - closed_form
};
PlanComparison compare_plan(const SystemConfig& cfg, const std::vector<double>& sizes);

// Symmetric-channel quantities.
double order_j_capacity(int K, double delta, int j);
double decomposition_identity_residual(int K, double delta, double N1);
// t^i_j for j = i..K (index j - i), starting from t^i_i = n_i / (1 - delta^{K-i+1}).
std::vector<double> symmetric_phase_lengths(int K, double delta, int i, double n_i);
// max_j |t^1_j - sum_{i=2}^j t^i_j| with N_i = N_{1->i}.
double phase_recursion_residual(int K, double delta, double N1);
double symmetric_rate(int n, double delta, double p);
RateVector symmetric_vertices(int K, double delta, double p, UserSet active);

double ttot_no_feedback(const SystemConfig& cfg, PlacementScheme scheme);
double ttot_centralized(int K, double delta, double M, int N, double F);

enum class MisoScheme { kDecentralized, kCentralized };
// k-th coefficient with 1 - delta^k replaced by k. `param` is p for the
// decentralized scheme and b for the centralized one.
double miso_dof_weight(int K, int k, double param, MisoScheme scheme);
// sum of the coefficients: delivery time per file under the DoF dual.
double miso_ttot(int K, double param, MisoScheme scheme);

struct DominanceResult {
  bool holds = false;
  double max_other_lhs = 0.0;
};
// Scales r so the identity-permutation LHS is 1 and checks all others.
DominanceResult permutation_dominance_check(const SystemConfig& cfg, const RateVector& r);

double binomial(int n, int k);

}  // namespace ebc
