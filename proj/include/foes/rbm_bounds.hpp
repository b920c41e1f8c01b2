#pragma once

// Bounds linking the RBM joint and visible-marginal LREPs through the
// quantities A_N, B_N and C_N, plus finite-N trend checks for the stability
// conditions on RBM parameter paths.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foes/core.hpp"
#include "foes/instability.hpp"
#include "foes/model_zoo.hpp"

namespace foes {

/// a(h) = Σ_i |θ^V_i + Σ_j h_j θ^VH_ji|
double visible_field_l1(const RbmParams& params, std::span<const int> h);
/// b(x) = Σ_j |θ^H_j + Σ_i x_i θ^VH_ji|
double hidden_field_l1(const RbmParams& params, std::span<const int> x);

/// max_x f(x, h) = hᵀθ^H + a(h); min_x f(x, h) = hᵀθ^H − a(h).
double max_over_visible(const RbmParams& params, std::span<const int> h);
double min_over_visible(const RbmParams& params, std::span<const int> h);
/// max_h f(x, h) = xᵀθ^V + b(x); min_h f(x, h) = xᵀθ^V − b(x).
double max_over_hidden(const RbmParams& params, std::span<const int> x);
double min_over_hidden(const RbmParams& params, std::span<const int> x);

/// Calls fn on every {-1,+1}^n vector in index order (n = 0 gives one empty
/// vector). Throws BudgetExceeded when 2^n is over the cap.
void for_each_spin_vector(std::size_t n, Budget budget,
                          const std::function<void(std::span<const int>)>& fn);

struct BoundLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs − rhs for "lhs ≥ rhs" links; NH·ln2 − |gap| for the marginal link.
  double slack = 0.0;
  /// Whether the link follows from the closed forms. Unprovable links are
  /// recorded, never asserted.
  bool asserted = true;
  bool holds(double tol = 1e-9) const { return slack >= -tol; }
};

struct RbmBoundsReport {
  std::size_t n_visible = 0;
  std::size_t n_hidden = 0;
  std::optional<double> a_n;  // needs 2^N
  std::optional<double> b_n;  // needs 2^NH
  std::optional<double> c_n;
  double hidden_l1 = 0.0;
  double visible_l1 = 0.0;
  double interaction_l1 = 0.0;
  std::optional<double> lrep_joint;
  bool lrep_joint_enumerated = false;  // false: closed form over h
  std::optional<double> lrep_marginal;
  double n_h_log2 = 0.0;
  /// 2a(h₂*) with h₂* = argmin_h [−hᵀθ^H + a(h)].
  std::optional<double> two_a_h2_star;
  /// max_h max_x f − max_h min_x f. Differs from A_N in general.
  std::optional<double> max_min_gap;
  std::vector<BoundLink> links;

  const BoundLink* link(const std::string& name) const;
};

/// Every field that fits the budget, and every link among available fields.
/// Links marked `asserted` throw std::logic_error when violated beyond 1e-9
/// (relative to the magnitudes involved).
RbmBoundsReport bounds_report(const RbmParams& params, Budget budget = {});

struct StabilityConfig {
  PathThresholds thresholds{};
  double bound_constant = 1.0;    // C in the L1 sufficient conditions
  double max_hidden_ratio = 8.0;  // finite-N stand-in for sup NH/N < ∞
  Budget budget{};
};

struct ConditionTrend {
  std::string name;
  std::string quantity;
  PathVerdict verdict;
};

struct StabilityConditions {
  std::vector<double> n_visible;
  std::vector<double> hidden_ratio;
  bool hidden_ratio_bounded = true;

  ConditionTrend visible_a;           // A_N/N
  ConditionTrend joint_b;             // max{|θ^H|₁, B_N}/N
  ConditionTrend visible_minus_hidden;  // (|θ^V|₁ − 2|θ^H|₁)/N
  ConditionTrend hidden_only;         // |θ^H|₁/N
  ConditionTrend visible_l1;          // (|θ^V|₁ + |θ^VH|₁)/N
  ConditionTrend total_l1;            // |θ|₁/N

  /// Sufficient conditions for stability: every value ≤ C.
  bool visible_l1_within_bound = false;
  bool total_l1_within_bound = false;

  /// lrep_joint ≥ A_N ≥ lrep_marginal − NH·ln2 at every entry that fits.
  bool joint_dominates_visible = true;
  /// With |θ^H|₁/N flat or inconclusive, the A_N/N and joint verdicts agree.
  std::optional<bool> verdicts_agree;

  std::vector<const ConditionTrend*> trends() const;
};

/// Entries must have strictly increasing visible counts (≥ 3 entries).
StabilityConditions stability_conditions(std::span<const RbmParams> path,
                                         const StabilityConfig& config = {});

}  // namespace foes
