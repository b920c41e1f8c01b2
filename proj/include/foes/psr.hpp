#pragma once

// Parameter sign reversal (PSR): whether negating θ reciprocates relative
// probabilities, the modal-set masses that follow from it, and exact
// degeneracy trends along parameter paths.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "foes/instability.hpp"
#include "foes/model_zoo.hpp"

namespace foes {

inline constexpr double kPsrTolerance = 1e-9;

struct PsrReport {
  bool holds = false;
  /// max_x |log[P_θ(x) P_−θ(x)] − log[max_y P_θ(y) · min_y P_−θ(y)]|
  double max_violation = 0.0;
  double lrep_theta = 0.0;
  double lrep_neg_theta = 0.0;
};

class PsrViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> negate(std::span<const double> theta);

PsrReport check_psr(const ModelFamily& family, std::span<const double> theta);

struct Corollary1Masses {
  ModalSet modes;                      // M_{ε,θ} under θ
  double mass_theta_on_modes = 0.0;    // P_θ(M)
  double mass_neg_theta_on_complement = 0.0;  // P_−θ(Mᶜ)
  double mass_neg_theta_on_modes = 0.0;       // P_−θ(M), accumulated separately
};

/// Throws PsrViolation when the family fails PSR at θ.
Corollary1Masses corollary1_masses(const ModelFamily& family, std::span<const double> theta,
                                   double epsilon);

struct InclusionCheck {
  bool holds = true;
  std::size_t n_checked = 0;  // |M_{1−ε,−θ}|
  std::vector<std::uint64_t> violations;
};

/// Exhaustive check of M_{1−ε,−θ} ⊆ Mᶜ_{ε,θ}.
InclusionCheck check_modal_inclusion(const ModelFamily& family, std::span<const double> theta,
                                     double epsilon);

struct DegeneracyTrend {
  std::vector<double> n_variables;
  std::vector<double> masses;  // P_θN(M_{ε,θN})
  bool increasing = false;
  PathVerdict verdict;
};

DegeneracyTrend degeneracy_trend(const ParameterPath& path, double epsilon,
                                 const PathThresholds& thresholds = {});

}  // namespace foes
