#pragma once

// Instability and degeneracy diagnostics computed exactly by enumeration:
// LREP, the one-flip ratio Δ_N, ε-modal sets, standardized log-probabilities
// and a finite-N heuristic for classifying parameter paths.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foes/core.hpp"
#include "foes/model_zoo.hpp"

namespace foes {

/// Location of the extreme log-probabilities (lowest index wins ties).
struct Extremes {
  double max_log = 0.0;  // unnormalized
  double min_log = 0.0;
  std::uint64_t argmax = 0;
  std::uint64_t argmin = 0;
  double range() const noexcept { return max_log - min_log; }
};

Extremes find_extremes(const FoesModel& model);

struct InstabilityReport {
  double lrep = 0.0;
  double scaled_lrep = 0.0;
  std::optional<double> delta_n;
  Outcome argmax_outcome;
  Outcome argmin_outcome;
  std::uint64_t argmax_index = 0;
  std::uint64_t argmin_index = 0;
  std::size_t n_variables = 0;
};

/// LREP fields only; `delta_n` is left empty.
InstabilityReport lrep(const FoesModel& model);
/// LREP fields plus Δ_N.
InstabilityReport instability_report(const FoesModel& model);

/// Largest log-probability ratio between outcomes that differ in one variable.
double delta_n(const FoesModel& model);

struct ModalSet {
  double epsilon = 0.0;
  /// Cut on normalized log-probability: (1-ε)·max log P + ε·min log P.
  double threshold = 0.0;
  std::vector<std::uint64_t> members;  // ascending
  double mass = 0.0;
  double log_mass = 0.0;
  /// log P(complement), accumulated separately; -inf when empty.
  double complement_log_mass = 0.0;
  std::uint64_t n_outcomes = 0;

  bool contains(std::uint64_t index) const;
};

/// Outcomes with log P strictly above the ε-threshold. For a uniform model the
/// strict cut is vacuous and every outcome is a member.
ModalSet modal_set(const FoesModel& model, double epsilon);

/// Mass a model assigns to an index set (log-sum-exp over members).
double log_mass_of(const FoesModel& model, std::span<const std::uint64_t> members);

/// G(x) = (log P(x) - min log P) / LREP, in [0, 1].
double standardized_log_prob(const FoesModel& model, std::uint64_t index);
double standardized_log_prob(const FoesModel& model, std::span<const int> outcome);

/// max_x |G_a(x) - G_b(x)| over a shared space.
double g_distance(const FoesModel& a, const FoesModel& b);

/// max_i |θ_i|(U_i - L_i)/N for a linear exponential family.
double check_prop1_condition(const LinearExpFamily& family,
                             std::span<const StatisticRange> extremes);

struct GraphLowerBound {
  double bound = 0.0;
  double complete_branch = 0.0;   // (n-2)|θ2 + θ3/3 + θ1/(n-2)|
  double bipartite_branch = 0.0;  // (n-2)·n/(4(n-1))·|θ2 + 2θ1/(n-2)|
  double direct_complete = 0.0;   // |log P(K_n)/P(empty)| / N
  double direct_bipartite = 0.0;  // |log P(K_{n/2,n/2})/P(empty)| / N
};

/// Lower bound on LREP/N for the edge/2-star/triangle model from the empty,
/// complete and balanced complete-bipartite graphs. Even n only; the closed
/// form is checked against direct evaluation (no enumeration needed).
GraphLowerBound graph_lower_bound(const GraphModelSpec& spec);

// ---------------------------------------------------------------------------
// Parameter paths

struct PathEntry {
  std::size_t size = 0;  // family-specific size (variables, nodes, …)
  std::vector<double> params;
};

struct ParameterPath {
  std::string family_name;
  std::function<FoesModel(const PathEntry&)> family;
  std::vector<PathEntry> entries;

  void validate() const;
};

struct PathThresholds {
  double flatness = 0.1;  // stable if range(scaled LREP) < flatness
  double level = 3.0;     // unstable if strictly increasing and last > level
};

enum class Verdict { empirically_stable, empirically_unstable, inconclusive };

std::string to_string(Verdict v);

struct PathVerdict {
  std::vector<double> n_variables;
  std::vector<double> scaled_lreps;
  double trend_slope = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

/// Least-squares slope of `values` against `xs`.
double least_squares_slope(std::span<const double> xs, std::span<const double> values);

/// Heuristic verdict for an arbitrary N-indexed sequence.
PathVerdict classify_sequence(std::span<const double> ns, std::span<const double> values,
                              const PathThresholds& thresholds = {});

PathVerdict classify_path(const ParameterPath& path,
                          const PathThresholds& thresholds = {});

}  // namespace foes
