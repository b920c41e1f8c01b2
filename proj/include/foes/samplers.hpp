#pragma once

// Gibbs sampling over FOES models with exact mixing diagnostics, a
// parameter-space Metropolis-Hastings walk with exact likelihoods, and
// enumerated expectations of standardized statistics.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "foes/core.hpp"
#include "foes/model_zoo.hpp"
#include "foes/random.hpp"

namespace foes {

struct ChainConfig {
  std::size_t n_sweeps = 1000;
  std::size_t burn_in = 0;
  std::uint64_t seed = 1;
  std::optional<Outcome> init;  // uniform random start when empty
  bool random_scan = false;     // N uniformly chosen sites per sweep
  double modal_epsilon = 0.1;

  void validate() const;
};

struct MixingReport {
  double tv_distance = 0.0;
  double max_transition_log_ratio = 0.0;
  /// Sweeps spent in the modal set from the first entry until the next exit;
  /// empty when the chain never leaves after entering (or never enters).
  std::optional<std::size_t> mode_escape_time;
  std::optional<std::size_t> first_modal_entry;
  double modal_occupancy = 0.0;
  double modal_set_fraction = 0.0;  // |M| / |X^N|
  std::size_t n_samples = 0;
  std::uint64_t final_index = 0;
};

/// P(X_var = a | x_-var) for each alphabet symbol a, in alphabet order.
std::vector<double> gibbs_full_conditional(const FoesModel& model, std::uint64_t index,
                                           std::size_t var);
std::vector<double> gibbs_full_conditional(const FoesModel& model,
                                           std::span<const int> outcome, std::size_t var);

/// Called after every sweep (1-based) with the current outcome index.
using SweepObserver = std::function<void(std::size_t sweep, std::uint64_t index)>;

/// Deterministic given config.seed. Occupancy statistics use sweeps
/// burn_in+1 .. n_sweeps.
MixingReport run_gibbs(const FoesModel& model, const ChainConfig& config,
                       const SweepObserver& observer = {});

/// One site update applied to a distribution over outcome indices.
std::vector<double> apply_site_kernel(const FoesModel& model, std::span<const double> dist,
                                      std::size_t var);
/// One systematic-scan sweep (sites 0..N-1) applied to a distribution.
std::vector<double> apply_gibbs_kernel(const FoesModel& model, std::span<const double> dist);

double total_variation(std::span<const double> p, std::span<const double> q);

/// Exact probabilities in index order.
std::vector<double> exact_distribution(const FoesModel& model);

// ---------------------------------------------------------------------------
// Parameter-space MH

using LogPrior = std::function<double(std::span<const double>)>;

/// log q(to | from); the Gaussian random walk is symmetric.
using LogProposalDensity =
    std::function<double(std::span<const double> to, std::span<const double> from)>;

struct ProposalSpec {
  std::vector<double> step;  // per-component sd; a single entry is broadcast
  double sd(std::size_t i) const;
};

struct MhConfig {
  std::size_t n_iterations = 1000;
  std::uint64_t seed = 1;
  std::vector<double> init_theta;
};

struct MhResult {
  std::vector<std::vector<double>> trace;  // state after each iteration
  std::vector<double> log_acceptance;      // log α per iteration
  std::size_t n_accepted = 0;
  double acceptance_rate = 0.0;
};

/// log α(proposed | current) = min{0, log q(current|proposed) + log P_proposed(x)
/// + log π(proposed) − log q(proposed|current) − log P_current(x) − log π(current)}.
double mh_log_acceptance(const ModelFamily& family, std::span<const int> data,
                         const LogPrior& prior, std::span<const double> proposed,
                         std::span<const double> current,
                         const LogProposalDensity& log_q = {});

MhResult run_param_mh(const ModelFamily& family, std::span<const int> data,
                      const LogPrior& prior, const ProposalSpec& proposal,
                      const MhConfig& config);

// ---------------------------------------------------------------------------
// Standardized statistics

/// L(x) = (log P(x) − min log P) / LREP.
double theorem3_statistic(const FoesModel& model, std::uint64_t index);

/// E_{expectation_model}[L_{statistic_model}(X)] by enumeration; the two
/// models must share a space.
double theorem3_expectation(const FoesModel& statistic_model,
                            const FoesModel& expectation_model);
double theorem3_expectation(const FoesModel& model);

struct ScoreReport {
  std::vector<double> mean;  // μ(θ) = E g(X)
  std::vector<StatisticRange> ranges;
  /// (μ − L)/(U − L) for one-parameter families with U > L.
  std::optional<double> normalized;
};

ScoreReport expected_statistic(const LinearExpFamily& family);

}  // namespace foes
