#include "foes/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "foes/instability.hpp"

namespace foes {

namespace {

// Log-weights of the |X| completions of `index` at `var`, in digit order.
void completion_log_weights(const FoesModel& model, std::uint64_t index, std::size_t var,
                            std::vector<double>& out) {
  const OutcomeSpace& space = model.space();
  const auto table = model.unnormalized_table();
  out.resize(space.alphabet_size());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = table[space.with_digit(index, var, d)];
}

void normalize_in_place(std::vector<double>& logw) {
  const double m = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (auto& w : logw) total += (w = std::exp(w - m));
  for (auto& w : logw) w /= total;
}

void check_var(const FoesModel& model, std::size_t var) {
  if (var >= model.n_variables()) {
    throw std::out_of_range(fmt::format("variable {} out of range for N = {}", var,
                                        model.n_variables()));
  }
}

}  // namespace

void ChainConfig::validate() const {
  if (n_sweeps <= burn_in) {
    throw std::invalid_argument(
        fmt::format("n_sweeps ({}) must exceed burn_in ({})", n_sweeps, burn_in));
  }
  if (!(modal_epsilon > 0.0 && modal_epsilon < 1.0)) {
    throw std::invalid_argument("modal_epsilon must lie in (0,1)");
  }
}

std::vector<double> gibbs_full_conditional(const FoesModel& model, std::uint64_t index,
                                           std::size_t var) {
  check_var(model, var);
  if (index >= model.space().size()) throw std::out_of_range("outcome index out of range");
  std::vector<double> w;
  completion_log_weights(model, index, var, w);
  normalize_in_place(w);
  return w;
}

std::vector<double> gibbs_full_conditional(const FoesModel& model,
                                           std::span<const int> outcome, std::size_t var) {
  return gibbs_full_conditional(model, model.space().encode(outcome), var);
}

MixingReport run_gibbs(const FoesModel& model, const ChainConfig& config,
                       const SweepObserver& observer) {
  config.validate();
  const OutcomeSpace& space = model.space();
  const std::size_t n = space.n_variables();
  const std::uint64_t size = space.size();
  const ModalSet modes = modal_set(model, config.modal_epsilon);
  std::vector<char> in_modes(size, 0);
  for (auto i : modes.members) in_modes[i] = 1;

  Rng rng(config.seed);
  std::uint64_t index = config.init ? space.encode(*config.init) : rng.below(size);

  MixingReport report;
  report.modal_set_fraction =
      static_cast<double>(modes.members.size()) / static_cast<double>(size);
  std::vector<std::uint64_t> counts(size, 0);
  std::size_t inside = 0;
  std::vector<double> w;

  if (in_modes[index]) report.first_modal_entry = 0;

  for (std::size_t sweep = 1; sweep <= config.n_sweeps; ++sweep) {
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t var = config.random_scan ? rng.below(n) : step;
      completion_log_weights(model, index, var, w);
      const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
      report.max_transition_log_ratio = std::max(report.max_transition_log_ratio, *hi - *lo);
      normalize_in_place(w);
      double r = rng.uniform();
      std::size_t digit = 0;
      while (digit + 1 < w.size() && r >= w[digit]) r -= w[digit++];
      index = space.with_digit(index, var, digit);
    }

    const bool member = in_modes[index] != 0;
    if (!report.first_modal_entry && member) report.first_modal_entry = sweep;
    if (report.first_modal_entry && !report.mode_escape_time && !member) {
      report.mode_escape_time = sweep - *report.first_modal_entry;
    }
    if (sweep > config.burn_in) {
      ++counts[index];
      inside += member ? 1 : 0;
    }
    if (observer) observer(sweep, index);
  }

  report.n_samples = config.n_sweeps - config.burn_in;
  report.final_index = index;
  report.modal_occupancy = static_cast<double>(inside) / static_cast<double>(report.n_samples);
  const std::vector<double> exact = exact_distribution(model);
  std::vector<double> empirical(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    empirical[i] = static_cast<double>(counts[i]) / static_cast<double>(report.n_samples);
  }
  report.tv_distance = total_variation(empirical, exact);
  return report;
}

std::vector<double> apply_site_kernel(const FoesModel& model, std::span<const double> dist,
                                      std::size_t var) {
  check_var(model, var);
  const OutcomeSpace& space = model.space();
  if (dist.size() != space.size()) throw std::invalid_argument("distribution size mismatch");
  std::vector<double> out(dist.size(), 0.0);
  std::vector<double> w;
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    if (space.digit_at(idx, var) != 0) continue;
    completion_log_weights(model, idx, var, w);
    normalize_in_place(w);
    double mass = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d) mass += dist[space.with_digit(idx, var, d)];
    for (std::size_t d = 0; d < w.size(); ++d) out[space.with_digit(idx, var, d)] = mass * w[d];
  }
  return out;
}

std::vector<double> apply_gibbs_kernel(const FoesModel& model, std::span<const double> dist) {
  std::vector<double> cur(dist.begin(), dist.end());
  for (std::size_t var = 0; var < model.n_variables(); ++var) {
    cur = apply_site_kernel(model, cur, var);
  }
  return cur;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

std::vector<double> exact_distribution(const FoesModel& model) {
  std::vector<double> p = enumerate_log_probs(model);
  for (auto& v : p) v = std::exp(v);
  return p;
}

// ---------------------------------------------------------------------------

double ProposalSpec::sd(std::size_t i) const {
  if (step.empty()) throw std::invalid_argument("proposal step is empty");
  return step.size() == 1 ? step[0] : step.at(i);
}

double mh_log_acceptance(const ModelFamily& family, std::span<const int> data,
                         const LogPrior& prior, std::span<const double> proposed,
                         std::span<const double> current, const LogProposalDensity& log_q) {
  const double lp_new = prior ? prior(proposed) : 0.0;
  if (lp_new == -std::numeric_limits<double>::infinity()) return lp_new;
  const double lp_old = prior ? prior(current) : 0.0;
  double log_ratio = family(proposed).log_prob(data) + lp_new -
                     family(current).log_prob(data) - lp_old;
  if (log_q) log_ratio += log_q(current, proposed) - log_q(proposed, current);
  return std::min(0.0, log_ratio);
}

MhResult run_param_mh(const ModelFamily& family, std::span<const int> data,
                      const LogPrior& prior, const ProposalSpec& proposal,
                      const MhConfig& config) {
  if (config.init_theta.size() != family.n_params) {
    throw std::invalid_argument(fmt::format("init_theta has {} entries, family '{}' needs {}",
                                            config.init_theta.size(), family.name,
                                            family.n_params));
  }
  if (proposal.step.size() != 1 && proposal.step.size() != family.n_params) {
    throw std::invalid_argument("proposal step must have 1 or n_params entries");
  }
  const auto log_post = [&](std::span<const double> t) {
    const double lp = prior ? prior(t) : 0.0;
    if (lp == -std::numeric_limits<double>::infinity()) return lp;
    return family(t).log_prob(data) + lp;
  };

  Rng rng(config.seed);
  std::vector<double> current = config.init_theta;
  double current_lp = log_post(current);
  if (!std::isfinite(current_lp)) {
    throw std::invalid_argument("initial theta has zero posterior density");
  }

  MhResult result;
  std::vector<double> proposed(current.size());
  for (std::size_t it = 0; it < config.n_iterations; ++it) {
    for (std::size_t i = 0; i < current.size(); ++i) {
      proposed[i] = current[i] + proposal.sd(i) * rng.normal();
    }
    const double proposed_lp = log_post(proposed);
    const double log_alpha = std::min(0.0, proposed_lp - current_lp);
    const bool accept = std::log(rng.uniform()) < log_alpha;
    if (accept) {
      current = proposed;
      current_lp = proposed_lp;
      ++result.n_accepted;
    }
    result.log_acceptance.push_back(log_alpha);
    result.trace.push_back(current);
  }
  result.acceptance_rate = config.n_iterations == 0
                               ? 0.0
                               : static_cast<double>(result.n_accepted) /
                                     static_cast<double>(config.n_iterations);
  return result;
}

// ---------------------------------------------------------------------------

double theorem3_statistic(const FoesModel& model, std::uint64_t index) {
  return standardized_log_prob(model, index);
}

double theorem3_expectation(const FoesModel& statistic_model,
                            const FoesModel& expectation_model) {
  if (!(statistic_model.space() == expectation_model.space())) {
    throw std::invalid_argument("theorem3_expectation requires a shared space");
  }
  const Extremes e = find_extremes(statistic_model);
  if (e.range() == 0.0) throw UniformModelError("L is undefined for a uniform model");
  const auto u = statistic_model.unnormalized_table();
  const std::vector<double> p = exact_distribution(expectation_model);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * (u[i] - e.min_log) / e.range();
  return acc;
}

double theorem3_expectation(const FoesModel& model) {
  return theorem3_expectation(model, model);
}

ScoreReport expected_statistic(const LinearExpFamily& family) {
  const FoesModel model = make_linear_exp_family(family);
  const std::vector<double> p = exact_distribution(model);
  ScoreReport r;
  r.mean.assign(family.dimension(), 0.0);
  std::vector<int> x(family.space.n_variables());
  for (std::uint64_t idx = 0; idx < p.size(); ++idx) {
    family.space.decode_into(idx, x);
    const std::vector<double> g = family.evaluate(x);
    for (std::size_t i = 0; i < g.size(); ++i) r.mean[i] += p[idx] * g[i];
  }
  r.ranges = statistic_extremes(family);
  if (family.dimension() == 1 && r.ranges[0].width() > 0.0) {
    r.normalized = (r.mean[0] - r.ranges[0].lower) / r.ranges[0].width();
  }
  return r;
}

}  // namespace foes
