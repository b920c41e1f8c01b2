#include "foes/instability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace foes {

Extremes find_extremes(const FoesModel& model) {
  const auto table = model.unnormalized_table();
  Extremes e{table[0], table[0], 0, 0};
  for (std::uint64_t i = 1; i < table.size(); ++i) {
    if (table[i] > e.max_log) {
      e.max_log = table[i];
      e.argmax = i;
    }
    if (table[i] < e.min_log) {
      e.min_log = table[i];
      e.argmin = i;
    }
  }
  return e;
}

InstabilityReport lrep(const FoesModel& model) {
  const Extremes e = find_extremes(model);
  InstabilityReport r;
  r.n_variables = model.n_variables();
  r.lrep = e.range();
  r.scaled_lrep = r.lrep / static_cast<double>(r.n_variables);
  r.argmax_index = e.argmax;
  r.argmin_index = e.argmin;
  r.argmax_outcome = model.space().decode(e.argmax);
  r.argmin_outcome = model.space().decode(e.argmin);
  return r;
}

InstabilityReport instability_report(const FoesModel& model) {
  InstabilityReport r = lrep(model);
  r.delta_n = delta_n(model);
  return r;
}

double delta_n(const FoesModel& model) {
  const auto table = model.unnormalized_table();
  const OutcomeSpace& space = model.space();
  const std::size_t k = space.alphabet_size();
  double best = 0.0;
  // Each unordered one-flip pair is visited once; |log ratio| covers both orders.
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    for (std::size_t var = 0; var < space.n_variables(); ++var) {
      const std::size_t d = space.digit_at(idx, var);
      for (std::size_t other = d + 1; other < k; ++other) {
        const double diff = std::abs(table[idx] - table[space.with_digit(idx, var, other)]);
        best = std::max(best, diff);
      }
    }
  }
  return best;
}

bool ModalSet::contains(std::uint64_t index) const {
  return std::binary_search(members.begin(), members.end(), index);
}

ModalSet modal_set(const FoesModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument(fmt::format("epsilon must lie in (0,1), got {}", epsilon));
  }
  const auto table = model.unnormalized_table();
  const double psi = model.log_normalizer();
  const Extremes e = find_extremes(model);
  const double range = e.range();

  ModalSet m;
  m.epsilon = epsilon;
  m.n_outcomes = table.size();
  m.threshold = (1.0 - epsilon) * (e.max_log - psi) + epsilon * (e.min_log - psi);

  std::vector<double> inside;
  std::vector<double> outside;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    // log P(x) > (1-ε) max + ε min  ⇔  (u - min) > (1-ε)(max - min)
    const bool member = range == 0.0 || (table[i] - e.min_log) > (1.0 - epsilon) * range;
    if (member) {
      m.members.push_back(i);
      inside.push_back(table[i] - psi);
    } else {
      outside.push_back(table[i] - psi);
    }
  }
  m.log_mass = log_sum_exp(inside);
  m.mass = std::exp(m.log_mass);
  m.complement_log_mass = outside.empty() ? -std::numeric_limits<double>::infinity()
                                          : log_sum_exp(outside);
  return m;
}

double log_mass_of(const FoesModel& model, std::span<const std::uint64_t> members) {
  if (members.empty()) return -std::numeric_limits<double>::infinity();
  std::vector<double> lp;
  lp.reserve(members.size());
  for (auto i : members) lp.push_back(model.log_prob(i));
  return log_sum_exp(lp);
}

double standardized_log_prob(const FoesModel& model, std::uint64_t index) {
  const Extremes e = find_extremes(model);
  if (e.range() == 0.0) {
    throw UniformModelError("standardized log-probability is undefined for a uniform model");
  }
  return (model.unnormalized_table()[index] - e.min_log) / e.range();
}

double standardized_log_prob(const FoesModel& model, std::span<const int> outcome) {
  return standardized_log_prob(model, model.space().encode(outcome));
}

double g_distance(const FoesModel& a, const FoesModel& b) {
  if (!(a.space() == b.space())) {
    throw std::invalid_argument("g_distance requires models on the same space");
  }
  const Extremes ea = find_extremes(a);
  const Extremes eb = find_extremes(b);
  if (ea.range() == 0.0 || eb.range() == 0.0) {
    throw UniformModelError("g_distance is undefined for a uniform model");
  }
  const auto ta = a.unnormalized_table();
  const auto tb = b.unnormalized_table();
  double best = 0.0;
  for (std::uint64_t i = 0; i < ta.size(); ++i) {
    const double ga = (ta[i] - ea.min_log) / ea.range();
    const double gb = (tb[i] - eb.min_log) / eb.range();
    best = std::max(best, std::abs(ga - gb));
  }
  return best;
}

double check_prop1_condition(const LinearExpFamily& family,
                             std::span<const StatisticRange> extremes) {
  if (extremes.size() != family.dimension()) {
    throw std::invalid_argument("one statistic range per parameter is required");
  }
  const double n = static_cast<double>(family.space.n_variables());
  double best = 0.0;
  for (std::size_t i = 0; i < extremes.size(); ++i) {
    best = std::max(best, std::abs(family.params[i]) * extremes[i].width() / n);
  }
  return best;
}

GraphLowerBound graph_lower_bound(const GraphModelSpec& spec) {
  const std::size_t n_nodes = spec.n_nodes;
  if (n_nodes < 4 || n_nodes % 2 != 0) {
    throw std::invalid_argument(fmt::format(
        "graph lower bound is only supported for even n >= 4 (got n = {})", n_nodes));
  }
  const double n = static_cast<double>(n_nodes);
  const double t1 = spec.theta(GraphTerm::edges);
  const double t2 = spec.theta(GraphTerm::two_stars);
  const double t3 = spec.theta(GraphTerm::triangles);

  GraphLowerBound r;
  r.complete_branch = (n - 2.0) * std::abs(t2 + t3 / 3.0 + t1 / (n - 2.0));
  r.bipartite_branch =
      (n - 2.0) * n / (4.0 * (n - 1.0)) * std::abs(t2 + 2.0 * t1 / (n - 2.0));
  r.bound = std::max(r.complete_branch, r.bipartite_branch);

  const EdgeIndex index(n_nodes);
  const double n_edges = static_cast<double>(index.n_edges());
  const std::vector<int> empty(index.n_edges(), 0);
  const std::vector<int> complete(index.n_edges(), 1);
  std::vector<int> bipartite(index.n_edges(), 0);
  const std::size_t half = n_nodes / 2;
  for (std::size_t e = 0; e < index.n_edges(); ++e) {
    auto [u, v] = index.nodes(e);
    bipartite[e] = (u < half) != (v < half) ? 1 : 0;
  }
  const auto score = [&](const std::vector<int>& x) {
    const GraphStatistics g = graph_statistics(index, x);
    return t1 * g.edges + t2 * g.two_stars + t3 * g.triangles;
  };
  const double base = score(empty);
  r.direct_complete = std::abs(score(complete) - base) / n_edges;
  r.direct_bipartite = std::abs(score(bipartite) - base) / n_edges;

  const auto agrees = [](double a, double b) {
    return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a));
  };
  if (!agrees(r.complete_branch, r.direct_complete) ||
      !agrees(r.bipartite_branch, r.direct_bipartite)) {
    throw std::logic_error(fmt::format(
        "graph lower bound branches ({}, {}) disagree with direct evaluation ({}, {})",
        r.complete_branch, r.bipartite_branch, r.direct_complete, r.direct_bipartite));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Paths

void ParameterPath::validate() const {
  if (!family) throw std::invalid_argument("parameter path has no family");
  if (entries.size() < 3) throw std::invalid_argument("parameter path needs >= 3 entries");
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].size <= entries[i - 1].size) {
      throw std::invalid_argument("parameter path sizes must be strictly increasing");
    }
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::empirically_stable: return "empirically-stable";
    case Verdict::empirically_unstable: return "empirically-unstable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double least_squares_slope(std::span<const double> xs, std::span<const double> values) {
  if (xs.size() != values.size() || xs.size() < 2) {
    throw std::invalid_argument("slope needs >= 2 paired points");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (values[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx == 0.0 ? 0.0 : sxy / sxx;
}

PathVerdict classify_sequence(std::span<const double> ns, std::span<const double> values,
                              const PathThresholds& thresholds) {
  PathVerdict v;
  v.n_variables.assign(ns.begin(), ns.end());
  v.scaled_lreps.assign(values.begin(), values.end());
  v.trend_slope = least_squares_slope(ns, values);

  bool increasing = true;
  for (std::size_t i = 1; i < values.size(); ++i) increasing &= values[i] > values[i - 1];
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());

  if (increasing && values.back() > thresholds.level) {
    v.verdict = Verdict::empirically_unstable;
  } else if (*hi - *lo < thresholds.flatness) {
    v.verdict = Verdict::empirically_stable;
  } else {
    v.verdict = Verdict::inconclusive;
  }
  return v;
}

PathVerdict classify_path(const ParameterPath& path, const PathThresholds& thresholds) {
  path.validate();
  std::vector<double> ns;
  std::vector<double> scaled;
  for (const auto& entry : path.entries) {
    const FoesModel model = path.family(entry);
    const InstabilityReport r = lrep(model);
    ns.push_back(static_cast<double>(r.n_variables));
    scaled.push_back(r.scaled_lrep);
  }
  return classify_sequence(ns, scaled, thresholds);
}

}  // namespace foes
