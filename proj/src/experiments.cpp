#include "foes/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "foes/instability.hpp"
#include "foes/model_zoo.hpp"

namespace foes {

void GridExperimentConfig::validate() const {
  if (n_visible < 1) throw std::invalid_argument("n_visible must be >= 1");
  if (n_breaks < 2) throw std::invalid_argument("n_breaks must be >= 2");
  if (!(magnitude_min < magnitude_max)) {
    throw std::invalid_argument("magnitude_min must be below magnitude_max");
  }
  if (magnitude_min < 0.0) throw std::invalid_argument("magnitudes must be nonnegative");
  if (samples_per_point < 1) throw std::invalid_argument("samples_per_point must be >= 1");
  if (!scaled_lrep && !delta_n) throw std::invalid_argument("no metric selected");
  checked_space_size(n_visible, 2, budget);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace needs n >= 2");
  std::vector<double> v(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return v;
}

std::vector<double> sample_on_sphere(std::size_t dimension, double radius, Rng& rng) {
  if (dimension < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (!(radius >= 0.0)) throw std::invalid_argument("sphere radius must be >= 0");
  std::vector<double> v(dimension);
  double norm = 0.0;
  while (norm == 0.0) {
    for (auto& c : v) c = rng.normal();
    double ss = 0.0;
    for (double c : v) ss += c * c;
    norm = std::sqrt(ss);
  }
  for (auto& c : v) c *= radius / norm;
  return v;
}

std::vector<GridCell> run_figure1(const GridExperimentConfig& config) {
  config.validate();
  const std::vector<double> mags =
      linspace(config.magnitude_min, config.magnitude_max, config.n_breaks);
  const std::size_t nv = config.n_visible, nh = config.n_hidden;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<GridCell> cells;
  cells.reserve(mags.size() * mags.size());
  RbmParams params = RbmParams::zeros(nv, nh);
  for (std::size_t a = 0; a < mags.size(); ++a) {
    for (std::size_t b = 0; b < mags.size(); ++b) {
      const std::uint64_t cell_index = a * mags.size() + b;
      GridCell cell{mags[a], mags[b], 0.0, 0.0, config.samples_per_point};
      for (std::size_t s = 0; s < config.samples_per_point; ++s) {
        Rng rng(derive_seed(config.seed, cell_index, s));
        const auto main = sample_on_sphere(config.main_count(), mags[a] * config.main_count(), rng);
        const auto inter = sample_on_sphere(config.interaction_count(),
                                            mags[b] * config.interaction_count(), rng);
        for (std::size_t i = 0; i < nv; ++i) params.visible[static_cast<Eigen::Index>(i)] = main[i];
        for (std::size_t j = 0; j < nh; ++j) params.hidden[static_cast<Eigen::Index>(j)] = main[nv + j];
        for (std::size_t j = 0; j < nh; ++j) {
          for (std::size_t i = 0; i < nv; ++i) {
            params.interaction(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                inter[j * nv + i];
          }
        }
        const FoesModel model = make_rbm_marginal(params, config.budget);
        if (config.scaled_lrep) cell.mean_scaled_lrep += lrep(model).scaled_lrep;
        if (config.delta_n) cell.mean_delta_n += delta_n(model);
      }
      const double k = static_cast<double>(config.samples_per_point);
      cell.mean_scaled_lrep = config.scaled_lrep ? cell.mean_scaled_lrep / k : nan;
      cell.mean_delta_n = config.delta_n ? cell.mean_delta_n / k : nan;
      cells.push_back(cell);
    }
  }
  return cells;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman needs >= 2 paired values");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

Figure1Trends figure1_trends(const GridExperimentConfig& config,
                             std::span<const GridCell> cells) {
  const std::size_t m = config.n_breaks;
  if (cells.size() != m * m) throw std::invalid_argument("cell count does not match the grid");
  std::vector<double> axis(m), main_l(m, 0), int_l(m, 0), main_d(m, 0), int_d(m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    axis[a] = cells[a * m].main_magnitude;
    for (std::size_t b = 0; b < m; ++b) {
      const GridCell& c = cells[a * m + b];
      main_l[a] += c.mean_scaled_lrep / static_cast<double>(m);
      int_l[b] += c.mean_scaled_lrep / static_cast<double>(m);
      main_d[a] += c.mean_delta_n / static_cast<double>(m);
      int_d[b] += c.mean_delta_n / static_cast<double>(m);
    }
  }
  return {spearman(axis, main_l), spearman(axis, int_l), spearman(axis, main_d),
          spearman(axis, int_d)};
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_figure1_csv(std::ostream& out, const GridExperimentConfig& config,
                       std::span<const GridCell> cells) {
  std::string metrics;
  if (config.scaled_lrep) metrics += "scaled_lrep";
  if (config.delta_n) metrics += metrics.empty() ? "delta_n" : ";delta_n";
  out << "# figure1 rbm visible marginal\n"
      << fmt::format("# n_visible = {}\n# n_hidden = {}\n", config.n_visible, config.n_hidden)
      << fmt::format("# magnitude_min = {}\n# magnitude_max = {}\n",
                     format_real(config.magnitude_min), format_real(config.magnitude_max))
      << fmt::format("# n_breaks = {}\n# samples_per_point = {}\n", config.n_breaks,
                     config.samples_per_point)
      << fmt::format("# seed = {}\n# metrics = {}\n", config.seed, metrics)
      << "# grid = linear, inclusive\n"
      << "# radius = average magnitude * count (main: N_V+N_H, interaction: N_V*N_H), L2\n"
      << "# pairing = j-th main draw with j-th interaction draw\n"
      << "# rng = xoshiro256** per (cell, sample) stream\n"
      << "main_mag,int_mag,mean_scaled_lrep,mean_delta_n,n_samples\n";
  for (const auto& c : cells) {
    out << format_real(c.main_magnitude) << ',' << format_real(c.interaction_magnitude) << ','
        << format_real(c.mean_scaled_lrep) << ',' << format_real(c.mean_delta_n) << ','
        << c.n_samples << '\n';
  }
}

}  // namespace foes
