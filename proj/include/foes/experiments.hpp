#pragma once

// The RBM magnitude-grid experiment: parameters sampled on spheres whose
// radii grow along two axes (main effects, interactions), summarized per
// grid cell by mean scaled LREP and mean Δ_N of the visible marginal.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "foes/core.hpp"
#include "foes/random.hpp"

namespace foes {

struct GridExperimentConfig {
  std::size_t n_visible = 9;
  std::size_t n_hidden = 5;
  double magnitude_min = 0.001;
  double magnitude_max = 3.0;
  std::size_t n_breaks = 20;
  std::size_t samples_per_point = 100;
  std::uint64_t seed = 42;
  bool scaled_lrep = true;
  bool delta_n = true;
  Budget budget{};

  void validate() const;
  std::size_t main_count() const { return n_visible + n_hidden; }
  std::size_t interaction_count() const { return n_visible * n_hidden; }
};

struct GridCell {
  double main_magnitude = 0.0;         // ‖θ_main‖₂ / (N_V + N_H)
  double interaction_magnitude = 0.0;  // ‖θ_VH‖₂ / (N_V·N_H)
  double mean_scaled_lrep = 0.0;       // NaN when the metric is off
  double mean_delta_n = 0.0;
  std::size_t n_samples = 0;
};

/// n evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Normal vector rescaled to Euclidean norm `radius` (redrawn if all zero).
std::vector<double> sample_on_sphere(std::size_t dimension, double radius, Rng& rng);

/// Cells in main-major order: cell (a, b) is at a·n_breaks + b. Sample s of
/// cell c draws from its own stream derive_seed(seed, c, s), main vector first.
std::vector<GridCell> run_figure1(const GridExperimentConfig& config);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct Figure1Trends {
  double main_vs_lrep = 0.0;  // rank correlation of per-axis averages
  double interaction_vs_lrep = 0.0;
  double main_vs_delta = 0.0;
  double interaction_vs_delta = 0.0;
};

Figure1Trends figure1_trends(const GridExperimentConfig& config,
                             std::span<const GridCell> cells);

void write_figure1_csv(std::ostream& out, const GridExperimentConfig& config,
                       std::span<const GridCell> cells);

/// `{:.17g}`; round-trips every finite double.
std::string format_real(double v);

}  // namespace foes
