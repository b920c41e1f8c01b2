#pragma once

// Concrete FOES models: linear exponential families (iid Bernoulli,
// multinomial, edge/2-star/triangle random graphs), restricted Boltzmann
// machines (joint and visible marginal) and small deep Boltzmann machines.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "foes/core.hpp"
#include "foes/random.hpp"

namespace foes {

using Statistic = std::function<double(std::span<const int>)>;

/// Linear exponential family: P(x) ∝ exp(θᵀ g(x)). Curved natural parameter
/// maps are not representable here.
struct LinearExpFamily {
  LinearExpFamily(OutcomeSpace space, std::vector<Statistic> statistics,
                  std::vector<double> params, std::string name = "linear-exp");

  OutcomeSpace space;
  std::vector<Statistic> statistics;
  std::vector<double> params;
  std::string name;

  std::size_t dimension() const noexcept { return params.size(); }
  std::vector<double> evaluate(std::span<const int> x) const;
  LinearExpFamily with_params(std::vector<double> theta) const;
};

FoesModel make_linear_exp_family(const LinearExpFamily& family);

/// Observed range [lower, upper] of one statistic over the whole space.
struct StatisticRange {
  double lower = 0.0;
  double upper = 0.0;
  double width() const noexcept { return upper - lower; }
};

/// (U_i, L_i) for every statistic, by enumeration.
std::vector<StatisticRange> statistic_extremes(const LinearExpFamily& family);

LinearExpFamily bernoulli_family(std::size_t n, double theta, Budget budget = {});
LinearExpFamily multinomial_family(std::size_t n, std::vector<double> thetas,
                                   Budget budget = {});

FoesModel make_bernoulli(std::size_t n, double theta, Budget budget = {});
FoesModel make_multinomial(std::size_t n, std::vector<double> thetas,
                           Budget budget = {});

// ---------------------------------------------------------------------------
// Random graphs

enum class GraphTerm { edges = 0, two_stars = 1, triangles = 2 };

std::string to_string(GraphTerm term);

/// Lexicographic edge order (0,1),(0,2),…,(n-2,n-1) over 0-based nodes.
class EdgeIndex {
 public:
  explicit EdgeIndex(std::size_t n_nodes);

  std::size_t n_nodes() const noexcept { return n_nodes_; }
  std::size_t n_edges() const noexcept { return pairs_.size(); }
  std::pair<std::size_t, std::size_t> nodes(std::size_t edge) const {
    return pairs_.at(edge);
  }
  std::size_t edge(std::size_t u, std::size_t v) const;

 private:
  std::size_t n_nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

struct GraphStatistics {
  double edges = 0;
  double two_stars = 0;
  double triangles = 0;

  double operator[](GraphTerm t) const {
    switch (t) {
      case GraphTerm::edges: return edges;
      case GraphTerm::two_stars: return two_stars;
      case GraphTerm::triangles: return triangles;
    }
    return 0;
  }
};

/// Edge, 2-star and triangle counts of a 0/1 edge vector.
GraphStatistics graph_statistics(const EdgeIndex& index, std::span<const int> x);

struct GraphModelSpec {
  std::size_t n_nodes = 3;
  std::array<bool, 3> active{true, true, true};
  std::array<double, 3> params{0.0, 0.0, 0.0};  // θ1 edges, θ2 2-stars, θ3 triangles

  static GraphModelSpec full(std::size_t n, double edges, double two_stars,
                             double triangles);
  static GraphModelSpec single(std::size_t n, GraphTerm term, double theta);

  /// Parameter of `term`, zero when inactive.
  double theta(GraphTerm term) const;
  std::vector<GraphTerm> active_terms() const;
};

LinearExpFamily graph_family(const GraphModelSpec& spec, Budget budget = {});
FoesModel make_graph_model(const GraphModelSpec& spec, Budget budget = {});

/// Exact (U, L) per active term, by enumeration over all graphs.
std::vector<std::pair<GraphTerm, StatisticRange>> graph_statistic_extremes(
    const GraphModelSpec& spec, Budget budget = {});

// ---------------------------------------------------------------------------
// Boltzmann machines (alphabet {-1, +1})

/// interaction(j, i) couples hidden j with visible i.
struct RbmParams {
  Eigen::VectorXd visible;
  Eigen::VectorXd hidden;
  Eigen::MatrixXd interaction;

  static RbmParams zeros(std::size_t n_visible, std::size_t n_hidden);
  /// Entries iid uniform on [-half_width, half_width].
  static RbmParams random(std::size_t n_visible, std::size_t n_hidden,
                          double half_width, Rng& rng);

  std::size_t n_visible() const noexcept { return static_cast<std::size_t>(visible.size()); }
  std::size_t n_hidden() const noexcept { return static_cast<std::size_t>(hidden.size()); }

  void validate() const;
  RbmParams negated() const;
  /// Roles of visibles and hiddens exchanged.
  RbmParams transposed() const;

  /// Flat layout: visible, hidden, interaction row-major (hidden-major).
  std::vector<double> flatten() const;
  static RbmParams unflatten(std::size_t n_visible, std::size_t n_hidden,
                             std::span<const double> flat);
};

/// f(x, h) = xᵀθ^V + hᵀθ^H + hᵀθ^VH x.
double f_theta(const RbmParams& params, std::span<const int> x,
               std::span<const int> h);

/// log(2 cosh z), overflow-free.
double log_two_cosh(double z);

/// Joint model over (x_1..x_N, h_1..h_NH).
FoesModel make_rbm_joint(const RbmParams& params, Budget budget = {});
/// Visible marginal with the hidden sum done analytically.
FoesModel make_rbm_marginal(const RbmParams& params, Budget budget = {});

struct DbmParams {
  /// [N, N_(H,1), …, N_(H,M)]
  std::vector<std::size_t> layer_sizes;
  Eigen::VectorXd visible_bias;                // β
  std::vector<Eigen::VectorXd> hidden_biases;  // α^(1..M)
  std::vector<Eigen::MatrixXd> couplings;      // Γ^(0): N_H1×N, Γ^(i): N_Hi×N_H(i+1)

  static DbmParams zeros(std::vector<std::size_t> layer_sizes);
  static DbmParams random(std::vector<std::size_t> layer_sizes, double half_width,
                          Rng& rng);
  static DbmParams from_rbm(const RbmParams& rbm);

  std::size_t n_hidden_layers() const noexcept { return hidden_biases.size(); }
  std::size_t total_variables() const;
  void validate() const;
  DbmParams negated() const;
  std::vector<double> flatten() const;
  static DbmParams unflatten(std::vector<std::size_t> layer_sizes,
                             std::span<const double> flat);
};

/// Joint DBM energy; `hidden` concatenates h^(1), …, h^(M).
double dbm_energy(const DbmParams& params, std::span<const int> x,
                  std::span<const int> hidden);

/// Visible marginal by full enumeration of all hidden layers.
FoesModel make_dbm_marginal(const DbmParams& params, Budget budget = {});

// ---------------------------------------------------------------------------
// Parametric families θ ↦ model, used where θ and −θ must be compared or θ
// is sampled.

struct ModelFamily {
  std::string name;
  std::size_t n_params = 0;
  std::function<FoesModel(std::span<const double>)> build;

  FoesModel operator()(std::span<const double> theta) const;
};

namespace families {
ModelFamily bernoulli(std::size_t n, Budget budget = {});
ModelFamily multinomial(std::size_t n, std::size_t k, Budget budget = {});
ModelFamily graph(std::size_t n_nodes, std::array<bool, 3> active = {true, true, true},
                  Budget budget = {});
ModelFamily linear(LinearExpFamily family);
ModelFamily rbm_joint(std::size_t n_visible, std::size_t n_hidden, Budget budget = {});
ModelFamily rbm_marginal(std::size_t n_visible, std::size_t n_hidden,
                         Budget budget = {});
ModelFamily dbm_marginal(std::vector<std::size_t> layer_sizes, Budget budget = {});
ModelFamily uniform(std::size_t n, std::size_t alphabet_size, Budget budget = {});
}  // namespace families

}  // namespace foes
