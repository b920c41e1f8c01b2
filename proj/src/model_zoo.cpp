#include "foes/model_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace foes {

// ---------------------------------------------------------------------------
// Linear exponential families

LinearExpFamily::LinearExpFamily(OutcomeSpace s, std::vector<Statistic> stats,
                                 std::vector<double> theta, std::string n)
    : space(std::move(s)),
      statistics(std::move(stats)),
      params(std::move(theta)),
      name(std::move(n)) {
  if (statistics.empty()) throw std::invalid_argument("family needs k >= 1 statistics");
  if (statistics.size() != params.size()) {
    throw std::invalid_argument(fmt::format(
        "family has {} statistics but {} parameters", statistics.size(), params.size()));
  }
  for (double t : params) {
    if (!std::isfinite(t)) throw std::invalid_argument("parameters must be finite");
  }
}

std::vector<double> LinearExpFamily::evaluate(std::span<const int> x) const {
  std::vector<double> g(statistics.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = statistics[i](x);
  return g;
}

LinearExpFamily LinearExpFamily::with_params(std::vector<double> theta) const {
  return LinearExpFamily(space, statistics, std::move(theta), name);
}

FoesModel make_linear_exp_family(const LinearExpFamily& family) {
  auto potential = [stats = family.statistics,
                    theta = family.params](std::span<const int> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      if (theta[i] != 0.0) s += theta[i] * stats[i](x);
    }
    return s;
  };
  return FoesModel(family.space, potential, family.name);
}

std::vector<StatisticRange> statistic_extremes(const LinearExpFamily& family) {
  const std::size_t k = family.dimension();
  std::vector<StatisticRange> ranges(
      k, {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
  Outcome x(family.space.n_variables());
  for (std::uint64_t idx = 0; idx < family.space.size(); ++idx) {
    family.space.decode_into(idx, x);
    for (std::size_t i = 0; i < k; ++i) {
      const double g = family.statistics[i](x);
      ranges[i].lower = std::min(ranges[i].lower, g);
      ranges[i].upper = std::max(ranges[i].upper, g);
    }
  }
  return ranges;
}

LinearExpFamily bernoulli_family(std::size_t n, double theta, Budget budget) {
  Statistic ones = [](std::span<const int> x) {
    return static_cast<double>(std::accumulate(x.begin(), x.end(), 0));
  };
  return LinearExpFamily(OutcomeSpace::binary(n, budget), {ones}, {theta},
                         "bernoulli");
}

LinearExpFamily multinomial_family(std::size_t n, std::vector<double> thetas,
                                   Budget budget) {
  if (thetas.size() < 2) throw std::invalid_argument("multinomial needs k >= 2");
  const int k = static_cast<int>(thetas.size());
  std::vector<Statistic> stats;
  for (int j = 1; j <= k; ++j) {
    stats.push_back([j](std::span<const int> x) {
      return static_cast<double>(std::count(x.begin(), x.end(), j));
    });
  }
  return LinearExpFamily(OutcomeSpace::categorical(n, k, budget), std::move(stats),
                         std::move(thetas), "multinomial");
}

FoesModel make_bernoulli(std::size_t n, double theta, Budget budget) {
  return make_linear_exp_family(bernoulli_family(n, theta, budget));
}

FoesModel make_multinomial(std::size_t n, std::vector<double> thetas, Budget budget) {
  return make_linear_exp_family(multinomial_family(n, std::move(thetas), budget));
}

// ---------------------------------------------------------------------------
// Graphs

std::string to_string(GraphTerm term) {
  switch (term) {
    case GraphTerm::edges: return "edges";
    case GraphTerm::two_stars: return "two_stars";
    case GraphTerm::triangles: return "triangles";
  }
  return "?";
}

EdgeIndex::EdgeIndex(std::size_t n_nodes) : n_nodes_(n_nodes) {
  for (std::size_t u = 0; u < n_nodes; ++u) {
    for (std::size_t v = u + 1; v < n_nodes; ++v) pairs_.emplace_back(u, v);
  }
}

std::size_t EdgeIndex::edge(std::size_t u, std::size_t v) const {
  if (u == v || u >= n_nodes_ || v >= n_nodes_) throw std::out_of_range("bad node pair");
  if (u > v) std::swap(u, v);
  // offset of row u in the lexicographic order
  return u * n_nodes_ - u * (u + 1) / 2 + (v - u - 1);
}

GraphStatistics graph_statistics(const EdgeIndex& index, std::span<const int> x) {
  const std::size_t n = index.n_nodes();
  if (x.size() != index.n_edges()) throw std::invalid_argument("edge vector size mismatch");
  std::vector<int> degree(n, 0);
  GraphStatistics s;
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (x[e] == 0) continue;
    auto [u, v] = index.nodes(e);
    ++degree[u];
    ++degree[v];
    s.edges += 1;
  }
  // pairs of distinct edges sharing a node
  for (int d : degree) s.two_stars += d * (d - 1) / 2;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!x[index.edge(a, b)]) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (x[index.edge(a, c)] && x[index.edge(b, c)]) s.triangles += 1;
      }
    }
  }
  return s;
}

GraphModelSpec GraphModelSpec::full(std::size_t n, double edges, double two_stars,
                                    double triangles) {
  GraphModelSpec spec;
  spec.n_nodes = n;
  spec.params = {edges, two_stars, triangles};
  return spec;
}

GraphModelSpec GraphModelSpec::single(std::size_t n, GraphTerm term, double theta) {
  GraphModelSpec spec;
  spec.n_nodes = n;
  spec.active = {false, false, false};
  spec.active[static_cast<std::size_t>(term)] = true;
  spec.params[static_cast<std::size_t>(term)] = theta;
  return spec;
}

double GraphModelSpec::theta(GraphTerm term) const {
  const auto i = static_cast<std::size_t>(term);
  return active[i] ? params[i] : 0.0;
}

std::vector<GraphTerm> GraphModelSpec::active_terms() const {
  std::vector<GraphTerm> out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (active[i]) out.push_back(static_cast<GraphTerm>(i));
  }
  return out;
}

LinearExpFamily graph_family(const GraphModelSpec& spec, Budget budget) {
  if (spec.n_nodes < 3) throw std::invalid_argument("graph model needs n_nodes >= 3");
  auto terms = spec.active_terms();
  if (terms.empty()) throw std::invalid_argument("graph model needs an active term");
  auto index = std::make_shared<const EdgeIndex>(spec.n_nodes);
  OutcomeSpace space = OutcomeSpace::binary(index->n_edges(), budget);
  std::vector<Statistic> stats;
  std::vector<double> theta;
  for (GraphTerm t : terms) {
    stats.push_back([index, t](std::span<const int> x) {
      return graph_statistics(*index, x)[t];
    });
    theta.push_back(spec.theta(t));
  }
  return LinearExpFamily(std::move(space), std::move(stats), std::move(theta), "graph");
}

FoesModel make_graph_model(const GraphModelSpec& spec, Budget budget) {
  if (spec.n_nodes < 3) throw std::invalid_argument("graph model needs n_nodes >= 3");
  auto index = std::make_shared<const EdgeIndex>(spec.n_nodes);
  OutcomeSpace space = OutcomeSpace::binary(index->n_edges(), budget);
  const double t1 = spec.theta(GraphTerm::edges);
  const double t2 = spec.theta(GraphTerm::two_stars);
  const double t3 = spec.theta(GraphTerm::triangles);
  // One pass over the graph computes all three statistics.
  auto potential = [index, t1, t2, t3](std::span<const int> x) {
    const GraphStatistics g = graph_statistics(*index, x);
    return t1 * g.edges + t2 * g.two_stars + t3 * g.triangles;
  };
  return FoesModel(std::move(space), potential, "graph");
}

std::vector<std::pair<GraphTerm, StatisticRange>> graph_statistic_extremes(
    const GraphModelSpec& spec, Budget budget) {
  const LinearExpFamily family = graph_family(spec, budget);
  const auto ranges = statistic_extremes(family);
  const auto terms = spec.active_terms();
  std::vector<std::pair<GraphTerm, StatisticRange>> out;
  for (std::size_t i = 0; i < terms.size(); ++i) out.emplace_back(terms[i], ranges[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Boltzmann machines

RbmParams RbmParams::zeros(std::size_t n_visible, std::size_t n_hidden) {
  RbmParams p;
  p.visible = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_visible));
  p.hidden = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_hidden));
  p.interaction = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_hidden),
                                        static_cast<Eigen::Index>(n_visible));
  return p;
}

RbmParams RbmParams::random(std::size_t n_visible, std::size_t n_hidden,
                            double half_width, Rng& rng) {
  RbmParams p = zeros(n_visible, n_hidden);
  for (auto& v : p.visible) v = rng.uniform(-half_width, half_width);
  for (auto& v : p.hidden) v = rng.uniform(-half_width, half_width);
  for (Eigen::Index j = 0; j < p.interaction.rows(); ++j) {
    for (Eigen::Index i = 0; i < p.interaction.cols(); ++i) {
      p.interaction(j, i) = rng.uniform(-half_width, half_width);
    }
  }
  return p;
}

void RbmParams::validate() const {
  if (visible.size() < 1) throw std::invalid_argument("RBM needs N >= 1 visibles");
  if (interaction.rows() != hidden.size() || interaction.cols() != visible.size()) {
    throw std::invalid_argument(fmt::format(
        "RBM interaction is {}x{}, expected {}x{}", interaction.rows(),
        interaction.cols(), hidden.size(), visible.size()));
  }
  if (!visible.allFinite() || !hidden.allFinite() || !interaction.allFinite()) {
    throw std::invalid_argument("RBM parameters must be finite");
  }
}

RbmParams RbmParams::negated() const {
  return RbmParams{-visible, -hidden, -interaction};
}

RbmParams RbmParams::transposed() const {
  return RbmParams{hidden, visible, interaction.transpose()};
}

std::vector<double> RbmParams::flatten() const {
  std::vector<double> out(visible.begin(), visible.end());
  out.insert(out.end(), hidden.begin(), hidden.end());
  for (Eigen::Index j = 0; j < interaction.rows(); ++j) {
    for (Eigen::Index i = 0; i < interaction.cols(); ++i) out.push_back(interaction(j, i));
  }
  return out;
}

RbmParams RbmParams::unflatten(std::size_t n_visible, std::size_t n_hidden,
                               std::span<const double> flat) {
  const std::size_t expected = n_visible + n_hidden + n_visible * n_hidden;
  if (flat.size() != expected) {
    throw std::invalid_argument(fmt::format(
        "RBM parameter vector has length {}, expected {}", flat.size(), expected));
  }
  RbmParams p = zeros(n_visible, n_hidden);
  std::size_t k = 0;
  for (auto& v : p.visible) v = flat[k++];
  for (auto& v : p.hidden) v = flat[k++];
  for (Eigen::Index j = 0; j < p.interaction.rows(); ++j) {
    for (Eigen::Index i = 0; i < p.interaction.cols(); ++i) p.interaction(j, i) = flat[k++];
  }
  return p;
}

double f_theta(const RbmParams& params, std::span<const int> x,
               std::span<const int> h) {
  if (x.size() != params.n_visible() || h.size() != params.n_hidden()) {
    throw std::invalid_argument("f_theta: outcome shape does not match parameters");
  }
  double f = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) f += x[i] * params.visible[static_cast<Eigen::Index>(i)];
  for (std::size_t j = 0; j < h.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    double field = params.hidden[jj];
    for (std::size_t i = 0; i < x.size(); ++i) {
      field += x[i] * params.interaction(jj, static_cast<Eigen::Index>(i));
    }
    f += h[j] * field;
  }
  return f;
}

double log_two_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a));
}

FoesModel make_rbm_joint(const RbmParams& params, Budget budget) {
  params.validate();
  const std::size_t n = params.n_visible();
  const std::size_t nh = params.n_hidden();
  OutcomeSpace space = OutcomeSpace::spins(n + nh, budget);
  auto potential = [params, n, nh](std::span<const int> xh) {
    return f_theta(params, xh.first(n), xh.subspan(n, nh));
  };
  return FoesModel(std::move(space), potential, "rbm-joint");
}

FoesModel make_rbm_marginal(const RbmParams& params, Budget budget) {
  params.validate();
  OutcomeSpace space = OutcomeSpace::spins(params.n_visible(), budget);
  auto potential = [params](std::span<const int> x) {
    double u = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) u += x[i] * params.visible[static_cast<Eigen::Index>(i)];
    for (Eigen::Index j = 0; j < params.hidden.size(); ++j) {
      double field = params.hidden[j];
      for (std::size_t i = 0; i < x.size(); ++i) {
        field += x[i] * params.interaction(j, static_cast<Eigen::Index>(i));
      }
      u += log_two_cosh(field);
    }
    return u;
  };
  return FoesModel(std::move(space), potential, "rbm");
}

DbmParams DbmParams::zeros(std::vector<std::size_t> layer_sizes) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("DBM needs M >= 1 hidden layers");
  DbmParams p;
  p.layer_sizes = std::move(layer_sizes);
  const auto sz = [&](std::size_t l) { return static_cast<Eigen::Index>(p.layer_sizes[l]); };
  p.visible_bias = Eigen::VectorXd::Zero(sz(0));
  for (std::size_t l = 1; l < p.layer_sizes.size(); ++l) {
    p.hidden_biases.push_back(Eigen::VectorXd::Zero(sz(l)));
    // Γ^(0) is N_H1 × N; Γ^(i) is N_Hi × N_H(i+1)
    p.couplings.push_back(l == 1 ? Eigen::MatrixXd::Zero(sz(1), sz(0))
                                 : Eigen::MatrixXd::Zero(sz(l - 1), sz(l)));
  }
  return p;
}

DbmParams DbmParams::random(std::vector<std::size_t> layer_sizes, double half_width,
                            Rng& rng) {
  DbmParams p = zeros(std::move(layer_sizes));
  auto fill = [&](auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-half_width, half_width);
  };
  fill(p.visible_bias);
  for (auto& a : p.hidden_biases) fill(a);
  for (auto& g : p.couplings) fill(g);
  return p;
}

DbmParams DbmParams::from_rbm(const RbmParams& rbm) {
  DbmParams p = zeros({rbm.n_visible(), rbm.n_hidden()});
  p.visible_bias = rbm.visible;
  p.hidden_biases[0] = rbm.hidden;
  p.couplings[0] = rbm.interaction;
  return p;
}

std::size_t DbmParams::total_variables() const {
  return std::accumulate(layer_sizes.begin(), layer_sizes.end(), std::size_t{0});
}

void DbmParams::validate() const {
  const std::size_t m = layer_sizes.size();
  if (m < 2) throw std::invalid_argument("DBM needs M >= 1 hidden layers");
  if (std::find(layer_sizes.begin(), layer_sizes.end(), std::size_t{0}) != layer_sizes.end()) {
    throw std::invalid_argument("DBM layers must be nonempty");
  }
  const auto sz = [&](std::size_t l) { return static_cast<Eigen::Index>(layer_sizes[l]); };
  bool ok = visible_bias.size() == sz(0) && hidden_biases.size() == m - 1 &&
            couplings.size() == m - 1;
  for (std::size_t l = 1; ok && l < m; ++l) ok = hidden_biases[l - 1].size() == sz(l);
  if (ok) ok = couplings[0].rows() == sz(1) && couplings[0].cols() == sz(0);
  for (std::size_t i = 1; ok && i < couplings.size(); ++i) {
    ok = couplings[i].rows() == sz(i) && couplings[i].cols() == sz(i + 1);
  }
  if (!ok) throw std::invalid_argument("DBM parameter shapes do not match layer sizes");
}

DbmParams DbmParams::negated() const {
  DbmParams p = *this;
  p.visible_bias = -p.visible_bias;
  for (auto& a : p.hidden_biases) a = -a;
  for (auto& g : p.couplings) g = -g;
  return p;
}

std::vector<double> DbmParams::flatten() const {
  std::vector<double> out(visible_bias.begin(), visible_bias.end());
  for (const auto& a : hidden_biases) out.insert(out.end(), a.begin(), a.end());
  for (const auto& g : couplings) {
    for (Eigen::Index r = 0; r < g.rows(); ++r)
      for (Eigen::Index c = 0; c < g.cols(); ++c) out.push_back(g(r, c));
  }
  return out;
}

DbmParams DbmParams::unflatten(std::vector<std::size_t> layer_sizes,
                               std::span<const double> flat) {
  DbmParams p = zeros(std::move(layer_sizes));
  const std::size_t expected = p.flatten().size();
  if (flat.size() != expected) {
    throw std::invalid_argument(fmt::format(
        "DBM parameter vector has length {}, expected {}", flat.size(), expected));
  }
  std::size_t k = 0;
  for (auto& v : p.visible_bias) v = flat[k++];
  for (auto& a : p.hidden_biases)
    for (auto& v : a) v = flat[k++];
  for (auto& g : p.couplings) {
    for (Eigen::Index r = 0; r < g.rows(); ++r)
      for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = flat[k++];
  }
  return p;
}

double dbm_energy(const DbmParams& params, std::span<const int> x,
                  std::span<const int> hidden) {
  const std::size_t m = params.n_hidden_layers();
  std::vector<std::span<const int>> layers;
  std::size_t offset = 0;
  for (std::size_t l = 1; l <= m; ++l) {
    layers.push_back(hidden.subspan(offset, params.layer_sizes[l]));
    offset += params.layer_sizes[l];
  }
  if (offset != hidden.size() || x.size() != params.layer_sizes[0]) {
    throw std::invalid_argument("dbm_energy: outcome shape does not match parameters");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e += x[i] * params.visible_bias[static_cast<Eigen::Index>(i)];
  for (std::size_t l = 0; l < m; ++l) {
    const auto& a = params.hidden_biases[l];
    for (std::size_t j = 0; j < layers[l].size(); ++j) e += layers[l][j] * a[static_cast<Eigen::Index>(j)];
  }
  // h^(1)ᵀ Γ^(0) x
  const auto& g0 = params.couplings[0];
  for (Eigen::Index j = 0; j < g0.rows(); ++j) {
    double row = 0.0;
    for (Eigen::Index i = 0; i < g0.cols(); ++i) row += g0(j, i) * x[static_cast<std::size_t>(i)];
    e += layers[0][static_cast<std::size_t>(j)] * row;
  }
  // h^(i)ᵀ Γ^(i) h^(i+1)
  for (std::size_t i = 1; i < m; ++i) {
    const auto& g = params.couplings[i];
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      double row = 0.0;
      for (Eigen::Index c = 0; c < g.cols(); ++c) row += g(r, c) * layers[i][static_cast<std::size_t>(c)];
      e += layers[i - 1][static_cast<std::size_t>(r)] * row;
    }
  }
  return e;
}

FoesModel make_dbm_marginal(const DbmParams& params, Budget budget) {
  params.validate();
  const std::size_t n = params.layer_sizes[0];
  const std::size_t n_hidden = params.total_variables() - n;
  checked_space_size(params.total_variables(), 2, budget);
  OutcomeSpace space = OutcomeSpace::spins(n, budget);
  auto hidden_space =
      std::make_shared<const OutcomeSpace>(OutcomeSpace::spins(n_hidden, budget));
  auto potential = [params, hidden_space](std::span<const int> x) {
    std::vector<double> energies(hidden_space->size());
    Outcome h(hidden_space->n_variables());
    for (std::uint64_t idx = 0; idx < hidden_space->size(); ++idx) {
      hidden_space->decode_into(idx, h);
      energies[idx] = dbm_energy(params, x, h);
    }
    return log_sum_exp(energies);
  };
  return FoesModel(std::move(space), potential, "dbm");
}

// ---------------------------------------------------------------------------
// Families

FoesModel ModelFamily::operator()(std::span<const double> theta) const {
  if (theta.size() != n_params) {
    throw std::invalid_argument(fmt::format("family '{}' takes {} parameters, got {}",
                                            name, n_params, theta.size()));
  }
  return build(theta);
}

namespace families {

ModelFamily bernoulli(std::size_t n, Budget budget) {
  return {"bernoulli", 1, [n, budget](std::span<const double> t) {
            return make_bernoulli(n, t[0], budget);
          }};
}

ModelFamily multinomial(std::size_t n, std::size_t k, Budget budget) {
  return {"multinomial", k, [n, budget](std::span<const double> t) {
            return make_multinomial(n, std::vector<double>(t.begin(), t.end()), budget);
          }};
}

ModelFamily graph(std::size_t n_nodes, std::array<bool, 3> active, Budget budget) {
  return {"graph", 3, [n_nodes, active, budget](std::span<const double> t) {
            GraphModelSpec spec;
            spec.n_nodes = n_nodes;
            spec.active = active;
            spec.params = {t[0], t[1], t[2]};
            return make_graph_model(spec, budget);
          }};
}

ModelFamily linear(LinearExpFamily family) {
  const std::size_t k = family.dimension();
  const std::string name = family.name;
  return {name, k, [family = std::move(family)](std::span<const double> t) {
            return make_linear_exp_family(family.with_params({t.begin(), t.end()}));
          }};
}

ModelFamily rbm_joint(std::size_t n_visible, std::size_t n_hidden, Budget budget) {
  return {"rbm-joint", n_visible + n_hidden + n_visible * n_hidden,
          [=](std::span<const double> t) {
            return make_rbm_joint(RbmParams::unflatten(n_visible, n_hidden, t), budget);
          }};
}

ModelFamily rbm_marginal(std::size_t n_visible, std::size_t n_hidden, Budget budget) {
  return {"rbm", n_visible + n_hidden + n_visible * n_hidden,
          [=](std::span<const double> t) {
            return make_rbm_marginal(RbmParams::unflatten(n_visible, n_hidden, t), budget);
          }};
}

ModelFamily dbm_marginal(std::vector<std::size_t> layer_sizes, Budget budget) {
  const std::size_t k = DbmParams::zeros(layer_sizes).flatten().size();
  return {"dbm", k, [layer_sizes, budget](std::span<const double> t) {
            return make_dbm_marginal(DbmParams::unflatten(layer_sizes, t), budget);
          }};
}

ModelFamily uniform(std::size_t n, std::size_t alphabet_size, Budget budget) {
  return {"uniform", 0, [=](std::span<const double>) {
            std::vector<int> symbols(alphabet_size);
            std::iota(symbols.begin(), symbols.end(), 0);
            return make_uniform(OutcomeSpace(n, std::move(symbols), budget));
          }};
}

}  // namespace families

}  // namespace foes
