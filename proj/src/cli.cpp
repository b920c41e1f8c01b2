#include "foes/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "foes/core.hpp"
#include "foes/experiments.hpp"
#include "foes/instability.hpp"
#include "foes/model_zoo.hpp"
#include "foes/psr.hpp"
#include "foes/random.hpp"
#include "foes/rbm_bounds.hpp"
#include "foes/samplers.hpp"

namespace foes {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty list element in '" + s + "'");
    parts.push_back(cur.substr(b, e - b + 1));
  }
  return parts;
}

template <class T>
T parse_number(const std::string& token) {
  T value{};
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("cannot parse number '" + token + "'");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  if (s.empty()) return out;
  for (const auto& t : split(s, ',')) out.push_back(parse_number<T>(t));
  return out;
}

std::string join_reals(std::span<const double> v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_real(v[i]);
  }
  return s;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

// ---------------------------------------------------------------------------
// Model selection

struct ModelOptions {
  std::string model = "bernoulli";
  std::size_t n = 5;
  std::size_t k = 2;
  std::string hidden;
  std::string theta;
  double scale = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultMaxOutcomes;

  Budget cap() const { return Budget{budget}; }
};

void add_model_options(CLI::App* sub, ModelOptions& m) {
  sub->add_option("--model", m.model,
                  "bernoulli | multinomial | graph | edges | twostar | triangle | rbm | "
                  "rbm-joint | dbm | uniform")
      ->capture_default_str();
  sub->add_option("--n,--nodes", m.n, "variables (graph: nodes; rbm/dbm: visibles)")
      ->capture_default_str();
  sub->add_option("--k", m.k, "alphabet size for the uniform model")->capture_default_str();
  sub->add_option("--hidden", m.hidden, "hidden units (dbm: comma list of layer sizes)");
  sub->add_option("--theta", m.theta, "comma-separated parameters");
  sub->add_option("--scale", m.scale, "half-width for random rbm/dbm parameters")
      ->capture_default_str();
  sub->add_option("--seed", m.seed, "seed")->capture_default_str();
  sub->add_option("--budget", m.budget, "maximum outcomes per enumeration")
      ->capture_default_str();
}

struct ResolvedModel {
  std::string name;
  ModelFamily family;
  std::vector<double> theta;
  std::optional<LinearExpFamily> linear;
  std::optional<RbmParams> rbm;

  FoesModel build() const { return family(theta); }
};

std::vector<double> require_theta(const ModelOptions& m, std::size_t count) {
  auto t = parse_list<double>(m.theta);
  if (count != 0 && t.size() != count) {
    throw std::invalid_argument(fmt::format("model '{}' needs {} theta value(s), got {}",
                                            m.model, count, t.size()));
  }
  return t;
}

ResolvedModel resolve(const ModelOptions& m) {
  const Budget cap = m.cap();
  ResolvedModel r{m.model, {}, {}, std::nullopt, std::nullopt};
  if (m.model == "bernoulli") {
    r.theta = require_theta(m, 1);
    r.linear = bernoulli_family(m.n, r.theta[0], cap);
    r.family = families::bernoulli(m.n, cap);
  } else if (m.model == "multinomial") {
    r.theta = require_theta(m, 0);
    r.linear = multinomial_family(m.n, r.theta, cap);
    r.family = families::multinomial(m.n, r.theta.size(), cap);
  } else if (m.model == "graph") {
    r.theta = require_theta(m, 3);
    r.linear = graph_family(GraphModelSpec::full(m.n, r.theta[0], r.theta[1], r.theta[2]), cap);
    r.family = families::graph(m.n, {true, true, true}, cap);
  } else if (m.model == "edges" || m.model == "twostar" || m.model == "triangle") {
    r.theta = require_theta(m, 1);
    const GraphTerm term = m.model == "edges"     ? GraphTerm::edges
                           : m.model == "twostar" ? GraphTerm::two_stars
                                                  : GraphTerm::triangles;
    r.linear = graph_family(GraphModelSpec::single(m.n, term, r.theta[0]), cap);
    r.family = families::linear(*r.linear);
  } else if (m.model == "rbm" || m.model == "rbm-joint") {
    const std::size_t nh = m.hidden.empty() ? 0 : parse_number<std::size_t>(m.hidden);
    if (m.theta.empty()) {
      Rng rng(m.seed);
      r.rbm = RbmParams::random(m.n, nh, m.scale, rng);
    } else {
      const auto flat = parse_list<double>(m.theta);
      r.rbm = RbmParams::unflatten(m.n, nh, flat);
    }
    r.theta = r.rbm->flatten();
    r.family = m.model == "rbm" ? families::rbm_marginal(m.n, nh, cap)
                                : families::rbm_joint(m.n, nh, cap);
  } else if (m.model == "dbm") {
    std::vector<std::size_t> layers{m.n};
    for (auto h : parse_list<std::size_t>(m.hidden)) layers.push_back(h);
    if (m.theta.empty()) {
      Rng rng(m.seed);
      r.theta = DbmParams::random(layers, m.scale, rng).flatten();
    } else {
      r.theta = DbmParams::unflatten(layers, parse_list<double>(m.theta)).flatten();
    }
    r.family = families::dbm_marginal(layers, cap);
  } else if (m.model == "uniform") {
    r.family = families::uniform(m.n, m.k, cap);
  } else {
    throw std::invalid_argument("unknown model '" + m.model + "'");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Output

struct OutputOptions {
  std::string path;
};

void add_output_option(CLI::App* sub, OutputOptions& o) {
  sub->add_option("--out", o.path, "write CSV here instead of stdout");
}

void emit(const OutputOptions& o, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (o.path.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(o.path);
  if (!file) throw std::invalid_argument("cannot open output file '" + o.path + "'");
  fn(file);
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_lrep(const ModelOptions& m, std::ostream& os) {
  const ResolvedModel r = resolve(m);
  const FoesModel model = r.build();
  const InstabilityReport rep = instability_report(model);
  os << "model,n,lrep,scaled_lrep,delta_n,argmax_index,argmin_index\n";
  os << fmt::format("{},{},{},{},{},{},{}\n", r.name, rep.n_variables, format_real(rep.lrep),
                    format_real(rep.scaled_lrep), opt_real(rep.delta_n), rep.argmax_index,
                    rep.argmin_index);
}

void cmd_delta(const ModelOptions& m, std::ostream& os) {
  const FoesModel model = resolve(m).build();
  const InstabilityReport rep = instability_report(model);
  os << "model,n,delta_n,scaled_lrep\n";
  os << fmt::format("{},{},{},{}\n", m.model, rep.n_variables, opt_real(rep.delta_n),
                    format_real(rep.scaled_lrep));
}

void cmd_modeset(const ModelOptions& m, double epsilon, bool members, std::ostream& os) {
  const FoesModel model = resolve(m).build();
  const ModalSet s = modal_set(model, epsilon);
  os << "model,n,epsilon,threshold,n_members,n_outcomes,mass,complement_mass\n";
  os << fmt::format("{},{},{},{},{},{},{},{}\n", m.model, model.n_variables(),
                    format_real(epsilon), format_real(s.threshold), s.members.size(),
                    s.n_outcomes, format_real(s.mass),
                    format_real(std::exp(s.complement_log_mass)));
  if (members) {
    os << "# members\n";
    for (auto i : s.members) os << "# " << i << '\n';
  }
}

struct PathOptions {
  std::string sizes = "4,6,8,10";
  std::string rule = "fixed";
  double epsilon = 0.1;
  double flatness = 0.1;
  double level = 3.0;
};

double rule_factor(const std::string& rule, double n) {
  if (rule == "fixed") return 1.0;
  if (rule == "linear") return n;
  if (rule == "log") return std::log(n);
  if (rule == "quadratic") return n * n;
  throw std::invalid_argument("unknown theta rule '" + rule + "' (fixed|linear|log|quadratic)");
}

void cmd_path(const ModelOptions& m, const PathOptions& p, std::ostream& os) {
  if (m.model == "rbm" || m.model == "rbm-joint" || m.model == "dbm") {
    throw std::invalid_argument("path supports linear families and the uniform model");
  }
  const auto base = parse_list<double>(m.theta);
  ParameterPath path;
  path.family_name = m.model;
  for (auto size : parse_list<std::size_t>(p.sizes)) {
    PathEntry e{size, base};
    const double f = rule_factor(p.rule, static_cast<double>(size));
    for (auto& t : e.params) t *= f;
    path.entries.push_back(std::move(e));
  }
  path.family = [m](const PathEntry& e) {
    ModelOptions at = m;
    at.n = e.size;
    at.theta = join_reals(e.params, ',');
    return resolve(at).build();
  };
  const PathThresholds thresholds{p.flatness, p.level};
  const DegeneracyTrend trend = degeneracy_trend(path, p.epsilon, thresholds);

  os << "model,size,n,theta,scaled_lrep,modal_mass\n";
  for (std::size_t i = 0; i < path.entries.size(); ++i) {
    os << fmt::format("{},{},{},{},{},{}\n", m.model, path.entries[i].size,
                      trend.n_variables[i], join_reals(path.entries[i].params, ';'),
                      format_real(trend.verdict.scaled_lreps[i]), format_real(trend.masses[i]));
  }
  os << fmt::format("# verdict = {} (finite-N heuristic)\n", to_string(trend.verdict.verdict));
  os << fmt::format("# trend_slope = {}\n", format_real(trend.verdict.trend_slope));
  os << fmt::format("# rule = {}, epsilon = {}, flatness = {}, level = {}\n", p.rule,
                    format_real(p.epsilon), format_real(p.flatness), format_real(p.level));
  os << fmt::format("# modal masses increasing = {}\n", trend.increasing);
}

void cmd_bounds(ModelOptions m, bool links, std::ostream& os) {
  if (m.model != "rbm" && m.model != "rbm-joint") m.model = "rbm";
  const ResolvedModel r = resolve(m);
  const RbmBoundsReport b = bounds_report(*r.rbm, m.cap());
  if (links) {
    os << "link,lhs,rhs,slack,asserted,holds\n";
    for (const auto& l : b.links) {
      os << fmt::format("{},{},{},{},{},{}\n", l.name, format_real(l.lhs), format_real(l.rhs),
                        format_real(l.slack), l.asserted, l.holds());
    }
    return;
  }
  os << "n_visible,n_hidden,a_n,b_n,c_n,hidden_l1,visible_l1,interaction_l1,lrep_joint,"
        "lrep_marginal,n_h_log2,two_a_h2_star\n";
  os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", b.n_visible, b.n_hidden,
                    opt_real(b.a_n), opt_real(b.b_n), opt_real(b.c_n),
                    format_real(b.hidden_l1), format_real(b.visible_l1),
                    format_real(b.interaction_l1), opt_real(b.lrep_joint),
                    opt_real(b.lrep_marginal), format_real(b.n_h_log2),
                    opt_real(b.two_a_h2_star));
}

void cmd_psr(const ModelOptions& m, double epsilon, std::ostream& os) {
  const ResolvedModel r = resolve(m);
  const PsrReport p = check_psr(r.family, r.theta);
  std::string masses = ",";
  if (p.holds) {
    const Corollary1Masses c = corollary1_masses(r.family, r.theta, epsilon);
    masses = format_real(c.mass_theta_on_modes) + "," +
             format_real(c.mass_neg_theta_on_complement);
  }
  os << "model,max_violation,holds,lrep_theta,lrep_neg_theta,epsilon,mass_theta_on_modes,"
        "mass_neg_theta_on_complement\n";
  os << fmt::format("{},{},{},{},{},{},{}\n", r.name, format_real(p.max_violation), p.holds,
                    format_real(p.lrep_theta), format_real(p.lrep_neg_theta),
                    format_real(epsilon), masses);
}

void cmd_lowerbound(const ModelOptions& m, std::ostream& os) {
  const auto t = require_theta(m, 3);
  const GraphModelSpec spec = GraphModelSpec::full(m.n, t[0], t[1], t[2]);
  const GraphLowerBound b = graph_lower_bound(spec);
  std::string enumerated;
  try {
    enumerated = format_real(lrep(make_graph_model(spec, m.cap())).scaled_lrep);
  } catch (const BudgetExceeded&) {
  }
  os << "n,bound,complete_branch,bipartite_branch,scaled_lrep\n";
  os << fmt::format("{},{},{},{},{}\n", m.n, format_real(b.bound),
                    format_real(b.complete_branch), format_real(b.bipartite_branch), enumerated);
}

struct GibbsOptions {
  std::size_t sweeps = 10000;
  std::size_t burn_in = 1000;
  std::string init = "random";
  double epsilon = 0.1;
  bool random_scan = false;
  std::size_t thin = 1;
};

void cmd_gibbs(const ModelOptions& m, const GibbsOptions& g, std::ostream& os) {
  const FoesModel model = resolve(m).build();
  ChainConfig config;
  config.n_sweeps = g.sweeps;
  config.burn_in = g.burn_in;
  config.seed = m.seed;
  config.random_scan = g.random_scan;
  config.modal_epsilon = g.epsilon;
  if (g.init != "random") config.init = parse_list<int>(g.init);
  if (g.thin == 0) throw std::invalid_argument("thin must be >= 1");

  const ModalSet modes = modal_set(model, g.epsilon);
  os << "sweep,outcome_index,log_prob,in_modal_set\n";
  const MixingReport rep = run_gibbs(model, config, [&](std::size_t sweep, std::uint64_t idx) {
    if (sweep % g.thin != 0) return;
    os << fmt::format("{},{},{},{}\n", sweep, idx, format_real(model.log_prob(idx)),
                      modes.contains(idx) ? 1 : 0);
  });
  os << fmt::format("# tv_distance = {}\n", format_real(rep.tv_distance));
  os << fmt::format("# max_transition_log_ratio = {}\n",
                    format_real(rep.max_transition_log_ratio));
  os << fmt::format("# mode_escape_time = {}\n",
                    rep.mode_escape_time ? std::to_string(*rep.mode_escape_time) : "never");
  os << fmt::format("# modal_occupancy = {}\n", format_real(rep.modal_occupancy));
  os << fmt::format("# modal_set_fraction = {}\n", format_real(rep.modal_set_fraction));
  os << fmt::format("# seed = {}, sweeps = {}, burn_in = {}, scan = {}\n", m.seed, g.sweeps,
                    g.burn_in, g.random_scan ? "random" : "systematic");
}

struct MhOptions {
  std::size_t iterations = 1000;
  std::string step = "0.5";
  std::string init_theta;
  std::string data;
  std::string prior = "flat";
};

LogPrior make_prior(const std::string& spec) {
  if (spec == "flat") return {};
  if (spec.rfind("normal:", 0) == 0) {
    const double sd = parse_number<double>(spec.substr(7));
    if (!(sd > 0.0)) throw std::invalid_argument("normal prior sd must be positive");
    return [sd](std::span<const double> t) {
      double acc = 0.0;
      for (double v : t) acc -= 0.5 * (v / sd) * (v / sd);
      return acc;
    };
  }
  throw std::invalid_argument("unknown prior '" + spec + "' (flat | normal:SD)");
}

void cmd_mh(const ModelOptions& m, const MhOptions& o, std::ostream& os) {
  // --init-theta doubles as the model's theta when --theta is absent.
  ModelOptions base = m;
  if (base.theta.empty()) base.theta = o.init_theta;
  const ResolvedModel r = resolve(base);
  const Outcome data = parse_list<int>(o.data);
  if (data.size() != r.build().n_variables()) {
    throw std::invalid_argument("--data must list one symbol per variable");
  }
  MhConfig config;
  config.n_iterations = o.iterations;
  config.seed = m.seed;
  config.init_theta = o.init_theta.empty() ? r.theta : parse_list<double>(o.init_theta);
  const ProposalSpec proposal{parse_list<double>(o.step)};
  const MhResult res = run_param_mh(r.family, data, make_prior(o.prior), proposal, config);

  os << "iteration,log_acceptance";
  for (std::size_t i = 0; i < r.family.n_params; ++i) os << ",theta_" << i;
  os << '\n';
  for (std::size_t it = 0; it < res.trace.size(); ++it) {
    os << it + 1 << ',' << format_real(res.log_acceptance[it]) << ','
       << join_reals(res.trace[it], ',') << '\n';
  }
  os << fmt::format("# acceptance_rate = {}\n", format_real(res.acceptance_rate));
  os << fmt::format("# seed = {}, prior = {}, step = {}\n", m.seed, o.prior, o.step);
}

void cmd_score(const ModelOptions& m, std::ostream& os) {
  const ResolvedModel r = resolve(m);
  if (!r.linear) throw std::invalid_argument("score needs a linear exponential family");
  const ScoreReport s = expected_statistic(*r.linear);
  const FoesModel model = r.build();
  std::string expected_l;
  if (find_extremes(model).range() > 0.0) expected_l = format_real(theorem3_expectation(model));
  os << "model,n,statistic,theta,mean,lower,upper,normalized_score,expected_L\n";
  for (std::size_t i = 0; i < s.mean.size(); ++i) {
    os << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.name, model.n_variables(), i,
                      format_real(r.theta[i]), format_real(s.mean[i]),
                      format_real(s.ranges[i].lower), format_real(s.ranges[i].upper),
                      opt_real(s.normalized), expected_l);
  }
}

void add_figure1_options(CLI::App* sub, GridExperimentConfig& c, std::string& metrics,
                         std::uint64_t& budget) {
  sub->add_option("--n-visible,--n_visible", c.n_visible)->capture_default_str();
  sub->add_option("--n-hidden,--n_hidden", c.n_hidden)->capture_default_str();
  sub->add_option("--magnitude-min,--magnitude_min", c.magnitude_min)->capture_default_str();
  sub->add_option("--magnitude-max,--magnitude_max", c.magnitude_max)->capture_default_str();
  sub->add_option("--n-breaks,--n_breaks", c.n_breaks)->capture_default_str();
  sub->add_option("--samples-per-point,--samples_per_point,--samples", c.samples_per_point)
      ->capture_default_str();
  sub->add_option("--seed", c.seed)->capture_default_str();
  sub->add_option("--metrics", metrics, "comma list of scaled_lrep, delta_n")
      ->capture_default_str();
  sub->add_option("--budget", budget)->capture_default_str();
}

void cmd_figure1(GridExperimentConfig c, const std::string& metrics, std::uint64_t budget,
                 std::ostream& os) {
  c.scaled_lrep = c.delta_n = false;
  for (const auto& name : split(metrics, ',')) {
    if (name == "scaled_lrep") {
      c.scaled_lrep = true;
    } else if (name == "delta_n") {
      c.delta_n = true;
    } else {
      throw std::invalid_argument("unknown metric '" + name + "'");
    }
  }
  c.budget = Budget{budget};
  const auto cells = run_figure1(c);
  write_figure1_csv(os, c, cells);
}

// Splices `key = value` lines from `--config FILE` in right after the
// subcommand, so later command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> file;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
      file = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!file || rest.empty()) return rest;
  std::ifstream probe(*file);
  if (!probe) throw CLI::FileError::Missing(*file);

  std::vector<std::string> out{rest.front()};
  for (const auto& item : CLI::ConfigINI().from_file(*file)) {
    if (!item.parents.empty()) {
      throw CLI::ConfigError("sections are not supported in config files: " + item.fullname());
    }
    std::string value;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) {
      value += (k ? "," : "") + item.inputs[k];
    }
    out.push_back("--" + item.name + "=" + value);
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact instability and degeneracy diagnostics for small discrete models", "foes"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ModelOptions model;
  OutputOptions output;
  PathOptions path;
  GibbsOptions gibbs;
  MhOptions mh;
  GridExperimentConfig grid;
  std::string metrics = "scaled_lrep,delta_n";
  std::uint64_t grid_budget = kDefaultMaxOutcomes;
  double epsilon = 0.1;
  bool members = false;
  bool links = false;
  std::string config_file;  // consumed by expand_config before parsing

  std::map<std::string, std::function<void(std::ostream&)>> handlers;
  const auto subcommand = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_file,
                    "key = value file with the same option names; flags win");
    add_output_option(sub, output);
    return sub;
  };

  CLI::App* s = subcommand("lrep", "LREP, scaled LREP and delta_N of one model");
  add_model_options(s, model);
  handlers["lrep"] = [&](std::ostream& os) { cmd_lrep(model, os); };

  s = subcommand("delta", "largest one-flip log-probability ratio");
  add_model_options(s, model);
  handlers["delta"] = [&](std::ostream& os) { cmd_delta(model, os); };

  s = subcommand("modeset", "epsilon-modal set and its mass");
  add_model_options(s, model);
  s->add_option("--epsilon", epsilon)->capture_default_str();
  s->add_flag("--members", members, "list member indices as comments");
  handlers["modeset"] = [&](std::ostream& os) { cmd_modeset(model, epsilon, members, os); };

  s = subcommand("path", "scaled LREP and modal mass along a size-indexed path");
  add_model_options(s, model);
  s->add_option("--sizes", path.sizes, "comma list of sizes")->capture_default_str();
  s->add_option("--theta-rule,--theta_rule", path.rule, "fixed | linear | log | quadratic")
      ->capture_default_str();
  s->add_option("--epsilon", path.epsilon)->capture_default_str();
  s->add_option("--flatness", path.flatness)->capture_default_str();
  s->add_option("--level", path.level)->capture_default_str();
  handlers["path"] = [&](std::ostream& os) { cmd_path(model, path, os); };

  s = subcommand("bounds", "RBM bound quantities A_N, B_N, C_N and the LREP chain");
  add_model_options(s, model);
  s->add_flag("--links", links, "one row per inequality link");
  handlers["bounds"] = [&](std::ostream& os) { cmd_bounds(model, links, os); };

  s = subcommand("psr", "parameter sign reversal check and modal masses");
  add_model_options(s, model);
  s->add_option("--epsilon", epsilon)->capture_default_str();
  handlers["psr"] = [&](std::ostream& os) { cmd_psr(model, epsilon, os); };

  s = subcommand("lowerbound", "graph-model LREP/N lower bound (even n)");
  add_model_options(s, model);
  handlers["lowerbound"] = [&](std::ostream& os) { cmd_lowerbound(model, os); };

  s = subcommand("gibbs", "systematic-scan Gibbs trace with mixing diagnostics");
  add_model_options(s, model);
  s->add_option("--sweeps", gibbs.sweeps)->capture_default_str();
  s->add_option("--burn-in,--burn_in", gibbs.burn_in)->capture_default_str();
  s->add_option("--init", gibbs.init, "comma list of symbols or 'random'")
      ->capture_default_str();
  s->add_option("--epsilon", gibbs.epsilon)->capture_default_str();
  s->add_flag("--random-scan,--random_scan", gibbs.random_scan);
  s->add_option("--thin", gibbs.thin, "emit every k-th sweep")->capture_default_str();
  handlers["gibbs"] = [&](std::ostream& os) { cmd_gibbs(model, gibbs, os); };

  s = subcommand("mh", "random-walk Metropolis-Hastings over parameters");
  add_model_options(s, model);
  s->add_option("--iterations", mh.iterations)->capture_default_str();
  s->add_option("--step", mh.step, "proposal sd (one value or one per parameter)")
      ->capture_default_str();
  s->add_option("--init-theta,--init_theta", mh.init_theta, "defaults to --theta");
  s->add_option("--data", mh.data, "observed outcome, comma list of symbols")->required();
  s->add_option("--prior", mh.prior, "flat | normal:SD")->capture_default_str();
  handlers["mh"] = [&](std::ostream& os) { cmd_mh(model, mh, os); };

  s = subcommand("score", "expected sufficient statistic and normalized score");
  add_model_options(s, model);
  handlers["score"] = [&](std::ostream& os) { cmd_score(model, os); };

  s = subcommand("figure1", "RBM magnitude grid experiment");
  add_figure1_options(s, grid, metrics, grid_budget);
  handlers["figure1"] = [&](std::ostream& os) { cmd_figure1(grid, metrics, grid_budget, os); };

  try {
    const std::vector<std::string> expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "foes: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    emit(output, out, handlers.at(name));
  } catch (const BudgetExceeded& e) {
    err << "foes: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "foes: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "foes: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "foes: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "foes: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}

}  // namespace foes
