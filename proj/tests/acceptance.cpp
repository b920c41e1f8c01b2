// Acceptance run: one PASS/FAIL line per criterion, detail lines indented.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "foes/cli.hpp"
#include "foes/experiments.hpp"
#include "foes/instability.hpp"
#include "foes/psr.hpp"
#include "foes/rbm_bounds.hpp"
#include "foes/samplers.hpp"
#include "oracles.hpp"

using namespace foes;

namespace {

struct Result {
  bool pass = true;
  std::vector<std::string> details;
  void fail(std::string why) {
    pass = false;
    details.push_back("fail: " + std::move(why));
  }
  void note(std::string s) { details.push_back(std::move(s)); }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int n_failed = 0;

void criterion(int id, const std::string& title, double time_limit,
               const std::function<void(Result&)>& body) {
  Result o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(fmt::format("exception: {}", e.what()));
  }
  const double secs = seconds_since(t0);
  if (time_limit > 0 && secs >= time_limit)
    o.fail(fmt::format("runtime {:.2f}s over the {:.0f}s limit", secs, time_limit));
  if (!o.pass) ++n_failed;
  std::cout << fmt::format("{} [{}] {} ({:.2f}s)\n", o.pass ? "PASS" : "FAIL", id, title, secs);
  for (const auto& d : o.details) std::cout << "    " << d << "\n";
  std::cout.flush();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---------------------------------------------------------------------------

void closed_form_lrep(Result& o) {
  double worst = 0.0;
  for (double theta : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
    for (std::size_t n : {4, 8, 12}) {
      const double got = lrep(make_bernoulli(n, theta)).scaled_lrep;
      worst = std::max(worst, std::abs(got - std::abs(theta)));
      if (!close(got, std::abs(theta), 1e-10))
        o.fail(fmt::format("bernoulli θ={} N={}: {} vs {}", theta, n, got, std::abs(theta)));
    }
  }
  oracle::Gen g(1);
  for (std::size_t k : {2, 3, 4}) {
    for (std::size_t n : {3, 6}) {
      const auto th = g.reals(k, -3, 3);
      const auto r = oracle::range_of(th);
      const double got = lrep(make_multinomial(n, th)).scaled_lrep;
      worst = std::max(worst, std::abs(got - (r.hi - r.lo)));
      if (!close(got, r.hi - r.lo, 1e-10))
        o.fail(fmt::format("multinomial k={} N={}: {} vs {}", k, n, got, r.hi - r.lo));
    }
  }
  for (std::size_t n : {1, 5, 10}) {
    const double got = lrep(make_uniform(OutcomeSpace::binary(n))).scaled_lrep;
    worst = std::max(worst, std::abs(got));
    if (got != 0.0) o.fail(fmt::format("uniform N={}: {}", n, got));
  }
  o.note(fmt::format("max |error| {:.3g} (tol 1e-10)", worst));
}

void graph_lrep(Result& o) {
  double worst = 0.0;
  for (std::size_t n : {4, 5, 6}) {
    for (double theta : {-1.5, 0.7, 2.0}) {
      const double star = lrep(make_graph_model(GraphModelSpec::single(n, GraphTerm::two_stars, theta))).scaled_lrep;
      const double tri = lrep(make_graph_model(GraphModelSpec::single(n, GraphTerm::triangles, theta))).scaled_lrep;
      const double star_want = std::abs(theta) * double(n - 2);
      const double tri_want = std::abs(theta) * double(n - 2) / 3.0;
      worst = std::max({worst, std::abs(star - star_want), std::abs(tri - tri_want)});
      if (!close(star, star_want, 1e-9))
        o.fail(fmt::format("2-star n={} θ={}: {} vs {}", n, theta, star, star_want));
      if (!close(tri, tri_want, 1e-9))
        o.fail(fmt::format("triangle n={} θ={}: {} vs {}", n, theta, tri, tri_want));
    }
  }
  o.note(fmt::format("max |error| {:.3g} (tol 1e-9)", worst));
}

void linear_identity(Result& o) {
  oracle::Gen g(3);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = g.integer(1, 10);
    const auto w = g.reals(n, -2, 2);
    const auto pairs = g.reals(n, -1, 1);
    const double c = g.real(-1, 1);
    // Linear, nearest-neighbour and an outcome-dependent nonlinearity.
    Statistic stat = [w, pairs, c](std::span<const int> x) {
      double s = 0.0;
      int ones = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        s += w[i] * x[i];
        if (i) s += pairs[i] * x[i] * x[i - 1];
        ones += x[i];
      }
      return s + c * std::sin(double(ones));
    };
    const double theta = g.real(-4, 4);
    const OutcomeSpace space = OutcomeSpace::binary(n);
    std::vector<double> values;
    for (std::uint64_t i = 0; i < space.size(); ++i) values.push_back(stat(space.decode(i)));
    const auto r = oracle::range_of(values);
    const double want = std::abs(theta) * (r.hi - r.lo);
    const double got = lrep(make_linear_exp_family(LinearExpFamily(space, {stat}, {theta}))).lrep;
    worst = std::max(worst, std::abs(got - want));
    if (!close(got, want, 1e-9)) o.fail(fmt::format("model {}: {} vs {}", t, got, want));
  }
  o.note(fmt::format("50 models, max |error| {:.3g} (tol 1e-9)", worst));
}

void theorem1(Result& o) {
  oracle::Gen g(4);
  std::size_t count = 0;
  double tightest = 1e300;
  for (std::size_t t = 0; t < 500; ++t) {
    const auto inst = oracle::random_zoo_instance(g, t);
    const InstabilityReport r = instability_report(inst.model);
    ++count;
    tightest = std::min(tightest, *r.delta_n - r.scaled_lrep);
    if (*r.delta_n < r.scaled_lrep)
      o.fail(fmt::format("{} #{}: Δ_N={} < LREP/N={}", inst.family, t, *r.delta_n, r.scaled_lrep));
  }
  o.note(fmt::format("{} instances over 7 families, min(Δ_N − LREP/N) = {:.3g}", count, tightest));
}

void proposition2(Result& o) {
  oracle::Gen g(5);
  const char* chain[] = {"|LREPmarg-A| <= NH ln2", "2B+2|thH|1 >= LREPjoint",
                         "LREPjoint >= 2max{B,|thH|1}", "2max{B,|thH|1} >= 2B", "2B >= A",
                         "A >= max{C,B-2|thH|1}"};
  std::vector<int> failures(std::size(chain), 0);
  std::vector<double> worst(std::size(chain), 1e300);
  for (int t = 0; t < 200; ++t) {
    const RbmParams p = g.rbm(g.integer(1, 8), g.integer(1, 4), 3.0);
    const RbmBoundsReport r = bounds_report(p);
    for (std::size_t k = 0; k < std::size(chain); ++k) {
      const BoundLink* l = r.link(chain[k]);
      if (!l) {
        o.fail(fmt::format("link '{}' missing", chain[k]));
        continue;
      }
      worst[k] = std::min(worst[k], l->slack);
      if (!l->holds(1e-9)) {
        if (failures[k] == 0)
          o.fail(fmt::format("'{}' first violated at draw {} (N={}, NH={}): {} vs {}", chain[k], t,
                             p.n_visible(), p.n_hidden(), l->lhs, l->rhs));
        ++failures[k];
      }
    }
  }
  for (std::size_t k = 0; k < std::size(chain); ++k)
    o.note(fmt::format("{}: min slack {:.4g}, violations {}/200", chain[k], worst[k], failures[k]));
}

void psr_corollary(Result& o) {
  oracle::Gen g(6);
  struct Fam {
    std::string label;
    std::function<ModelFamily()> make;
  };
  const std::vector<Fam> fams{
      {"bernoulli", [&] { return families::bernoulli(g.integer(1, 10)); }},
      {"multinomial", [&] { return families::multinomial(g.integer(1, 5), 3); }},
      {"graph", [&] { return families::graph(g.integer(3, 5)); }},
      {"rbm-joint", [&] { return families::rbm_joint(g.integer(1, 6), g.integer(1, 4)); }},
      {"rbm-marginal", [&] { return families::rbm_marginal(g.integer(1, 8), g.integer(1, 4)); }},
      {"dbm-marginal", [&] { return families::dbm_marginal({g.integer(1, 6), g.integer(1, 3), g.integer(1, 3)}); }},
      {"uniform", [&] { return families::uniform(g.integer(1, 8), 2); }},
  };
  for (const Fam& f : fams) {
    int held = 0;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const ModelFamily fam = f.make();
      const PsrReport r = check_psr(fam, g.reals(fam.n_params, -3, 3));
      held += r.holds;
      worst = std::max(worst, r.max_violation);
    }
    o.note(fmt::format("psr {}: {}/10 hold, max violation {:.3g}", f.label, held, worst));
    if (held != 10) o.fail(fmt::format("PSR fails for {} (max violation {:.3g})", f.label, worst));
  }

  const Corollary1Masses c = corollary1_masses(families::bernoulli(10), std::vector<double>{6.0}, 0.1);
  const double p = oracle::logistic(6.0);
  const double want_modes = oracle::binomial_pmf(10, 10, p);
  const double want_comp = 1.0 - oracle::binomial_pmf(10, 10, 1.0 - p);
  o.note(fmt::format("bernoulli N=10 θ=6: P_θ(M)={:.6f} (oracle {:.6f}), P_−θ(Mᶜ)={:.6f} (oracle {:.6f})",
                     c.mass_theta_on_modes, want_modes, c.mass_neg_theta_on_complement, want_comp));
  if (!(c.mass_theta_on_modes > 0.99) || !close(c.mass_theta_on_modes, want_modes, 1e-12))
    o.fail("P_θ(M) check");
  if (!(c.mass_neg_theta_on_complement > 0.99) || !close(c.mass_neg_theta_on_complement, want_comp, 1e-12))
    o.fail("P_−θ(Mᶜ) check");

  // Inclusion needs PSR; checked on the families where it holds.
  std::size_t checked = 0;
  for (int t = 0; t < 100; ++t) {
    const ModelFamily fam = fams[std::size_t(t % 4)].make();
    const InclusionCheck ic = check_modal_inclusion(fam, g.reals(fam.n_params, -3, 3), g.real(0.01, 0.49));
    checked += ic.n_checked;
    if (!ic.holds) o.fail(fmt::format("inclusion fails on {} instance {}", fam.name, t));
  }
  o.note(fmt::format("inclusion: 100 PSR instances, {} modal outcomes checked", checked));
}

void theorem3(Result& o) {
  const double e = theorem3_expectation(make_bernoulli(10, 5.0));
  const ScoreReport s = expected_statistic(bernoulli_family(10, 3.0));
  o.note(fmt::format("E_θ[L_θ] = {:.9f} (logistic(5) = {:.9f})", e, oracle::logistic(5.0)));
  o.note(fmt::format("normalized score = {:.9f} (logistic(3) = {:.9f})", *s.normalized, oracle::logistic(3.0)));
  if (!close(e, oracle::logistic(5.0), 1e-9)) o.fail("expected standardized statistic");
  if (!s.normalized || !close(*s.normalized, oracle::logistic(3.0), 1e-9)) o.fail("normalized score");
}

void figure1(Result& o) {
  const GridExperimentConfig cfg;
  const auto cells = run_figure1(cfg);
  std::ostringstream csv;
  write_figure1_csv(csv, cfg, cells);
  std::size_t rows = 0;
  std::istringstream in(csv.str());
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') ++rows;
  --rows;  // header
  const Figure1Trends t = figure1_trends(cfg, cells);
  o.note(fmt::format("rows {}; spearman lrep (main {:.4f}, int {:.4f}), Δ_N (main {:.4f}, int {:.4f})",
                     rows, t.main_vs_lrep, t.interaction_vs_lrep, t.main_vs_delta, t.interaction_vs_delta));
  o.note(fmt::format("cell (0.001, 0.001) mean scaled LREP {:.5f}", cells[0].mean_scaled_lrep));
  if (rows != 400) o.fail("row count");
  for (double r : {t.main_vs_lrep, t.interaction_vs_lrep, t.main_vs_delta, t.interaction_vs_delta})
    if (!(r >= 0.95)) o.fail(fmt::format("rank correlation {:.4f} < 0.95", r));
  if (!(cells[0].mean_scaled_lrep <= 0.1)) o.fail("smallest cell above 0.1");
}

void mcmc(Result& o) {
  ChainConfig weak;
  weak.n_sweeps = 50000;
  weak.burn_in = 1000;
  weak.seed = 1;
  const MixingReport a = run_gibbs(make_bernoulli(6, 0.5), weak);
  o.note(fmt::format("bernoulli N=6 θ=0.5: TV {:.5f}", a.tv_distance));
  if (!(a.tv_distance < 0.02)) o.fail("TV not below 0.02");

  ChainConfig trap;
  trap.n_sweeps = 10000;
  trap.burn_in = 1000;
  trap.seed = 1;
  trap.init = foes::Outcome(10, 0);
  const FoesModel star = make_graph_model(GraphModelSpec::single(5, GraphTerm::two_stars, 2.0));
  const MixingReport b = run_gibbs(star, trap);
  o.note(fmt::format("2-star n=5 θ=2: occupancy {:.4f}, modal fraction {:.5f}, first entry sweep {}",
                     b.modal_occupancy, b.modal_set_fraction,
                     b.first_modal_entry ? std::to_string(*b.first_modal_entry) : "never"));
  if (!(b.modal_occupancy > 0.95)) o.fail("occupancy not above 0.95");
  if (!(b.modal_set_fraction < 0.05)) o.fail("modal set not below 5% of outcomes");
}

void stationarity(Result& o) {
  oracle::Gen g(10);
  double worst = 0.0;
  int n = 0;
  for (std::size_t t = 0; n < 70; ++t) {
    const auto inst = oracle::random_zoo_instance(g, t);
    if (inst.model.n_variables() > 6) continue;
    const auto p = exact_distribution(inst.model);
    const double tv = total_variation(apply_gibbs_kernel(inst.model, p), p);
    worst = std::max(worst, tv);
    if (!(tv <= 1e-10)) o.fail(fmt::format("{}: TV {:.3g}", inst.family, tv));
    ++n;
  }
  o.note(fmt::format("{} models with N <= 6, max TV {:.3g} (tol 1e-10)", n, worst));
}

void determinism(Result& o) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "foes_accept_a.csv").string();
  const std::string b = (dir / "foes_accept_b.csv").string();
  for (const auto& path : {a, b}) {
    std::ostringstream out, err;
    const int code = run_cli({"figure1", "--seed", "42", "--out", path}, out, err);
    if (code != kExitOk) o.fail(fmt::format("figure1 exit {}: {}", code, err.str()));
  }
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string x = slurp(a), y = slurp(b);
  o.note(fmt::format("{} bytes each", x.size()));
  if (x.empty() || x != y) o.fail("outputs differ");
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

}  // namespace

int main() {
  criterion(1, "closed-form LREP matches enumeration", 1.0, closed_form_lrep);
  criterion(2, "graph-model LREP", 30.0, graph_lrep);
  criterion(3, "one-parameter identity LREP = |θ|(U − L)", 0.0, linear_identity);
  criterion(4, "Δ_N ≥ LREP/N on 500 zoo instances", 0.0, theorem1);
  criterion(5, "RBM bound chain on 200 random RBMs", 60.0, proposition2);
  criterion(6, "PSR and modal masses under sign reversal", 0.0, psr_corollary);
  criterion(7, "standardized statistic expectation and score", 0.0, theorem3);
  criterion(8, "figure 1 grid at default scale", 600.0, figure1);
  criterion(9, "Gibbs mixing and entrapment", 0.0, mcmc);
  criterion(10, "Gibbs kernel stationarity", 0.0, stationarity);
  criterion(11, "figure1 CSV determinism", 0.0, determinism);
  std::cout << fmt::format("{} of 11 criteria failed\n", n_failed);
  return n_failed == 0 ? 0 : 1;
}
