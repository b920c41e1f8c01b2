#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "foes/instability.hpp"
#include "foes/samplers.hpp"
#include "oracles.hpp"

using namespace foes;

TEST_CASE("full conditionals") {
  SUBCASE("bernoulli is logistic in θ") {
    const FoesModel m = make_bernoulli(4, 1.2);
    const auto c = gibbs_full_conditional(m, Outcome{0, 1, 1, 0}, 2);
    CHECK(c[1] == doctest::Approx(oracle::logistic(1.2)).epsilon(1e-14));
    CHECK(c[0] + c[1] == doctest::Approx(1.0));
  }
  SUBCASE("ratio identity on random models (property)") {
    oracle::Gen g(7);
    for (std::size_t t = 0; t < 35; ++t) {
      const auto inst = oracle::random_zoo_instance(g, t);
      const FoesModel& m = inst.model;
      const OutcomeSpace& s = m.space();
      const std::uint64_t i = g.rng.below(s.size());
      const std::size_t var = g.integer(0, s.n_variables() - 1);
      const auto c = gibbs_full_conditional(m, i, var);
      REQUIRE(c.size() == s.alphabet_size());
      for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t b = 0; b < c.size(); ++b) {
          const double lhs = std::log(c[a]) - std::log(c[b]);
          const double rhs = m.log_prob(s.with_digit(i, var, a)) - m.log_prob(s.with_digit(i, var, b));
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("gibbs on a weak bernoulli model matches the exact law") {
  const FoesModel m = make_bernoulli(6, 0.5);
  ChainConfig cfg;
  cfg.n_sweeps = 50000;
  cfg.burn_in = 500;
  cfg.seed = 2024;
  const MixingReport r = run_gibbs(m, cfg);
  CHECK(r.tv_distance < 0.02);
  CHECK(r.n_samples == 49500);
  CHECK(r.max_transition_log_ratio == doctest::Approx(0.5));
}

TEST_CASE("gibbs is deterministic and observes every sweep") {
  const FoesModel m = make_bernoulli(5, 1.0);
  ChainConfig cfg;
  cfg.n_sweeps = 200;
  cfg.seed = 9;
  std::vector<std::uint64_t> a, b;
  run_gibbs(m, cfg, [&](std::size_t, std::uint64_t i) { a.push_back(i); });
  run_gibbs(m, cfg, [&](std::size_t, std::uint64_t i) { b.push_back(i); });
  CHECK(a.size() == 200);
  CHECK(a == b);
  cfg.burn_in = 200;
  CHECK_THROWS(run_gibbs(m, cfg));
}

TEST_CASE("strong bernoulli chain sits in its mode") {
  const FoesModel m = make_bernoulli(8, 8.0);
  ChainConfig cfg;
  cfg.n_sweeps = 2000;
  cfg.burn_in = 100;
  cfg.init = Outcome(8, 0);
  const MixingReport r = run_gibbs(m, cfg);
  CHECK(r.modal_occupancy > 0.99);
  CHECK(r.modal_set_fraction == doctest::Approx(1.0 / 256));
  REQUIRE(r.first_modal_entry.has_value());
  CHECK(*r.first_modal_entry >= 1);
}

TEST_CASE("2-star chain is trapped near the complete graph") {
  const FoesModel m = make_graph_model(GraphModelSpec::single(5, GraphTerm::two_stars, 2.0));
  ChainConfig cfg;
  cfg.n_sweeps = 5000;
  cfg.burn_in = 500;
  cfg.init = Outcome(10, 0);
  const MixingReport r = run_gibbs(m, cfg);
  CHECK(r.modal_occupancy > 0.95);
  CHECK(r.modal_set_fraction < 0.05);
  CHECK(r.max_transition_log_ratio >= lrep(m).scaled_lrep);
}

TEST_CASE("exact kernel preserves the target (property)") {
  oracle::Gen g(13);
  for (std::size_t t = 0; t < 35; ++t) {
    const auto inst = oracle::random_zoo_instance(g, t);
    if (inst.model.n_variables() > 6) continue;
    const auto p = exact_distribution(inst.model);
    CHECK(total_variation(apply_gibbs_kernel(inst.model, p), p) < 1e-10);
    CHECK(total_variation(apply_site_kernel(inst.model, p, 0), p) < 1e-10);
  }
  // A point mass is moved by the kernel.
  const FoesModel m = make_bernoulli(3, 0.0);
  std::vector<double> point(8, 0.0);
  point[0] = 1.0;
  const auto next = apply_gibbs_kernel(m, point);
  for (double v : next) CHECK(v == doctest::Approx(0.125));
}

TEST_CASE("total variation") {
  const std::vector<double> p{0.5, 0.5, 0.0}, q{0.0, 0.5, 0.5};
  CHECK(total_variation(p, q) == doctest::Approx(0.5));
  CHECK(total_variation(p, p) == 0.0);
  CHECK_THROWS(total_variation(p, std::vector<double>{1.0}));
}

TEST_CASE("MH acceptance ratio") {
  const ModelFamily fam = families::bernoulli(8);
  const Outcome ones(8, 1);
  const LogPrior flat = [](std::span<const double>) { return 0.0; };

  SUBCASE("matches direct recomputation") {
    oracle::Gen g(3);
    for (int t = 0; t < 20; ++t) {
      const std::vector<double> a{g.real(-3, 3)}, b{g.real(-3, 3)};
      const double direct =
          std::min(0.0, fam(a).log_prob(ones) - fam(b).log_prob(ones) - 0.5 * (a[0] * a[0] - b[0] * b[0]));
      const LogPrior normal = [](std::span<const double> th) { return -0.5 * th[0] * th[0]; };
      CHECK(mh_log_acceptance(fam, ones, normal, a, b) == doctest::Approx(direct).epsilon(1e-12));
      // Bernoulli oracle: log P = 8θ − 8 log(1 + e^θ).
      const double la = 8 * a[0] - 8 * std::log1p(std::exp(a[0]));
      const double lb = 8 * b[0] - 8 * std::log1p(std::exp(b[0]));
      CHECK(mh_log_acceptance(fam, ones, flat, a, b) == doctest::Approx(std::min(0.0, la - lb)).epsilon(1e-12));
    }
  }
  SUBCASE("asymmetric proposal density enters the ratio") {
    const LogProposalDensity q = [](std::span<const double> to, std::span<const double>) {
      return -to[0];
    };
    const std::vector<double> a{0.0}, b{1.0};
    const double base = fam(a).log_prob(ones) - fam(b).log_prob(ones);
    CHECK(mh_log_acceptance(fam, ones, flat, a, b, q) ==
          doctest::Approx(std::min(0.0, base + (-1.0) - 0.0)).epsilon(1e-12));
  }
  SUBCASE("trace drifts to large θ on all-ones data") {
    MhConfig cfg;
    cfg.n_iterations = 3000;
    cfg.init_theta = {0.0};
    const MhResult r = run_param_mh(fam, ones, flat, ProposalSpec{{1.0}}, cfg);
    CHECK(r.trace.size() == 3000);
    CHECK(r.trace.back()[0] > 3.0);
    CHECK(r.acceptance_rate == doctest::Approx(double(r.n_accepted) / 3000));
  }
  SUBCASE("uniform family accepts everything") {
    MhConfig cfg;
    cfg.n_iterations = 500;
    cfg.init_theta = {};
    const MhResult r = run_param_mh(families::uniform(3, 2), Outcome{0, 1, 0}, flat,
                                    ProposalSpec{{1.0}}, cfg);
    CHECK(r.acceptance_rate == 1.0);
  }
}

TEST_CASE("MH on the 2-star family collapses as the step grows") {
  const ModelFamily fam =
      families::linear(graph_family(GraphModelSpec::single(4, GraphTerm::two_stars, 0.0)));
  const Outcome half{1, 1, 1, 0, 0, 0};
  const LogPrior flat = [](std::span<const double>) { return 0.0; };
  std::vector<double> rates;
  for (double step : {0.1, 1.0, 10.0}) {
    MhConfig cfg;
    cfg.n_iterations = 4000;
    cfg.seed = 5;
    cfg.init_theta = {0.0};
    rates.push_back(run_param_mh(fam, half, flat, ProposalSpec{{step}}, cfg).acceptance_rate);
  }
  MESSAGE("acceptance rates " << rates[0] << " " << rates[1] << " " << rates[2]);
  CHECK(rates[0] > rates[1]);
  CHECK(rates[1] > rates[2]);
  CHECK(rates[2] < 0.2);
}

TEST_CASE("standardized statistic expectations") {
  const FoesModel m = make_bernoulli(10, 5.0);
  CHECK(theorem3_expectation(m) == doctest::Approx(oracle::logistic(5.0)).epsilon(1e-12));
  CHECK(theorem3_expectation(m, make_bernoulli(10, -5.0)) ==
        doctest::Approx(oracle::logistic(-5.0)).epsilon(1e-12));
  CHECK(theorem3_statistic(m, 0) == 0.0);
  CHECK(theorem3_statistic(m, 1023) == 1.0);
  CHECK_THROWS(theorem3_expectation(make_bernoulli(3, 0.0)));
  CHECK_THROWS(theorem3_expectation(m, make_bernoulli(9, 1.0)));
}

TEST_CASE("expected statistic and normalized score") {
  const ScoreReport r = expected_statistic(bernoulli_family(7, 3.0));
  CHECK(r.mean[0] == doctest::Approx(7 * oracle::logistic(3.0)).epsilon(1e-12));
  REQUIRE(r.normalized.has_value());
  CHECK(*r.normalized == doctest::Approx(oracle::logistic(3.0)).epsilon(1e-12));
  CHECK_FALSE(expected_statistic(multinomial_family(2, {0.0, 1.0})).normalized.has_value());

  SUBCASE("the normalized score increases in θ (property)") {
    oracle::Gen g(37);
    for (int t = 0; t < 10; ++t) {
      const auto w = g.reals(5, -1, 1);
      Statistic stat = [w](std::span<const int> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] + (i ? x[i] * x[i - 1] : 0);
        return s;
      };
      double prev = -1.0;
      for (double th = -4.0; th <= 4.0; th += 0.5) {
        const LinearExpFamily f(OutcomeSpace::binary(5), {stat}, {th});
        const double v = *expected_statistic(f).normalized;
        CHECK(v > prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
      }
    }
  }
}
