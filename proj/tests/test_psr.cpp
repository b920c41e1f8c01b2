#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "foes/psr.hpp"
#include "oracles.hpp"

using namespace foes;

TEST_CASE("negate") {
  const std::vector<double> t{1.0, -2.0, 0.0};
  CHECK(negate(t) == std::vector<double>{-1.0, 2.0, -0.0});
}

TEST_CASE("PSR holds on linear families and the RBM joint (property)") {
  oracle::Gen g(43);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = g.integer(1, 8);
    CHECK(check_psr(families::bernoulli(n), g.reals(1, -4, 4)).holds);
    CHECK(check_psr(families::multinomial(g.integer(1, 4), 3), g.reals(3, -3, 3)).holds);
    CHECK(check_psr(families::graph(4), g.reals(3, -2, 2)).holds);
    const std::size_t nv = g.integer(1, 5), nh = g.integer(0, 3);
    const ModelFamily joint = families::rbm_joint(nv, nh);
    const PsrReport r = check_psr(joint, g.reals(joint.n_params, -3, 3));
    CHECK(r.holds);
    CHECK(r.max_violation < kPsrTolerance);
    CHECK(r.lrep_theta == doctest::Approx(r.lrep_neg_theta).epsilon(1e-12));
  }
}

TEST_CASE("PSR and the RBM marginal") {
  SUBCASE("no hidden units: a linear family, PSR holds") {
    const ModelFamily f = families::rbm_marginal(4, 0);
    CHECK(check_psr(f, std::vector<double>{0.5, -1.0, 2.0, 0.3}).holds);
  }
  SUBCASE("hidden units: P_θ P_−θ ∝ Π cosh² of the hidden fields") {
    oracle::Gen g(47);
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = g.integer(2, 4), nh = g.integer(1, 3);
      const RbmParams p = g.rbm(n, nh, 2.0);
      const auto flat = p.flatten();
      const ModelFamily f = families::rbm_marginal(n, nh);
      const FoesModel pos = f(flat), neg = f(negate(flat));
      // Oracle: the log product minus 2Σ log cosh is constant in x.
      std::vector<double> residual;
      for (std::uint64_t i = 0; i < pos.space().size(); ++i) {
        const Outcome x = pos.space().decode(i);
        double lc = 0.0;
        for (std::size_t j = 0; j < nh; ++j) {
          double field = p.hidden(Eigen::Index(j));
          for (std::size_t k = 0; k < n; ++k) field += p.interaction(Eigen::Index(j), Eigen::Index(k)) * x[k];
          lc += 2 * std::log(std::cosh(field));
        }
        residual.push_back(pos.log_prob(i) + neg.log_prob(i) - lc);
      }
      const auto r = oracle::range_of(residual);
      CHECK(r.hi - r.lo < 1e-10);
      std::vector<double> lp_pos, lp_neg;
      for (std::uint64_t i = 0; i < pos.space().size(); ++i) {
        lp_pos.push_back(pos.log_prob(i));
        lp_neg.push_back(neg.log_prob(i));
      }
      const double target = oracle::range_of(lp_pos).hi + oracle::range_of(lp_neg).lo;
      double worst = 0.0;
      for (std::size_t i = 0; i < lp_pos.size(); ++i)
        worst = std::max(worst, std::abs(lp_pos[i] + lp_neg[i] - target));
      const PsrReport psr = check_psr(f, flat);
      CHECK(psr.max_violation == doctest::Approx(worst).epsilon(1e-9));
      CHECK(psr.holds == (worst < kPsrTolerance));
      CHECK_FALSE(psr.holds);
    }
  }
}

TEST_CASE("corollary 1 masses for bernoulli") {
  const ModelFamily f = families::bernoulli(10);
  const std::vector<double> theta{6.0};
  const Corollary1Masses c = corollary1_masses(f, theta, 0.1);
  // The modal set is {all ones}; complement under −θ has mass 1 − logistic(−6)^10.
  const double p = oracle::logistic(6.0);
  CHECK(c.modes.members == std::vector<std::uint64_t>{1023});
  CHECK(c.mass_theta_on_modes == doctest::Approx(oracle::binomial_pmf(10, 10, p)).epsilon(1e-12));
  CHECK(c.mass_neg_theta_on_complement ==
        doctest::Approx(1.0 - oracle::binomial_pmf(10, 10, 1.0 - p)).epsilon(1e-12));
  CHECK(c.mass_neg_theta_on_modes == doctest::Approx(std::pow(1.0 - p, 10)).epsilon(1e-9));
  // logistic(6)^10 ≈ 0.9755: the modal set is a single outcome at this N.
  CHECK(c.mass_theta_on_modes == doctest::Approx(0.97554).epsilon(1e-4));
  CHECK(c.mass_neg_theta_on_complement > 0.99);
}

TEST_CASE("corollary 1 refuses families that fail PSR") {
  oracle::Gen g(4);
  const ModelFamily f = families::rbm_marginal(3, 2);
  CHECK_THROWS_AS(corollary1_masses(f, g.reals(f.n_params, -3, 3), 0.1), PsrViolation);
}

TEST_CASE("modal inclusion under sign reversal (property)") {
  oracle::Gen g(59);
  for (int t = 0; t < 40; ++t) {
    const double eps = g.real(0.01, 0.49);
    const ModelFamily fams[] = {families::bernoulli(g.integer(1, 8)),
                                families::multinomial(g.integer(1, 4), 3), families::graph(4),
                                families::rbm_joint(g.integer(1, 4), g.integer(0, 3))};
    for (const ModelFamily& f : fams) {
      const auto theta = g.reals(f.n_params, -3, 3);
      const InclusionCheck c = check_modal_inclusion(f, theta, eps);
      INFO(f.name);
      CHECK(c.holds);
      CHECK(c.violations.empty());
      CHECK(c.n_checked >= 1);
    }
  }
}

TEST_CASE("degeneracy trend along paths") {
  ParameterPath path;
  path.family = [](const PathEntry& e) { return make_bernoulli(e.size, e.params[0]); };
  SUBCASE("θ = 2 log N degenerates") {
    for (std::size_t n : {4, 6, 8, 10, 12}) path.entries.push_back({n, {2 * std::log(double(n))}});
    const DegeneracyTrend d = degeneracy_trend(path, 0.1);
    CHECK(d.masses.size() == 5);
    CHECK(d.increasing);
  }
  SUBCASE("fixed small θ loses modal mass") {
    for (std::size_t n : {4, 6, 8, 10, 12}) path.entries.push_back({n, {0.2}});
    const DegeneracyTrend d = degeneracy_trend(path, 0.1);
    CHECK_FALSE(d.increasing);
    CHECK(d.masses.back() < d.masses.front());
  }
}
