#include "foes/rbm_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace foes {

namespace {

Eigen::Index at(std::size_t i) { return static_cast<Eigen::Index>(i); }

double dot(const Eigen::VectorXd& theta, std::span<const int> s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += s[i] * theta[at(i)];
  return acc;
}

void check_shape(std::span<const int> s, std::size_t expected, const char* what) {
  if (s.size() != expected) {
    throw std::invalid_argument(
        fmt::format("{} vector has length {}, expected {}", what, s.size(), expected));
  }
}

bool within_budget(std::size_t n, Budget budget) {
  try {
    checked_space_size(n, 2, budget);
    return true;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

}  // namespace

double visible_field_l1(const RbmParams& params, std::span<const int> h) {
  check_shape(h, params.n_hidden(), "hidden");
  double total = 0.0;
  for (Eigen::Index i = 0; i < params.visible.size(); ++i) {
    double field = params.visible[i];
    for (std::size_t j = 0; j < h.size(); ++j) field += h[j] * params.interaction(at(j), i);
    total += std::abs(field);
  }
  return total;
}

double hidden_field_l1(const RbmParams& params, std::span<const int> x) {
  check_shape(x, params.n_visible(), "visible");
  double total = 0.0;
  for (Eigen::Index j = 0; j < params.hidden.size(); ++j) {
    double field = params.hidden[j];
    for (std::size_t i = 0; i < x.size(); ++i) field += x[i] * params.interaction(j, at(i));
    total += std::abs(field);
  }
  return total;
}

double max_over_visible(const RbmParams& params, std::span<const int> h) {
  return dot(params.hidden, h) + visible_field_l1(params, h);
}
double min_over_visible(const RbmParams& params, std::span<const int> h) {
  return dot(params.hidden, h) - visible_field_l1(params, h);
}
double max_over_hidden(const RbmParams& params, std::span<const int> x) {
  return dot(params.visible, x) + hidden_field_l1(params, x);
}
double min_over_hidden(const RbmParams& params, std::span<const int> x) {
  return dot(params.visible, x) - hidden_field_l1(params, x);
}

void for_each_spin_vector(std::size_t n, Budget budget,
                          const std::function<void(std::span<const int>)>& fn) {
  const std::uint64_t count = checked_space_size(n, 2, budget);
  std::vector<int> s(n, -1);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    for (std::size_t b = 0; b < n; ++b) s[b] = ((idx >> b) & 1U) ? 1 : -1;
    fn(s);
  }
}

const BoundLink* RbmBoundsReport::link(const std::string& name) const {
  for (const auto& l : links) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

RbmBoundsReport bounds_report(const RbmParams& params, Budget budget) {
  params.validate();
  RbmBoundsReport r;
  r.n_visible = params.n_visible();
  r.n_hidden = params.n_hidden();
  r.visible_l1 = params.visible.lpNorm<1>();
  r.hidden_l1 = params.hidden.lpNorm<1>();
  r.interaction_l1 = params.interaction.cwiseAbs().sum();
  r.n_h_log2 = static_cast<double>(r.n_hidden) * std::log(2.0);

  const double inf = std::numeric_limits<double>::infinity();

  if (within_budget(r.n_hidden, budget)) {
    double b = -inf, c = inf;
    double joint_max = -inf, joint_min = inf;
    double best_min_over_visible = -inf;
    double h2_score = inf, h2_a = 0.0;
    for_each_spin_vector(r.n_hidden, budget, [&](std::span<const int> h) {
      const double a = visible_field_l1(params, h);
      const double ht = dot(params.hidden, h);
      b = std::max(b, a);
      c = std::min(c, a);
      joint_max = std::max(joint_max, ht + a);
      joint_min = std::min(joint_min, ht - a);
      best_min_over_visible = std::max(best_min_over_visible, ht - a);
      if (-ht + a < h2_score) {
        h2_score = -ht + a;
        h2_a = a;
      }
    });
    r.b_n = b;
    r.c_n = c;
    r.two_a_h2_star = 2.0 * h2_a;
    r.max_min_gap = joint_max - best_min_over_visible;
    r.lrep_joint = joint_max - joint_min;
  }

  if (within_budget(r.n_visible + r.n_hidden, budget)) {
    r.lrep_joint = lrep(make_rbm_joint(params, budget)).lrep;
    r.lrep_joint_enumerated = true;
  }

  if (within_budget(r.n_visible, budget)) {
    double hi = -inf, lo = inf;
    for_each_spin_vector(r.n_visible, budget, [&](std::span<const int> x) {
      const double m = max_over_hidden(params, x);
      hi = std::max(hi, m);
      lo = std::min(lo, m);
    });
    r.a_n = hi - lo;
    r.lrep_marginal = lrep(make_rbm_marginal(params, budget)).lrep;
  }

  const auto add = [&](std::string name, double lhs, double rhs, bool asserted) {
    r.links.push_back(BoundLink{std::move(name), lhs, rhs, lhs - rhs, asserted});
  };
  const double h1 = r.hidden_l1;
  if (r.b_n) add("B >= |thV|1", *r.b_n, r.visible_l1, true);
  if (r.b_n && r.lrep_joint) {
    const double b = *r.b_n;
    add("2B+2|thH|1 >= LREPjoint", 2 * b + 2 * h1, *r.lrep_joint, true);
    add("LREPjoint >= 2max{B,|thH|1}", *r.lrep_joint, 2 * std::max(b, h1), true);
    add("2max{B,|thH|1} >= 2B", 2 * std::max(b, h1), 2 * b, true);
  }
  if (r.b_n && r.a_n) {
    const double b = *r.b_n, a = *r.a_n;
    add("2B >= A", 2 * b, a, true);
    add("A >= max{C,B-2|thH|1}", a, std::max(*r.c_n, b - 2 * h1), false);
    add("A >= C", a, *r.c_n, false);
    add("A >= B-2|thH|1", a, b - 2 * h1, false);
    add("A >= 2a(h2*)", a, *r.two_a_h2_star, false);
  }
  if (r.a_n && r.lrep_marginal) {
    const double gap = std::abs(*r.lrep_marginal - *r.a_n);
    r.links.push_back(BoundLink{"|LREPmarg-A| <= NH ln2", gap, r.n_h_log2,
                                r.n_h_log2 - gap, true});
  }

  for (const auto& l : r.links) {
    const double scale = std::max({1.0, std::abs(l.lhs), std::abs(l.rhs)});
    if (l.asserted && l.slack < -1e-9 * scale) {
      throw std::logic_error(fmt::format("RBM bound '{}' violated: {} vs {} (slack {})",
                                         l.name, l.lhs, l.rhs, l.slack));
    }
  }
  return r;
}

std::vector<const ConditionTrend*> StabilityConditions::trends() const {
  return {&visible_a, &joint_b, &visible_minus_hidden, &hidden_only, &visible_l1, &total_l1};
}

StabilityConditions stability_conditions(std::span<const RbmParams> path,
                                         const StabilityConfig& config) {
  if (path.size() < 3) throw std::invalid_argument("RBM path needs >= 3 entries");
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (path[k].n_visible() <= path[k - 1].n_visible()) {
      throw std::invalid_argument("RBM path visible counts must be strictly increasing");
    }
  }

  StabilityConditions s;
  std::vector<double> a_vals, b_vals, vmh_vals, h_vals, v_vals, t_vals;
  for (const auto& p : path) {
    const RbmBoundsReport r = bounds_report(p, config.budget);
    if (!r.a_n || !r.b_n) {
      throw BudgetExceeded("RBM path entry exceeds the enumeration budget",
                           config.budget.max_outcomes);
    }
    const double n = static_cast<double>(r.n_visible);
    s.n_visible.push_back(n);
    s.hidden_ratio.push_back(static_cast<double>(r.n_hidden) / n);
    a_vals.push_back(*r.a_n / n);
    b_vals.push_back(std::max(r.hidden_l1, *r.b_n) / n);
    vmh_vals.push_back((r.visible_l1 - 2 * r.hidden_l1) / n);
    h_vals.push_back(r.hidden_l1 / n);
    v_vals.push_back((r.visible_l1 + r.interaction_l1) / n);
    t_vals.push_back((r.visible_l1 + r.hidden_l1 + r.interaction_l1) / n);

    if (r.lrep_joint && r.lrep_marginal) {
      const double tol = 1e-9 * std::max(1.0, *r.lrep_joint);
      s.joint_dominates_visible &= *r.lrep_joint >= *r.a_n - tol &&
                                   *r.a_n >= *r.lrep_marginal - r.n_h_log2 - tol;
    }
  }
  s.hidden_ratio_bounded = std::all_of(s.hidden_ratio.begin(), s.hidden_ratio.end(),
                                       [&](double q) { return q <= config.max_hidden_ratio; });

  const auto trend = [&](std::string name, std::string quantity, const std::vector<double>& v) {
    return ConditionTrend{std::move(name), std::move(quantity),
                          classify_sequence(s.n_visible, v, config.thresholds)};
  };
  s.visible_a = trend("iii.1", "A_N/N", a_vals);
  s.joint_b = trend("iii.2", "max{|thH|1,B_N}/N", b_vals);
  s.visible_minus_hidden = trend("iii.4", "(|thV|1-2|thH|1)/N", vmh_vals);
  s.hidden_only = trend("iii.5", "|thH|1/N", h_vals);
  s.visible_l1 = trend("iii.7-visible", "(|thV|1+|thVH|1)/N", v_vals);
  s.total_l1 = trend("iii.7-joint", "|th|1/N", t_vals);

  const auto bounded = [&](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double q) { return q <= config.bound_constant; });
  };
  s.visible_l1_within_bound = bounded(v_vals);
  s.total_l1_within_bound = bounded(t_vals);

  if (s.hidden_only.verdict.verdict != Verdict::empirically_unstable) {
    const bool visible_unstable = s.visible_a.verdict.verdict == Verdict::empirically_unstable;
    const bool joint_unstable = s.joint_b.verdict.verdict == Verdict::empirically_unstable;
    s.verdicts_agree = visible_unstable == joint_unstable;
  }
  return s;
}

}  // namespace foes
