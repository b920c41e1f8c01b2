#include "foes/psr.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace foes {

std::vector<double> negate(std::span<const double> theta) {
  std::vector<double> out(theta.begin(), theta.end());
  for (auto& t : out) t = -t;
  return out;
}

PsrReport check_psr(const ModelFamily& family, std::span<const double> theta) {
  const FoesModel pos = family(theta);
  const std::vector<double> neg_theta = negate(theta);
  const FoesModel neg = family(neg_theta);
  if (!(pos.space() == neg.space())) {
    throw std::logic_error("family produced different spaces for theta and -theta");
  }

  const std::vector<double> lp = enumerate_log_probs(pos);
  const std::vector<double> ln = enumerate_log_probs(neg);
  const double target = *std::max_element(lp.begin(), lp.end()) +
                        *std::min_element(ln.begin(), ln.end());
  PsrReport r;
  for (std::size_t i = 0; i < lp.size(); ++i) {
    r.max_violation = std::max(r.max_violation, std::abs(lp[i] + ln[i] - target));
  }
  r.holds = r.max_violation <= kPsrTolerance;
  r.lrep_theta = lrep(pos).lrep;
  r.lrep_neg_theta = lrep(neg).lrep;
  return r;
}

Corollary1Masses corollary1_masses(const ModelFamily& family, std::span<const double> theta,
                                   double epsilon) {
  const PsrReport psr = check_psr(family, theta);
  if (!psr.holds) {
    throw PsrViolation(fmt::format("family '{}' violates PSR (max violation {:.3g})",
                                   family.name, psr.max_violation));
  }
  const FoesModel pos = family(theta);
  const std::vector<double> neg_theta = negate(theta);
  const FoesModel neg = family(neg_theta);

  Corollary1Masses c;
  c.modes = modal_set(pos, epsilon);
  c.mass_theta_on_modes = c.modes.mass;

  std::vector<std::uint64_t> complement;
  complement.reserve(c.modes.n_outcomes - c.modes.members.size());
  for (std::uint64_t i = 0; i < c.modes.n_outcomes; ++i) {
    if (!c.modes.contains(i)) complement.push_back(i);
  }
  c.mass_neg_theta_on_complement = std::exp(log_mass_of(neg, complement));
  c.mass_neg_theta_on_modes = std::exp(log_mass_of(neg, c.modes.members));
  return c;
}

InclusionCheck check_modal_inclusion(const ModelFamily& family, std::span<const double> theta,
                                     double epsilon) {
  const ModalSet modes = modal_set(family(theta), epsilon);
  const std::vector<double> neg_theta = negate(theta);
  const ModalSet neg_modes = modal_set(family(neg_theta), 1.0 - epsilon);
  InclusionCheck r;
  r.n_checked = neg_modes.members.size();
  for (auto i : neg_modes.members) {
    if (modes.contains(i)) r.violations.push_back(i);
  }
  r.holds = r.violations.empty();
  return r;
}

DegeneracyTrend degeneracy_trend(const ParameterPath& path, double epsilon,
                                 const PathThresholds& thresholds) {
  path.validate();
  DegeneracyTrend t;
  for (const auto& entry : path.entries) {
    const FoesModel model = path.family(entry);
    t.n_variables.push_back(static_cast<double>(model.n_variables()));
    t.masses.push_back(modal_set(model, epsilon).mass);
  }
  t.increasing = true;
  for (std::size_t i = 1; i < t.masses.size(); ++i) t.increasing &= t.masses[i] > t.masses[i - 1];
  t.verdict = classify_path(path, thresholds);
  return t;
}

}  // namespace foes
