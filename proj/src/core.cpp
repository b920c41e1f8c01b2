#include "foes/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include <fmt/format.h>

namespace foes {

std::uint64_t checked_space_size(std::size_t n_variables,
                                 std::size_t alphabet_size, Budget budget) {
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < n_variables; ++i) {
    if (alphabet_size > 1 &&
        size > budget.max_outcomes / static_cast<std::uint64_t>(alphabet_size)) {
      throw BudgetExceeded(
          fmt::format("outcome space {}^{} exceeds the enumeration budget of {}",
                      alphabet_size, n_variables, budget.max_outcomes),
          budget.max_outcomes);
    }
    size *= alphabet_size;
  }
  if (size > budget.max_outcomes) {
    throw BudgetExceeded(
        fmt::format("outcome space {}^{} exceeds the enumeration budget of {}",
                    alphabet_size, n_variables, budget.max_outcomes),
        budget.max_outcomes);
  }
  return size;
}

OutcomeSpace::OutcomeSpace(std::size_t n_variables, std::vector<int> alphabet,
                           Budget budget)
    : n_(n_variables), alphabet_(std::move(alphabet)), budget_(budget) {
  if (n_ < 1) throw std::invalid_argument("outcome space needs n_variables >= 1");
  if (alphabet_.empty()) throw std::invalid_argument("alphabet must be nonempty");
  auto sorted = alphabet_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("alphabet symbols must be distinct");
  }
  size_ = checked_space_size(n_, alphabet_.size(), budget_);
  strides_.resize(n_);
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    strides_[i] = s;
    s *= alphabet_.size();
  }
}

OutcomeSpace OutcomeSpace::binary(std::size_t n, Budget budget) {
  return OutcomeSpace(n, {0, 1}, budget);
}

OutcomeSpace OutcomeSpace::spins(std::size_t n, Budget budget) {
  return OutcomeSpace(n, {-1, 1}, budget);
}

OutcomeSpace OutcomeSpace::categorical(std::size_t n, int k, Budget budget) {
  if (k < 1) throw std::invalid_argument("categorical alphabet needs k >= 1");
  std::vector<int> symbols(static_cast<std::size_t>(k));
  std::iota(symbols.begin(), symbols.end(), 1);
  return OutcomeSpace(n, std::move(symbols), budget);
}

Outcome OutcomeSpace::decode(std::uint64_t index) const {
  Outcome out(n_);
  decode_into(index, out);
  return out;
}

void OutcomeSpace::decode_into(std::uint64_t index, std::span<int> out) const {
  if (index >= size_) throw std::out_of_range("outcome index out of range");
  if (out.size() != n_) throw std::invalid_argument("outcome buffer size mismatch");
  const std::uint64_t k = alphabet_.size();
  for (std::size_t i = 0; i < n_; ++i) {
    out[i] = alphabet_[index % k];
    index /= k;
  }
}

std::uint64_t OutcomeSpace::encode(std::span<const int> outcome) const {
  if (outcome.size() != n_) throw std::invalid_argument("outcome length mismatch");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < n_; ++i) index += strides_[i] * digit_of(outcome[i]);
  return index;
}

std::size_t OutcomeSpace::digit_of(int symbol) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), symbol);
  if (it == alphabet_.end()) {
    throw std::invalid_argument(fmt::format("symbol {} not in alphabet", symbol));
  }
  return static_cast<std::size_t>(it - alphabet_.begin());
}

std::size_t OutcomeSpace::digit_at(std::uint64_t index, std::size_t var) const {
  return static_cast<std::size_t>((index / strides_.at(var)) % alphabet_.size());
}

std::uint64_t OutcomeSpace::with_digit(std::uint64_t index, std::size_t var,
                                       std::size_t digit) const {
  const std::uint64_t stride = strides_.at(var);
  const std::uint64_t current = (index / stride) % alphabet_.size();
  return index - current * stride + digit * stride;
}

struct FoesModel::Impl {
  Impl(OutcomeSpace s, LogPotential p, std::string n)
      : space(std::move(s)), potential(std::move(p)), name(std::move(n)) {}

  OutcomeSpace space;
  LogPotential potential;
  std::string name;

  std::once_flag once;
  std::vector<double> table;
  double psi = 0.0;

  void fill() {
    table.resize(space.size());
    std::vector<int> digits(space.n_variables(), 0);
    Outcome x(space.n_variables(), space.alphabet()[0]);
    const auto alphabet = space.alphabet();
    for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
      const double v = potential(x);
      if (!std::isfinite(v)) {
        throw std::domain_error(fmt::format(
            "model '{}' has non-finite log-potential at outcome {}", name, idx));
      }
      table[idx] = v;
      // odometer increment in encoding order
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (++digits[i] < static_cast<int>(alphabet.size())) {
          x[i] = alphabet[digits[i]];
          break;
        }
        digits[i] = 0;
        x[i] = alphabet[0];
      }
    }
    psi = log_sum_exp(table);
  }

  void ensure() {
    std::call_once(once, [this] { fill(); });
  }
};

FoesModel::FoesModel(OutcomeSpace space, LogPotential potential, std::string name)
    : impl_(std::make_shared<Impl>(std::move(space), std::move(potential),
                                   std::move(name))) {
  if (!impl_->potential) throw std::invalid_argument("model needs a potential");
}

const OutcomeSpace& FoesModel::space() const noexcept { return impl_->space; }
const std::string& FoesModel::name() const noexcept { return impl_->name; }

double FoesModel::unnormalized_log_prob(std::span<const int> outcome) const {
  return impl_->potential(outcome);
}

std::span<const double> FoesModel::unnormalized_table() const {
  impl_->ensure();
  return impl_->table;
}

double FoesModel::log_normalizer() const {
  impl_->ensure();
  return impl_->psi;
}

double FoesModel::log_prob(std::uint64_t index) const {
  impl_->ensure();
  return impl_->table.at(index) - impl_->psi;
}

double FoesModel::log_prob(std::span<const int> outcome) const {
  return log_prob(space().encode(outcome));
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("log_sum_exp of an empty list");
  if (values.size() == 1) return values[0];
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - m);
  return m + std::log(acc);
}

std::vector<double> enumerate_log_probs(const FoesModel& model) {
  const auto table = model.unnormalized_table();
  const double psi = model.log_normalizer();
  std::vector<double> out(table.size());
  std::transform(table.begin(), table.end(), out.begin(),
                 [psi](double v) { return v - psi; });
  return out;
}

FoesModel replicate(const FoesModel& model, std::size_t m, Budget budget) {
  if (m < 1) throw std::invalid_argument("replication count must be >= 1");
  const OutcomeSpace& base = model.space();
  const std::size_t n = base.n_variables();
  std::vector<int> alphabet(base.alphabet().begin(), base.alphabet().end());
  OutcomeSpace product(n * m, std::move(alphabet), budget);
  // Blocks are scored through the base model's enumerated table.
  auto potential = [model, n, m](std::span<const int> y) {
    const auto table = model.unnormalized_table();
    double sum = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      sum += table[model.space().encode(y.subspan(b * n, n))];
    }
    return sum;
  };
  return FoesModel(std::move(product), potential,
                   fmt::format("{}^{}", model.name(), m));
}

FoesModel make_uniform(OutcomeSpace space) {
  return FoesModel(std::move(space), [](std::span<const int>) { return 0.0; },
                   "uniform");
}

}  // namespace foes
