#pragma once

// Finite-outcome, everywhere-supported (FOES) models and the exact
// log-domain enumeration machinery every diagnostic is built on.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace foes {

inline constexpr std::uint64_t kDefaultMaxOutcomes = std::uint64_t{1} << 24;

/// Cap on the number of outcomes any exact enumeration may touch.
struct Budget {
  std::uint64_t max_outcomes = kDefaultMaxOutcomes;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t cap)
      : std::runtime_error(what), cap_(cap) {}
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t cap_;
};

/// Raised by diagnostics whose denominator is LREP when the model is uniform.
class UniformModelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An outcome vector; entries are alphabet symbols, not digit indices.
using Outcome = std::vector<int>;

/// \f$\mathcal{X}^N\f$ with a uniform alphabet per variable.
///
/// Outcome indices use little-endian mixed radix over digit positions in the
/// alphabet: variable 0 is the least significant digit. For the spin alphabet
/// {-1, +1}, digit 0 is -1 and digit 1 is +1.
class OutcomeSpace {
 public:
  OutcomeSpace(std::size_t n_variables, std::vector<int> alphabet,
               Budget budget = {});

  static OutcomeSpace binary(std::size_t n, Budget budget = {});
  static OutcomeSpace spins(std::size_t n, Budget budget = {});
  static OutcomeSpace categorical(std::size_t n, int k, Budget budget = {});

  std::size_t n_variables() const noexcept { return n_; }
  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  std::span<const int> alphabet() const noexcept { return alphabet_; }
  std::uint64_t size() const noexcept { return size_; }
  Budget budget() const noexcept { return budget_; }

  /// Weight of variable `var` in the index encoding (|X|^var).
  std::uint64_t stride(std::size_t var) const { return strides_.at(var); }

  Outcome decode(std::uint64_t index) const;
  void decode_into(std::uint64_t index, std::span<int> out) const;
  std::uint64_t encode(std::span<const int> outcome) const;

  /// Position of `symbol` in the alphabet; throws if absent.
  std::size_t digit_of(int symbol) const;
  /// Digit of variable `var` inside encoded outcome `index`.
  std::size_t digit_at(std::uint64_t index, std::size_t var) const;
  /// Index of the outcome equal to `index` except variable `var` has `digit`.
  std::uint64_t with_digit(std::uint64_t index, std::size_t var,
                           std::size_t digit) const;

  bool operator==(const OutcomeSpace& other) const {
    return n_ == other.n_ && alphabet_ == other.alphabet_;
  }

 private:
  std::size_t n_;
  std::vector<int> alphabet_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_;
  Budget budget_;
};

/// |X|^N, or throws BudgetExceeded if it exceeds `budget` (overflow-safe).
std::uint64_t checked_space_size(std::size_t n_variables,
                                 std::size_t alphabet_size, Budget budget);

/// Unnormalized log-probability of an outcome (entries are alphabet symbols).
using LogPotential = std::function<double(std::span<const int>)>;

/// Immutable FOES model. The table of unnormalized log-probabilities and the
/// log-normalizer are computed once on first use and shared between copies;
/// concurrent first use is safe.
class FoesModel {
 public:
  FoesModel(OutcomeSpace space, LogPotential potential, std::string name = {});

  const OutcomeSpace& space() const noexcept;
  const std::string& name() const noexcept;
  std::size_t n_variables() const noexcept { return space().n_variables(); }

  double unnormalized_log_prob(std::span<const int> outcome) const;

  /// Unnormalized log-probabilities in index order.
  std::span<const double> unnormalized_table() const;
  /// psi = log sum_x exp(unnormalized(x)), left-to-right in index order.
  double log_normalizer() const;

  double log_prob(std::uint64_t index) const;
  double log_prob(std::span<const int> outcome) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Max-subtracted log-sum-exp; throws std::invalid_argument on empty input.
double log_sum_exp(std::span<const double> values);

/// Normalized log-probabilities indexed by outcome.
std::vector<double> enumerate_log_probs(const FoesModel& model);

/// Product model of `m` iid copies; outcome blocks are concatenated in order.
FoesModel replicate(const FoesModel& model, std::size_t m, Budget budget = {});

/// Equi-probability model on `space`.
FoesModel make_uniform(OutcomeSpace space);

}  // namespace foes
