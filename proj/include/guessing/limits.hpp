#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "guessing/exec.hpp"
#include "guessing/source_model.hpp"
#include "guessing/strategy.hpp"

namespace guessing {

/// Nonnegative masses kept sorted in nonincreasing order; total <= 1 + 1e-12.
class MassVector {
 public:
  explicit MassVector(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double total() const;

 private:
  std::vector<double> values_;
};

enum class FunctionalMethod { greedy, oracle };

/// Greedy cell masses with the uncovered mass folded into the first (largest)
/// cell. For eps = 0 this is the cell-mass vector unchanged.
std::vector<double> folded_cell_masses(const CoverPartition& partition);

/// H^{D,eps}_alpha(X). `greedy` evaluates H_alpha on the folded greedy cell
/// masses; `oracle` minimizes over deterministic maps with violation mass <= eps.
double guess_functional(const GuessInstance& inst, double alpha, double eps,
                        FunctionalMethod method, Exec exec = Exec::parallel);

/// H^{D,eps}_alpha(X|Y) with the eps budget applied per slice.
double conditional_functional(const JointGuessInstance& joint, double alpha, double eps,
                              FunctionalMethod method, Exec exec = Exec::parallel);

/// log2 log2 (1 + min{|X|, |Xhat|}).
double converse_slack(std::size_t source_size, std::size_t reproduction_size);

struct BoundOptions {
  /// Compute the oracle functional. When the map enumeration exceeds its cap
  /// the field is omitted, unless `require_oracle` is set (then CapExceeded).
  bool oracle = true;
  bool require_oracle = false;
  /// Also check the converse against the best strategy found by exhaustive search.
  bool all_strategies = false;
  Exec exec = Exec::parallel;
};

/// One-shot achievability/converse record for one instance and rho.
struct BoundReport {
  double rho = 0.0;
  double alpha = 0.0;
  double eps = 0.0;
  double moment_log = 0.0;
  double error_probability = 0.0;
  StrategyOrigin strategy_origin = StrategyOrigin::greedy;
  double greedy_functional = 0.0;
  std::optional<double> oracle_functional;
  double converse_slack = 0.0;
  /// moment_log <= greedy_functional + 1e-9 (always provable).
  bool achievability_vs_greedy = false;
  /// moment_log <= oracle_functional + 1e-9 (as stated, reported only).
  std::optional<bool> achievability_vs_oracle;
  /// moment_log >= oracle_functional - converse_slack - 1e-9.
  std::optional<bool> converse_vs_oracle;
  std::optional<double> functional_gap;
  /// Minimum moment_log over every feasible strategy (all_strategies only).
  std::optional<double> min_strategy_moment_log;
  std::optional<bool> converse_all_strategies;

  /// True when every verdict present holds.
  bool all_hold() const;
};

inline constexpr double kBoundTolerance = 1e-9;

/// Without a strategy the greedy strategy at level eps is evaluated.
BoundReport bounds_report(const GuessInstance& inst, double rho, double eps,
                          const std::optional<GuessingStrategy>& strategy = std::nullopt,
                          const BoundOptions& options = {});

/// Side-information variant: greedy per slice, Arimoto-Renyi functionals.
BoundReport bounds_report(const JointGuessInstance& joint, double rho, double eps,
                          const BoundOptions& options = {});

struct IndexCode {
  std::string word;
  unsigned length = 0;
};

/// i-th binary string in length-then-lexicographic order: lambda, 0, 1, 00, ...
IndexCode index_code(std::uint64_t i);

struct CodeEntry {
  std::size_t cell = 0;
  std::string word;
  unsigned length = 0;
  std::size_t codeword = 0;
};

using CodeTable = std::vector<CodeEntry>;

/// Encoder table: cell i (1-based) gets w_i and decodes to its codeword.
CodeTable strategy_to_code(const CoverPartition& partition);

/// True iff a is majorized by b: prefix sums of a never exceed those of b
/// (1e-12 slack) after zero padding. Throws when totals differ by more than 1e-12.
bool majorizes(const MassVector& a, const MassVector& b);

/// sum_i c_i * i^rho with i starting at 1.
double schur_weight_sum(const MassVector& c, double rho);

}  // namespace guessing
