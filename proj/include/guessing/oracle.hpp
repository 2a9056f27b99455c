#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "guessing/exec.hpp"
#include "guessing/limits.hpp"
#include "guessing/source_model.hpp"

namespace guessing {

/// Outcome of an exhaustive search. Caps are enforced by throwing
/// CapExceeded before the search starts; `cap_hit` is set only on records the
/// CLI emits for such failures.
struct SearchResult {
  double best_value = 0.0;
  std::vector<std::size_t> witness;
  std::uint64_t explored = 0;
  bool cap_hit = false;
};

struct StrategySearchResult : SearchResult {
  /// (1/rho) log2 best_value.
  double best_moment_log = 0.0;
  /// E[G^rho] of the greedy strategy at the same eps.
  double greedy_moment = 0.0;
};

struct CoverageSearchResult : SearchResult {
  /// Mass covered by the first k greedy balls (all of them when k > tau).
  double greedy_prefix_mass = 0.0;
};

/// Minimum E[G^rho] over duplicate-free codeword sequences with error <= eps.
/// Requires |Xhat| <= 8.
StrategySearchResult optimal_strategy_search(const GuessInstance& inst, double rho, double eps,
                                             Exec exec = Exec::parallel);

/// Maximum mass of a union of k distortion balls. Requires C(|Xhat|, k) <= 1e6.
CoverageSearchResult max_coverage_search(const GuessInstance& inst, std::size_t k,
                                         Exec exec = Exec::parallel);

struct Lemma3Check {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// lhs = sum_i P_i i^rho, rhs = (sum_i P_i^{1/(1+rho)})^{1+rho}; holds when
/// lhs <= rhs + 1e-9.
Lemma3Check lemma3_check(const MassVector& masses, double rho);

}  // namespace guessing
