#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "guessing/source_model.hpp"

namespace guessing {

/// Sorted source-symbol indices.
using SymbolSet = std::vector<std::size_t>;

enum class StrategyOrigin { greedy, user };

/// Ordered, duplicate-free list of reproduction indices asked in turn.
struct GuessingStrategy {
  std::vector<std::size_t> codewords;
  double budget = 0.0;
  StrategyOrigin origin = StrategyOrigin::user;

  /// Validates indices against `inst` and rejects duplicates.
  static GuessingStrategy user(const GuessInstance& inst, std::vector<std::size_t> codewords);
};

/// Greedy cells A_D(xhat*(i)): cell i is the ball of the i-th chosen codeword
/// minus everything covered earlier.
struct CoverPartition {
  std::vector<SymbolSet> cells;
  std::vector<double> cell_masses;
  std::vector<std::size_t> codewords;
  double uncovered_mass = 0.0;

  std::size_t tau() const noexcept { return codewords.size(); }
};

struct GreedyCover {
  CoverPartition partition;
  GuessingStrategy strategy;
};

/// Per-y strategies; slot y is empty when P_Y(y) = 0.
struct SideInfoStrategy {
  std::vector<std::optional<GuessingStrategy>> per_y;
};

struct SideInfoCover {
  std::vector<std::optional<GreedyCover>> per_y;

  SideInfoStrategy strategy() const;
};

struct GuessReport {
  double rho = 0.0;
  /// E[G^rho] summed over guessed outcomes only.
  double moment = 0.0;
  /// (1/rho) log2 moment; -inf when every outcome errors.
  double moment_log = 0.0;
  double error_mass = 0.0;
  /// Guess index per source symbol (row-major [x][y] with side information);
  /// nullopt marks a declared error.
  std::vector<std::optional<std::size_t>> per_symbol_index;
};

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double error_fraction = 0.0;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
};

/// { x : d(x, xhat) <= D }.
SymbolSet distortion_ball(const GuessInstance& inst, std::size_t xhat);

/// Greedy residual-maximum cover. Stops once the uncovered mass is <= eps, or
/// when no ball adds mass. Ties go to the smallest reproduction index.
GreedyCover greedy_cover(const GuessInstance& inst, double eps = 0.0);

/// greedy_cover on every slice P_{X|Y=y} with P_Y(y) > 0.
SideInfoCover side_info_cover(const JointGuessInstance& joint, double eps = 0.0);

/// Index (1-based) of the first codeword within budget of x, or nullopt.
std::optional<std::size_t> guess_index(const GuessingStrategy& strategy,
                                       const GuessInstance& inst, std::size_t x);

double error_probability(const GuessingStrategy& strategy, const GuessInstance& inst);

GuessReport moment(const GuessingStrategy& strategy, const GuessInstance& inst, double rho);

GuessReport side_info_moment(const SideInfoStrategy& strategy, const JointGuessInstance& joint,
                             double rho);

/// Sample mean of G(X)^rho over `draws` samples from a seeded mt19937_64;
/// errored draws contribute zero and are counted in error_fraction.
MonteCarloEstimate monte_carlo_moment(const GuessingStrategy& strategy, const GuessInstance& inst,
                                      double rho, std::size_t draws, std::uint64_t seed);

}  // namespace guessing
