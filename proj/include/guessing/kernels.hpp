#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "guessing/exec.hpp"
#include "guessing/source_model.hpp"

namespace guessing::kernels {

inline constexpr std::size_t kNoSymbol = static_cast<std::size_t>(-1);

/// Enumeration caps.
inline constexpr double kMapCap = 1e7;
inline constexpr std::size_t kStrategyReproductionCap = 8;
inline constexpr double kCoverageCap = 1e6;

/// Minimizer of sum_j m_j^alpha over deterministic maps phi: supp(P) -> Xhat
/// whose violation mass sum_{d(x, phi(x)) > D} P(x) is at most eps. Violating
/// mass is folded into the heaviest bucket (smallest index on ties).
struct PushforwardMin {
  double power_sum = 0.0;
  double bits = 0.0;
  /// Per source symbol: chosen codeword, kNoSymbol outside the support.
  std::vector<std::size_t> map;
  /// Per source symbol: 1 when the symbol is a budget violation.
  std::vector<char> violated;
  std::vector<double> masses;
  std::uint64_t explored = 0;
};

/// Number of partial maps the search would enumerate.
double pushforward_map_count(const GuessInstance& inst, double eps);

/// serial: exhaustive enumeration. parallel: branch-and-bound split over the
/// first symbol's options under OpenMP. Same value and witness either way;
/// ties are resolved towards the lexicographically smallest map.
/// Throws CapExceeded when pushforward_map_count > kMapCap.
PushforwardMin min_pushforward(const GuessInstance& inst, double alpha, double eps, Exec exec);

/// A feasible, duplicate-free codeword sequence found during strategy search.
struct StrategyVisit {
  std::span<const std::size_t> codewords;
  /// Newly covered mass per position.
  std::span<const double> gains;
  double moment;
  double uncovered;
};

/// Calls `visit` for every duplicate-free sequence whose uncovered mass is
/// <= eps, where every codeword adds positive mass and no proper prefix is
/// already feasible. Returns the number of sequences visited.
/// Throws CapExceeded when |Xhat| > kStrategyReproductionCap.
std::uint64_t for_each_strategy(const GuessInstance& inst, double rho, double eps,
                                const std::function<void(const StrategyVisit&)>& visit);

struct StrategyMin {
  double moment = 0.0;
  std::vector<std::size_t> codewords;
  std::uint64_t explored = 0;
};

/// Minimum E[G^rho] over the sequences of for_each_strategy; ties go to the
/// lexicographically smallest sequence.
StrategyMin min_strategy_moment(const GuessInstance& inst, double rho, double eps, Exec exec);

struct CoverageMax {
  double mass = 0.0;
  std::vector<std::size_t> codewords;
  std::uint64_t explored = 0;
};

/// Maximum P-mass of a union of k distortion balls (lexicographically smallest
/// k-subset on ties). Throws CapExceeded when C(|Xhat|, k) > kCoverageCap.
CoverageMax max_k_coverage(const GuessInstance& inst, std::size_t k, Exec exec);

/// out[i] = f(i) for i in [0, count); parallel evaluation when requested.
std::vector<double> evaluate_all(std::size_t count, const std::function<double(std::size_t)>& f,
                                 Exec exec);

}  // namespace guessing::kernels
