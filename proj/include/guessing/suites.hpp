#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "guessing/exec.hpp"
#include "guessing/source_model.hpp"

namespace guessing {

/// Compares the greedy cell masses against the rearranged cell masses of every
/// D-admissible strategy. A violation is a strategy whose masses are not
/// majorized by the greedy ones; an inversion is a strategy with
/// sum_i q_i i^rho below the greedy value.
struct MajorizationSuite {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::uint64_t moment_inversions = 0;
  std::vector<double> greedy_masses;
  std::optional<std::vector<std::size_t>> first_violation;
  std::vector<double> first_violation_masses;
};

MajorizationSuite majorization_suite(const GuessInstance& inst, double rho = 1.0);

struct CoverageRow {
  std::size_t k = 0;
  double optimal = 0.0;
  double greedy_prefix = 0.0;
  std::vector<std::size_t> witness;
};

/// max_coverage_search for k = 1..|Xhat|. A violation is optimal < greedy
/// prefix - 1e-12 (which would contradict the search).
struct CoverageSuite {
  std::vector<CoverageRow> rows;
  std::uint64_t violations = 0;
  std::uint64_t greedy_suboptimal = 0;
};

CoverageSuite coverage_suite(const GuessInstance& inst, Exec exec = Exec::parallel);

struct RandomSuite {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  /// Smallest observed (right side - left side) of the checked inequality.
  double worst_margin = 0.0;
};

/// lemma3_check on `trials` random sorted mass vectors, each at rho in
/// {0.5, 1, 2}, plus `extra` (when nonempty) at the same orders.
RandomSuite lemma3_suite(std::size_t trials, std::uint64_t seed,
                         std::span<const double> extra = {});

/// Robin-Hood transfers: a is b with mass moved from a richer to a poorer
/// coordinate (at most half the difference). Checks a is majorized by b and
/// schur_weight_sum(a) >= schur_weight_sum(b) - 1e-12 at rho in {0.5, 1, 2}.
RandomSuite schur_suite(std::size_t trials, std::uint64_t seed);

}  // namespace guessing
