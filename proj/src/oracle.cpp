#include "guessing/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "guessing/errors.hpp"
#include "guessing/kernels.hpp"
#include "guessing/strategy.hpp"

namespace guessing {

StrategySearchResult optimal_strategy_search(const GuessInstance& inst, double rho, double eps,
                                             Exec exec) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("rho", "rho must be a finite real > 0");
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("eps", "eps must lie in [0, 1)");
  const auto best = kernels::min_strategy_moment(inst, rho, eps, exec);

  StrategySearchResult r;
  r.witness = best.codewords;
  r.explored = best.explored;
  // Re-evaluate through the guessing function so the reported value is the
  // witness's moment as computed everywhere else.
  const auto report = moment(GuessingStrategy::user(inst, r.witness), inst, rho);
  r.best_value = report.moment;
  r.best_moment_log = report.moment_log;
  r.greedy_moment = moment(greedy_cover(inst, eps).strategy, inst, rho).moment;
  return r;
}

CoverageSearchResult max_coverage_search(const GuessInstance& inst, std::size_t k, Exec exec) {
  const auto best = kernels::max_k_coverage(inst, k, exec);
  CoverageSearchResult r;
  r.best_value = best.mass;
  r.witness = best.codewords;
  r.explored = best.explored;
  const auto cover = greedy_cover(inst, 0.0);
  const auto& cells = cover.partition.cell_masses;
  const std::size_t upto = std::min(k, cells.size());
  for (std::size_t i = 0; i < upto; ++i) r.greedy_prefix_mass += cells[i];
  return r;
}

Lemma3Check lemma3_check(const MassVector& masses, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("rho", "rho must be a finite real > 0");
  Lemma3Check c;
  double root_sum = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    c.lhs += masses[i] * std::pow(static_cast<double>(i + 1), rho);
    root_sum += std::pow(masses[i], 1.0 / (1.0 + rho));
  }
  c.rhs = std::pow(root_sum, 1.0 + rho);
  c.holds = c.lhs <= c.rhs + 1e-9;
  return c;
}

}  // namespace guessing
