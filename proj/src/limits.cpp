#include "guessing/limits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "guessing/entropy.hpp"
#include "guessing/errors.hpp"
#include "guessing/kernels.hpp"

namespace guessing {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha", "order must lie in (0, 1)");
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("eps", "eps must lie in [0, 1)");
}

std::vector<double> slice_cell_masses(const GreedyCover& cover) {
  return folded_cell_masses(cover.partition);
}

}  // namespace

MassVector::MassVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw InputError("masses[" + std::to_string(i) + "]", "mass must be finite and >= 0");
    }
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
  if (total() > 1.0 + kTolerance) throw InputError("masses", "total mass exceeds 1");
}

double MassVector::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

std::vector<double> folded_cell_masses(const CoverPartition& partition) {
  std::vector<double> m = partition.cell_masses;
  if (partition.uncovered_mass > 0.0) {
    if (m.empty()) {
      m.push_back(partition.uncovered_mass);
    } else {
      m.front() += partition.uncovered_mass;
    }
  }
  return m;
}

double guess_functional(const GuessInstance& inst, double alpha, double eps,
                        FunctionalMethod method, Exec exec) {
  check_alpha(alpha);
  check_eps(eps);
  if (method == FunctionalMethod::oracle) {
    return kernels::min_pushforward(inst, alpha, eps, exec).bits;
  }
  const auto cover = greedy_cover(inst, eps);
  return renyi_bits(folded_cell_masses(cover.partition), alpha);
}

double conditional_functional(const JointGuessInstance& joint, double alpha, double eps,
                              FunctionalMethod method, Exec exec) {
  check_alpha(alpha);
  check_eps(eps);
  const auto py = joint.joint().marginal_y();
  std::vector<std::vector<double>> induced(py.size());
  for (std::size_t y = 0; y < py.size(); ++y) {
    if (!(py[y] > 0.0)) continue;
    const auto slice = joint.slice(y);
    if (method == FunctionalMethod::oracle) {
      induced[y] = kernels::min_pushforward(slice, alpha, eps, exec).masses;
    } else {
      induced[y] = slice_cell_masses(greedy_cover(slice, eps));
    }
  }
  return arimoto_bits(py.probs(), induced, alpha);
}

double converse_slack(std::size_t source_size, std::size_t reproduction_size) {
  const double m = static_cast<double>(std::min(source_size, reproduction_size));
  return std::log2(std::log2(1.0 + m));
}

bool BoundReport::all_hold() const {
  bool ok = achievability_vs_greedy;
  if (achievability_vs_oracle) ok = ok && *achievability_vs_oracle;
  if (converse_vs_oracle) ok = ok && *converse_vs_oracle;
  if (converse_all_strategies) ok = ok && *converse_all_strategies;
  return ok;
}

namespace {

void fill_verdicts(BoundReport& r) {
  r.achievability_vs_greedy = r.moment_log <= r.greedy_functional + kBoundTolerance;
  if (r.oracle_functional) {
    r.achievability_vs_oracle = r.moment_log <= *r.oracle_functional + kBoundTolerance;
    r.converse_vs_oracle =
        r.moment_log >= *r.oracle_functional - r.converse_slack - kBoundTolerance;
    r.functional_gap = r.greedy_functional - *r.oracle_functional;
  }
  if (r.min_strategy_moment_log && r.oracle_functional) {
    r.converse_all_strategies =
        *r.min_strategy_moment_log >= *r.oracle_functional - r.converse_slack - kBoundTolerance;
  }
}

void check_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("rho", "rho must be a finite real > 0");
}

template <class F>
std::optional<double> maybe_oracle(const BoundOptions& options, F&& compute) {
  if (!options.oracle) return std::nullopt;
  try {
    return compute();
  } catch (const CapExceeded&) {
    if (options.require_oracle) throw;
    return std::nullopt;
  }
}

}  // namespace

BoundReport bounds_report(const GuessInstance& inst, double rho, double eps,
                          const std::optional<GuessingStrategy>& strategy,
                          const BoundOptions& options) {
  check_rho(rho);
  check_eps(eps);
  BoundReport r;
  r.rho = rho;
  r.alpha = 1.0 / (1.0 + rho);
  r.eps = eps;
  r.converse_slack = converse_slack(inst.source_size(), inst.reproduction_size());

  const auto cover = greedy_cover(inst, eps);
  const GuessingStrategy& evaluated = strategy ? *strategy : cover.strategy;
  const auto report = moment(evaluated, inst, rho);
  r.moment_log = report.moment_log;
  r.error_probability = report.error_mass;
  r.strategy_origin = evaluated.origin;
  r.greedy_functional = renyi_bits(folded_cell_masses(cover.partition), r.alpha);
  r.oracle_functional = maybe_oracle(options, [&] {
    return kernels::min_pushforward(inst, r.alpha, eps, options.exec).bits;
  });
  if (options.all_strategies) {
    const auto best = kernels::min_strategy_moment(inst, rho, eps, options.exec);
    const auto strategy_best = GuessingStrategy::user(inst, best.codewords);
    r.min_strategy_moment_log = moment(strategy_best, inst, rho).moment_log;
  }
  fill_verdicts(r);
  return r;
}

BoundReport bounds_report(const JointGuessInstance& joint, double rho, double eps,
                          const BoundOptions& options) {
  check_rho(rho);
  check_eps(eps);
  BoundReport r;
  r.rho = rho;
  r.alpha = 1.0 / (1.0 + rho);
  r.eps = eps;
  r.converse_slack =
      converse_slack(joint.joint().x_alphabet().size(), joint.reproduction().size());

  const auto cover = side_info_cover(joint, eps);
  const auto report = side_info_moment(cover.strategy(), joint, rho);
  r.moment_log = report.moment_log;
  r.error_probability = report.error_mass;
  r.strategy_origin = StrategyOrigin::greedy;
  r.greedy_functional = conditional_functional(joint, r.alpha, eps, FunctionalMethod::greedy);
  r.oracle_functional = maybe_oracle(options, [&] {
    return conditional_functional(joint, r.alpha, eps, FunctionalMethod::oracle, options.exec);
  });
  if (options.all_strategies) {
    // Strategies choose independently per y, so the best side-information
    // strategy is the per-slice optimum.
    const auto py = joint.joint().marginal_y();
    SideInfoStrategy best;
    best.per_y.resize(py.size());
    for (std::size_t y = 0; y < py.size(); ++y) {
      if (!(py[y] > 0.0)) continue;
      const auto slice = joint.slice(y);
      const auto s = kernels::min_strategy_moment(slice, rho, eps, options.exec);
      best.per_y[y] = GuessingStrategy::user(slice, s.codewords);
    }
    r.min_strategy_moment_log = side_info_moment(best, joint, rho).moment_log;
  }
  fill_verdicts(r);
  return r;
}

IndexCode index_code(std::uint64_t i) {
  if (i < 1) throw InputError("i", "index must be >= 1");
  // Strings of length l occupy indices [2^l, 2^{l+1}); the word is the binary
  // expansion of i - 2^l on l digits.
  unsigned length = 0;
  while ((i >> (length + 1)) != 0) ++length;
  const std::uint64_t offset = i - (std::uint64_t{1} << length);
  std::string word(length, '0');
  for (unsigned b = 0; b < length; ++b) {
    if ((offset >> (length - 1 - b)) & 1U) word[b] = '1';
  }
  return {std::move(word), length};
}

CodeTable strategy_to_code(const CoverPartition& partition) {
  CodeTable table;
  table.reserve(partition.tau());
  for (std::size_t i = 0; i < partition.tau(); ++i) {
    auto code = index_code(i + 1);
    table.push_back({i + 1, std::move(code.word), code.length, partition.codewords[i]});
  }
  return table;
}

bool majorizes(const MassVector& a, const MassVector& b) {
  if (std::abs(a.total() - b.total()) > kTolerance) {
    throw InputError("", "majorization needs equal totals");
  }
  const std::size_t n = std::max(a.size(), b.size());
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += i < a.size() ? a[i] : 0.0;
    sb += i < b.size() ? b[i] : 0.0;
    if (sa > sb + kTolerance) return false;
  }
  return true;
}

double schur_weight_sum(const MassVector& c, double rho) {
  check_rho(rho);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(static_cast<double>(i + 1), rho);
  return s;
}

}  // namespace guessing
