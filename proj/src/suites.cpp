#include "guessing/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "guessing/kernels.hpp"
#include "guessing/limits.hpp"
#include "guessing/oracle.hpp"
#include "guessing/strategy.hpp"

namespace guessing {
namespace {

constexpr double kRhos[] = {0.5, 1.0, 2.0};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

// Flat Dirichlet sample, sorted nonincreasing.
std::vector<double> random_masses(std::mt19937_64& rng, std::size_t len) {
  std::vector<double> v(len);
  double total = 0.0;
  for (auto& x : v) {
    x = -std::log1p(-uniform01(rng));
    total += x;
  }
  for (auto& x : v) x /= total;
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

MajorizationSuite majorization_suite(const GuessInstance& inst, double rho) {
  MajorizationSuite s;
  const auto cover = greedy_cover(inst, 0.0);
  s.greedy_masses = cover.partition.cell_masses;
  const MassVector greedy(s.greedy_masses);
  const double greedy_h = schur_weight_sum(greedy, rho);

  s.checked = kernels::for_each_strategy(inst, rho, 0.0, [&](const kernels::StrategyVisit& v) {
    const MassVector q(std::vector<double>(v.gains.begin(), v.gains.end()));
    if (!majorizes(q, greedy)) {
      ++s.violations;
      if (!s.first_violation) {
        s.first_violation.emplace(v.codewords.begin(), v.codewords.end());
        s.first_violation_masses.assign(q.values().begin(), q.values().end());
      }
    }
    if (schur_weight_sum(q, rho) < greedy_h - kTolerance) ++s.moment_inversions;
  });
  return s;
}

CoverageSuite coverage_suite(const GuessInstance& inst, Exec exec) {
  CoverageSuite s;
  for (std::size_t k = 1; k <= inst.reproduction_size(); ++k) {
    const auto r = max_coverage_search(inst, k, exec);
    s.rows.push_back({k, r.best_value, r.greedy_prefix_mass, r.witness});
    if (r.best_value < r.greedy_prefix_mass - kTolerance) ++s.violations;
    if (r.best_value > r.greedy_prefix_mass + kTolerance) ++s.greedy_suboptimal;
  }
  return s;
}

RandomSuite lemma3_suite(std::size_t trials, std::uint64_t seed, std::span<const double> extra) {
  RandomSuite s;
  s.worst_margin = std::numeric_limits<double>::infinity();
  auto check = [&](const MassVector& masses) {
    for (double rho : kRhos) {
      const auto c = lemma3_check(masses, rho);
      ++s.checked;
      if (!c.holds) ++s.violations;
      s.worst_margin = std::min(s.worst_margin, c.rhs - c.lhs);
    }
  };
  if (!extra.empty()) check(MassVector(std::vector<double>(extra.begin(), extra.end())));
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    check(MassVector(random_masses(rng, uniform_int(rng, 1, 12))));
  }
  return s;
}

RandomSuite schur_suite(std::size_t trials, std::uint64_t seed) {
  RandomSuite s;
  s.worst_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto b = random_masses(rng, uniform_int(rng, 2, 12));
    std::size_t i = uniform_int(rng, 0, b.size() - 2);
    std::size_t j = uniform_int(rng, i + 1, b.size() - 1);
    auto a = b;
    const double amount = uniform01(rng) * (b[i] - b[j]) / 2.0;
    a[i] -= amount;
    a[j] += amount;
    const MassVector av(std::move(a));
    const MassVector bv(std::move(b));
    ++s.checked;
    bool ok = majorizes(av, bv);
    for (double rho : kRhos) {
      const double margin = schur_weight_sum(av, rho) - schur_weight_sum(bv, rho);
      s.worst_margin = std::min(s.worst_margin, margin);
      ok = ok && margin >= -kTolerance;
    }
    if (!ok) ++s.violations;
  }
  return s;
}

}  // namespace guessing
