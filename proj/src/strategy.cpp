#include "guessing/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "guessing/errors.hpp"

namespace guessing {
namespace {

void check_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("rho", "rho must be a finite real > 0");
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("eps", "eps must lie in [0, 1)");
}

// Residual gains in exact arithmetic; used when the pmf came from rationals.
struct ExactGreedy {
  static std::size_t pick(const GuessInstance& inst, const std::vector<SymbolSet>& balls,
                          const std::vector<char>& covered, Rational& gain_out) {
    const auto& p = *inst.pmf().exact();
    std::size_t best = balls.size();
    Rational best_gain = 0;
    for (std::size_t j = 0; j < balls.size(); ++j) {
      Rational g = 0;
      for (auto x : balls[j])
        if (!covered[x]) g += p[x];
      if (g > best_gain) {
        best_gain = g;
        best = j;
      }
    }
    gain_out = best_gain;
    return best;
  }
};

}  // namespace

GuessingStrategy GuessingStrategy::user(const GuessInstance& inst, std::vector<std::size_t> codewords) {
  std::vector<char> seen(inst.reproduction_size(), 0);
  for (std::size_t i = 0; i < codewords.size(); ++i) {
    const auto c = codewords[i];
    const auto path = "strategy[" + std::to_string(i) + "]";
    if (c >= inst.reproduction_size()) throw InputError(path, "codeword index out of range");
    if (seen[c]) throw InputError(path, "duplicate codeword " + inst.reproduction().label(c));
    seen[c] = 1;
  }
  return {std::move(codewords), inst.budget(), StrategyOrigin::user};
}

SideInfoStrategy SideInfoCover::strategy() const {
  SideInfoStrategy s;
  s.per_y.reserve(per_y.size());
  for (const auto& c : per_y) {
    s.per_y.push_back(c ? std::optional<GuessingStrategy>(c->strategy) : std::nullopt);
  }
  return s;
}

SymbolSet distortion_ball(const GuessInstance& inst, std::size_t xhat) {
  if (xhat >= inst.reproduction_size()) throw InputError("xhat", "reproduction index out of range");
  SymbolSet ball;
  for (std::size_t x = 0; x < inst.source_size(); ++x) {
    if (inst.within_budget(x, xhat)) ball.push_back(x);
  }
  return ball;
}

GreedyCover greedy_cover(const GuessInstance& inst, double eps) {
  check_eps(eps);
  const std::size_t nx = inst.source_size();
  const std::size_t m = inst.reproduction_size();
  const auto p = inst.pmf().probs();
  const bool exact = inst.pmf().exact().has_value();

  std::vector<SymbolSet> balls(m);
  for (std::size_t j = 0; j < m; ++j) balls[j] = distortion_ball(inst, j);

  std::vector<char> covered(nx, 0);
  GreedyCover out;
  out.strategy.budget = inst.budget();
  out.strategy.origin = StrategyOrigin::greedy;
  auto& part = out.partition;

  const Rational eps_exact(eps);
  std::vector<double> gains(m);
  for (;;) {
    // The binary64 check keeps error_probability() <= eps exact in both modes.
    double uncovered = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      if (!covered[x]) uncovered += p[x];
    bool done = uncovered <= eps;
    if (exact && done) {
      Rational exact_uncovered = 0;
      for (std::size_t x = 0; x < nx; ++x)
        if (!covered[x]) exact_uncovered += (*inst.pmf().exact())[x];
      done = exact_uncovered <= eps_exact;
    }
    if (done) break;

    std::size_t best = m;
    if (exact) {
      Rational g;
      best = ExactGreedy::pick(inst, balls, covered, g);
    } else {
      double max_gain = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        double g = 0.0;
        for (auto x : balls[j])
          if (!covered[x]) g += p[x];
        gains[j] = g;
        max_gain = std::max(max_gain, g);
      }
      if (max_gain > 0.0) {
        for (std::size_t j = 0; j < m; ++j) {
          if (gains[j] > 0.0 && gains[j] >= max_gain - kTolerance) {
            best = j;
            break;
          }
        }
      }
    }
    if (best == m) break;

    SymbolSet cell;
    double mass = 0.0;
    for (auto x : balls[best]) {
      if (!covered[x]) {
        cell.push_back(x);
        mass += p[x];
        covered[x] = 1;
      }
    }
    part.cells.push_back(std::move(cell));
    part.cell_masses.push_back(mass);
    part.codewords.push_back(best);
  }

  double uncovered = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    if (!covered[x]) uncovered += p[x];
  part.uncovered_mass = uncovered;
  out.strategy.codewords = part.codewords;
  return out;
}

SideInfoCover side_info_cover(const JointGuessInstance& joint, double eps) {
  check_eps(eps);
  const auto py = joint.joint().marginal_y();
  SideInfoCover out;
  out.per_y.resize(py.size());
  for (std::size_t y = 0; y < py.size(); ++y) {
    if (py[y] > 0.0) out.per_y[y] = greedy_cover(joint.slice(y), eps);
  }
  return out;
}

std::optional<std::size_t> guess_index(const GuessingStrategy& strategy, const GuessInstance& inst,
                                       std::size_t x) {
  for (std::size_t j = 0; j < strategy.codewords.size(); ++j) {
    if (inst.within_budget(x, strategy.codewords[j])) return j + 1;
  }
  return std::nullopt;
}

double error_probability(const GuessingStrategy& strategy, const GuessInstance& inst) {
  double e = 0.0;
  for (std::size_t x = 0; x < inst.source_size(); ++x) {
    if (!guess_index(strategy, inst, x)) e += inst.pmf()[x];
  }
  return e;
}

GuessReport moment(const GuessingStrategy& strategy, const GuessInstance& inst, double rho) {
  check_rho(rho);
  GuessReport r;
  r.rho = rho;
  r.per_symbol_index.resize(inst.source_size());
  double total = 0.0;
  for (std::size_t x = 0; x < inst.source_size(); ++x) {
    const auto g = guess_index(strategy, inst, x);
    r.per_symbol_index[x] = g;
    const double p = inst.pmf()[x];
    total += p;
    if (g) {
      r.moment += p * std::pow(static_cast<double>(*g), rho);
    } else {
      r.error_mass += p;
    }
  }
  // Normalize by the stored total so that G == 1 everywhere gives exactly 1.
  if (total > 0.0) r.moment /= total;
  r.moment_log = r.moment > 0.0 ? std::log2(r.moment) / rho
                                : -std::numeric_limits<double>::infinity();
  return r;
}

GuessReport side_info_moment(const SideInfoStrategy& strategy, const JointGuessInstance& joint,
                             double rho) {
  check_rho(rho);
  const auto& pxy = joint.joint();
  const std::size_t nx = pxy.x_alphabet().size();
  const std::size_t ny = pxy.y_alphabet().size();
  if (strategy.per_y.size() != ny) throw InputError("strategy", "one slot per y symbol required");

  // Guess indices depend on x and the y-strategy only, so a slice instance is
  // not needed; the marginal carries d and D.
  const auto marginal = joint.marginal();
  GuessReport r;
  r.rho = rho;
  r.per_symbol_index.resize(nx * ny);
  double total = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = pxy.at(x, y);
      std::optional<std::size_t> g;
      if (strategy.per_y[y]) g = guess_index(*strategy.per_y[y], marginal, x);
      r.per_symbol_index[x * ny + y] = g;
      total += p;
      if (g) {
        r.moment += p * std::pow(static_cast<double>(*g), rho);
      } else {
        r.error_mass += p;
      }
    }
  }
  if (total > 0.0) r.moment /= total;
  r.moment_log = r.moment > 0.0 ? std::log2(r.moment) / rho
                                : -std::numeric_limits<double>::infinity();
  return r;
}

MonteCarloEstimate monte_carlo_moment(const GuessingStrategy& strategy, const GuessInstance& inst,
                                      double rho, std::size_t draws, std::uint64_t seed) {
  check_rho(rho);
  if (draws < 1) throw InputError("N", "at least one draw is required");

  const std::size_t nx = inst.source_size();
  std::vector<double> cdf(nx);
  std::vector<double> value(nx, 0.0);
  std::vector<char> errored(nx, 0);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t x = 0; x < nx; ++x) {
    acc += inst.pmf()[x];
    cdf[x] = acc;
    if (inst.pmf()[x] > 0.0) last_positive = x;
    const auto g = guess_index(strategy, inst, x);
    if (g) {
      value[x] = std::pow(static_cast<double>(*g), rho);
    } else {
      errored[x] = 1;
    }
  }

  std::mt19937_64 rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t errors = 0;
  for (std::size_t k = 0; k < draws; ++k) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    auto x = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (x >= nx) x = last_positive;
    errors += errored[x];
    // Welford update
    const double v = value[x];
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }

  MonteCarloEstimate est;
  est.estimate = mean;
  const double n = static_cast<double>(draws);
  est.stderr_ = draws > 1 ? std::sqrt(m2 / (n - 1.0)) / std::sqrt(n) : 0.0;
  est.error_fraction = static_cast<double>(errors) / n;
  est.draws = draws;
  est.seed = seed;
  return est;
}

}  // namespace guessing
