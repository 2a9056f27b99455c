#include "guessing/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "guessing/errors.hpp"

namespace guessing::kernels {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Branch-and-bound prunes only when the bound exceeds the incumbent by more
// than this, so leaves tying the optimum are always reached.
constexpr double kPruneSlack = 1e-12;

std::vector<std::vector<std::size_t>> ball_lists(const GuessInstance& inst) {
  std::vector<std::vector<std::size_t>> balls(inst.reproduction_size());
  for (std::size_t j = 0; j < inst.reproduction_size(); ++j)
    for (std::size_t x = 0; x < inst.source_size(); ++x)
      if (inst.within_budget(x, j)) balls[j].push_back(x);
  return balls;
}

// ---------------------------------------------------------------------------
// Pushforward search

struct MapProblem {
  double alpha;
  double eps;
  std::size_t nx;
  std::size_t m;
  std::vector<double> p;
  // Support symbols in search order (heaviest first, then by index).
  std::vector<std::size_t> order;
  // options[k]: codewords admissible for order[k]; kNoSymbol means "violate".
  std::vector<std::vector<std::size_t>> options;
  // suffix[k] = mass of order[k..].
  std::vector<double> suffix;
};

MapProblem make_map_problem(const GuessInstance& inst, double alpha, double eps) {
  MapProblem mp;
  mp.alpha = alpha;
  mp.eps = eps;
  mp.nx = inst.source_size();
  mp.m = inst.reproduction_size();
  mp.p.assign(inst.pmf().probs().begin(), inst.pmf().probs().end());
  for (std::size_t x = 0; x < mp.nx; ++x)
    if (mp.p[x] > 0.0) mp.order.push_back(x);
  std::stable_sort(mp.order.begin(), mp.order.end(),
                   [&](std::size_t a, std::size_t b) { return mp.p[a] > mp.p[b]; });
  for (auto x : mp.order) {
    std::vector<std::size_t> opts;
    for (std::size_t j = 0; j < mp.m; ++j)
      if (inst.within_budget(x, j)) opts.push_back(j);
    if (eps > 0.0 && mp.p[x] <= eps) opts.push_back(kNoSymbol);
    mp.options.push_back(std::move(opts));
  }
  mp.suffix.assign(mp.order.size() + 1, 0.0);
  for (std::size_t k = mp.order.size(); k-- > 0;) mp.suffix[k] = mp.suffix[k + 1] + mp.p[mp.order[k]];
  return mp;
}

struct Candidate {
  double value = kInf;
  std::vector<std::size_t> map;
  std::vector<char> violated;
  std::vector<double> masses;

  bool better_than(const Candidate& o) const {
    if (value != o.value) return value < o.value;
    if (map != o.map) return map < o.map;
    return violated < o.violated;
  }
};

class MapSearch {
 public:
  MapSearch(const MapProblem& mp, bool prune)
      : mp_(mp), prune_(prune), masses_(mp.m, 0.0), counts_(mp.m, 0), choice_(mp.order.size(), 0) {}

  // Search the subtree where order[0] takes option `first` (or everything when
  // first == kNoSymbol and there are no symbols).
  void run_branch(std::size_t first) {
    if (mp_.order.empty()) {
      leaf();
      return;
    }
    apply(0, mp_.options[0][first]);
    choice_[0] = first;
    dfs(1);
    undo(0, mp_.options[0][first]);
  }

  void run_all() {
    if (mp_.order.empty()) {
      leaf();
      return;
    }
    for (std::size_t o = 0; o < mp_.options[0].size(); ++o) run_branch(o);
  }

  const Candidate& best() const { return best_; }
  std::uint64_t explored() const { return explored_; }

 private:
  void apply(std::size_t k, std::size_t j) {
    const double p = mp_.p[mp_.order[k]];
    if (j == kNoSymbol) {
      violated_mass_ += p;
      ++violated_count_;
    } else {
      masses_[j] += p;
      ++counts_[j];
    }
  }

  void undo(std::size_t k, std::size_t j) {
    const double p = mp_.p[mp_.order[k]];
    // Emptied accumulators are reset so rounding residue never reaches pow().
    if (j == kNoSymbol) {
      violated_mass_ = --violated_count_ == 0 ? 0.0 : violated_mass_ - p;
    } else {
      masses_[j] = --counts_[j] == 0 ? 0.0 : masses_[j] - p;
    }
  }

  double f(double m) const { return m > 0.0 ? std::pow(m, mp_.alpha) : 0.0; }

  double lower_bound(std::size_t k) const {
    double s = 0.0;
    double top = 0.0;
    for (double m : masses_) {
      s += f(m);
      top = std::max(top, m);
    }
    const double rest = mp_.suffix[k] + violated_mass_;
    return s + f(top + rest) - f(top);
  }

  void dfs(std::size_t k) {
    if (k == mp_.order.size()) {
      leaf();
      return;
    }
    if (prune_ && best_.value < kInf && lower_bound(k) > best_.value + kPruneSlack) return;
    const auto& opts = mp_.options[k];
    for (std::size_t o = 0; o < opts.size(); ++o) {
      const std::size_t j = opts[o];
      if (j == kNoSymbol && violated_mass_ + mp_.p[mp_.order[k]] > mp_.eps) continue;
      apply(k, j);
      choice_[k] = o;
      dfs(k + 1);
      undo(k, j);
    }
  }

  // Masses are recomputed from the choices in search order so that the value
  // of a map does not depend on the path used to reach it.
  void leaf() {
    ++explored_;
    Candidate c;
    c.masses.assign(mp_.m, 0.0);
    c.map.assign(mp_.nx, kNoSymbol);
    c.violated.assign(mp_.nx, 0);
    double violated = 0.0;
    for (std::size_t k = 0; k < mp_.order.size(); ++k) {
      const auto x = mp_.order[k];
      const auto j = mp_.options[k][choice_[k]];
      if (j == kNoSymbol) {
        violated += mp_.p[x];
        c.violated[x] = 1;
      } else {
        c.masses[j] += mp_.p[x];
        c.map[x] = j;
      }
    }
    if (violated > 0.0) {
      std::size_t top = 0;
      for (std::size_t j = 1; j < mp_.m; ++j)
        if (c.masses[j] > c.masses[top]) top = j;
      c.masses[top] += violated;
      for (std::size_t x = 0; x < mp_.nx; ++x)
        if (c.violated[x]) c.map[x] = top;
    }
    double s = 0.0;
    for (double m : c.masses) s += f(m);
    c.value = s;
    if (c.better_than(best_)) best_ = std::move(c);
  }

  const MapProblem& mp_;
  bool prune_;
  std::vector<double> masses_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> choice_;
  double violated_mass_ = 0.0;
  std::size_t violated_count_ = 0;
  Candidate best_;
  std::uint64_t explored_ = 0;
};

PushforwardMin finish(const MapProblem& mp, Candidate best, std::uint64_t explored) {
  PushforwardMin r;
  r.power_sum = best.value;
  r.bits = std::max(std::log2(best.value) / (1.0 - mp.alpha), 0.0);
  r.map = std::move(best.map);
  r.violated = std::move(best.violated);
  r.masses = std::move(best.masses);
  r.explored = explored;
  return r;
}

// ---------------------------------------------------------------------------
// Strategy enumeration

struct SequenceProblem {
  double rho;
  double eps;
  std::vector<double> p;
  std::vector<std::vector<std::size_t>> balls;
};

class SequenceSearch {
 public:
  SequenceSearch(const SequenceProblem& sp, const std::function<void(const StrategyVisit&)>* visit)
      : sp_(sp), visit_(visit), covered_(sp.p.size(), 0), used_(sp.balls.size(), 0) {}

  void run_branch(std::size_t first) { extend(first, 0.0); }

  void run_all() {
    for (std::size_t j = 0; j < sp_.balls.size(); ++j) run_branch(j);
  }

  const StrategyMin& best() const { return best_; }
  std::uint64_t visited() const { return visited_; }

 private:
  double uncovered() const {
    double u = 0.0;
    for (std::size_t x = 0; x < sp_.p.size(); ++x)
      if (!covered_[x]) u += sp_.p[x];
    return u;
  }

  void extend(std::size_t j, double moment) {
    if (used_[j]) return;
    double gain = 0.0;
    for (auto x : sp_.balls[j])
      if (!covered_[x]) gain += sp_.p[x];
    if (!(gain > 0.0)) return;

    std::vector<std::size_t> newly;
    for (auto x : sp_.balls[j]) {
      if (!covered_[x]) {
        covered_[x] = 1;
        newly.push_back(x);
      }
    }
    used_[j] = 1;
    seq_.push_back(j);
    gains_.push_back(gain);
    moment += gain * std::pow(static_cast<double>(seq_.size()), sp_.rho);

    const double u = uncovered();
    if (u <= sp_.eps) {
      record(moment, u);
    } else {
      for (std::size_t next = 0; next < sp_.balls.size(); ++next) extend(next, moment);
    }

    gains_.pop_back();
    seq_.pop_back();
    used_[j] = 0;
    for (auto x : newly) covered_[x] = 0;
  }

  void record(double moment, double u) {
    ++visited_;
    if (visit_ != nullptr) (*visit_)(StrategyVisit{seq_, gains_, moment, u});
    if (best_.codewords.empty() || moment < best_.moment) {
      best_.moment = moment;
      best_.codewords = seq_;
    }
  }

  const SequenceProblem& sp_;
  const std::function<void(const StrategyVisit&)>* visit_;
  std::vector<char> covered_;
  std::vector<char> used_;
  std::vector<std::size_t> seq_;
  std::vector<double> gains_;
  StrategyMin best_;
  std::uint64_t visited_ = 0;
};

SequenceProblem make_sequence_problem(const GuessInstance& inst, double rho, double eps) {
  if (inst.reproduction_size() > kStrategyReproductionCap) {
    throw CapExceeded("strategy search needs |Xhat| <= " +
                      std::to_string(kStrategyReproductionCap) + ", got " +
                      std::to_string(inst.reproduction_size()));
  }
  SequenceProblem sp;
  sp.rho = rho;
  sp.eps = eps;
  sp.p.assign(inst.pmf().probs().begin(), inst.pmf().probs().end());
  sp.balls = ball_lists(inst);
  return sp;
}

// ---------------------------------------------------------------------------
// k-coverage

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

struct CoverageSearch {
  const std::vector<double>& p;
  const std::vector<std::vector<std::size_t>>& balls;
  std::size_t k;
  std::vector<std::size_t> combo;
  CoverageMax best;

  void evaluate() {
    ++best.explored;
    std::vector<char> in(p.size(), 0);
    for (auto j : combo)
      for (auto x : balls[j]) in[x] = 1;
    double mass = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x)
      if (in[x]) mass += p[x];
    if (best.codewords.empty() || mass > best.mass) {
      best.mass = mass;
      best.codewords = combo;
    }
  }

  void dfs(std::size_t start) {
    if (combo.size() == k) {
      evaluate();
      return;
    }
    const std::size_t need = k - combo.size();
    for (std::size_t j = start; j + need <= balls.size(); ++j) {
      combo.push_back(j);
      dfs(j + 1);
      combo.pop_back();
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------

double pushforward_map_count(const GuessInstance& inst, double eps) {
  double count = 1.0;
  for (std::size_t x = 0; x < inst.source_size(); ++x) {
    const double p = inst.pmf()[x];
    if (!(p > 0.0)) continue;
    double opts = 0.0;
    for (std::size_t j = 0; j < inst.reproduction_size(); ++j)
      if (inst.within_budget(x, j)) opts += 1.0;
    if (eps > 0.0 && p <= eps) opts += 1.0;
    count *= opts;
  }
  return count;
}

PushforwardMin min_pushforward(const GuessInstance& inst, double alpha, double eps, Exec exec) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha", "order must lie in (0, 1)");
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("eps", "eps must lie in [0, 1)");
  const double count = pushforward_map_count(inst, eps);
  if (count > kMapCap) {
    throw CapExceeded("oracle enumeration needs " + std::to_string(count) +
                      " maps, cap is 1e7");
  }
  const auto mp = make_map_problem(inst, alpha, eps);

  if (exec == Exec::serial || mp.order.empty()) {
    MapSearch search(mp, /*prune=*/false);
    search.run_all();
    return finish(mp, search.best(), search.explored());
  }

  const auto branches = static_cast<std::ptrdiff_t>(mp.options[0].size());
  std::vector<Candidate> best(static_cast<std::size_t>(branches));
  std::vector<std::uint64_t> explored(static_cast<std::size_t>(branches), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < branches; ++b) {
    MapSearch search(mp, /*prune=*/true);
    search.run_branch(static_cast<std::size_t>(b));
    best[static_cast<std::size_t>(b)] = search.best();
    explored[static_cast<std::size_t>(b)] = search.explored();
  }
  Candidate winner;
  std::uint64_t total = 0;
  for (std::size_t b = 0; b < best.size(); ++b) {
    total += explored[b];
    if (best[b].better_than(winner)) winner = std::move(best[b]);
  }
  return finish(mp, std::move(winner), total);
}

std::uint64_t for_each_strategy(const GuessInstance& inst, double rho, double eps,
                                const std::function<void(const StrategyVisit&)>& visit) {
  const auto sp = make_sequence_problem(inst, rho, eps);
  SequenceSearch search(sp, &visit);
  search.run_all();
  return search.visited();
}

StrategyMin min_strategy_moment(const GuessInstance& inst, double rho, double eps, Exec exec) {
  const auto sp = make_sequence_problem(inst, rho, eps);
  if (exec == Exec::serial) {
    SequenceSearch search(sp, nullptr);
    search.run_all();
    auto best = search.best();
    best.explored = search.visited();
    return best;
  }

  const auto branches = static_cast<std::ptrdiff_t>(sp.balls.size());
  std::vector<StrategyMin> best(static_cast<std::size_t>(branches));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < branches; ++b) {
    SequenceSearch search(sp, nullptr);
    search.run_branch(static_cast<std::size_t>(b));
    best[static_cast<std::size_t>(b)] = search.best();
    best[static_cast<std::size_t>(b)].explored = search.visited();
  }
  StrategyMin winner;
  std::uint64_t total = 0;
  for (auto& b : best) {
    total += b.explored;
    if (b.codewords.empty()) continue;
    if (winner.codewords.empty() || b.moment < winner.moment) winner = b;
  }
  winner.explored = total;
  return winner;
}

CoverageMax max_k_coverage(const GuessInstance& inst, std::size_t k, Exec exec) {
  const std::size_t m = inst.reproduction_size();
  if (k < 1 || k > m) throw InputError("k", "k must lie in [1, |Xhat|]");
  if (binomial(m, k) > kCoverageCap) {
    throw CapExceeded("k-coverage search needs C(" + std::to_string(m) + ", " + std::to_string(k) +
                      ") subsets, cap is 1e6");
  }
  const std::vector<double> p(inst.pmf().probs().begin(), inst.pmf().probs().end());
  const auto balls = ball_lists(inst);

  if (exec == Exec::serial) {
    CoverageSearch search{p, balls, k, {}, {}};
    search.dfs(0);
    return search.best;
  }

  // Branch on the first (smallest) element of the subset.
  const auto branches = static_cast<std::ptrdiff_t>(m - k + 1);
  std::vector<CoverageMax> best(static_cast<std::size_t>(branches));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < branches; ++b) {
    CoverageSearch search{p, balls, k, {static_cast<std::size_t>(b)}, {}};
    search.dfs(static_cast<std::size_t>(b) + 1);
    best[static_cast<std::size_t>(b)] = std::move(search.best);
  }
  CoverageMax winner;
  std::uint64_t total = 0;
  for (auto& b : best) {
    total += b.explored;
    if (winner.codewords.empty() || b.mass > winner.mass) winner = b;
  }
  winner.explored = total;
  return winner;
}

std::vector<double> evaluate_all(std::size_t count, const std::function<double(std::size_t)>& f,
                                 Exec exec) {
  std::vector<double> out(count);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  return out;
}

}  // namespace guessing::kernels
