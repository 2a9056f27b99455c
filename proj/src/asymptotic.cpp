#include "guessing/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "guessing/entropy.hpp"
#include "guessing/errors.hpp"
#include "guessing/kernels.hpp"
#include "guessing/limits.hpp"
#include "guessing/strategy.hpp"

namespace guessing {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TiltedSolve {
  std::vector<double> channel;
  double rate = 0.0;
  double distortion = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Blahut-Arimoto for a fixed tilt A(x, j) (exp(-s d) or a 0/1 support mask).
// `r` is the starting output distribution and receives the final one.
TiltedSolve solve_tilted(std::span<const double> q, const DistortionMeasure& d,
                         const std::vector<double>& tilt, double tol, std::size_t max_iterations,
                         std::vector<double>& r) {
  const std::size_t nx = d.rows();
  const std::size_t m = d.cols();
  std::vector<double> z(nx);
  std::vector<double> c(m);

  TiltedSolve out;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    for (std::size_t x = 0; x < nx; ++x) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += r[j] * tilt[x * m + j];
      z[x] = s;
    }
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      if (!(q[x] > 0.0)) continue;
      for (std::size_t j = 0; j < m; ++j) c[j] += q[x] * tilt[x * m + j] / z[x];
    }
    // Blahut's bounds: max_j log c_j - sum_j r_j c_j log c_j >= 0, and zero at
    // the fixed point.
    double top = -kInf;
    double avg = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!(r[j] > 0.0)) continue;
      const double lc = std::log2(c[j]);
      top = std::max(top, lc);
      avg += r[j] * c[j] * lc;
    }
    out.gap = std::max(top - avg, 0.0);
    for (std::size_t j = 0; j < m; ++j) r[j] *= c[j];
    out.iterations = it;
    if (out.gap < tol) {
      out.converged = true;
      break;
    }
  }

  out.channel.assign(nx * m, 0.0);
  std::vector<double> marginal(m, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += r[j] * tilt[x * m + j];
    for (std::size_t j = 0; j < m; ++j) {
      out.channel[x * m + j] = r[j] * tilt[x * m + j] / s;
      marginal[j] += q[x] * out.channel[x * m + j];
    }
  }
  for (std::size_t x = 0; x < nx; ++x) {
    if (!(q[x] > 0.0)) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const double w = out.channel[x * m + j];
      if (w > 0.0) {
        out.rate += q[x] * w * std::log2(w / marginal[j]);
        out.distortion += q[x] * w * d(x, j);
      }
    }
  }
  out.rate = std::max(out.rate, 0.0);
  return out;
}

std::vector<double> exp_tilt(const DistortionMeasure& d, double slope) {
  std::vector<double> t(d.rows() * d.cols());
  for (std::size_t x = 0; x < d.rows(); ++x)
    for (std::size_t j = 0; j < d.cols(); ++j) t[x * d.cols() + j] = std::exp(-slope * d(x, j));
  return t;
}

}  // namespace

RDResult blahut_arimoto(const Pmf& q, const DistortionMeasure& d, double budget, double tol,
                        std::size_t max_iterations) {
  if (d.rows() != q.size()) throw InputError("distortion", "rows must match the source alphabet");
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw InputError("D", "budget must be >= 0");
  if (!(tol > 0.0)) throw InputError("tol", "tolerance must be > 0");
  const std::size_t nx = d.rows();
  const std::size_t m = d.cols();
  const auto p = q.probs();

  // Constant reproduction: R = 0 once the cheapest column meets the budget.
  std::size_t best_col = 0;
  double dmax = kInf;
  for (std::size_t j = 0; j < m; ++j) {
    double e = 0.0;
    for (std::size_t x = 0; x < nx; ++x) e += p[x] * d(x, j);
    if (e < dmax) {
      dmax = e;
      best_col = j;
    }
  }
  if (budget >= dmax) {
    RDResult r;
    r.rate = 0.0;
    r.channel.assign(nx * m, 0.0);
    for (std::size_t x = 0; x < nx; ++x) r.channel[x * m + best_col] = 1.0;
    r.distortion = dmax;
    return r;
  }

  const double inner_tol = tol * 1e-2;
  if (budget <= kTolerance) {
    // Only zero-distortion pairs are usable: minimize I over that support.
    std::vector<double> mask(nx * m);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t j = 0; j < m; ++j) mask[x * m + j] = d(x, j) <= kTolerance ? 1.0 : 0.0;
    std::vector<double> r(m, 1.0 / static_cast<double>(m));
    const auto s = solve_tilted(p, d, mask, inner_tol, max_iterations, r);
    return {s.rate, s.channel, kInf, s.iterations, s.gap, s.distortion, s.converged};
  }

  std::size_t total_iterations = 0;
  // Warm start: each bisection step begins from the previous output law, with
  // a floor so letters dropped at one slope can return at another.
  std::vector<double> warm(m, 1.0 / static_cast<double>(m));
  auto solve = [&](double slope) {
    const double floor = 1e-3 / static_cast<double>(m);
    double total = 0.0;
    for (auto& v : warm) total += (v = std::max(v, floor));
    for (auto& v : warm) v /= total;
    auto s = solve_tilted(p, d, exp_tilt(d, slope), inner_tol, max_iterations, warm);
    total_iterations += s.iterations;
    return s;
  };

  double lo = 0.0;
  double hi = 1.0;
  TiltedSolve at_hi = solve(hi);
  while (at_hi.distortion > budget) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) break;
    at_hi = solve(hi);
  }
  for (int step = 0; step < 200 && hi - lo > 1e-13 * hi && budget - at_hi.distortion > 1e-12;
       ++step) {
    const double mid = 0.5 * (lo + hi);
    auto s = solve(mid);
    if (s.distortion > budget) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = std::move(s);
    }
  }

  RDResult r;
  r.rate = at_hi.rate;
  r.channel = std::move(at_hi.channel);
  r.multiplier = hi;
  r.iterations = total_iterations;
  r.convergence_gap = at_hi.gap;
  r.distortion = at_hi.distortion;
  r.converged = at_hi.converged;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void compositions(std::size_t parts, int total, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(parts, total - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ExponentResult guessing_exponent(const Pmf& p, const DistortionMeasure& d, double budget,
                                 double rho, int grid, Exec exec) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("rho", "rho must be a finite real > 0");
  if (grid < 1) throw InputError("grid", "grid resolution must be >= 1");
  const std::size_t n = p.size();
  if (n > kExponentAlphabetCap) {
    throw CapExceeded("exponent grid supports |X| <= 4, got " + std::to_string(n));
  }
  const auto target = p.probs();

  auto objective = [&](std::span<const double> q) {
    const double kl = kl_bits(q, target);
    if (!std::isfinite(kl)) return -kInf;
    const Pmf qp(p.alphabet(), std::vector<double>(q.begin(), q.end()));
    return blahut_arimoto(qp, d, budget, kExponentBaTolerance, kExponentBaIterations).rate - kl / rho;
  };

  std::vector<std::vector<int>> points;
  std::vector<int> cur;
  compositions(n, grid, cur, points);
  auto to_q = [&](const std::vector<int>& k) {
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = static_cast<double>(k[i]) / grid;
    return q;
  };
  const auto values = kernels::evaluate_all(
      points.size(), [&](std::size_t i) { return objective(to_q(points[i])); }, exec);

  std::vector<double> best_q(target.begin(), target.end());
  double best = objective(best_q);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (values[i] > best) {
      best = values[i];
      best_q = to_q(points[i]);
    }
  }

  // Coordinatewise refinement: move delta of mass between pairs, halving delta
  // when no move improves.
  int steps = 0;
  double delta = 1.0 / grid;
  while (delta >= 1e-9 && steps < 2000) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || best_q[j] < delta) continue;
        auto q = best_q;
        q[i] += delta;
        q[j] -= delta;
        const double v = objective(q);
        if (v > best + 1e-15) {
          best = v;
          best_q = std::move(q);
          improved = true;
        }
      }
    }
    ++steps;
    if (!improved) delta *= 0.5;
  }

  ExponentResult r;
  r.value = best;
  r.argmax = std::move(best_q);
  r.grid_resolution = grid;
  r.refinement_steps = steps;
  return r;
}

// ---------------------------------------------------------------------------

SweepTable blocklength_sweep(const GuessInstance& inst, std::span<const double> rhos, double eps,
                             int n_max, double alpha_probe, std::size_t cap) {
  if (n_max < 1) throw InputError("nmax", "n_max must be >= 1");
  if (!(alpha_probe > 0.0 && alpha_probe <= 1.0)) {
    throw InputError("alpha_probe", "probe order must lie in (0, 1]");
  }
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("eps", "eps must lie in [0, 1)");
  if (rhos.empty()) throw InputError("rho", "at least one rho is required");
  for (double rho : rhos) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("rho", "rho must be a finite real > 0");
  }
  // Fail on the cap before doing any work.
  (void)product_extend(inst, 1, cap);
  {
    std::size_t sx = 1, sy = 1;
    for (int i = 0; i < n_max; ++i) {
      if (sx > cap / inst.source_size() || sy > cap / inst.reproduction_size()) {
        throw CapExceeded("blocklength " + std::to_string(n_max) + " exceeds the product cap " +
                          std::to_string(cap));
      }
      sx *= inst.source_size();
      sy *= inst.reproduction_size();
    }
  }

  SweepTable table;
  table.rhos.assign(rhos.begin(), rhos.end());
  table.eps = eps;
  table.alpha_probe = alpha_probe;
  const double target =
      (1.0 - eps) * blahut_arimoto(inst.pmf(), inst.distortion(), inst.budget()).rate;

  for (int n = 1; n <= n_max; ++n) {
    const auto product = product_extend(inst, n, cap);
    const auto cover = greedy_cover(product.product, eps);
    SweepRow row;
    row.n = n;
    row.functional =
        renyi_bits(folded_cell_masses(cover.partition), alpha_probe) / static_cast<double>(n);
    for (double rho : rhos) {
      row.moment_log.push_back(moment(cover.strategy, product.product, rho).moment_log /
                               static_cast<double>(n));
    }
    row.target = target;
    row.gap = row.functional - target;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace guessing
