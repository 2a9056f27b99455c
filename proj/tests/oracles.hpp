#pragma once

// Brute-force reference computations used as expected values in the tests.
// Everything here is written directly from the definitions and shares no code
// with the library beyond the instance types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "guessing/source_model.hpp"

namespace oracle {

using guessing::Alphabet;
using guessing::DistortionMeasure;
using guessing::GuessInstance;
using guessing::Pmf;

inline Alphabet letters(std::size_t n, const std::string& prefix = "s") {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return Alphabet(v);
}

inline GuessInstance hamming_instance(std::vector<double> p, double budget = 0.0) {
  const auto n = p.size();
  return GuessInstance(Pmf(letters(n), std::move(p)), letters(n), DistortionMeasure::hamming(n),
                       budget);
}

inline GuessInstance line_instance(std::vector<double> p, double budget) {
  const auto n = p.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::fabs(double(i) - double(j));
  return GuessInstance(Pmf(letters(n), std::move(p)), letters(n), DistortionMeasure(n, n, d),
                       budget);
}

inline double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + std::size_t(rng() % (hi - lo + 1));
}

inline std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  double t = 0;
  for (auto& x : v) t += (x = -std::log1p(-uniform01(rng)));
  for (auto& x : v) x /= t;
  return v;
}

// Random distortion with quantized entries in {0, .25, .5, .75, 1}, a forced zero
// per row, and a budget drawn from the same grid.
inline GuessInstance random_instance(std::mt19937_64& rng, std::size_t nx, std::size_t m) {
  std::vector<double> d(nx * m);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t j = 0; j < m; ++j) d[x * m + j] = 0.25 * double(uniform_int(rng, 0, 4));
    d[x * m + uniform_int(rng, 0, m - 1)] = 0.0;
  }
  const double budget = 0.25 * double(uniform_int(rng, 0, 3));
  return GuessInstance(Pmf(letters(nx, "x"), random_pmf(rng, nx)), letters(m, "y"),
                       DistortionMeasure(nx, m, d), budget);
}

inline bool in_ball(const GuessInstance& inst, std::size_t x, std::size_t j) {
  return inst.distortion()(x, j) <= inst.budget() + 1e-12;
}

inline double renyi(const std::vector<double>& p, double alpha) {
  long double s = 0;
  if (alpha == 1.0) {
    for (double v : p)
      if (v > 0) s -= (long double)v * std::log2((long double)v);
    return double(std::max<long double>(s, 0));
  }
  for (double v : p)
    if (v > 0) s += std::pow((long double)v, (long double)alpha);
  return double(std::max<long double>(std::log2(s) / (1 - alpha), 0));
}

// E[G^rho] of an ordered codeword list; symbols left uncovered contribute 0.
inline double moment_of(const GuessInstance& inst, const std::vector<std::size_t>& order,
                        double rho, double* error = nullptr) {
  long double s = 0, e = 0;
  for (std::size_t x = 0; x < inst.source_size(); ++x) {
    std::size_t g = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (in_ball(inst, x, order[i])) {
        g = i + 1;
        break;
      }
    }
    if (g == 0) e += inst.pmf()[x];
    else s += inst.pmf()[x] * std::pow((long double)g, (long double)rho);
  }
  if (error) *error = double(e);
  return double(s);
}

// Independent greedy: recompute every residual from scratch each round.
struct Greedy {
  std::vector<std::size_t> order;
  std::vector<double> masses;
  double uncovered = 0;
};

inline Greedy greedy(const GuessInstance& inst, double eps) {
  Greedy g;
  std::vector<bool> covered(inst.source_size(), false);
  auto uncovered = [&] {
    double u = 0;
    for (std::size_t x = 0; x < inst.source_size(); ++x)
      if (!covered[x]) u += inst.pmf()[x];
    return u;
  };
  while (uncovered() > eps) {
    double best = 0;
    std::size_t arg = inst.reproduction_size();
    for (std::size_t j = 0; j < inst.reproduction_size(); ++j) {
      double gain = 0;
      for (std::size_t x = 0; x < inst.source_size(); ++x)
        if (!covered[x] && in_ball(inst, x, j)) gain += inst.pmf()[x];
      if (gain > best + 1e-12) {
        best = gain;
        arg = j;
      }
    }
    if (arg == inst.reproduction_size()) break;
    for (std::size_t x = 0; x < inst.source_size(); ++x)
      if (in_ball(inst, x, arg)) covered[x] = true;
    g.order.push_back(arg);
    g.masses.push_back(best);
  }
  g.uncovered = uncovered();
  return g;
}

// min over every map x -> ball codeword or "dropped", with dropped mass
// (total <= eps) assigned to any one bucket, of sum_j m_j^alpha.
inline double min_power_sum(const GuessInstance& inst, double alpha, double eps) {
  const std::size_t nx = inst.source_size();
  const std::size_t m = inst.reproduction_size();
  std::vector<std::size_t> choice(nx, 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == nx) {
      std::vector<double> bucket(m, 0.0);
      double dropped = 0;
      for (std::size_t i = 0; i < nx; ++i) {
        if (choice[i] == m) dropped += inst.pmf()[i];
        else bucket[choice[i]] += inst.pmf()[i];
      }
      if (dropped > eps + 1e-12) return;
      for (std::size_t t = 0; t < m; ++t) {
        auto b = bucket;
        b[t] += dropped;
        double s = 0;
        for (double v : b)
          if (v > 0) s += std::pow(v, alpha);
        best = std::min(best, s);
      }
      return;
    }
    for (std::size_t j = 0; j <= m; ++j) {
      if (j < m && !in_ball(inst, x, j)) continue;
      if (j == m && !(eps > 0)) continue;
      choice[x] = j;
      rec(x + 1);
    }
  };
  rec(0);
  return best;
}

inline double min_functional(const GuessInstance& inst, double alpha, double eps) {
  return std::max(std::log2(min_power_sum(inst, alpha, eps)) / (1 - alpha), 0.0);
}

// min E[G^rho] over every ordered list of distinct codewords with error <= eps.
inline double min_moment(const GuessInstance& inst, double rho, double eps) {
  const std::size_t m = inst.reproduction_size();
  std::vector<std::size_t> order;
  std::vector<bool> used(m, false);
  double best = std::numeric_limits<double>::infinity();
  std::function<void()> rec = [&] {
    double err = 0;
    const double v = moment_of(inst, order, rho, &err);
    if (err <= eps + 1e-12) best = std::min(best, v);
    if (order.size() == m) return;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      order.push_back(j);
      rec();
      order.pop_back();
      used[j] = false;
    }
  };
  rec();
  return best;
}

// Largest mass covered by any k balls.
inline double max_coverage(const GuessInstance& inst, std::size_t k) {
  const std::size_t m = inst.reproduction_size();
  double best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
    if (std::size_t(__builtin_popcountll(mask)) != k) continue;
    double s = 0;
    for (std::size_t x = 0; x < inst.source_size(); ++x) {
      for (std::size_t j = 0; j < m; ++j) {
        if ((mask >> j & 1) && in_ball(inst, x, j)) {
          s += inst.pmf()[x];
          break;
        }
      }
    }
    best = std::max(best, s);
  }
  return best;
}

inline double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Binary Hamming rate-distortion closed form.
inline double binary_rd(double p, double d) {
  const double q = std::min(p, 1 - p);
  return d >= q ? 0.0 : binary_entropy(q) - binary_entropy(d);
}

}  // namespace oracle
