// Serial reference vs OpenMP kernels on fixed seeded workloads.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "guessing/asymptotic.hpp"
#include "guessing/kernels.hpp"

using namespace guessing;

namespace {

Alphabet letters(std::size_t n, const std::string& prefix) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return Alphabet(v);
}

GuessInstance workload(std::uint64_t seed, std::size_t nx, std::size_t m, double budget) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(nx), d(nx * m);
  double total = 0.0;
  for (auto& v : p) total += (v = u(rng) + 0.05);
  for (auto& v : p) v /= total;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t j = 0; j < m; ++j) d[x * m + j] = u(rng);
    d[x * m + rng() % m] = 0.0;
  }
  return GuessInstance(Pmf(letters(nx, "x"), p), letters(m, "y"), DistortionMeasure(nx, m, d), budget);
}

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, const std::function<void(Exec)>& f) {
  const double s = seconds([&] { f(Exec::serial); });
  const double p = seconds([&] { f(Exec::parallel); });
  std::printf("%-22s serial %9.4fs  parallel %9.4fs  speedup %6.2fx\n", name, s, p, p > 0 ? s / p : 0.0);
}

}  // namespace

int main() {
  const auto maps = workload(1, 11, 6, 0.45);
  std::printf("pushforward maps: %.0f\n", kernels::pushforward_map_count(maps, 0.0));
  row("min_pushforward", [&](Exec e) { (void)kernels::min_pushforward(maps, 0.5, 0.0, e); });

  const auto seq = workload(2, 10, 8, 0.4);
  row("min_strategy_moment", [&](Exec e) { (void)kernels::min_strategy_moment(seq, 1.0, 0.0, e); });

  const auto cov = workload(3, 60, 24, 0.3);
  row("max_k_coverage k=5", [&](Exec e) { (void)kernels::max_k_coverage(cov, 5, e); });

  const auto ex = workload(4, 4, 4, 0.2);
  row("exponent grid 30", [&](Exec e) {
    (void)guessing_exponent(ex.pmf(), ex.distortion(), 0.2, 1.0, 30, e);
  });
  return 0;
}
