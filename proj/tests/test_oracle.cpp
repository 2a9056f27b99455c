#include <doctest.h>

#include <cmath>
#include <random>

#include "guessing/errors.hpp"
#include "guessing/oracle.hpp"
#include "guessing/suites.hpp"
#include "oracles.hpp"

using namespace guessing;

namespace {

GuessInstance stress() {
  return std::get<GuessInstance>(load_instance_file(DATA_DIR "/appendixB-stress.json"));
}

}  // namespace

TEST_CASE("optimal strategy search") {
  const auto inst = oracle::hamming_instance({0.2, 0.3, 0.5});
  const auto r = optimal_strategy_search(inst, 1.0, 0.0);
  CHECK(r.best_value == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(r.witness == std::vector<std::size_t>{2, 1, 0});
  CHECK_FALSE(r.cap_hit);

  const auto single = optimal_strategy_search(oracle::line_instance({0.2, 0.3, 0.5}, 1.0), 2.0, 0.0);
  CHECK(single.best_value == doctest::Approx(1.0));

  const auto s = optimal_strategy_search(stress(), 1.0, 0.0);
  CHECK(s.greedy_moment == doctest::Approx(2.125).epsilon(1e-12));
  CHECK(s.best_value == doctest::Approx(oracle::min_moment(stress(), 1.0, 0.0)).epsilon(1e-12));
  CHECK(s.best_value <= s.greedy_moment + 1e-12);
  CHECK(s.best_moment_log == doctest::Approx(std::log2(s.best_value)).epsilon(1e-12));
}

TEST_CASE("strategy search matches brute force on random instances") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::random_instance(rng, oracle::uniform_int(rng, 1, 7), oracle::uniform_int(rng, 1, 5));
    for (double eps : {0.0, 0.2}) {
      for (double rho : {0.5, 1.0, 2.0}) {
        const auto r = optimal_strategy_search(inst, rho, eps);
        CHECK(r.best_value == doctest::Approx(oracle::min_moment(inst, rho, eps)).epsilon(1e-10));
        double err = 0;
        CHECK(oracle::moment_of(inst, r.witness, rho, &err) == doctest::Approx(r.best_value).epsilon(1e-12));
        CHECK(err <= eps + 1e-12);
      }
    }
  }
}

TEST_CASE("strategy search cap") {
  std::vector<double> p(9, 1.0 / 9);
  CHECK_THROWS_AS(optimal_strategy_search(oracle::hamming_instance(p), 1.0, 0.0), CapExceeded);
}

TEST_CASE("maximum coverage search") {
  const auto s = stress();
  const auto r2 = max_coverage_search(s, 2);
  CHECK(r2.best_value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r2.greedy_prefix_mass == doctest::Approx(0.65).epsilon(1e-12));
  std::vector<std::string> w;
  for (auto j : r2.witness) w.push_back(s.reproduction().label(j));
  CHECK(w == std::vector<std::string>{"B2", "B3"});
  CHECK(max_coverage_search(s, 4).best_value == doctest::Approx(1.0));

  const auto h = oracle::hamming_instance({0.2, 0.3, 0.5});
  CHECK(max_coverage_search(h, 1).best_value == doctest::Approx(0.5));

  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::random_instance(rng, oracle::uniform_int(rng, 1, 10), oracle::uniform_int(rng, 1, 8));
    for (std::size_t k = 1; k <= inst.reproduction_size(); ++k) {
      const auto r = max_coverage_search(inst, k);
      CHECK(r.best_value == doctest::Approx(oracle::max_coverage(inst, k)).epsilon(1e-12));
      CHECK(r.best_value >= r.greedy_prefix_mass - 1e-12);
    }
  }
}

TEST_CASE("moment vs Renyi power-sum inequality") {
  const auto point = lemma3_check(MassVector({1.0}), 1.0);
  CHECK(point.lhs == doctest::Approx(1.0));
  CHECK(point.rhs == doctest::Approx(1.0));
  CHECK(point.holds);

  const auto r = lemma3_check(MassVector({0.5, 0.3, 0.2}), 1.0);
  CHECK(r.lhs == doctest::Approx(1.7));
  const double s = std::sqrt(0.5) + std::sqrt(0.3) + std::sqrt(0.2);
  CHECK(r.rhs == doctest::Approx(s * s).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(2.89694).epsilon(1e-4));
  CHECK(r.holds);

  for (std::size_t m = 1; m <= 20; ++m) {
    const auto u = lemma3_check(MassVector(std::vector<double>(m, 1.0 / double(m))), 1.0);
    CHECK(u.lhs == doctest::Approx((m + 1) / 2.0).epsilon(1e-12));
    CHECK(u.rhs == doctest::Approx(double(m)).epsilon(1e-12));
  }
}

TEST_CASE("verification suites") {
  const auto maj = majorization_suite(stress());
  CHECK(maj.checked > 0);
  CHECK(maj.violations > 0);
  REQUIRE(maj.first_violation.has_value());

  const auto cov = coverage_suite(stress());
  CHECK(cov.violations == 0);
  CHECK(cov.greedy_suboptimal == 2);

  CHECK(majorization_suite(oracle::hamming_instance({0.1, 0.2, 0.3, 0.4})).violations == 0);

  const auto l3 = lemma3_suite(500, 1);
  CHECK(l3.checked == 1500);
  CHECK(l3.violations == 0);
  const auto sc = schur_suite(500, 1);
  CHECK(sc.checked == 500);
  CHECK(sc.violations == 0);
  CHECK(schur_suite(200, 9).worst_margin == schur_suite(200, 9).worst_margin);
}
