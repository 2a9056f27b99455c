#include <doctest.h>

#include <cmath>
#include <random>

#include "guessing/errors.hpp"
#include "guessing/strategy.hpp"
#include "oracles.hpp"

using namespace guessing;

namespace {

JointGuessInstance joint_hamming(std::size_t nx, std::size_t ny, std::vector<double> probs) {
  return JointGuessInstance(JointPmf(oracle::letters(nx), oracle::letters(ny, "y"), std::move(probs)),
                            oracle::letters(nx), DistortionMeasure::hamming(nx), 0.0);
}

}  // namespace

TEST_CASE("distortion balls") {
  const auto h = oracle::hamming_instance({0.2, 0.3, 0.5});
  CHECK(distortion_ball(h, 0) == SymbolSet{0});
  const auto all = oracle::hamming_instance({0.2, 0.3, 0.5}, 1.0);
  CHECK(distortion_ball(all, 2) == SymbolSet{0, 1, 2});
  const auto line = oracle::line_instance({0.2, 0.3, 0.5}, 1.0);
  CHECK(distortion_ball(line, 1) == SymbolSet{0, 1, 2});
  CHECK(distortion_ball(line, 0) == SymbolSet{0, 1});
}

TEST_CASE("greedy on singleton balls sorts by probability") {
  const auto inst = oracle::hamming_instance({0.2, 0.3, 0.5});
  const auto g = greedy_cover(inst);
  CHECK(g.partition.codewords == std::vector<std::size_t>{2, 1, 0});
  CHECK(g.partition.cell_masses[0] == doctest::Approx(0.5));
  CHECK(g.partition.cell_masses[1] == doctest::Approx(0.3));
  CHECK(g.partition.cell_masses[2] == doctest::Approx(0.2));
  CHECK(g.strategy.origin == StrategyOrigin::greedy);
}

TEST_CASE("greedy on the line picks the middle ball") {
  const auto g = greedy_cover(oracle::line_instance({0.2, 0.3, 0.5}, 1.0));
  CHECK(g.partition.tau() == 1);
  CHECK(g.partition.codewords[0] == 1);
  CHECK(g.partition.cell_masses[0] == doctest::Approx(1.0));
}

TEST_CASE("greedy on the stress fixture") {
  const auto inst = std::get<GuessInstance>(load_instance_file(DATA_DIR "/appendixB-stress.json"));
  const auto g = greedy_cover(inst);
  std::vector<std::string> order;
  for (auto j : g.partition.codewords) order.push_back(inst.reproduction().label(j));
  CHECK(order == std::vector<std::string>{"B1", "B0", "B2", "B3"});
  const std::vector<double> masses{0.4, 0.25, 0.175, 0.175};
  for (std::size_t i = 0; i < 4; ++i) CHECK(g.partition.cell_masses[i] == doctest::Approx(masses[i]).epsilon(1e-12));
  CHECK(moment(g.strategy, inst, 1.0).moment == doctest::Approx(2.125).epsilon(1e-12));
}

TEST_CASE("greedy agrees with the independent greedy on random instances") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto inst = oracle::random_instance(rng, oracle::uniform_int(rng, 1, 10),
                                              oracle::uniform_int(rng, 1, 8));
    for (double eps : {0.0, 0.1, 0.3}) {
      const auto g = greedy_cover(inst, eps);
      const auto ref = oracle::greedy(inst, eps);
      CHECK(g.partition.codewords == ref.order);
      REQUIRE(g.partition.cell_masses.size() == ref.masses.size());
      double covered = 0;
      for (std::size_t i = 0; i < ref.masses.size(); ++i) {
        CHECK(g.partition.cell_masses[i] == doctest::Approx(ref.masses[i]).epsilon(1e-12));
        if (i > 0) CHECK(g.partition.cell_masses[i] <= g.partition.cell_masses[i - 1] + 1e-12);
        covered += g.partition.cell_masses[i];
      }
      CHECK(covered + g.partition.uncovered_mass == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(error_probability(g.strategy, inst) <= eps);
      // Cells partition the covered support and sit inside their balls.
      std::vector<int> seen(inst.source_size(), 0);
      for (std::size_t i = 0; i < g.partition.tau(); ++i)
        for (auto x : g.partition.cells[i]) {
          ++seen[x];
          CHECK(oracle::in_ball(inst, x, g.partition.codewords[i]));
        }
      for (auto c : seen) CHECK(c <= 1);
    }
  }
}

TEST_CASE("guess indices and error probability") {
  const auto inst = oracle::hamming_instance({0.2, 0.3, 0.5});
  const auto s = GuessingStrategy::user(inst, {2, 1, 0});
  CHECK(guess_index(s, inst, 2) == std::optional<std::size_t>(1));
  CHECK(guess_index(s, inst, 0) == std::optional<std::size_t>(3));
  const auto empty = GuessingStrategy::user(inst, {});
  for (std::size_t x = 0; x < 3; ++x) CHECK_FALSE(guess_index(empty, inst, x).has_value());
  CHECK(error_probability(empty, inst) == 1.0);
  CHECK(error_probability(GuessingStrategy::user(inst, {2, 1}), inst) == doctest::Approx(0.2));
  CHECK(error_probability(greedy_cover(inst).strategy, inst) == 0.0);
  CHECK_THROWS_AS(GuessingStrategy::user(inst, {0, 0}), InputError);
  CHECK_THROWS_AS(GuessingStrategy::user(inst, {3}), InputError);
}

TEST_CASE("moments") {
  const auto u = oracle::hamming_instance({0.25, 0.25, 0.25, 0.25});
  const auto r = moment(greedy_cover(u).strategy, u, 1.0);
  CHECK(r.moment == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(r.moment_log == doctest::Approx(std::log2(2.5)).epsilon(1e-12));

  const auto one = oracle::line_instance({0.2, 0.3, 0.5}, 1.0);
  const auto r1 = moment(greedy_cover(one).strategy, one, 2.0);
  CHECK(r1.moment == doctest::Approx(1.0));
  CHECK(r1.moment_log == doctest::Approx(0.0));

  const auto inst = oracle::hamming_instance({0.2, 0.3, 0.5});
  const auto r2 = moment(greedy_cover(inst).strategy, inst, 1.0);
  CHECK(r2.moment == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(r2.moment_log == doctest::Approx(0.76553).epsilon(1e-4));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto ri = oracle::random_instance(rng, oracle::uniform_int(rng, 1, 8), oracle::uniform_int(rng, 1, 6));
    const auto g = greedy_cover(ri, 0.2);
    for (double rho : {0.5, 1.0, 2.0}) {
      double err = 0;
      const double ref = oracle::moment_of(ri, g.strategy.codewords, rho, &err);
      const auto rep = moment(g.strategy, ri, rho);
      CHECK(rep.moment == doctest::Approx(ref).epsilon(1e-12));
      CHECK(rep.error_mass == doctest::Approx(err).epsilon(1e-12));
    }
  }
}

TEST_CASE("side information strategies") {
  const auto diag = joint_hamming(3, 3, {0.5, 0, 0, 0, 0.3, 0, 0, 0, 0.2});
  const auto cover = side_info_cover(diag);
  for (std::size_t y = 0; y < 3; ++y) {
    REQUIRE(cover.per_y[y].has_value());
    CHECK(cover.per_y[y]->partition.codewords.front() == y);
  }
  const auto r = side_info_moment(cover.strategy(), diag, 1.0);
  CHECK(r.moment == 1.0);
  CHECK(r.moment_log == 0.0);

  const auto j = joint_hamming(2, 2, {0.4, 0.1, 0.1, 0.4});
  const auto c2 = side_info_cover(j);
  CHECK(c2.per_y[0]->partition.codewords == std::vector<std::size_t>{0, 1});
  CHECK(c2.per_y[1]->partition.codewords == std::vector<std::size_t>{1, 0});
  const auto r2 = side_info_moment(c2.strategy(), j, 1.0);
  CHECK(r2.moment == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(r2.moment_log == doctest::Approx(0.26303).epsilon(1e-4));

  const std::vector<double> px{0.1, 0.6, 0.3}, py{0.25, 0.75};
  std::vector<double> prod;
  for (double a : px)
    for (double b : py) prod.push_back(a * b);
  const auto indep = joint_hamming(3, 2, prod);
  const auto c3 = side_info_cover(indep);
  CHECK(c3.per_y[0]->partition.codewords == c3.per_y[1]->partition.codewords);
  const auto base = oracle::hamming_instance(px);
  CHECK(side_info_moment(c3.strategy(), indep, 1.0).moment_log ==
        doctest::Approx(moment(greedy_cover(base).strategy, base, 1.0).moment_log).epsilon(1e-12));
}

TEST_CASE("Monte Carlo estimator") {
  const auto point = oracle::hamming_instance({0.0, 1.0, 0.0});
  const auto mp = monte_carlo_moment(greedy_cover(point).strategy, point, 1.0, 1000, 4);
  CHECK(mp.estimate == 1.0);
  CHECK(mp.stderr_ == 0.0);

  const auto u = oracle::hamming_instance({0.25, 0.25, 0.25, 0.25});
  const auto s = greedy_cover(u).strategy;
  const auto a = monte_carlo_moment(s, u, 1.0, 100000, 42);
  const auto b = monte_carlo_moment(s, u, 1.0, 100000, 42);
  CHECK(std::fabs(a.estimate - 2.5) <= 4 * a.stderr_);
  CHECK(a.stderr_ == doctest::Approx(std::sqrt(1.25 / 100000)).epsilon(0.05));
  CHECK(a.estimate == b.estimate);
  CHECK(a.seed == 42);
  CHECK(a.draws == 100000);
}
