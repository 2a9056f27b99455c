#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "guessing/exec.hpp"
#include "guessing/source_model.hpp"

namespace guessing {

struct RDResult {
  double rate = 0.0;
  /// Test channel P(xhat | x), row-major |X| x |Xhat|.
  std::vector<double> channel;
  /// Slope parameter s of the exp(-s d) tilt (nats per unit distortion);
  /// +inf for the D = 0 support-restricted problem.
  double multiplier = 0.0;
  std::size_t iterations = 0;
  /// Final Blahut upper-minus-lower bound gap, bits.
  double convergence_gap = 0.0;
  double distortion = 0.0;
  bool converged = true;
};

inline constexpr std::size_t kDefaultBaIterations = 100000;

/// R(D, q) in bits by Blahut-Arimoto with bisection on the slope.
/// Returns exactly 0 when D >= min_xhat E_q[d(X, xhat)].
RDResult blahut_arimoto(const Pmf& q, const DistortionMeasure& d, double budget,
                        double tol = 1e-9, std::size_t max_iterations = kDefaultBaIterations);

struct ExponentResult {
  double value = 0.0;
  std::vector<double> argmax;
  int grid_resolution = 0;
  int refinement_steps = 0;
};

inline constexpr std::size_t kExponentAlphabetCap = 4;
/// Blahut-Arimoto settings for each objective evaluation inside the simplex search.
inline constexpr double kExponentBaTolerance = 1e-8;
inline constexpr std::size_t kExponentBaIterations = 20000;

/// sup_Q [R(D, Q) - D(Q||P)/rho] over a simplex grid with step 1/grid, followed
/// by coordinatewise refinement. P itself is always a candidate.
ExponentResult guessing_exponent(const Pmf& p, const DistortionMeasure& d, double budget,
                                 double rho, int grid, Exec exec = Exec::parallel);

struct SweepRow {
  int n = 0;
  double functional = 0.0;
  std::vector<double> moment_log;
  double target = 0.0;
  double gap = 0.0;
};

struct SweepTable {
  std::vector<double> rhos;
  double eps = 0.0;
  double alpha_probe = 0.0;
  std::vector<SweepRow> rows;
};

/// Per-letter greedy functional and moments of the n-fold product instance
/// (budget n*D) for n = 1..n_max, against (1 - eps) R(D, P_X).
SweepTable blocklength_sweep(const GuessInstance& inst, std::span<const double> rhos, double eps,
                             int n_max, double alpha_probe,
                             std::size_t cap = kDefaultProductCap);

}  // namespace guessing
