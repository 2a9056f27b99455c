#pragma once

#include <span>
#include <vector>

#include "guessing/source_model.hpp"

namespace guessing {

struct EntropyValue {
  double bits;
  double order;
};

/// H_alpha(P) in bits; alpha = 1 is the Shannon entropy. Zero masses are skipped.
EntropyValue renyi_entropy(const Pmf& p, double alpha);

/// H_alpha(X|Y) (Arimoto) in bits; alpha = 1 is H(X|Y).
EntropyValue arimoto_conditional_entropy(const JointPmf& joint, double alpha);

/// D(p||q) in bits, +inf when p is not absolutely continuous w.r.t. q.
double kl_divergence(const Pmf& p, const Pmf& q);

// Raw-vector forms. `masses` need not be normalized for renyi_bits (used with
// cell-mass vectors that sum to one up to rounding).
double renyi_bits(std::span<const double> masses, double alpha);
double shannon_bits(std::span<const double> masses);
double kl_bits(std::span<const double> p, std::span<const double> q);

/// Arimoto-Renyi entropy from P_Y and the per-y conditional distributions.
double arimoto_bits(std::span<const double> py, const std::vector<std::vector<double>>& conditionals,
                    double alpha);

}  // namespace guessing
