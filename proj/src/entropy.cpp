#include "guessing/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "guessing/errors.hpp"

namespace guessing {
namespace {

void check_order(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InputError("alpha", "order must be a finite real > 0");
  }
}

}  // namespace

double shannon_bits(std::span<const double> masses) {
  double h = 0.0;
  for (double p : masses) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double renyi_bits(std::span<const double> masses, double alpha) {
  check_order(alpha);
  if (alpha == 1.0) return shannon_bits(masses);
  double s = 0.0;
  for (double p : masses) {
    if (p > 0.0) s += std::pow(p, alpha);
  }
  return std::max(std::log2(s) / (1.0 - alpha), 0.0);
}

double kl_bits(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("", "alphabet mismatch in relative entropy");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double arimoto_bits(std::span<const double> py, const std::vector<std::vector<double>>& conditionals,
                    double alpha) {
  check_order(alpha);
  if (py.size() != conditionals.size()) throw InputError("", "P_Y and slices disagree in size");
  if (alpha == 1.0) {
    double h = 0.0;
    for (std::size_t y = 0; y < py.size(); ++y) {
      if (py[y] > 0.0) h += py[y] * shannon_bits(conditionals[y]);
    }
    return std::max(h, 0.0);
  }
  double outer = 0.0;
  double total = 0.0;
  for (std::size_t y = 0; y < py.size(); ++y) {
    if (py[y] <= 0.0) continue;
    double inner = 0.0;
    for (double p : conditionals[y]) {
      if (p > 0.0) inner += std::pow(p, alpha);
    }
    outer += py[y] * std::pow(inner, 1.0 / alpha);
    total += py[y];
  }
  // Dividing by the stored total of P_Y makes point-mass slices give exactly 0.
  return std::max(alpha / (1.0 - alpha) * std::log2(outer / total), 0.0);
}

EntropyValue renyi_entropy(const Pmf& p, double alpha) {
  return {renyi_bits(p.probs(), alpha), alpha};
}

EntropyValue arimoto_conditional_entropy(const JointPmf& joint, double alpha) {
  check_order(alpha);
  const auto py = joint.marginal_y();
  std::vector<std::vector<double>> slices(py.size());
  for (std::size_t y = 0; y < py.size(); ++y) {
    if (py[y] > 0.0) {
      const auto s = conditional_slice(joint, y);
      slices[y].assign(s.probs().begin(), s.probs().end());
    }
  }
  return {arimoto_bits(py.probs(), slices, alpha), alpha};
}

double kl_divergence(const Pmf& p, const Pmf& q) {
  if (!(p.alphabet() == q.alphabet())) throw InputError("", "alphabet mismatch in relative entropy");
  return kl_bits(p.probs(), q.probs());
}

}  // namespace guessing
