#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace guessing {

using Rational = boost::multiprecision::cpp_rational;

/// Absolute tolerance for probability sums and distortion comparisons.
inline constexpr double kTolerance = 1e-12;

/// Default cap on |X|^n and |Xhat|^n for product extension.
inline constexpr std::size_t kDefaultProductCap = 4096;

/// Ordered list of distinct labels; position is the canonical symbol index.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& label(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> symbols_;
};

/// Finite distribution over an alphabet. When built from rational strings the
/// exact values are retained alongside the binary64 ones.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> probs);
  static Pmf from_exact(Alphabet alphabet, std::vector<Rational> probs);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  const std::optional<std::vector<Rational>>& exact() const noexcept { return exact_; }

 private:
  Pmf(Alphabet alphabet, std::vector<double> probs,
      std::optional<std::vector<Rational>> exact);

  Alphabet alphabet_;
  std::vector<double> probs_;
  std::optional<std::vector<Rational>> exact_;
};

/// Joint distribution P_XY, stored row-major as [x][y].
class JointPmf {
 public:
  JointPmf(Alphabet x_alphabet, Alphabet y_alphabet, std::vector<double> probs);
  static JointPmf from_exact(Alphabet x_alphabet, Alphabet y_alphabet,
                             std::vector<Rational> probs);

  const Alphabet& x_alphabet() const noexcept { return x_; }
  const Alphabet& y_alphabet() const noexcept { return y_; }
  double at(std::size_t x, std::size_t y) const { return probs_[x * y_.size() + y]; }
  std::span<const double> probs() const noexcept { return probs_; }
  const std::optional<std::vector<Rational>>& exact() const noexcept { return exact_; }

  Pmf marginal_x() const;
  Pmf marginal_y() const;

 private:
  JointPmf(Alphabet x_alphabet, Alphabet y_alphabet, std::vector<double> probs,
           std::optional<std::vector<Rational>> exact);

  Alphabet x_;
  Alphabet y_;
  std::vector<double> probs_;
  std::optional<std::vector<Rational>> exact_;
};

/// d(x, xhat) as a |X| x |Xhat| matrix. Every row holds at least one zero.
class DistortionMeasure {
 public:
  DistortionMeasure(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t x, std::size_t xhat) const { return values_[x * cols_ + xhat]; }
  double max_entry() const;

  static DistortionMeasure hamming(std::size_t size);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// P_X together with the reproduction alphabet, d and the budget D.
class GuessInstance {
 public:
  GuessInstance(Pmf pmf, Alphabet reproduction, DistortionMeasure distortion, double budget);

  const Pmf& pmf() const noexcept { return pmf_; }
  const Alphabet& reproduction() const noexcept { return reproduction_; }
  const DistortionMeasure& distortion() const noexcept { return distortion_; }
  double budget() const noexcept { return budget_; }

  std::size_t source_size() const noexcept { return pmf_.size(); }
  std::size_t reproduction_size() const noexcept { return reproduction_.size(); }

  /// d(x, xhat) <= D, compared with absolute tolerance kTolerance.
  bool within_budget(std::size_t x, std::size_t xhat) const {
    return distortion_(x, xhat) <= budget_ + kTolerance;
  }

 private:
  Pmf pmf_;
  Alphabet reproduction_;
  DistortionMeasure distortion_;
  double budget_;
};

/// Source with side information: P_XY, reproduction alphabet, d, D.
class JointGuessInstance {
 public:
  JointGuessInstance(JointPmf joint, Alphabet reproduction, DistortionMeasure distortion,
                     double budget);

  const JointPmf& joint() const noexcept { return joint_; }
  const Alphabet& reproduction() const noexcept { return reproduction_; }
  const DistortionMeasure& distortion() const noexcept { return distortion_; }
  double budget() const noexcept { return budget_; }

  /// Instance for P_{X|Y=y}; requires P_Y(y) > 0.
  GuessInstance slice(std::size_t y) const;
  /// Instance for the X marginal, ignoring Y.
  GuessInstance marginal() const;

 private:
  JointPmf joint_;
  Alphabet reproduction_;
  DistortionMeasure distortion_;
  double budget_;
};

/// Blocklength-n extension: product pmf, additive distortion, budget n*D.
struct ProductInstance {
  GuessInstance base;
  int n;
  GuessInstance product;
};

using LoadedInstance = std::variant<GuessInstance, JointGuessInstance>;

/// Parses and validates an instance document (JSON). Throws InputError.
LoadedInstance load_instance(std::string_view text);
LoadedInstance load_instance_file(const std::filesystem::path& path);

/// Throws CapExceeded when |X|^n or |Xhat|^n exceeds `cap`.
ProductInstance product_extend(const GuessInstance& inst, int n,
                               std::size_t cap = kDefaultProductCap);

/// P_{X|Y=y}. Throws InputError when P_Y(y) = 0.
Pmf conditional_slice(const JointPmf& joint, std::size_t y);
Pmf conditional_slice(const JointPmf& joint, std::string_view y_label);

}  // namespace guessing
