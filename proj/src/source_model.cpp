#include "guessing/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "guessing/errors.hpp"

namespace guessing {
namespace {

using Json = nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string at_index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void check_probabilities(std::span<const double> probs, const std::string& path,
                         const std::string& what) {
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!std::isfinite(p)) throw InputError(at_index(path, i), "probability is not finite");
    if (p < 0.0) throw InputError(at_index(path, i), "negative probability " + format_number(p));
    total += p;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw InputError(path, what + " sums to " + format_number(total));
  }
}

std::vector<double> to_doubles(const std::vector<Rational>& exact) {
  std::vector<double> out;
  out.reserve(exact.size());
  for (const auto& r : exact) out.push_back(r.convert_to<double>());
  return out;
}

// A probability entry: JSON number, or a string holding "p/q", an integer, or
// a decimal. Integers and "p/q" keep an exact value.
struct Entry {
  double value;
  std::optional<Rational> exact;
};

boost::multiprecision::cpp_int parse_integer(const std::string& s, const std::string& path) {
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size() ||
      !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; })) {
    throw InputError(path, "malformed rational \"" + s + "\"");
  }
  boost::multiprecision::cpp_int v(s.substr(start));
  return s[0] == '-' ? boost::multiprecision::cpp_int(-v) : v;
}

Entry parse_entry(const Json& j, const std::string& path) {
  if (j.is_number_integer() || j.is_number_unsigned()) {
    Rational r(j.get<long long>());
    return {r.convert_to<double>(), r};
  }
  if (j.is_number_float()) return {j.get<double>(), std::nullopt};
  if (!j.is_string()) throw InputError(path, "expected a number or a \"p/q\" string");

  const auto s = j.get<std::string>();
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    auto num = parse_integer(s.substr(0, slash), path);
    auto den = parse_integer(s.substr(slash + 1), path);
    if (den == 0) throw InputError(path, "zero denominator in \"" + s + "\"");
    Rational r(num, den);
    return {r.convert_to<double>(), r};
  }
  if (!s.empty() && s.find_first_of(".eE") == std::string::npos) {
    Rational r(parse_integer(s, path));
    return {r.convert_to<double>(), r};
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError(path, "malformed number \"" + s + "\"");
  }
  if (used != s.size()) throw InputError(path, "malformed number \"" + s + "\"");
  return {v, std::nullopt};
}

Alphabet parse_alphabet(const Json& doc, const char* key) {
  const auto& j = doc.at(key);
  if (!j.is_array()) throw InputError(key, "expected an array of labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw InputError(at_index(key, i), "label must be a string");
    labels.push_back(j[i].get<std::string>());
  }
  try {
    return Alphabet(std::move(labels));
  } catch (const InputError& e) {
    throw InputError(key, e.what());
  }
}

double parse_budget(const Json& doc) {
  const auto& j = doc.at("D");
  if (!j.is_number()) throw InputError("D", "expected a number");
  const double d = j.get<double>();
  if (!std::isfinite(d) || d < 0.0) throw InputError("D", "budget must be finite and >= 0");
  return d;
}

DistortionMeasure parse_distortion(const Json& doc, std::size_t rows, std::size_t cols) {
  const auto& j = doc.at("distortion");
  if (!j.is_array() || j.size() != rows) {
    throw InputError("distortion", "expected " + std::to_string(rows) + " rows (one per x)");
  }
  std::vector<double> values;
  values.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    const auto rpath = at_index("distortion", r);
    if (!row.is_array() || row.size() != cols) {
      throw InputError(rpath, "expected " + std::to_string(cols) + " entries (one per xhat)");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw InputError(at_index(rpath, c), "expected a number");
      values.push_back(row[c].get<double>());
    }
  }
  try {
    return DistortionMeasure(rows, cols, std::move(values));
  } catch (const InputError& e) {
    throw InputError(e.path().empty() ? "distortion" : "distortion" + e.path(), e.what());
  }
}

void reject_unknown(const Json& doc, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : doc.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InputError(key, "unknown field");
    }
  }
  for (const char* a : allowed) {
    if (!doc.contains(a)) throw InputError(a, "missing required field");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InputError("", "alphabet must be nonempty");
  std::set<std::string_view> seen;
  for (const auto& s : symbols_) {
    if (!seen.insert(s).second) throw InputError("", "duplicate label \"" + s + "\"");
  }
}

std::optional<std::size_t> Alphabet::index_of(std::string_view label) const {
  const auto it = std::find(symbols_.begin(), symbols_.end(), label);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - symbols_.begin());
}

Pmf::Pmf(Alphabet alphabet, std::vector<double> probs)
    : Pmf(std::move(alphabet), std::move(probs), std::nullopt) {}

Pmf::Pmf(Alphabet alphabet, std::vector<double> probs, std::optional<std::vector<Rational>> exact)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)), exact_(std::move(exact)) {
  if (probs_.size() != alphabet_.size()) {
    throw InputError("pmf", "expected " + std::to_string(alphabet_.size()) + " probabilities");
  }
  check_probabilities(probs_, "pmf", "pmf");
}

Pmf Pmf::from_exact(Alphabet alphabet, std::vector<Rational> probs) {
  auto doubles = to_doubles(probs);
  return Pmf(std::move(alphabet), std::move(doubles), std::move(probs));
}

JointPmf::JointPmf(Alphabet x_alphabet, Alphabet y_alphabet, std::vector<double> probs)
    : JointPmf(std::move(x_alphabet), std::move(y_alphabet), std::move(probs), std::nullopt) {}

JointPmf::JointPmf(Alphabet x_alphabet, Alphabet y_alphabet, std::vector<double> probs,
                   std::optional<std::vector<Rational>> exact)
    : x_(std::move(x_alphabet)),
      y_(std::move(y_alphabet)),
      probs_(std::move(probs)),
      exact_(std::move(exact)) {
  if (probs_.size() != x_.size() * y_.size()) {
    throw InputError("joint_pmf", "expected a " + std::to_string(x_.size()) + " x " +
                                      std::to_string(y_.size()) + " matrix");
  }
  check_probabilities(probs_, "joint_pmf", "joint_pmf");
}

JointPmf JointPmf::from_exact(Alphabet x_alphabet, Alphabet y_alphabet,
                              std::vector<Rational> probs) {
  auto doubles = to_doubles(probs);
  return JointPmf(std::move(x_alphabet), std::move(y_alphabet), std::move(doubles),
                  std::move(probs));
}

Pmf JointPmf::marginal_x() const {
  if (exact_) {
    std::vector<Rational> m(x_.size());
    for (std::size_t x = 0; x < x_.size(); ++x)
      for (std::size_t y = 0; y < y_.size(); ++y) m[x] += (*exact_)[x * y_.size() + y];
    return Pmf::from_exact(x_, std::move(m));
  }
  std::vector<double> m(x_.size(), 0.0);
  for (std::size_t x = 0; x < x_.size(); ++x)
    for (std::size_t y = 0; y < y_.size(); ++y) m[x] += at(x, y);
  return Pmf(x_, std::move(m));
}

Pmf JointPmf::marginal_y() const {
  if (exact_) {
    std::vector<Rational> m(y_.size());
    for (std::size_t x = 0; x < x_.size(); ++x)
      for (std::size_t y = 0; y < y_.size(); ++y) m[y] += (*exact_)[x * y_.size() + y];
    return Pmf::from_exact(y_, std::move(m));
  }
  std::vector<double> m(y_.size(), 0.0);
  for (std::size_t x = 0; x < x_.size(); ++x)
    for (std::size_t y = 0; y < y_.size(); ++y) m[y] += at(x, y);
  return Pmf(y_, std::move(m));
}

DistortionMeasure::DistortionMeasure(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) throw InputError("", "distortion matrix has wrong size");
  for (std::size_t r = 0; r < rows_; ++r) {
    bool has_zero = false;
    for (std::size_t c = 0; c < cols_; ++c) {
      const double v = values_[r * cols_ + c];
      if (!std::isfinite(v) || v < 0.0) {
        throw InputError("[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                         "distortion entries must be finite and >= 0");
      }
      has_zero = has_zero || v == 0.0;
    }
    if (!has_zero) {
      throw InputError("[" + std::to_string(r) + "]",
                       "row " + std::to_string(r + 1) + " violates zero-distortion assumption");
    }
  }
}

double DistortionMeasure::max_entry() const {
  return *std::max_element(values_.begin(), values_.end());
}

DistortionMeasure DistortionMeasure::hamming(std::size_t size) {
  std::vector<double> v(size * size, 1.0);
  for (std::size_t i = 0; i < size; ++i) v[i * size + i] = 0.0;
  return DistortionMeasure(size, size, std::move(v));
}

GuessInstance::GuessInstance(Pmf pmf, Alphabet reproduction, DistortionMeasure distortion,
                             double budget)
    : pmf_(std::move(pmf)),
      reproduction_(std::move(reproduction)),
      distortion_(std::move(distortion)),
      budget_(budget) {
  if (distortion_.rows() != pmf_.size() || distortion_.cols() != reproduction_.size()) {
    throw InputError("distortion", "matrix dimensions do not match the alphabets");
  }
  if (!std::isfinite(budget_) || budget_ < 0.0) throw InputError("D", "budget must be >= 0");
}

JointGuessInstance::JointGuessInstance(JointPmf joint, Alphabet reproduction,
                                       DistortionMeasure distortion, double budget)
    : joint_(std::move(joint)),
      reproduction_(std::move(reproduction)),
      distortion_(std::move(distortion)),
      budget_(budget) {
  if (distortion_.rows() != joint_.x_alphabet().size() ||
      distortion_.cols() != reproduction_.size()) {
    throw InputError("distortion", "matrix dimensions do not match the alphabets");
  }
  if (!std::isfinite(budget_) || budget_ < 0.0) throw InputError("D", "budget must be >= 0");
}

GuessInstance JointGuessInstance::slice(std::size_t y) const {
  return GuessInstance(conditional_slice(joint_, y), reproduction_, distortion_, budget_);
}

GuessInstance JointGuessInstance::marginal() const {
  return GuessInstance(joint_.marginal_x(), reproduction_, distortion_, budget_);
}

// ---------------------------------------------------------------------------

LoadedInstance load_instance(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("", "instance document must be a JSON object");

  const bool joint = doc.contains("joint_pmf") || doc.contains("y");
  if (joint) {
    reject_unknown(doc, {"x", "xhat", "y", "joint_pmf", "distortion", "D"});
  } else {
    reject_unknown(doc, {"x", "xhat", "pmf", "distortion", "D"});
  }

  auto x = parse_alphabet(doc, "x");
  auto xhat = parse_alphabet(doc, "xhat");
  const double budget = parse_budget(doc);

  if (!joint) {
    const auto& j = doc.at("pmf");
    if (!j.is_array() || j.size() != x.size()) {
      throw InputError("pmf", "expected " + std::to_string(x.size()) + " probabilities");
    }
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < j.size(); ++i) entries.push_back(parse_entry(j[i], at_index("pmf", i)));
    const bool exact = std::all_of(entries.begin(), entries.end(),
                                   [](const Entry& e) { return e.exact.has_value(); });
    auto distortion = parse_distortion(doc, x.size(), xhat.size());
    if (exact) {
      std::vector<Rational> r;
      for (auto& e : entries) r.push_back(*e.exact);
      return GuessInstance(Pmf::from_exact(std::move(x), std::move(r)), std::move(xhat),
                           std::move(distortion), budget);
    }
    std::vector<double> p;
    for (auto& e : entries) p.push_back(e.value);
    return GuessInstance(Pmf(std::move(x), std::move(p)), std::move(xhat), std::move(distortion),
                         budget);
  }

  auto y = parse_alphabet(doc, "y");
  const auto& j = doc.at("joint_pmf");
  if (!j.is_array() || j.size() != x.size()) {
    throw InputError("joint_pmf", "expected " + std::to_string(x.size()) + " rows (one per x)");
  }
  std::vector<Entry> entries;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto rpath = at_index("joint_pmf", r);
    if (!j[r].is_array() || j[r].size() != y.size()) {
      throw InputError(rpath, "expected " + std::to_string(y.size()) + " entries (one per y)");
    }
    for (std::size_t c = 0; c < y.size(); ++c) entries.push_back(parse_entry(j[r][c], at_index(rpath, c)));
  }
  const bool exact = std::all_of(entries.begin(), entries.end(),
                                 [](const Entry& e) { return e.exact.has_value(); });
  auto distortion = parse_distortion(doc, x.size(), xhat.size());
  if (exact) {
    std::vector<Rational> r;
    for (auto& e : entries) r.push_back(*e.exact);
    return JointGuessInstance(JointPmf::from_exact(std::move(x), std::move(y), std::move(r)),
                              std::move(xhat), std::move(distortion), budget);
  }
  std::vector<double> p;
  for (auto& e : entries) p.push_back(e.value);
  return JointGuessInstance(JointPmf(std::move(x), std::move(y), std::move(p)), std::move(xhat),
                            std::move(distortion), budget);
}

LoadedInstance load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

// ---------------------------------------------------------------------------

namespace {

std::size_t checked_power(std::size_t base, int n, std::size_t cap, const char* what) {
  std::size_t v = 1;
  for (int i = 0; i < n; ++i) {
    if (v > cap / base) {
      throw CapExceeded(std::string(what) + " alphabet size " + std::to_string(base) + "^" +
                        std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap));
    }
    v *= base;
  }
  return v;
}

// Index digits of a product symbol, most significant coordinate first.
std::vector<std::size_t> digits(std::size_t index, std::size_t base, int n) {
  std::vector<std::size_t> d(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = index % base;
    index /= base;
  }
  return d;
}

Alphabet product_alphabet(const Alphabet& base, int n, std::size_t count) {
  const bool single_char = std::all_of(base.symbols().begin(), base.symbols().end(),
                                       [](const std::string& s) { return s.size() == 1; });
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string label;
    const auto d = digits(i, base.size(), n);
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (k > 0 && !single_char) label += ',';
      label += base.label(d[k]);
    }
    labels.push_back(std::move(label));
  }
  return Alphabet(std::move(labels));
}

}  // namespace

ProductInstance product_extend(const GuessInstance& inst, int n, std::size_t cap) {
  if (n < 1) throw InputError("n", "blocklength must be positive");
  const std::size_t nx = inst.source_size();
  const std::size_t ny = inst.reproduction_size();
  const std::size_t px = checked_power(nx, n, cap, "source");
  const std::size_t py = checked_power(ny, n, cap, "reproduction");

  auto x_alpha = product_alphabet(inst.pmf().alphabet(), n, px);
  auto y_alpha = product_alphabet(inst.reproduction(), n, py);

  std::vector<std::vector<std::size_t>> xd(px), yd(py);
  for (std::size_t i = 0; i < px; ++i) xd[i] = digits(i, nx, n);
  for (std::size_t j = 0; j < py; ++j) yd[j] = digits(j, ny, n);

  std::vector<double> dist(px * py);
  for (std::size_t i = 0; i < px; ++i) {
    for (std::size_t j = 0; j < py; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += inst.distortion()(xd[i][static_cast<std::size_t>(k)], yd[j][static_cast<std::size_t>(k)]);
      }
      dist[i * py + j] = s;
    }
  }
  DistortionMeasure distortion(px, py, std::move(dist));
  const double budget = static_cast<double>(n) * inst.budget();

  if (const auto& exact = inst.pmf().exact()) {
    std::vector<Rational> p(px);
    for (std::size_t i = 0; i < px; ++i) {
      Rational v = 1;
      for (auto s : xd[i]) v *= (*exact)[s];
      p[i] = v;
    }
    return {inst, n,
            GuessInstance(Pmf::from_exact(std::move(x_alpha), std::move(p)), std::move(y_alpha),
                          std::move(distortion), budget)};
  }
  std::vector<double> p(px);
  for (std::size_t i = 0; i < px; ++i) {
    double v = 1.0;
    for (auto s : xd[i]) v *= inst.pmf()[s];
    p[i] = v;
  }
  return {inst, n,
          GuessInstance(Pmf(std::move(x_alpha), std::move(p)), std::move(y_alpha),
                        std::move(distortion), budget)};
}

Pmf conditional_slice(const JointPmf& joint, std::size_t y) {
  const std::size_t nx = joint.x_alphabet().size();
  const std::size_t ny = joint.y_alphabet().size();
  if (y >= ny) throw InputError("y", "symbol index out of range");
  const auto path = "y[" + std::to_string(y) + "]";
  if (const auto& exact = joint.exact()) {
    Rational py = 0;
    for (std::size_t x = 0; x < nx; ++x) py += (*exact)[x * ny + y];
    if (py == 0) throw InputError(path, "P_Y(" + joint.y_alphabet().label(y) + ") = 0");
    std::vector<Rational> p(nx);
    for (std::size_t x = 0; x < nx; ++x) p[x] = (*exact)[x * ny + y] / py;
    return Pmf::from_exact(joint.x_alphabet(), std::move(p));
  }
  double py = 0.0;
  for (std::size_t x = 0; x < nx; ++x) py += joint.at(x, y);
  if (py <= 0.0) throw InputError(path, "P_Y(" + joint.y_alphabet().label(y) + ") = 0");
  std::vector<double> p(nx);
  for (std::size_t x = 0; x < nx; ++x) p[x] = joint.at(x, y) / py;
  return Pmf(joint.x_alphabet(), std::move(p));
}

Pmf conditional_slice(const JointPmf& joint, std::string_view y_label) {
  const auto y = joint.y_alphabet().index_of(y_label);
  if (!y) throw InputError("y", "unknown symbol \"" + std::string(y_label) + "\"");
  return conditional_slice(joint, *y);
}

}  // namespace guessing
