#include "guessing/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace guessing {
namespace {

Json labels(const Alphabet& a, const std::vector<std::size_t>& idx) {
  Json out = Json::array();
  for (auto i : idx) out.push_back(a.label(i));
  return out;
}

Json numbers(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }
Json optional_bool(const std::optional<bool>& v) { return v ? Json(*v) : Json(nullptr); }

std::string cell_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format12(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) s += ';';
      s += cell_text(v[i]);
    }
    return s;
  }
  return v.dump();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  out.emplace_back(prefix, cell_text(v));
}

std::string rho_key(double rho) { return "moment_log_rho_" + format12(rho); }

}  // namespace

std::string format12(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return std::strtod(format12(v).c_str(), nullptr);
}

Json to_json(const BoundReport& r) {
  Json j;
  j["rho"] = number(r.rho);
  j["alpha"] = number(r.alpha);
  j["eps"] = number(r.eps);
  j["strategy_origin"] = r.strategy_origin == StrategyOrigin::greedy ? "greedy" : "user";
  j["moment_log"] = number(r.moment_log);
  j["error_probability"] = number(r.error_probability);
  j["greedy_functional"] = number(r.greedy_functional);
  j["oracle_functional"] = optional_number(r.oracle_functional);
  j["converse_slack"] = number(r.converse_slack);
  j["achievability_vs_greedy"] = r.achievability_vs_greedy;
  j["achievability_vs_oracle"] = optional_bool(r.achievability_vs_oracle);
  j["converse_vs_oracle"] = optional_bool(r.converse_vs_oracle);
  j["functional_gap"] = optional_number(r.functional_gap);
  j["min_strategy_moment_log"] = optional_number(r.min_strategy_moment_log);
  j["converse_all_strategies"] = optional_bool(r.converse_all_strategies);
  return j;
}

Json to_json(const GuessReport& r, const GuessInstance& inst) {
  Json j;
  j["rho"] = number(r.rho);
  j["moment"] = number(r.moment);
  j["moment_log"] = number(r.moment_log);
  j["error_mass"] = number(r.error_mass);
  Json idx = Json::object();
  for (std::size_t x = 0; x < r.per_symbol_index.size(); ++x) {
    const auto& g = r.per_symbol_index[x];
    idx[inst.pmf().alphabet().label(x)] = g ? Json(*g) : Json(nullptr);
  }
  j["per_symbol_index"] = std::move(idx);
  return j;
}

Json to_json(const GreedyCover& cover, const GuessInstance& inst, double eps) {
  const auto& part = cover.partition;
  Json j;
  j["eps"] = number(eps);
  j["tau"] = part.tau();
  j["codewords"] = labels(inst.reproduction(), part.codewords);
  Json cells = Json::array();
  for (std::size_t i = 0; i < part.tau(); ++i) {
    Json c;
    c["codeword"] = inst.reproduction().label(part.codewords[i]);
    c["mass"] = number(part.cell_masses[i]);
    c["members"] = labels(inst.pmf().alphabet(), part.cells[i]);
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  j["uncovered_mass"] = number(part.uncovered_mass);
  j["error_probability"] = number(error_probability(cover.strategy, inst));
  return j;
}

Json to_json(const RDResult& r, const DistortionMeasure& d, double budget) {
  Json j;
  j["D"] = number(budget);
  j["rate"] = number(r.rate);
  j["distortion"] = number(r.distortion);
  j["multiplier"] = number(r.multiplier);
  j["iterations"] = r.iterations;
  j["convergence_gap"] = number(r.convergence_gap);
  j["converged"] = r.converged;
  Json rows = Json::array();
  for (std::size_t x = 0; x < d.rows(); ++x) {
    rows.push_back(numbers(std::span(r.channel).subspan(x * d.cols(), d.cols())));
  }
  j["channel"] = std::move(rows);
  return j;
}

Json to_json(const ExponentResult& r, const Pmf& p) {
  Json j;
  j["value"] = number(r.value);
  Json q = Json::object();
  for (std::size_t i = 0; i < r.argmax.size(); ++i) q[p.alphabet().label(i)] = number(r.argmax[i]);
  j["argmax"] = std::move(q);
  j["grid_resolution"] = r.grid_resolution;
  j["refinement_steps"] = r.refinement_steps;
  return j;
}

Json to_json(const SweepTable& t) {
  Json j;
  j["eps"] = number(t.eps);
  j["alpha_probe"] = number(t.alpha_probe);
  j["rhos"] = numbers(t.rhos);
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r;
    r["n"] = row.n;
    r["functional"] = number(row.functional);
    for (std::size_t i = 0; i < t.rhos.size(); ++i) r[rho_key(t.rhos[i])] = number(row.moment_log[i]);
    r["target"] = number(row.target);
    r["gap"] = number(row.gap);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const CodeTable& t, const GuessInstance& inst) {
  Json j;
  j["tau"] = t.size();
  Json entries = Json::array();
  for (const auto& e : t) {
    Json row;
    row["cell"] = e.cell;
    row["word"] = e.word;
    row["length"] = e.length;
    row["codeword"] = inst.reproduction().label(e.codeword);
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const MonteCarloEstimate& m) {
  Json j;
  j["estimate"] = number(m.estimate);
  j["stderr"] = number(m.stderr_);
  j["error_fraction"] = number(m.error_fraction);
  j["draws"] = m.draws;
  j["seed"] = m.seed;
  return j;
}

Json to_json(const StrategySearchResult& r, const GuessInstance& inst) {
  Json j;
  j["best_value"] = number(r.best_value);
  j["best_moment_log"] = number(r.best_moment_log);
  j["witness"] = labels(inst.reproduction(), r.witness);
  j["greedy_moment"] = number(r.greedy_moment);
  j["explored"] = r.explored;
  j["cap_hit"] = r.cap_hit;
  return j;
}

Json to_json(const CoverageSuite& s, const GuessInstance& inst) {
  Json j;
  j["suite"] = "coverage";
  j["checked"] = s.rows.size();
  j["violations"] = s.violations;
  j["greedy_suboptimal"] = s.greedy_suboptimal;
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json row;
    row["k"] = r.k;
    row["optimal"] = number(r.optimal);
    row["greedy_prefix"] = number(r.greedy_prefix);
    row["witness"] = labels(inst.reproduction(), r.witness);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const MajorizationSuite& s, const GuessInstance& inst) {
  Json j;
  j["suite"] = "majorization";
  j["checked"] = s.checked;
  j["violations"] = s.violations;
  j["moment_inversions"] = s.moment_inversions;
  j["greedy_masses"] = numbers(s.greedy_masses);
  if (s.first_violation) {
    Json v;
    v["strategy"] = labels(inst.reproduction(), *s.first_violation);
    v["masses"] = numbers(s.first_violation_masses);
    j["first_violation"] = std::move(v);
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

Json to_json(const RandomSuite& s) {
  Json j;
  j["checked"] = s.checked;
  j["violations"] = s.violations;
  j["worst_margin"] = number(s.worst_margin);
  return j;
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream out;
  out << "n,functional";
  for (double rho : t.rhos) out << ',' << rho_key(rho);
  out << ",target,gap\n";
  for (const auto& row : t.rows) {
    out << row.n << ',' << format12(row.functional);
    for (double v : row.moment_log) out << ',' << format12(v);
    out << ',' << format12(row.target) << ',' << format12(row.gap) << '\n';
  }
  return out.str();
}

std::string json_to_csv(const Json& doc) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  if (doc.is_object() && doc.contains("rows") && doc["rows"].is_array()) {
    for (const auto& r : doc["rows"]) {
      rows.emplace_back();
      flatten(r, "", rows.back());
    }
  } else {
    rows.emplace_back();
    flatten(doc, "", rows.back());
  }
  std::ostringstream out;
  if (rows.empty()) return "";
  for (std::size_t i = 0; i < rows.front().size(); ++i) {
    if (i > 0) out << ',';
    out << quote(rows.front()[i].first);
  }
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) out << ',';
      out << quote(r[i].second);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace guessing
