#pragma once

#include <string>

#include <json.hpp>

#include "guessing/asymptotic.hpp"
#include "guessing/limits.hpp"
#include "guessing/oracle.hpp"
#include "guessing/source_model.hpp"
#include "guessing/strategy.hpp"
#include "guessing/suites.hpp"

namespace guessing {

using Json = nlohmann::ordered_json;

/// Number rounded to 12 significant digits; +-inf become "inf"/"-inf".
Json number(double v);
std::string format12(double v);

Json to_json(const BoundReport& r);
Json to_json(const GuessReport& r, const GuessInstance& inst);
Json to_json(const GreedyCover& cover, const GuessInstance& inst, double eps);
Json to_json(const RDResult& r, const DistortionMeasure& d, double budget);
Json to_json(const ExponentResult& r, const Pmf& p);
Json to_json(const SweepTable& t);
Json to_json(const CodeTable& t, const GuessInstance& inst);
Json to_json(const MonteCarloEstimate& m);
Json to_json(const StrategySearchResult& r, const GuessInstance& inst);
Json to_json(const CoverageSuite& s, const GuessInstance& inst);
Json to_json(const MajorizationSuite& s, const GuessInstance& inst);
Json to_json(const RandomSuite& s);

/// Sweep CSV: header n,functional,moment_log_rho_<rho>...,target,gap.
std::string sweep_csv(const SweepTable& t);

/// CSV for a flat object (one row) or an object carrying a "rows" array.
/// Nested objects flatten to dotted keys; arrays join with ';'.
std::string json_to_csv(const Json& doc);

}  // namespace guessing
