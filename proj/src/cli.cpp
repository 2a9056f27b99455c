#include "guessing/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "guessing/asymptotic.hpp"
#include "guessing/entropy.hpp"
#include "guessing/errors.hpp"
#include "guessing/kernels.hpp"
#include "guessing/limits.hpp"
#include "guessing/oracle.hpp"
#include "guessing/serialize.hpp"
#include "guessing/source_model.hpp"
#include "guessing/strategy.hpp"
#include "guessing/suites.hpp"

namespace guessing::cli {
namespace {

struct Options {
  std::string format = "json";
  std::string file;
  double alpha = 1.0;
  double rho = 1.0;
  double eps = 0.0;
  bool conditional = false;
  bool side_info = false;
  bool oracle = false;
  bool all_strategies = false;
  bool assert_mode = false;
  std::optional<std::string> out_path;
  std::optional<double> budget;
  double tol = 1e-9;
  int grid = 200;
  std::vector<double> rhos;
  int nmax = 1;
  double alpha_probe = 0.999;
  std::string suite;
  std::size_t trials = 10000;
  std::size_t mc = 0;
  std::uint64_t seed = 1;
};

struct Outcome {
  Json doc;
  int code = kExitOk;
  std::optional<std::string> csv;
};

GuessInstance single_view(const LoadedInstance& loaded) {
  if (const auto* s = std::get_if<GuessInstance>(&loaded)) return *s;
  return std::get<JointGuessInstance>(loaded).marginal();
}

const JointGuessInstance& joint_view(const LoadedInstance& loaded, const std::string& flag) {
  const auto* j = std::get_if<JointGuessInstance>(&loaded);
  if (j == nullptr) throw InputError(flag, "requires an instance with side information");
  return *j;
}

Json labels(const Alphabet& a, std::span<const std::size_t> idx) {
  Json out = Json::array();
  for (auto i : idx) out.push_back(i == kernels::kNoSymbol ? Json(nullptr) : Json(a.label(i)));
  return out;
}

Outcome cmd_validate(const LoadedInstance& loaded) {
  Json j;
  j["valid"] = true;
  if (const auto* s = std::get_if<GuessInstance>(&loaded)) {
    j["kind"] = "single";
    j["x"] = s->source_size();
    j["xhat"] = s->reproduction_size();
    j["y"] = nullptr;
    j["D"] = number(s->budget());
    j["exact"] = s->pmf().exact().has_value();
  } else {
    const auto& jt = std::get<JointGuessInstance>(loaded);
    j["kind"] = "joint";
    j["x"] = jt.joint().x_alphabet().size();
    j["xhat"] = jt.reproduction().size();
    j["y"] = jt.joint().y_alphabet().size();
    j["D"] = number(jt.budget());
    j["exact"] = jt.joint().exact().has_value();
  }
  return {std::move(j)};
}

Outcome cmd_entropy(const LoadedInstance& loaded, const Options& o) {
  Json j;
  j["alpha"] = number(o.alpha);
  if (o.conditional) {
    const auto& jt = joint_view(loaded, "conditional");
    j["kind"] = "arimoto_conditional";
    j["bits"] = number(arimoto_conditional_entropy(jt.joint(), o.alpha).bits);
  } else {
    j["kind"] = "renyi";
    j["bits"] = number(renyi_entropy(single_view(loaded).pmf(), o.alpha).bits);
  }
  return {std::move(j)};
}

Outcome cmd_strategy(const LoadedInstance& loaded, const Options& o) {
  Json j;
  if (const auto* jt = std::get_if<JointGuessInstance>(&loaded)) {
    const auto cover = side_info_cover(*jt, o.eps);
    j["eps"] = number(o.eps);
    Json per_y = Json::array();
    for (std::size_t y = 0; y < cover.per_y.size(); ++y) {
      Json row;
      row["y"] = jt->joint().y_alphabet().label(y);
      row["cover"] = cover.per_y[y] ? to_json(*cover.per_y[y], jt->slice(y), o.eps) : Json(nullptr);
      per_y.push_back(std::move(row));
    }
    j["per_y"] = std::move(per_y);
  } else {
    const auto& inst = std::get<GuessInstance>(loaded);
    j = to_json(greedy_cover(inst, o.eps), inst, o.eps);
  }
  if (o.out_path) {
    std::ofstream f(*o.out_path);
    if (!f) throw InputError("out", "cannot write " + *o.out_path);
    f << j.dump(2) << '\n';
  }
  return {std::move(j)};
}

Outcome cmd_moment(const LoadedInstance& loaded, const Options& o) {
  Json j;
  if (o.side_info) {
    const auto& jt = joint_view(loaded, "side-info");
    if (o.mc > 0) throw InputError("mc", "Monte Carlo runs on instances without side information");
    const auto report = side_info_moment(side_info_cover(jt, o.eps).strategy(), jt, o.rho);
    const auto& xs = jt.joint().x_alphabet();
    const auto& ys = jt.joint().y_alphabet();
    j["rho"] = number(report.rho);
    j["moment"] = number(report.moment);
    j["moment_log"] = number(report.moment_log);
    j["error_mass"] = number(report.error_mass);
    Json idx = Json::object();
    for (std::size_t x = 0; x < xs.size(); ++x) {
      for (std::size_t y = 0; y < ys.size(); ++y) {
        const auto& g = report.per_symbol_index[x * ys.size() + y];
        idx[xs.label(x) + "|" + ys.label(y)] = g ? Json(*g) : Json(nullptr);
      }
    }
    j["per_symbol_index"] = std::move(idx);
    return {std::move(j)};
  }
  const auto inst = single_view(loaded);
  const auto strategy = greedy_cover(inst, o.eps).strategy;
  j = to_json(moment(strategy, inst, o.rho), inst);
  if (o.mc > 0) j["monte_carlo"] = to_json(monte_carlo_moment(strategy, inst, o.rho, o.mc, o.seed));
  return {std::move(j)};
}

Outcome cmd_functional(const LoadedInstance& loaded, const Options& o) {
  const auto inst = single_view(loaded);
  Json j;
  j["alpha"] = number(o.alpha);
  j["eps"] = number(o.eps);
  j["greedy"] = number(guess_functional(inst, o.alpha, o.eps, FunctionalMethod::greedy));
  if (o.oracle) {
    const auto r = kernels::min_pushforward(inst, o.alpha, o.eps, Exec::parallel);
    j["oracle"] = number(r.bits);
    j["oracle_map"] = labels(inst.reproduction(), r.map);
    j["explored"] = r.explored;
  } else {
    j["oracle"] = nullptr;
    j["oracle_map"] = nullptr;
    j["explored"] = nullptr;
  }
  return {std::move(j)};
}

Outcome cmd_bounds(const LoadedInstance& loaded, const Options& o) {
  BoundOptions opts;
  opts.oracle = true;
  opts.require_oracle = o.oracle;
  opts.all_strategies = o.all_strategies;
  BoundReport report;
  if (o.side_info) {
    report = bounds_report(joint_view(loaded, "side-info"), o.rho, o.eps, opts);
  } else {
    report = bounds_report(single_view(loaded), o.rho, o.eps, std::nullopt, opts);
  }
  Outcome out{to_json(report)};
  out.doc["all_hold"] = report.all_hold();
  if (o.assert_mode && !report.all_hold()) out.code = kExitViolation;
  return out;
}

Outcome cmd_rd(const LoadedInstance& loaded, const Options& o) {
  const auto inst = single_view(loaded);
  const double budget = o.budget.value_or(inst.budget());
  return {to_json(blahut_arimoto(inst.pmf(), inst.distortion(), budget, o.tol), inst.distortion(),
                  budget)};
}

Outcome cmd_exponent(const LoadedInstance& loaded, const Options& o) {
  const auto inst = single_view(loaded);
  const double budget = o.budget.value_or(inst.budget());
  Json j;
  j["rho"] = number(o.rho);
  j["D"] = number(budget);
  const auto body =
      to_json(guessing_exponent(inst.pmf(), inst.distortion(), budget, o.rho, o.grid), inst.pmf());
  for (const auto& [k, v] : body.items()) j[k] = v;
  return {std::move(j)};
}

Outcome cmd_sweep(const LoadedInstance& loaded, const Options& o) {
  const auto table =
      blocklength_sweep(single_view(loaded), o.rhos, o.eps, o.nmax, o.alpha_probe);
  return {to_json(table), kExitOk, sweep_csv(table)};
}

Outcome cmd_verify(const LoadedInstance& loaded, const Options& o) {
  const auto inst = single_view(loaded);
  Outcome out;
  std::uint64_t violations = 0;
  if (o.suite == "majorization") {
    const auto s = majorization_suite(inst, o.rho);
    out.doc = to_json(s, inst);
    violations = s.violations;
  } else if (o.suite == "coverage") {
    const auto s = coverage_suite(inst);
    out.doc = to_json(s, inst);
    violations = s.violations;
  } else if (o.suite == "lemma3") {
    const auto masses = greedy_cover(inst, 0.0).partition.cell_masses;
    const auto s = lemma3_suite(o.trials, o.seed, masses);
    out.doc["suite"] = "lemma3";
    const auto body = to_json(s);
    for (const auto& [k, v] : body.items()) out.doc[k] = v;
    out.doc["seed"] = o.seed;
    violations = s.violations;
  } else {
    const auto s = schur_suite(o.trials, o.seed);
    out.doc["suite"] = "schur";
    const auto body = to_json(s);
    for (const auto& [k, v] : body.items()) out.doc[k] = v;
    out.doc["seed"] = o.seed;
    violations = s.violations;
  }
  if (o.assert_mode && violations > 0) out.code = kExitViolation;
  return out;
}

Outcome cmd_code(const LoadedInstance& loaded) {
  const auto inst = single_view(loaded);
  return {to_json(strategy_to_code(greedy_cover(inst, 0.0).partition), inst)};
}

void emit(const Outcome& r, const Options& o, std::ostream& out) {
  if (o.format == "csv") {
    if (r.csv) {
      out << *r.csv;
    } else if (r.doc.contains("entries")) {
      Json rows = r.doc;
      rows["rows"] = r.doc["entries"];
      out << json_to_csv(rows);
    } else {
      out << json_to_csv(r.doc);
    }
  } else {
    out << r.doc.dump(2) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"guessing subject to distortion"};
  app.require_subcommand(1);
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  auto file_arg = [&](CLI::App* sub) { sub->add_option("FILE", o.file, "instance JSON")->required(); };
  auto eps_opt = [&](CLI::App* sub) {
    sub->add_option("--eps", o.eps, "error budget in [0, 1)");
  };

  auto* validate = app.add_subcommand("validate", "check an instance file");
  file_arg(validate);

  auto* entropy = app.add_subcommand("entropy", "Renyi or Arimoto-Renyi entropy");
  file_arg(entropy);
  entropy->add_option("--alpha", o.alpha)->required();
  entropy->add_flag("--conditional", o.conditional);

  auto* strategy = app.add_subcommand("strategy", "greedy D-admissible strategy");
  file_arg(strategy);
  eps_opt(strategy);
  strategy->add_option("--out", o.out_path);

  auto* mom = app.add_subcommand("moment", "guessing moment of the greedy strategy");
  file_arg(mom);
  mom->add_option("--rho", o.rho)->required();
  eps_opt(mom);
  mom->add_flag("--side-info", o.side_info);
  auto* mc = mom->add_option("--mc", o.mc, "Monte Carlo draws");
  mom->add_option("--seed", o.seed)->needs(mc);

  auto* functional = app.add_subcommand("functional", "distortion-constrained Renyi functional");
  file_arg(functional);
  functional->add_option("--alpha", o.alpha)->required();
  eps_opt(functional);
  functional->add_flag("--oracle", o.oracle);

  auto* bounds = app.add_subcommand("bounds", "one-shot bound report");
  file_arg(bounds);
  bounds->add_option("--rho", o.rho)->required();
  eps_opt(bounds);
  bounds->add_flag("--oracle", o.oracle);
  bounds->add_flag("--all-strategies", o.all_strategies);
  bounds->add_flag("--side-info", o.side_info);
  bounds->add_flag("--assert", o.assert_mode);

  auto* rd = app.add_subcommand("rd", "rate-distortion function");
  file_arg(rd);
  rd->add_option("--D", o.budget);
  rd->add_option("--tol", o.tol);

  auto* exponent = app.add_subcommand("exponent", "guessing exponent");
  file_arg(exponent);
  exponent->add_option("--rho", o.rho)->required();
  exponent->add_option("--D", o.budget);
  exponent->add_option("--grid", o.grid);

  auto* sweep = app.add_subcommand("sweep", "blocklength sweep");
  file_arg(sweep);
  sweep->add_option("--rho", o.rhos)->required()->delimiter(',');
  sweep->add_option("--nmax", o.nmax)->required();
  eps_opt(sweep);
  sweep->add_option("--alpha-probe", o.alpha_probe);

  auto* verify = app.add_subcommand("verify", "property suites");
  file_arg(verify);
  verify->add_option("--suite", o.suite)
      ->required()
      ->check(CLI::IsMember({"majorization", "lemma3", "coverage", "schur"}));
  verify->add_option("--trials", o.trials);
  verify->add_option("--seed", o.seed);
  verify->add_option("--rho", o.rho);
  verify->add_flag("--assert", o.assert_mode);

  auto* code = app.add_subcommand("code", "index code of the greedy strategy");
  file_arg(code);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    const auto loaded = load_instance_file(o.file);
    Outcome r;
    if (validate->parsed()) r = cmd_validate(loaded);
    else if (entropy->parsed()) r = cmd_entropy(loaded, o);
    else if (strategy->parsed()) r = cmd_strategy(loaded, o);
    else if (mom->parsed()) r = cmd_moment(loaded, o);
    else if (functional->parsed()) r = cmd_functional(loaded, o);
    else if (bounds->parsed()) r = cmd_bounds(loaded, o);
    else if (rd->parsed()) r = cmd_rd(loaded, o);
    else if (exponent->parsed()) r = cmd_exponent(loaded, o);
    else if (sweep->parsed()) r = cmd_sweep(loaded, o);
    else if (verify->parsed()) r = cmd_verify(loaded, o);
    else r = cmd_code(loaded);
    emit(r, o, out);
    return r.code;
  } catch (const CapExceeded& e) {
    Json j;
    j["cap_hit"] = true;
    j["error"] = e.what();
    out << j.dump(2) << '\n';
    err << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace guessing::cli
