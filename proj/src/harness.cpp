// Copyright 2026 The qre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qre/harness.hpp"

#include "qre/divergences.hpp"
#include "qre/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qre {

namespace {

constexpr double kAgreementRelative = 1e-9;
constexpr double kAgreementAbsolute = 1e-12;
constexpr double kRoundTripLimit = 1e-6;

std::string num(double v) { return format_number(v); }

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::divergence:
      return "divergence";
    case Command::bounds:
      return "bounds";
    case Command::sweep:
      return "sweep";
    case Command::conjecture:
      return "conjecture";
    case Command::repr_check:
      return "repr-check";
    case Command::paper_example:
      return "paper-example";
  }
  return "unknown";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::divergence, Command::bounds, Command::sweep, Command::conjecture,
                    Command::repr_check, Command::paper_example}) {
    if (to_string(c) == s) return c;
  }
  throw UsageError("unknown command '" + s + "'");
}

PairKind parse_pair_kind(const std::string& s) {
  if (s == "random") return PairKind::random;
  if (s == "commuting") return PairKind::commuting;
  if (s == "mixed-rank2") return PairKind::mixed_rank2;
  throw UsageError("unknown pair kind '" + s + "' (expected random, commuting or mixed-rank2)");
}

namespace {

long parse_long(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("cannot parse " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("cannot parse " + what + " '" + s + "'");
  return v;
}

LogBase parse_log_base(const std::string& s) {
  if (s == "e") return LogBase::e;
  if (s == "2") return LogBase::two;
  throw UsageError("log base must be 'e' or '2', got '" + s + "'");
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw UsageError("format must be 'csv' or 'json', got '" + s + "'");
}

SearchStrategy parse_strategy(const std::string& s) {
  if (s == "random") return SearchStrategy::random;
  if (s == "hill_climb" || s == "hill-climb") return SearchStrategy::hill_climb;
  throw UsageError("strategy must be 'random' or 'hill_climb', got '" + s + "'");
}

std::vector<WeightForm> parse_forms(const std::string& s) {
  if (s == "general") return {WeightForm::general};
  if (s == "modular") return {WeightForm::modular};
  if (s == "both") return {WeightForm::general, WeightForm::modular};
  throw UsageError("form must be 'general', 'modular' or 'both', got '" + s + "'");
}

}  // namespace

std::vector<Eigen::Index> parse_dims(const std::string& s) {
  std::vector<Eigen::Index> out;
  const auto range = s.find("..");
  if (range != std::string::npos) {
    const long lo = parse_long(s.substr(0, range), "dims");
    const long hi = parse_long(s.substr(range + 2), "dims");
    if (lo > hi) throw UsageError("dims range '" + s + "' is empty");
    for (long d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_long(item, "dims"));
  if (out.empty()) throw UsageError("dims is empty");
  return out;
}

RunConfig apply_config_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "dims") {
        if (v.is_string()) {
          c.dims = parse_dims(v.get<std::string>());
        } else {
          c.dims = v.get<std::vector<Eigen::Index>>();
        }
      } else if (key == "trials") {
        c.trials = v.get<long>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "f") {
        c.f_specs = v.is_string() ? std::vector<std::string>{v.get<std::string>()}
                                  : v.get<std::vector<std::string>>();
      } else if (key == "q") {
        c.q = v.is_number() ? std::vector<double>{v.get<double>()} : v.get<std::vector<double>>();
      } else if (key == "log-base") {
        c.log_base = parse_log_base(v.is_string() ? v.get<std::string>()
                                                  : std::to_string(v.get<int>()));
      } else if (key == "out") {
        c.output_path = v.get<std::string>();
      } else if (key == "format") {
        c.format = parse_format(v.get<std::string>());
      } else if (key == "jobs") {
        c.jobs = v.get<unsigned>();
      } else if (key == "pair") {
        c.pair_path = v.get<std::string>();
      } else if (key == "kind") {
        c.kind = parse_pair_kind(v.get<std::string>());
      } else if (key == "strategy") {
        c.strategy = parse_strategy(v.get<std::string>());
      } else if (key == "form") {
        c.forms = parse_forms(v.get<std::string>());
      } else if (key == "step") {
        c.step = v.get<double>();
      } else if (key == "steps") {
        c.steps_per_restart = v.get<int>();
      } else if (key == "plateau") {
        c.plateau = v.get<int>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  return c;
}

namespace {

std::vector<Eigen::Index> effective_dims(const RunConfig& c) {
  if (!c.dims.empty()) return c.dims;
  switch (c.command) {
    case Command::conjecture:
      return {3, 4, 5, 6};
    case Command::paper_example:
      return parse_dims("5..12");
    default:
      return {c.kind == PairKind::mixed_rank2 ? Eigen::Index(3) : Eigen::Index(2)};
  }
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.trials < 1) throw UsageError("--trials must be >= 1");
  const auto dims = effective_dims(c);
  const Eigen::Index floor =
      (c.command == Command::paper_example || c.kind == PairKind::mixed_rank2) ? 3
      : c.command == Command::conjecture                                       ? 2
                                                                               : 1;
  for (Eigen::Index d : dims) {
    if (d < floor || d > 64) {
      throw UsageError("dimension " + std::to_string(d) + " out of range [" +
                       std::to_string(floor) + ", 64] for this command");
    }
  }
  if (c.command == Command::conjecture) {
    if (!(c.step > 0)) throw UsageError("--step must be > 0");
    if (c.steps_per_restart < 0) throw UsageError("--steps must be >= 0");
    if (c.plateau < 1) throw UsageError("--plateau must be >= 1");
    if (c.forms.empty()) throw UsageError("--form selects nothing");
  }
  try {
    (void)resolve_functions(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<OmdFunction> resolve_functions(const RunConfig& c) {
  std::vector<OmdFunction> out;
  for (const auto& s : c.f_specs) out.push_back(parse_function(s));
  for (double q : c.q) out.push_back(tsallis(q));
  if (!out.empty()) return out;
  if (c.command == Command::repr_check) {
    return {neg_log(), neg_power(0.25), neg_power(0.5), neg_power(0.75), tsallis(0.3),
            tsallis(1.5)};
  }
  return {neg_log(), neg_power(0.5), tsallis(0.3), tsallis(1.5)};
}

namespace {

// Minimal CSV/JSON table writer; JSON objects mirror the CSV header.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<nlohmann::json> row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& os, OutputFormat f) const {
    if (f == OutputFormat::csv) {
      for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
      os << '\n';
      for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
        os << '\n';
      }
      return;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows_) {
      nlohmann::json o = nlohmann::json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[columns_[i]] = r[i];
      arr.push_back(std::move(o));
    }
    os << arr.dump(2) << '\n';
  }

 private:
  static std::string cell(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_number(v.get<double>());
    return v.dump();
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<nlohmann::json>> rows_;
};

// Finite doubles as numbers, others as "inf"/"-inf"/"nan".
nlohmann::json jnum(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

unsigned jobs_of(const RunConfig& c) { return c.jobs == 0 ? default_jobs() : c.jobs; }

StatePair make_pair(PairKind kind, Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  switch (kind) {
    case PairKind::random:
      return random_pair(d, rng);
    case PairKind::commuting:
      return random_classical_pair(d, rng);
    case PairKind::mixed_rank2:
      return mixed_rank_two_pair(d);
  }
  throw std::logic_error("make_pair: unknown kind");
}

StatePair input_pair(const RunConfig& c) {
  if (!c.pair_path.empty()) return load_pair(c.pair_path);
  return make_pair(c.kind, effective_dims(c).front(), c.seed);
}

// Relative-entropy quantities in bits: every neg-log bound is linear in the
// logarithm, so the whole report scales by 1/ln 2.
void to_base_two(SandwichReport& rep) {
  const double k = 1.0 / std::log(2.0);
  rep.divergence.value *= k;
  rep.divergence.f_name += ":base=2";
  for (auto& b : rep.bounds) {
    b.value *= k;
    b.divergence *= k;
    b.slack *= k;
    b.f_name += ":base=2";
  }
}

SandwichReport sandwich_for(const StatePair& pair, const OmdFunction& f, LogBase base) {
  SandwichReport rep = sandwich(pair, f);
  if (base == LogBase::two && f.kind == OmdKind::neg_log) to_base_two(rep);
  return rep;
}

Table bound_table() {
  return Table({"dim", "seed", "pair_tag", "f_name", "q", "bound_name", "bound_value",
                "divergence", "slack", "applicable"});
}

void add_bound_rows(Table& t, const StatePair& pair, const SandwichReport& rep) {
  for (const auto& b : rep.bounds) {
    const ReportRow row{pair.dim(), pair.seed, pair.tag(), b};
    const nlohmann::json j = to_json(row);
    t.add({j["dim"], j["seed"], j["pair_tag"], j["f_name"], j["q"], j["bound_name"],
           j["bound_value"], j["divergence"], j["slack"], j["applicable"]});
  }
}

struct Agreement {
  double abs_diff = 0;
  double rel_diff = 0;
  bool agrees = true;
};

Agreement compare(double reference, double v) {
  Agreement a;
  if (std::isinf(reference) || std::isinf(v)) {
    a.agrees = reference == v;
    a.abs_diff = a.agrees ? 0 : std::numeric_limits<double>::infinity();
    a.rel_diff = a.abs_diff;
    return a;
  }
  a.abs_diff = std::abs(v - reference);
  const double scale = std::max(std::abs(reference), std::abs(v));
  a.rel_diff = scale > 0 ? a.abs_diff / scale : 0;
  a.agrees = a.abs_diff <= kAgreementRelative * scale + kAgreementAbsolute;
  return a;
}

int cmd_divergence(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const StatePair pair = input_pair(c);
  Table t({"dim", "seed", "pair_tag", "f_name", "method", "value", "abs_diff", "rel_diff",
           "agrees"});
  bool all_agree = true;
  const bool super_ok = pair.rho.is_strictly_positive() && pair.sigma.is_strictly_positive() &&
                        pair.dim() <= kSuperoperatorMaxDim;
  for (const auto& f : resolve_functions(c)) {
    std::vector<DivergenceResult> results{quasi_entropy_spectral(pair, f)};
    if (auto d = direct_for(pair, f)) results.push_back(*d);
    if (super_ok) results.push_back(quasi_entropy_superoperator(pair, f));
    const double ref = results.front().value;
    for (const auto& r : results) {
      const Agreement a = compare(ref, r.value);
      all_agree = all_agree && a.agrees;
      t.add({pair.dim(), pair.seed, pair.tag(), f.name, to_string(r.method), jnum(r.value),
             jnum(a.abs_diff), jnum(a.rel_diff), a.agrees});
    }
  }
  if (!super_ok) log << "superoperator method skipped: needs strictly positive states, d <= 12\n";
  log << "agreement: " << (all_agree ? "all methods agree" : "DISAGREEMENT") << '\n';
  t.write(out, c.format);
  return all_agree ? kExitOk : kExitViolations;
}

int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const StatePair pair = input_pair(c);
  Table t = bound_table();
  int violations = 0;
  for (const auto& f : resolve_functions(c)) {
    const SandwichReport rep = sandwich_for(pair, f, c.log_base);
    violations += rep.violations;
    if (rep.vacuous) log << f.name << ": divergence is +inf, upper bounds are vacuous\n";
    add_bound_rows(t, pair, rep);
  }
  log << "violations: " << violations << '\n';
  t.write(out, c.format);
  return violations == 0 ? kExitOk : kExitViolations;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const auto dims = effective_dims(c);
  const auto functions = resolve_functions(c);
  const std::size_t per_dim = static_cast<std::size_t>(c.trials);
  const std::size_t n = dims.size() * per_dim;
  std::vector<std::vector<SandwichReport>> reports(n);
  std::vector<StatePair> pairs;
  pairs.reserve(n);
  // Pairs are cheap next to the sandwiches; build them in order so the
  // vector never reallocates under the workers.
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index d = dims[i / per_dim];
    const auto trial = static_cast<std::uint64_t>(i % per_dim);
    pairs.push_back(make_pair(c.kind, d, derive_seed(c.seed, {static_cast<std::uint64_t>(d), trial})));
  }
  parallel_for(n, jobs_of(c), [&](std::size_t i) {
    for (const auto& f : functions) reports[i].push_back(sandwich_for(pairs[i], f, c.log_base));
  });

  Table t = bound_table();
  long violations = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& rep : reports[i]) {
      violations += rep.violations;
      add_bound_rows(t, pairs[i], rep);
    }
  }
  log << "sweep: " << n << " pairs x " << functions.size() << " functions, violations: "
      << violations << '\n';
  t.write(out, c.format);
  return violations == 0 ? kExitOk : kExitViolations;
}

int cmd_conjecture(const RunConfig& c, std::ostream& out, std::ostream& log) {
  nlohmann::json records = nlohmann::json::array();
  Table t({"strategy", "form", "commuting", "seed", "dims", "trial_count", "max_ratio",
           "violation_count"});
  for (WeightForm form : c.forms) {
    SearchOptions o;
    o.dims = effective_dims(c);
    o.trials = c.trials;
    o.strategy = c.strategy;
    o.form = form;
    o.seed = c.seed;
    o.commuting = c.kind == PairKind::commuting;
    o.step = c.step;
    o.steps_per_restart = c.steps_per_restart;
    o.plateau = c.plateau;
    o.jobs = jobs_of(c);
    const SearchRecord r = conjecture_search(o);
    log << "conjecture " << to_string(form) << ": max_ratio " << num(r.max_ratio) << " over "
        << r.trial_count << " instances, violations " << r.violation_count << '\n';
    std::string dims;
    for (std::size_t i = 0; i < r.dims.size(); ++i) dims += (i ? ";" : "") + std::to_string(r.dims[i]);
    t.add({to_string(r.strategy), to_string(r.form), r.commuting, r.seed, dims, r.trial_count,
           r.max_ratio, r.violation_count});
    records.push_back(to_json(r));
  }
  if (c.format == OutputFormat::json) {
    out << nlohmann::json{{"records", records}}.dump(2) << '\n';
  } else {
    t.write(out, c.format);
  }
  return kExitOk;
}

int cmd_repr_check(const RunConfig& c, std::ostream& out, std::ostream& log) {
  Table t({"f_name", "x", "direct", "represented", "relative_error"});
  bool ok = true;
  for (const auto& f : resolve_functions(c)) {
    double worst = 0;
    for (const auto& r : representation_round_trip(f)) {
      worst = std::max(worst, r.relative_error);
      t.add({f.name, r.x, r.direct, r.represented, r.relative_error});
    }
    const double residual = normalization_residual(f);
    const bool pass = worst < kRoundTripLimit && residual < kRoundTripLimit;
    ok = ok && pass;
    log << f.name << ": max relative error " << num(worst) << ", normalization residual "
        << num(residual) << (pass ? "" : "  FAIL") << '\n';
  }
  t.write(out, c.format);
  return ok ? kExitOk : kExitViolations;
}

std::string winner(double new_bound, double ae11) {
  if (std::abs(new_bound - ae11) <= 1e-12 * std::max(1.0, std::abs(ae11))) return "tie";
  return new_bound < ae11 ? "new" : "ae11";
}

int cmd_paper_example(const RunConfig& c, std::ostream& out, std::ostream& /*log*/) {
  Table t({"d", "trace_dist", "new_bound", "ae11_natural", "ae11_base2", "winner_per_base"});
  for (Eigen::Index d : effective_dims(c)) {
    const ScalarSummary s = summarize(mixed_rank_two_pair(d));
    const double nb = relative_entropy_upper(s).tight.value;
    const double ae_e = ae11_upper(s, LogBase::e).value;
    const double ae_2 = ae11_upper(s, LogBase::two).value;
    t.add({d, s.trace_distance_1, nb, ae_e, ae_2,
           "e=" + winner(nb, ae_e) + ";2=" + winner(nb, ae_2)});
  }
  t.write(out, c.format);
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  try {
    validate(config);
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  log << "command=" << to_string(config.command) << " seed=" << config.seed << '\n';

  std::ostringstream buffer;
  int status = kExitOk;
  try {
    switch (config.command) {
      case Command::divergence:
        status = cmd_divergence(config, buffer, log);
        break;
      case Command::bounds:
        status = cmd_bounds(config, buffer, log);
        break;
      case Command::sweep:
        status = cmd_sweep(config, buffer, log);
        break;
      case Command::conjecture:
        status = cmd_conjecture(config, buffer, log);
        break;
      case Command::repr_check:
        status = cmd_repr_check(config, buffer, log);
        break;
      case Command::paper_example:
        status = cmd_paper_example(config, buffer, log);
        break;
    }
  } catch (const std::ios_base::failure& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    log << "error: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  if (config.output_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(config.output_path, std::ios::binary);
    if (!f || !(f << buffer.str()) || !f.flush()) {
      log << "error: cannot write " << config.output_path << '\n';
      return kExitIo;
    }
  }
  return status;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Quasi-relative entropies, continuity bounds and the weighted-overlap search"};
  app.require_subcommand(1);

  std::string dims, log_base = "e", format = "csv", kind = "random", strategy = "random",
                    form = "both", output, pair, config_path;
  long trials = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> f_specs;
  std::vector<double> q;
  unsigned jobs = 0;
  double step = 0.05;
  int steps = 200, plateau = 30;

  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::divergence, "One pair, every evaluation method, agreement report"},
      {Command::bounds, "Divergence and every applicable bound for one pair"},
      {Command::sweep, "Bound sweeps over random pairs; exit 1 on any negative slack"},
      {Command::conjecture, "Counterexample search for the weighted-overlap inequality"},
      {Command::repr_check, "Integral-representation round-trip table"},
      {Command::paper_example, "Mixed/rank-two example: new bound vs Audenaert-Eisert"},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  std::vector<CLI::Option*> opts_dims, opts_trials, opts_seed, opts_f, opts_q, opts_base,
      opts_out, opts_format, opts_jobs, opts_pair, opts_kind, opts_strategy, opts_form, opts_step,
      opts_steps, opts_plateau;
  for (const auto& [cmd, help] : commands) {
    CLI::App* s = app.add_subcommand(to_string(cmd), help);
    subs.emplace_back(s, cmd);
    opts_dims.push_back(s->add_option("--dims", dims, "Dimensions, e.g. 5..12 or 2,3,4"));
    opts_trials.push_back(s->add_option("--trials", trials, "Trials per dimension (restarts for hill_climb)"));
    opts_seed.push_back(s->add_option("--seed", seed, "64-bit base seed"));
    opts_f.push_back(s->add_option("--f", f_specs, "Function: neg-log, neg-power:p=0.5, tsallis:q=0.3"));
    opts_q.push_back(s->add_option("--q", q, "Shorthand for --f tsallis:q=<q>"));
    opts_base.push_back(s->add_option("--log-base", log_base, "e or 2 (neg-log reports)"));
    opts_out.push_back(s->add_option("--out", output, "Output file (default stdout)"));
    opts_format.push_back(s->add_option("--format", format, "csv or json"));
    opts_jobs.push_back(s->add_option("--jobs", jobs, "Worker threads (0 = all processors)"));
    opts_pair.push_back(s->add_option("--pair", pair, "State-pair JSON file"));
    opts_kind.push_back(s->add_option("--kind", kind, "random, commuting or mixed-rank2"));
    opts_strategy.push_back(s->add_option("--strategy", strategy, "random or hill_climb"));
    opts_form.push_back(s->add_option("--form", form, "general, modular or both"));
    opts_step.push_back(s->add_option("--step", step, "Hill-climb jitter size"));
    opts_steps.push_back(s->add_option("--steps", steps, "Hill-climb steps per restart"));
    opts_plateau.push_back(s->add_option("--plateau", plateau, "Restart after this many stale steps"));
    s->add_option("--config", config_path, "JSON config; explicit flags override it");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, log);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, log);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, log);
    return kExitUsage;
  }

  std::size_t which = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i].first->parsed()) which = i;
  }
  const auto given = [&](const std::vector<CLI::Option*>& v) { return v[which]->count() > 0; };

  RunConfig c;
  c.command = subs[which].second;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        log << "error: cannot open config " << config_path << '\n';
        return kExitIo;
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config file: ") + e.what());
      }
      c = apply_config_json(j, c);
    }
    if (given(opts_dims)) c.dims = parse_dims(dims);
    if (given(opts_trials)) c.trials = trials;
    if (given(opts_seed)) c.seed = seed;
    if (given(opts_f)) c.f_specs = f_specs;
    if (given(opts_q)) c.q = q;
    if (given(opts_base)) c.log_base = parse_log_base(log_base);
    if (given(opts_out)) c.output_path = output;
    if (given(opts_format)) c.format = parse_format(format);
    if (given(opts_jobs)) c.jobs = jobs;
    if (given(opts_pair)) c.pair_path = pair;
    if (given(opts_kind)) c.kind = parse_pair_kind(kind);
    if (given(opts_strategy)) c.strategy = parse_strategy(strategy);
    if (given(opts_form)) c.forms = parse_forms(form);
    if (given(opts_step)) c.step = step;
    if (given(opts_steps)) c.steps_per_restart = steps;
    if (given(opts_plateau)) c.plateau = plateau;
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(c, out, log);
}

}  // namespace qre
