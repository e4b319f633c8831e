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

#pragma once

#include "qre/bounds.hpp"
#include "qre/conjecture.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qre {

enum class Command { divergence, bounds, sweep, conjecture, repr_check, paper_example };
enum class OutputFormat { csv, json };
enum class PairKind { random, commuting, mixed_rank2 };

enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,  // failed check: negative slack, disagreement, round-trip error
  kExitUsage = 2,       // bad flags or config file
  kExitIo = 3,          // unreadable input or unwritable output
  kExitValidation = 4,  // input data rejected (e.g. not a density matrix)
};

/// Bad command line or config; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::bounds;
  std::vector<Eigen::Index> dims;  // empty: the command's default
  long trials = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> f_specs;  // empty: the command's default set
  std::vector<double> q;             // each adds "tsallis:q=<q>"
  LogBase log_base = LogBase::e;
  std::string output_path;           // empty: stdout
  OutputFormat format = OutputFormat::csv;
  unsigned jobs = 0;                 // 0: hardware concurrency
  std::string pair_path;             // divergence / bounds: read the pair from a file
  PairKind kind = PairKind::random;

  // conjecture
  SearchStrategy strategy = SearchStrategy::random;
  std::vector<WeightForm> forms{WeightForm::general, WeightForm::modular};
  double step = 0.05;
  int steps_per_restart = 200;
  int plateau = 30;
};

std::string to_string(Command c);
Command parse_command(const std::string& s);
PairKind parse_pair_kind(const std::string& s);

/// "5..12", "2,3,4" or "3".  Throws UsageError.
std::vector<Eigen::Index> parse_dims(const std::string& s);

/// Overlays the keys of a JSON config object onto `base`.  Keys mirror the
/// long flag names: dims, trials, seed, f, q, log-base, out, format, jobs,
/// pair, kind, strategy, form, step, steps, plateau.
RunConfig apply_config_json(const nlohmann::json& j, RunConfig base);

/// Throws UsageError with an actionable message.
void validate(const RunConfig& config);

/// The resolved function list for a config (flags or the command default).
std::vector<OmdFunction> resolve_functions(const RunConfig& config);

/// Executes one command.  Tabular output goes to `out` (or the output
/// file), diagnostics to `log`.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Full CLI: parses argv (CLI11) and calls run().
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace qre
