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

// Trace-distance continuity bounds for quasi-relative entropies.
//
// Notation used in the comments below: D1 = ||rho - sigma||_1,
// lambda = largest eigenvalue of rho, alpha_rho / alpha_sigma = smallest
// non-zero eigenvalues, alpha = min(alpha_rho, alpha_sigma).
//
//   pinsker               f''(1)/2 D1^2                      lower, any f
//   omd-commuting         D1 [lambda/(lambda-alpha_sigma) f(alpha_sigma/lambda) - a]
//                                                            qubit or commuting pair
//   omd-sqrt-d            sqrt(d) * omd-commuting value      any pair
//   relent-tight          D1 lambda (log alpha_rho - log alpha_sigma)/(alpha_rho - alpha_sigma)
//   relent-loose          D1 lambda / alpha
//   audenaert-eisert      (alpha_sigma+T) log(1+T/alpha_sigma) - alpha_rho log(1+T/alpha_rho)
//   relent-qubit-tight    D1 lambda (log lambda - log alpha_sigma)/(lambda - alpha_sigma), d = 2
//   relent-qubit-loose    D1 lambda / alpha_sigma, d = 2
//   tsallis-ceil          (ceil(q)-1)/(q-1) (lambda_max/alpha_sigma)^(q-1) D1, q > 1,
//                         lambda_max over both spectra
//   tsallis-gt1-prior     1/(q-1) lambda^q/alpha^q D1,       1 < q <= 2
//   tsallis-gt1-improved  lambda^q/alpha^q D1,               1 < q <= 2
//   tsallis-lt1-prior     1/(1-q) lambda^q/alpha_sigma^q D1, 0 < q < 1
//   tsallis-lt1-tight     D1 lambda^q (alpha_rho^(1-q) - alpha_sigma^(1-q))/((1-q)(alpha_rho - alpha_sigma))
//   tsallis-lt1-loose     D1 lambda^q / alpha^q
//   tsallis-qubit-tight   D1 lambda^q (lambda^(1-q) - alpha_sigma^(1-q))/((1-q)(lambda - alpha_sigma)), d = 2
//   tsallis-qubit-loose   D1 lambda^q / alpha_sigma^q, d = 2
//
// Divided differences are 0/0 when their two arguments meet; below a gap of
// 1e-8 the continuous extension is substituted.

#include "qre/divergences.hpp"
#include "qre/omd.hpp"
#include "qre/states.hpp"

#include <json.hpp>

#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qre {

inline constexpr double kDividedDifferenceGap = 1e-8;
inline constexpr double kSlackTolerance = 1e-10;

// (log x - log y)/(x - y); limit 1/c with c = (x+y)/2.
double log_divided_difference_formula(double x, double y);
double log_divided_difference_limit(double x, double y);
double log_divided_difference(double x, double y);

// (x^s - y^s)/(x - y); limit s c^(s-1).
double power_divided_difference_formula(double x, double y, double s);
double power_divided_difference_limit(double x, double y, double s);
double power_divided_difference(double x, double y, double s);

// lambda/(lambda - alpha) f(alpha/lambda) - a; limit -f'(1) - f''(1)(r-1)/2 - a
// with r = alpha/lambda, which is -f'(1) - a at lambda = alpha.
double omd_bracket_formula(const OmdFunction& f, double lambda, double alpha);
double omd_bracket_limit(const OmdFunction& f, double lambda, double alpha);
double omd_bracket(const OmdFunction& f, double lambda, double alpha);

enum class BoundKind { lower, upper };
enum class LogBase { e, two };

struct BoundReport {
  std::string bound_name;
  BoundKind kind = BoundKind::upper;
  double value = 0;
  ScalarSummary inputs;
  std::string f_name;
  std::optional<double> q;
  bool applicable = true;
  std::string reason;
  /// Filled in by attach_divergence / sandwich.
  double divergence = std::numeric_limits<double>::quiet_NaN();
  /// Signed so that >= 0 means the bound holds.
  double slack = std::numeric_limits<double>::quiet_NaN();
};

void attach_divergence(BoundReport& r, double divergence);

BoundReport pinsker_lower(const ScalarSummary& s, const OmdFunction& f);
BoundReport qubit_classical_upper(const ScalarSummary& s, const OmdFunction& f);
BoundReport general_sqrt_d_upper(const ScalarSummary& s, const OmdFunction& f);

struct TightLoose {
  BoundReport tight;
  BoundReport loose;
};
TightLoose relative_entropy_upper(const ScalarSummary& s);
BoundReport ae11_upper(const ScalarSummary& s, LogBase base = LogBase::e);
TightLoose qubit_relative_upper(const ScalarSummary& s);
std::vector<BoundReport> tsallis_bounds(const ScalarSummary& s, double q);

struct SandwichReport {
  DivergenceResult divergence;
  std::vector<BoundReport> bounds;
  /// The divergence is +inf, so upper bounds say nothing.
  bool vacuous = false;
  int violations = 0;
  bool sound() const { return violations == 0; }
};

/// Divergence (spectral) plus every bound applicable to f.
SandwichReport sandwich(const StatePair& pair, const OmdFunction& f);

/// True when the report counts as a violation inside a sandwich.
bool is_violation(const BoundReport& r, bool vacuous);

// Report rows: dim, seed, pair_tag, f_name, q, bound_name, bound_value,
// divergence, slack, applicable.
struct ReportRow {
  Eigen::Index dim = 0;
  std::uint64_t seed = 0;
  std::string pair_tag;
  BoundReport report;
};

std::string csv_header();
std::string to_csv(const ReportRow& row);
nlohmann::json to_json(const ReportRow& row);

/// Locale-independent shortest-round-trip formatting ("inf", "-inf", "nan").
std::string format_number(double v);

}  // namespace qre
