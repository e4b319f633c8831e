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

// Operator monotone decreasing functions f on (0, inf) with f(1) = 0.
//
// Each such f has the representation
//
//   f(x) = -a x - b + int_0^inf (1/(t+x) - t/(t^2+1)) w(t) dt,
//
// with a >= 0 and w >= 0.  A descriptor stores f together with (a, b, w)
// and the derivatives at 1.  Builtins whose natural form does not vanish at
// 1 are stored shifted by a constant; `shift` records it, so the function
// held by the descriptor is  base(x) + shift  with base represented by
// (a, b, w) exactly as above.

#include "qre/hermitian.hpp"
#include "qre/rng.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qre {

/// A real function on [0, inf) used by spectral formulas.
struct ScalarFunction {
  std::string name;
  std::function<double(double)> value;
  /// lim_{x -> 0+}; may be +inf.  When absent, value(0.0) is used.
  std::optional<double> at_zero;

  double operator()(double x) const { return value(x); }
  double limit_at_zero() const { return at_zero ? *at_zero : value(0.0); }
};

enum class OmdKind { neg_log, neg_power, tsallis, custom };

struct OmdFunction {
  std::string name;
  OmdKind kind = OmdKind::custom;
  double parameter = 0;  // p for neg_power, q for tsallis

  std::function<double(double)> eval;
  double a = 0;
  double b = 0;
  double shift = 0;
  std::function<double(double)> measure_density;
  double d1_at_1 = 0;
  double d2_at_1 = 0;
  double at_zero = 0;  // lim_{x -> 0+} f(x), possibly +inf

  double operator()(double x) const { return eval(x); }
  ScalarFunction scalar() const { return {name, eval, at_zero}; }
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double tolerance = 1e-9;
  long max_evaluations = 100000;
};

/// Adaptive Gauss-Legendre on [lo, hi] with interval bisection.  An interval
/// is accepted once the 2x7-point estimate on its halves differs from the
/// 7-point estimate on the whole by less than its share of the tolerance.
double integrate(const std::function<double(double)>& g, double lo, double hi,
                 const QuadratureOptions& opts = {});

/// int_0^inf g(t) dt.  The half line is split at t = 1; the tail is mapped
/// by t = 1/s and both pieces use s = v^16, which turns endpoint behaviour
/// like t^p or t^-r (exponents down to about -0.93) into a bounded integrand.
double integrate_half_line(const std::function<double(double)>& g,
                           const QuadratureOptions& opts = {});

OmdFunction neg_log();
/// 1 - x^p, p in (0, 1).
OmdFunction neg_power(double p);
/// (1 - x^(1-q)) / (1 - q), q in (0, 2) \ {1}.
OmdFunction tsallis(double q);
/// "tsallis:q=<q>" with the shortest round-trip spelling of q.
std::string tsallis_name(double q);

/// Registers a user function f = -a x - b + int (...) w.  Throws
/// std::invalid_argument if a < 0, w < 0 on a sample grid, f(1) != 0, or the
/// constraint a + b = int (1/(t+1) - t/(t^2+1)) w dt fails by more than 1e-6.
OmdFunction make_custom(std::string name, std::function<double(double)> eval, double a, double b,
                        std::function<double(double)> measure_density, double d1_at_1,
                        double d2_at_1, double at_zero);

/// Parses "neg-log", "neg-power:p=0.5", "neg-power:0.5", "tsallis:q=0.3",
/// "tsallis:0.3".  Throws std::invalid_argument.
OmdFunction parse_function(const std::string& spec);

/// f(x) via the integral representation f(x) = base(x) + shift.
double eval_via_representation(const OmdFunction& f, double x, const QuadratureOptions& opts = {});

/// a + (b - shift) - int (1/(t+1) - t/(t^2+1)) w dt; zero when f(1) = 0.
double normalization_residual(const OmdFunction& f, const QuadratureOptions& opts = {});

/// g(x) = x f(1/x).
ScalarFunction dual_function(const ScalarFunction& f);
/// Dual of a descriptor; the limit at 0 is -a.
ScalarFunction dual_function(const OmdFunction& f);

struct MonotonicityReport {
  int trials = 0;
  int violations = 0;
  double worst_min_eigenvalue = 0;  // min over trials of lambda_min(f(B) - f(A))
};

/// Draws A >= B > 0 and checks f(B) - f(A) >= -1e-10 I.
MonotonicityReport monotonicity_spot_check(const ScalarFunction& f, Eigen::Index dim, int trials,
                                           Rng& rng);

/// Relative error max |f - repr| / max(1, |f|) over a log-spaced grid.
struct RoundTripRow {
  double x;
  double direct;
  double represented;
  double relative_error;
};
std::vector<RoundTripRow> representation_round_trip(const OmdFunction& f, int points = 60,
                                                    double lo = 1e-3, double hi = 1e3);

}  // namespace qre
