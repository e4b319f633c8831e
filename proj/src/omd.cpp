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

#include "qre/omd.hpp"

#include "qre/states.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace qre {

namespace {

constexpr std::array<double, 7> kNodes = {
    -0.9491079123427585245261897, -0.7415311855993944398638648, -0.4058451513773971669066064,
    0.0,
    0.4058451513773971669066064,  0.7415311855993944398638648,  0.9491079123427585245261897};
constexpr std::array<double, 7> kWeights = {
    0.1294849661688696932706114, 0.2797053914892766679014678, 0.3818300505051189449503698,
    0.4179591836734693877551020,
    0.3818300505051189449503698, 0.2797053914892766679014678, 0.1294849661688696932706114};

double gauss7(const std::function<double(double)>& g, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double s = 0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) s += kWeights[i] * g(mid + half * kNodes[i]);
  return s * half;
}

struct Interval {
  double lo, hi, estimate;
};

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double integrate(const std::function<double(double)>& g, double lo, double hi,
                 const QuadratureOptions& opts) {
  if (!(hi > lo)) return 0.0;
  long evals = 7;
  const double total = hi - lo;
  std::vector<Interval> stack{{lo, hi, gauss7(g, lo, hi)}};
  double result = 0.0;
  // Depth-first; intervals narrower than a few ulps are accepted as is.
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (iv.lo + iv.hi);
    const double left = gauss7(g, iv.lo, mid);
    const double right = gauss7(g, mid, iv.hi);
    evals += 14;
    if (evals > opts.max_evaluations) {
      throw QuadratureError("integrate: evaluation budget of " +
                            std::to_string(opts.max_evaluations) + " exceeded");
    }
    const double fine = left + right;
    const double share = opts.tolerance * (iv.hi - iv.lo) / total;
    const bool tiny = (iv.hi - iv.lo) <= 64 * std::numeric_limits<double>::epsilon() *
                                             std::max(std::abs(iv.lo), std::abs(iv.hi));
    if (!std::isfinite(fine)) {
      throw QuadratureError("integrate: integrand is not finite near " + format_double(mid));
    }
    if (std::abs(fine - iv.estimate) <= share || tiny) {
      result += fine;
    } else {
      stack.push_back({iv.lo, mid, left});
      stack.push_back({mid, iv.hi, right});
    }
  }
  return result;
}

double integrate_half_line(const std::function<double(double)>& g, const QuadratureOptions& opts) {
  // t in (0, 1]: t = v^16, dt = 16 v^15 dv
  auto head = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double v4 = std::pow(v, 4);
    const double v16 = v4 * v4 * v4 * v4;
    return 16.0 * v16 / v * g(v16);
  };
  // t in [1, inf): t = v^-16, dt = 16 v^-17 dv
  auto tail = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double v4 = std::pow(v, 4);
    const double t = 1.0 / (v4 * v4 * v4 * v4);
    if (!std::isfinite(t)) return 0.0;
    return 16.0 * t * g(t) / v;
  };
  QuadratureOptions half = opts;
  half.tolerance = opts.tolerance / 2;
  return integrate(head, 0.0, 1.0, half) + integrate(tail, 0.0, 1.0, half);
}

OmdFunction neg_log() {
  OmdFunction f;
  f.name = "neg-log";
  f.kind = OmdKind::neg_log;
  f.eval = [](double x) { return -std::log(x); };
  f.a = 0;
  f.b = 0;
  f.shift = 0;
  f.measure_density = [](double) { return 1.0; };
  f.d1_at_1 = -1;
  f.d2_at_1 = 1;
  f.at_zero = kInf;
  return f;
}

OmdFunction neg_power(double p) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("neg-power: p must lie in (0, 1)");
  OmdFunction f;
  f.name = "neg-power:p=" + format_double(p);
  f.kind = OmdKind::neg_power;
  f.parameter = p;
  f.eval = [p](double x) { return 1.0 - std::pow(x, p); };
  // base -x^p, stored shifted by +1
  f.a = 0;
  f.b = std::cos(p * std::numbers::pi / 2);
  f.shift = 1;
  const double c = std::sin(p * std::numbers::pi) / std::numbers::pi;
  f.measure_density = [c, p](double t) { return c * std::pow(t, p); };
  f.d1_at_1 = -p;
  f.d2_at_1 = p * (1 - p);
  f.at_zero = 1;
  return f;
}

std::string tsallis_name(double q) { return "tsallis:q=" + format_double(q); }

OmdFunction tsallis(double q) {
  if (!(q > 0 && q < 2) || q == 1) {
    throw std::invalid_argument("tsallis: q must lie in (0, 2) and differ from 1");
  }
  OmdFunction f;
  f.name = tsallis_name(q);
  f.kind = OmdKind::tsallis;
  f.parameter = q;
  f.eval = [q](double x) { return (1.0 - std::pow(x, 1 - q)) / (1 - q); };
  f.a = 0;
  if (q < 1) {
    // (1 - x^p)/p with p = 1 - q: base -x^p/p, shift 1/p
    const double p = 1 - q;
    f.b = std::cos(p * std::numbers::pi / 2) / p;
    f.shift = 1 / p;
    const double c = std::sin(p * std::numbers::pi) / (std::numbers::pi * p);
    f.measure_density = [c, p](double t) { return c * std::pow(t, p); };
    f.at_zero = 1 / p;
  } else {
    // (x^-r - 1)/r with r = q - 1: base x^-r/r, shift -1/r
    const double r = q - 1;
    f.b = -std::cos(r * std::numbers::pi / 2) / r;
    f.shift = -1 / r;
    const double c = std::sin(r * std::numbers::pi) / (std::numbers::pi * r);
    f.measure_density = [c, r](double t) { return c * std::pow(t, -r); };
    f.at_zero = kInf;
  }
  f.d1_at_1 = -1;
  f.d2_at_1 = q;
  return f;
}

double eval_via_representation(const OmdFunction& f, double x, const QuadratureOptions& opts) {
  if (!(x > 0)) throw std::invalid_argument("eval_via_representation: x must be positive");
  if (x == 1.0) return 0.0;
  // 1/(t+x) - 1/(t+1) = (1-x)/((t+x)(t+1)), written without cancellation
  const auto& w = f.measure_density;
  const double integral =
      integrate_half_line([&](double t) { return w(t) / ((t + x) * (t + 1)); }, opts);
  return (1 - x) * (f.a + integral);
}

double normalization_residual(const OmdFunction& f, const QuadratureOptions& opts) {
  // 1/(t+1) - t/(t^2+1) = (1-t)/((t+1)(t^2+1))
  const auto& w = f.measure_density;
  const double integral = integrate_half_line(
      [&](double t) { return (1 - t) * w(t) / ((t + 1) * (t * t + 1)); }, opts);
  return f.a + (f.b - f.shift) - integral;
}

OmdFunction make_custom(std::string name, std::function<double(double)> eval, double a, double b,
                        std::function<double(double)> measure_density, double d1_at_1,
                        double d2_at_1, double at_zero) {
  if (!eval || !measure_density) throw std::invalid_argument("custom function: missing callable");
  if (!(a >= 0)) throw std::invalid_argument("custom function '" + name + "': a must be >= 0");
  if (std::abs(eval(1.0)) > 1e-12) {
    throw std::invalid_argument("custom function '" + name + "': f(1) must be 0");
  }
  for (int i = -30; i <= 30; ++i) {
    const double t = std::pow(10.0, i / 5.0);
    if (!(measure_density(t) >= 0)) {
      throw std::invalid_argument("custom function '" + name +
                                  "': measure density negative at t=" + format_double(t));
    }
  }
  OmdFunction f;
  f.name = std::move(name);
  f.kind = OmdKind::custom;
  f.eval = std::move(eval);
  f.a = a;
  f.b = b;
  f.shift = 0;
  f.measure_density = std::move(measure_density);
  f.d1_at_1 = d1_at_1;
  f.d2_at_1 = d2_at_1;
  f.at_zero = at_zero;
  const double residual = normalization_residual(f);
  if (!(std::abs(residual) < 1e-6)) {
    throw std::invalid_argument("custom function '" + f.name +
                                "': a + b does not match the measure (residual " +
                                format_double(residual) + ")");
  }
  return f;
}

OmdFunction parse_function(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  auto parameter = [&](const char* key) {
    if (colon == std::string::npos) {
      throw std::invalid_argument("function '" + spec + "' needs a parameter, e.g. " + head + ":" +
                                  key + "=0.5");
    }
    std::string rest = spec.substr(colon + 1);
    const std::string prefix = std::string(key) + "=";
    if (rest.rfind(prefix, 0) == 0) rest = rest.substr(prefix.size());
    double v = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
      throw std::invalid_argument("function '" + spec + "': cannot parse parameter '" + rest + "'");
    }
    return v;
  };
  if (head == "neg-log") {
    if (colon != std::string::npos) throw std::invalid_argument("neg-log takes no parameter");
    return neg_log();
  }
  if (head == "neg-power") return neg_power(parameter("p"));
  if (head == "tsallis") return tsallis(parameter("q"));
  throw std::invalid_argument("unknown function '" + spec +
                              "' (expected neg-log, neg-power:p=..., tsallis:q=...)");
}

ScalarFunction dual_function(const ScalarFunction& f) {
  auto v = f.value;
  return {"dual(" + f.name + ")", [v](double x) { return x * v(1.0 / x); }, std::nullopt};
}

ScalarFunction dual_function(const OmdFunction& f) {
  auto v = f.eval;
  return {"dual(" + f.name + ")", [v](double x) { return x * v(1.0 / x); }, -f.a};
}

MonotonicityReport monotonicity_spot_check(const ScalarFunction& f, Eigen::Index dim, int trials,
                                           Rng& rng) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("monotonicity_spot_check: dim must be 1..8");
  MonotonicityReport rep;
  rep.worst_min_eigenvalue = kInf;
  for (int i = 0; i < trials; ++i) {
    const double sb = std::exp(rng.uniform(-2.0, 2.0));
    const double sp = std::exp(rng.uniform(-2.0, 2.0));
    const HermitianMatrix b = sb * random_state(dim, rng).hermitian();
    const HermitianMatrix a = b + sp * random_state(dim, rng).hermitian();
    const HermitianMatrix diff = mat_func(b, f.value) - mat_func(a, f.value);
    const double m = eigh(diff).smallest();
    rep.worst_min_eigenvalue = std::min(rep.worst_min_eigenvalue, m);
    ++rep.trials;
    if (m < -1e-10) ++rep.violations;
  }
  return rep;
}

std::vector<RoundTripRow> representation_round_trip(const OmdFunction& f, int points, double lo,
                                                    double hi) {
  std::vector<RoundTripRow> rows;
  rows.reserve(static_cast<std::size_t>(points));
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    const double x = std::exp(llo + (lhi - llo) * i / (points - 1));
    const double direct = f.eval(x);
    const double repr = eval_via_representation(f, x);
    rows.push_back({x, direct, repr, std::abs(direct - repr) / std::max(1.0, std::abs(direct))});
  }
  return rows;
}

}  // namespace qre
