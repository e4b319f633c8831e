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

#include "qre/bounds.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qre {

double log_divided_difference_formula(double x, double y) {
  return (std::log(x) - std::log(y)) / (x - y);
}

double log_divided_difference_limit(double x, double y) { return 2.0 / (x + y); }

double log_divided_difference(double x, double y) {
  return std::abs(x - y) < kDividedDifferenceGap ? log_divided_difference_limit(x, y)
                                                 : log_divided_difference_formula(x, y);
}

double power_divided_difference_formula(double x, double y, double s) {
  return (std::pow(x, s) - std::pow(y, s)) / (x - y);
}

double power_divided_difference_limit(double x, double y, double s) {
  const double c = 0.5 * (x + y);
  return s * std::pow(c, s - 1);
}

double power_divided_difference(double x, double y, double s) {
  return std::abs(x - y) < kDividedDifferenceGap ? power_divided_difference_limit(x, y, s)
                                                 : power_divided_difference_formula(x, y, s);
}

double omd_bracket_formula(const OmdFunction& f, double lambda, double alpha) {
  return lambda / (lambda - alpha) * f(alpha / lambda) - f.a;
}

double omd_bracket_limit(const OmdFunction& f, double lambda, double alpha) {
  // f(x)/(1-x) = -f'((1+x)/2) + O((1-x)^2) with x = alpha/lambda; the
  // midpoint slope is expanded around 1.  Equals -f'(1) - a at lambda = alpha.
  const double x = alpha / lambda;
  return -f.d1_at_1 - f.d2_at_1 * (x - 1) / 2 - f.a;
}

double omd_bracket(const OmdFunction& f, double lambda, double alpha) {
  return std::abs(lambda - alpha) < kDividedDifferenceGap ? omd_bracket_limit(f, lambda, alpha)
                                                          : omd_bracket_formula(f, lambda, alpha);
}

void attach_divergence(BoundReport& r, double divergence) {
  r.divergence = divergence;
  r.slack = r.kind == BoundKind::upper ? r.value - divergence : divergence - r.value;
}

namespace {

BoundReport base_report(std::string name, BoundKind kind, const ScalarSummary& s,
                        std::string f_name, std::optional<double> q = std::nullopt) {
  BoundReport r;
  r.bound_name = std::move(name);
  r.kind = kind;
  r.inputs = s;
  r.f_name = std::move(f_name);
  r.q = q;
  return r;
}

BoundReport not_applicable(BoundReport r, std::string reason) {
  r.applicable = false;
  r.reason = std::move(reason);
  r.value = std::numeric_limits<double>::quiet_NaN();
  return r;
}

bool qubit_or_commuting(const ScalarSummary& s) {
  return s.dim == 2 || s.commutator_norm < kCommutingTolerance;
}

}  // namespace

BoundReport pinsker_lower(const ScalarSummary& s, const OmdFunction& f) {
  auto r = base_report("pinsker", BoundKind::lower, s, f.name);
  r.value = f.d2_at_1 / 2 * s.trace_distance_1 * s.trace_distance_1;
  return r;
}

BoundReport qubit_classical_upper(const ScalarSummary& s, const OmdFunction& f) {
  auto r = base_report("omd-commuting", BoundKind::upper, s, f.name);
  if (!qubit_or_commuting(s)) return not_applicable(r, "requires qubit or commuting pair");
  r.value = s.trace_distance_1 * omd_bracket(f, s.lambda_rho, s.alpha_sigma);
  return r;
}

BoundReport general_sqrt_d_upper(const ScalarSummary& s, const OmdFunction& f) {
  auto r = base_report("omd-sqrt-d", BoundKind::upper, s, f.name);
  r.value = s.trace_distance_1 * std::sqrt(static_cast<double>(s.dim)) *
            omd_bracket(f, s.lambda_rho, s.alpha_sigma);
  return r;
}

TightLoose relative_entropy_upper(const ScalarSummary& s) {
  auto tight = base_report("relent-tight", BoundKind::upper, s, "neg-log");
  auto loose = base_report("relent-loose", BoundKind::upper, s, "neg-log");
  tight.value =
      s.trace_distance_1 * s.lambda_rho * log_divided_difference(s.alpha_rho, s.alpha_sigma);
  loose.value = s.trace_distance_1 * s.lambda_rho / s.alpha;
  return {tight, loose};
}

BoundReport ae11_upper(const ScalarSummary& s, LogBase base) {
  auto r = base_report(base == LogBase::e ? "audenaert-eisert" : "audenaert-eisert-log2",
                       BoundKind::upper, s, "neg-log");
  const double scale = base == LogBase::e ? 1.0 : 1.0 / std::log(2.0);
  r.value = scale * ((s.alpha_sigma + s.T) * std::log1p(s.T / s.alpha_sigma) -
                     s.alpha_rho * std::log1p(s.T / s.alpha_rho));
  return r;
}

TightLoose qubit_relative_upper(const ScalarSummary& s) {
  auto tight = base_report("relent-qubit-tight", BoundKind::upper, s, "neg-log");
  auto loose = base_report("relent-qubit-loose", BoundKind::upper, s, "neg-log");
  if (s.dim != 2) {
    return {not_applicable(tight, "requires d = 2"), not_applicable(loose, "requires d = 2")};
  }
  tight.value =
      s.trace_distance_1 * s.lambda_rho * log_divided_difference(s.lambda_rho, s.alpha_sigma);
  loose.value = s.trace_distance_1 * s.lambda_rho / s.alpha_sigma;
  return {tight, loose};
}

std::vector<BoundReport> tsallis_bounds(const ScalarSummary& s, double q) {
  if (!(q > 0 && q <= 2) || q == 1) {
    throw std::invalid_argument("tsallis_bounds: q must lie in (0, 2] and differ from 1");
  }
  const std::string name = tsallis_name(q);
  const double d1 = s.trace_distance_1;
  const double lq = std::pow(s.lambda_rho, q);
  std::vector<BoundReport> out;

  auto ceil_b = base_report("tsallis-ceil", BoundKind::upper, s, name, q);
  if (q > 1) {
    const double lam = std::max(s.lambda_rho, s.lambda_sigma);
    ceil_b.value = (std::ceil(q) - 1) / (q - 1) * std::pow(lam / s.alpha_sigma, q - 1) * d1;
    out.push_back(ceil_b);
  } else {
    out.push_back(not_applicable(ceil_b, "requires q > 1"));
  }

  auto prior_gt = base_report("tsallis-gt1-prior", BoundKind::upper, s, name, q);
  auto improved = base_report("tsallis-gt1-improved", BoundKind::upper, s, name, q);
  if (q > 1 && q <= 2) {
    const double ratio = lq / std::pow(s.alpha, q);
    prior_gt.value = ratio * d1 / (q - 1);
    improved.value = ratio * d1;
    out.push_back(prior_gt);
    out.push_back(improved);
  } else {
    out.push_back(not_applicable(prior_gt, "requires 1 < q <= 2"));
    out.push_back(not_applicable(improved, "requires 1 < q <= 2"));
  }

  auto prior_lt = base_report("tsallis-lt1-prior", BoundKind::upper, s, name, q);
  auto lt_tight = base_report("tsallis-lt1-tight", BoundKind::upper, s, name, q);
  auto lt_loose = base_report("tsallis-lt1-loose", BoundKind::upper, s, name, q);
  if (q > 0 && q < 1) {
    prior_lt.value = lq / std::pow(s.alpha_sigma, q) * d1 / (1 - q);
    lt_tight.value =
        d1 * lq * power_divided_difference(s.alpha_rho, s.alpha_sigma, 1 - q) / (1 - q);
    lt_loose.value = d1 * lq / std::pow(s.alpha, q);
    out.push_back(prior_lt);
    out.push_back(lt_tight);
    out.push_back(lt_loose);
  } else {
    out.push_back(not_applicable(prior_lt, "requires 0 < q < 1"));
    out.push_back(not_applicable(lt_tight, "requires 0 < q < 1"));
    out.push_back(not_applicable(lt_loose, "requires 0 < q < 1"));
  }

  auto qb_tight = base_report("tsallis-qubit-tight", BoundKind::upper, s, name, q);
  auto qb_loose = base_report("tsallis-qubit-loose", BoundKind::upper, s, name, q);
  if (s.dim == 2) {
    qb_tight.value =
        d1 * lq * power_divided_difference(s.lambda_rho, s.alpha_sigma, 1 - q) / (1 - q);
    qb_loose.value = d1 * lq / std::pow(s.alpha_sigma, q);
    out.push_back(qb_tight);
    out.push_back(qb_loose);
  } else {
    out.push_back(not_applicable(qb_tight, "requires d = 2"));
    out.push_back(not_applicable(qb_loose, "requires d = 2"));
  }
  return out;
}

bool is_violation(const BoundReport& r, bool vacuous) {
  if (!r.applicable) return false;
  if (vacuous && r.kind == BoundKind::upper) return false;
  return !(r.slack >= -kSlackTolerance);
}

SandwichReport sandwich(const StatePair& pair, const OmdFunction& f) {
  SandwichReport rep{quasi_entropy_spectral(pair, f), {}, false, 0};
  const ScalarSummary& s = rep.divergence.pair_summary;
  rep.vacuous = !rep.divergence.is_finite();

  rep.bounds.push_back(pinsker_lower(s, f));
  rep.bounds.push_back(qubit_classical_upper(s, f));
  rep.bounds.push_back(general_sqrt_d_upper(s, f));
  if (f.kind == OmdKind::neg_log) {
    auto [t, l] = relative_entropy_upper(s);
    rep.bounds.push_back(t);
    rep.bounds.push_back(l);
    rep.bounds.push_back(ae11_upper(s));
    auto [qt, ql] = qubit_relative_upper(s);
    rep.bounds.push_back(qt);
    rep.bounds.push_back(ql);
  }
  if (f.kind == OmdKind::tsallis) {
    for (auto& b : tsallis_bounds(s, f.parameter)) rep.bounds.push_back(std::move(b));
  }
  for (auto& b : rep.bounds) {
    if (!b.applicable) continue;
    attach_divergence(b, rep.divergence.value);
    if (is_violation(b, rep.vacuous)) ++rep.violations;
  }
  return rep;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

std::string csv_header() {
  return "dim,seed,pair_tag,f_name,q,bound_name,bound_value,divergence,slack,applicable";
}

std::string to_csv(const ReportRow& row) {
  const BoundReport& r = row.report;
  std::string out;
  out += std::to_string(row.dim) + ',';
  out += std::to_string(row.seed) + ',';
  out += row.pair_tag + ',';
  out += r.f_name + ',';
  out += (r.q ? format_number(*r.q) : std::string()) + ',';
  out += r.bound_name + ',';
  out += format_number(r.value) + ',';
  out += format_number(r.divergence) + ',';
  out += format_number(r.slack) + ',';
  out += r.applicable ? "true" : "false";
  return out;
}

namespace {

// Non-finite values are emitted as strings so the JSON stays lossless.
nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

nlohmann::json to_json(const ReportRow& row) {
  const BoundReport& r = row.report;
  return {{"dim", row.dim},
          {"seed", row.seed},
          {"pair_tag", row.pair_tag},
          {"f_name", r.f_name},
          {"q", r.q ? nlohmann::json(*r.q) : nlohmann::json(nullptr)},
          {"bound_name", r.bound_name},
          {"bound_value", number_json(r.value)},
          {"divergence", number_json(r.divergence)},
          {"slack", number_json(r.slack)},
          {"applicable", r.applicable}};
}

}  // namespace qre
