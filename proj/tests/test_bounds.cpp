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

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace qre;

namespace {

DensityMatrix diag_state(double a, double b) {
  Vector v(2);
  v << a, b;
  return DensityMatrix::diagonal(v);
}

DensityMatrix rotated_state(double a, double b) {
  Matrix u(2, 2);
  const double s = 1 / std::sqrt(2.0);
  u << s, s, s, -s;
  Vector v(2);
  v << a, b;
  return DensityMatrix(HermitianMatrix(
      Matrix(u * v.cast<std::complex<double>>().asDiagonal() * u.adjoint()), 1e-12));
}

std::map<std::string, BoundReport> by_name(const std::vector<BoundReport>& v) {
  std::map<std::string, BoundReport> out;
  for (const auto& b : v) out[b.bound_name] = b;
  return out;
}

std::vector<OmdFunction> all_builtins() {
  return {neg_log(),    neg_power(0.25), neg_power(0.5), neg_power(0.75),
          tsallis(0.3), tsallis(0.5),    tsallis(1.5)};
}

}  // namespace

TEST_CASE("divided differences: formula and limit agree near the diagonal") {
  const double x = 0.3;
  const double y = x + 1e-6;
  CHECK(log_divided_difference_formula(x, y) ==
        doctest::Approx(log_divided_difference_limit(x, y)).epsilon(1e-5));
  for (double q : {0.3, 0.7}) {
    CHECK(power_divided_difference_formula(x, y, 1 - q) ==
          doctest::Approx(power_divided_difference_limit(x, y, 1 - q)).epsilon(1e-5));
  }
  for (const auto& f : all_builtins()) {
    CAPTURE(f.name);
    CHECK(omd_bracket_formula(f, 0.4, 0.4 - 1e-6) ==
          doctest::Approx(omd_bracket_limit(f, 0.4, 0.4 - 1e-6)).epsilon(1e-5));
  }
  // guarded versions switch to the limit below the gap
  CHECK(log_divided_difference(0.2, 0.2) == doctest::Approx(5.0));
  CHECK(power_divided_difference(0.25, 0.25, 0.5) == doctest::Approx(1.0));
  CHECK(omd_bracket(neg_log(), 0.5, 0.5) == doctest::Approx(1.0));
  CHECK(std::isfinite(log_divided_difference(0.2, 0.2 + 1e-12)));
  CHECK(log_divided_difference(1.0, 2.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("pinsker lower bound") {
  const StatePair diag(diag_state(0.5, 0.5), diag_state(0.75, 0.25));
  const ScalarSummary s = summarize(diag);
  CHECK(pinsker_lower(s, neg_log()).value == doctest::Approx(0.125));
  CHECK(pinsker_lower(s, tsallis(0.3)).value == doctest::Approx(0.3 / 2 * 0.25));
  CHECK(pinsker_lower(s, neg_log()).kind == BoundKind::lower);
  const StatePair eq(diag_state(0.5, 0.5), diag_state(0.5, 0.5));
  CHECK(pinsker_lower(summarize(eq), neg_log()).value == 0.0);
}

TEST_CASE("qubit/commuting bound examples") {
  const StatePair p(DensityMatrix::maximally_mixed(2), rotated_state(0.75, 0.25));
  const ScalarSummary s = summarize(p);
  const BoundReport b = qubit_classical_upper(s, neg_log());
  CHECK(b.applicable);
  CHECK(b.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(general_sqrt_d_upper(s, neg_log()).value ==
        doctest::Approx(std::sqrt(2.0) * b.value).epsilon(1e-14));

  // lambda_rho = alpha_sigma: the limit branch gives -f'(1) ||rho - sigma||_1
  const StatePair mm(DensityMatrix::maximally_mixed(2), diag_state(0.7, 0.3));
  const ScalarSummary sm = summarize(mm);
  CHECK(sm.lambda_rho == doctest::Approx(0.5));
  const StatePair lim(diag_state(0.5, 0.5), diag_state(0.5, 0.5));
  CHECK(qubit_classical_upper(summarize(lim), neg_log()).value == 0.0);

  Rng rng(3);
  const StatePair p3 = random_pair(3, rng);
  const BoundReport na = qubit_classical_upper(summarize(p3), neg_log());
  CHECK_FALSE(na.applicable);
  CHECK(na.reason == "requires qubit or commuting pair");
  CHECK(std::isnan(na.value));
  const StatePair c3 = random_classical_pair(3, rng);
  CHECK(qubit_classical_upper(summarize(c3), neg_log()).applicable);
}

TEST_CASE("the bracket with an affine part subtracts a") {
  // f(x) = -log x + (1 - x): a = 1, same measure as -log
  const double inf = std::numeric_limits<double>::infinity();
  const OmdFunction f = make_custom(
      "neg-log-plus-linear", [](double x) { return -std::log(x) + 1 - x; }, 1.0, -1.0,
      [](double) { return 1.0; }, -2.0, 1.0, inf);
  const double lambda = 0.6;
  const double alpha = 0.1;
  const double x = alpha / lambda;
  const double expected = lambda / (lambda - alpha) * f(x) - 1.0;
  CHECK(omd_bracket(f, lambda, alpha) == doctest::Approx(expected));
  // the bracket equals that of -log x since lambda/(lambda-alpha) (1 - x) = 1
  CHECK(omd_bracket(f, lambda, alpha) == doctest::Approx(omd_bracket(neg_log(), lambda, alpha)));
  CHECK(omd_bracket_limit(f, 0.5, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("relative entropy bounds on the mixed/rank-two example") {
  const ScalarSummary s5 = summarize(mixed_rank_two_pair(5));
  const TightLoose r5 = relative_entropy_upper(s5);
  CHECK(r5.tight.value == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(r5.loose.value == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(ae11_upper(s5, LogBase::two).value == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(ae11_upper(s5, LogBase::e).value == doctest::Approx(0.6 * std::log(4.0)).epsilon(1e-12));

  const ScalarSummary s10 = summarize(mixed_rank_two_pair(10));
  CHECK(relative_entropy_upper(s10).tight.value == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(ae11_upper(s10, LogBase::two).value == doctest::Approx(0.8 * std::log2(9.0)).epsilon(1e-12));
  CHECK(ae11_upper(s10, LogBase::two).value == doctest::Approx(2.5360).epsilon(1e-4));
  CHECK(relative_entropy_upper(s10).tight.value < ae11_upper(s10, LogBase::two).value);

  const StatePair eq(diag_state(0.5, 0.5), diag_state(0.5, 0.5));
  CHECK(relative_entropy_upper(summarize(eq)).tight.value == 0.0);
  CHECK(ae11_upper(summarize(eq)).value == 0.0);
}

TEST_CASE("qubit relative entropy bound") {
  const StatePair p(DensityMatrix::maximally_mixed(2), rotated_state(0.75, 0.25));
  const TightLoose r = qubit_relative_upper(summarize(p));
  CHECK(r.tight.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(r.loose.value == doctest::Approx(1.0).epsilon(1e-12));
  const TightLoose na = qubit_relative_upper(summarize(mixed_rank_two_pair(3)));
  CHECK_FALSE(na.tight.applicable);
  CHECK_FALSE(na.loose.applicable);
}

TEST_CASE("tsallis bounds") {
  const StatePair diag(diag_state(0.5, 0.5), diag_state(0.75, 0.25));
  const ScalarSummary s = summarize(diag);
  auto lt = by_name(tsallis_bounds(s, 0.5));
  const double tight = 2 * 0.5 * std::sqrt(0.5) * (std::sqrt(0.5) - std::sqrt(0.25)) / 0.25;
  CHECK(lt["tsallis-lt1-tight"].value == doctest::Approx(tight).epsilon(1e-12));
  CHECK(tight == doctest::Approx(0.58579).epsilon(1e-5));
  CHECK(lt["tsallis-lt1-tight"].q == 0.5);
  CHECK(lt["tsallis-lt1-tight"].f_name == "tsallis:q=0.5");
  CHECK_FALSE(lt["tsallis-ceil"].applicable);
  CHECK_FALSE(lt["tsallis-gt1-prior"].applicable);
  CHECK(lt["tsallis-qubit-tight"].applicable);

  auto gt = by_name(tsallis_bounds(s, 1.5));
  CHECK(gt["tsallis-gt1-improved"].value ==
        doctest::Approx(0.5 * gt["tsallis-gt1-prior"].value).epsilon(1e-14));
  CHECK(gt["tsallis-ceil"].applicable);
  // ceil(1.5) = 2: (2-1)/(0.5) (0.75/0.25)^0.5 * 0.5
  CHECK(gt["tsallis-ceil"].value == doctest::Approx(2 * std::sqrt(3.0) * 0.5));
  CHECK_FALSE(gt["tsallis-lt1-tight"].applicable);

  // q = 2 is inside the stated range of the q > 1 bounds
  auto two = by_name(tsallis_bounds(s, 2.0));
  CHECK(two["tsallis-gt1-improved"].value == doctest::Approx(two["tsallis-gt1-prior"].value));
  CHECK(two["tsallis-ceil"].value == doctest::Approx(0.75 / 0.25 * 0.5));
  CHECK_THROWS_AS(tsallis_bounds(s, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tsallis_bounds(s, 2.5), std::invalid_argument);

  const StatePair eq(diag_state(0.5, 0.5), diag_state(0.5, 0.5));
  for (double q : {0.3, 1.5}) {
    for (const auto& b : tsallis_bounds(summarize(eq), q)) {
      if (b.applicable) CHECK(b.value == 0.0);
    }
  }
}

TEST_CASE("slack sign and violation rules") {
  BoundReport up;
  up.kind = BoundKind::upper;
  up.value = 1.0;
  attach_divergence(up, 0.4);
  CHECK(up.slack == doctest::Approx(0.6));
  CHECK_FALSE(is_violation(up, false));
  attach_divergence(up, 1.5);
  CHECK(is_violation(up, false));
  CHECK_FALSE(is_violation(up, true));

  BoundReport low;
  low.kind = BoundKind::lower;
  low.value = 0.2;
  attach_divergence(low, 0.1);
  CHECK(low.slack == doctest::Approx(-0.1));
  CHECK(is_violation(low, true));
  low.applicable = false;
  CHECK_FALSE(is_violation(low, false));
}

TEST_CASE("sandwich examples") {
  const StatePair p(DensityMatrix::maximally_mixed(2), rotated_state(0.75, 0.25));
  const SandwichReport rep = sandwich(p, neg_log());
  CHECK(rep.sound());
  CHECK_FALSE(rep.vacuous);
  CHECK(rep.divergence.value == doctest::Approx(0.5 * std::log(4.0 / 3.0)));
  const auto b = by_name(rep.bounds);
  for (const char* name : {"pinsker", "omd-commuting", "omd-sqrt-d", "relent-tight", "relent-loose",
                           "audenaert-eisert", "relent-qubit-tight", "relent-qubit-loose"}) {
    const std::string n = name;
    CAPTURE(n);
    REQUIRE(b.count(n) == 1);
    CHECK(b.at(n).slack >= -kSlackTolerance);
  }
  CHECK(b.at("omd-commuting").value == doctest::Approx(std::log(2.0)));
  // rho maximally mixed attains the Audenaert-Eisert bound.
  CHECK(b.at("audenaert-eisert").value == doctest::Approx(rep.divergence.value).epsilon(1e-12));

  Rng rng(6);
  const StatePair c = random_classical_pair(5, rng);
  const SandwichReport ts = sandwich(c, tsallis(0.3));
  CHECK(ts.sound());
  CHECK(by_name(ts.bounds).at("omd-commuting").applicable);
  CHECK(by_name(ts.bounds).at("tsallis-lt1-tight").applicable);

  Rng r2(8);
  const StatePair x = random_pair(2, r2);
  const StatePair eq(x.rho, x.rho);
  for (const auto& f : all_builtins()) {
    const SandwichReport z = sandwich(eq, f);
    CHECK(z.sound());
    for (const auto& bb : z.bounds) {
      if (bb.applicable) CHECK(std::abs(bb.value) < 1e-12);
    }
  }
}

TEST_CASE("vacuous sandwich for an infinite divergence") {
  const SandwichReport rep = sandwich(mixed_rank_two_pair(5), neg_log());
  CHECK(rep.vacuous);
  CHECK(std::isinf(rep.divergence.value));
  CHECK(rep.sound());
  const auto b = by_name(rep.bounds);
  CHECK(b.at("relent-tight").value == doctest::Approx(1.2));
  CHECK(std::isinf(b.at("pinsker").slack));
}

TEST_CASE("sandwich soundness on random qubit and commuting pairs") {
  Rng rng(314);
  for (int trial = 0; trial < 2000; ++trial) {
    const StatePair p = trial % 2 ? random_pair(2, rng)
                                  : random_classical_pair(2 + trial % 7, rng);
    for (const auto& f : all_builtins()) {
      const SandwichReport rep = sandwich(p, f);
      for (const auto& b : rep.bounds) {
        CAPTURE(b.bound_name);
        CAPTURE(b.f_name);
        REQUIRE_FALSE(is_violation(b, rep.vacuous));
      }
    }
  }
}

TEST_CASE("bound orderings on random pairs") {
  Rng rng(2718);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Index d = 2 + trial % 7;
    const ScalarSummary s = summarize(random_pair(d, rng));
    const TightLoose r = relative_entropy_upper(s);
    REQUIRE(r.tight.value <= r.loose.value + 1e-12);
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      auto b = by_name(tsallis_bounds(s, q));
      REQUIRE(b["tsallis-lt1-tight"].value <= b["tsallis-lt1-loose"].value * (1 + 1e-12));
      REQUIRE(b["tsallis-lt1-tight"].value <= b["tsallis-lt1-prior"].value * (1 + 1e-12));
    }
    for (double q : {1.1, 1.5, 2.0}) {
      auto b = by_name(tsallis_bounds(s, q));
      REQUIRE(b["tsallis-gt1-improved"].value <= b["tsallis-gt1-prior"].value);
      REQUIRE(std::abs(b["tsallis-gt1-improved"].value - (q - 1) * b["tsallis-gt1-prior"].value) <=
              1e-12 * b["tsallis-gt1-prior"].value);
    }
  }
}

TEST_CASE("bounds are invariant under joint conjugation") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const StatePair p = random_pair(d, rng);
    const StatePair q = conjugate(p, random_unitary(d, rng));
    const auto a = sandwich(p, tsallis(0.5)).bounds;
    const auto b = sandwich(q, tsallis(0.5)).bounds;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].applicable) continue;
      REQUIRE(std::abs(a[i].value - b[i].value) <= 1e-9 * std::max(1.0, std::abs(a[i].value)));
    }
  }
}

TEST_CASE("report rows") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(std::stod(format_number(0.1)) == 0.1);

  const StatePair p(DensityMatrix::maximally_mixed(2), rotated_state(0.75, 0.25));
  const SandwichReport rep = sandwich(p, tsallis(0.3));
  const ReportRow row{2, 17, "random", rep.bounds.back()};
  CHECK(csv_header() ==
        "dim,seed,pair_tag,f_name,q,bound_name,bound_value,divergence,slack,applicable");
  const std::string line = to_csv(row);
  CHECK(std::count(line.begin(), line.end(), ',') == 9);
  CHECK(line.rfind("2,17,random,tsallis:q=0.3,0.29999999999999999,", 0) == 0);
  const nlohmann::json j = to_json(row);
  for (const char* key : {"dim", "seed", "pair_tag", "f_name", "q", "bound_name", "bound_value",
                          "divergence", "slack", "applicable"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.size() == 10);
}
