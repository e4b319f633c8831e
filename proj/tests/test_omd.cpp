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

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qre;

namespace {

std::vector<OmdFunction> builtins() {
  return {neg_log(),    neg_power(0.25), neg_power(0.5), neg_power(0.75),
          tsallis(0.3), tsallis(0.5),    tsallis(1.5),   tsallis(1.9)};
}

double central_d1(const OmdFunction& f) {
  const double h = 1e-5;
  return (f(1 + h) - f(1 - h)) / (2 * h);
}

double central_d2(const OmdFunction& f) {
  const double h = 1e-4;
  return (f(1 + h) - 2 * f(1.0) + f(1 - h)) / (h * h);
}

}  // namespace

TEST_CASE("quadrature on known integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(integrate_half_line([](double t) { return 1 / (1 + t * t); }) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-9));
  // t^-1/2 singularity at the origin and a slow t^-3/2 tail
  CHECK(integrate_half_line([](double t) { return 1 / (std::sqrt(t) * (1 + t)); }) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-8));
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1 / x); }, 1e-6, 1, {1e-14, 50}),
                  QuadratureError);
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0, 1), QuadratureError);
}

TEST_CASE("builtins vanish at 1 and match analytic derivatives") {
  for (const auto& f : builtins()) {
    CAPTURE(f.name);
    CHECK(f(1.0) == 0.0);
    CHECK(f.a >= 0);
    CHECK(f.d1_at_1 == doctest::Approx(central_d1(f)).epsilon(1e-6));
    CHECK(f.d2_at_1 == doctest::Approx(central_d2(f)).epsilon(1e-5));
  }
  CHECK(neg_log().d1_at_1 == -1.0);
  CHECK(neg_log().d2_at_1 == 1.0);
  for (double q : {0.1, 0.3, 0.7, 1.2, 1.5, 1.9}) {
    CHECK(std::abs(tsallis(q).d2_at_1 - q) < 1e-12);
    CHECK(tsallis(q).d1_at_1 == doctest::Approx(-1.0));
  }
}

TEST_CASE("builtin limits at zero") {
  CHECK(std::isinf(neg_log().at_zero));
  CHECK(neg_power(0.5).at_zero == 1.0);
  CHECK(tsallis(0.3).at_zero == doctest::Approx(1 / 0.7));
  CHECK(std::isinf(tsallis(1.5).at_zero));
  for (const auto& f : builtins()) {
    CAPTURE(f.name);
    if (std::isfinite(f.at_zero)) CHECK(f(1e-40) == doctest::Approx(f.at_zero).epsilon(1e-6));
  }
}

TEST_CASE("neg-power b matches cos(p pi / 2)") {
  for (double p : {0.25, 0.5, 0.75}) {
    CHECK(std::abs(neg_power(p).b - std::cos(p * std::numbers::pi / 2)) < 1e-12);
    CHECK(neg_power(p).shift == 1.0);
  }
}

TEST_CASE("normalization constraint holds for builtins") {
  for (const auto& f : builtins()) {
    CAPTURE(f.name);
    CHECK(std::abs(normalization_residual(f)) < 1e-6);
  }
}

TEST_CASE("eval_via_representation examples") {
  CHECK(std::abs(eval_via_representation(neg_log(), 1.0)) < 1e-12);
  CHECK(eval_via_representation(neg_log(), 2.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-9));
  CHECK(eval_via_representation(tsallis(0.5), 4.0) == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK_THROWS_AS(eval_via_representation(neg_log(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_via_representation(neg_log(), -1.0), std::invalid_argument);
}

TEST_CASE("representation round trip on the log grid") {
  for (const auto& f : builtins()) {
    CAPTURE(f.name);
    const auto rows = representation_round_trip(f);
    REQUIRE(rows.size() == 60);
    CHECK(rows.front().x == doctest::Approx(1e-3));
    CHECK(rows.back().x == doctest::Approx(1e3));
    double worst = 0;
    for (const auto& r : rows) worst = std::max(worst, r.relative_error);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("custom functions are validated") {
  const auto w1 = [](double) { return 1.0; };
  const auto nl = [](double x) { return -std::log(x); };
  const double inf = std::numeric_limits<double>::infinity();
  const OmdFunction f = make_custom("my-log", nl, 0, 0, w1, -1, 1, inf);
  CHECK(f.kind == OmdKind::custom);
  CHECK(eval_via_representation(f, 3.0) == doctest::Approx(-std::log(3.0)).epsilon(1e-9));

  CHECK_THROWS_AS(make_custom("bad-b", nl, 0, 1, w1, -1, 1, inf), std::invalid_argument);
  CHECK_THROWS_AS(make_custom("bad-a", nl, -1, -1, w1, -1, 1, inf), std::invalid_argument);
  CHECK_THROWS_AS(make_custom("bad-f1", [](double x) { return 1 - std::log(x); }, 0, 0, w1, -1, 1, inf),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_custom("bad-w", nl, 0, 0, [](double t) { return t > 1 ? -1.0 : 1.0; }, -1, 1, inf),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_custom("missing", nullptr, 0, 0, w1, -1, 1, inf), std::invalid_argument);
}

TEST_CASE("parse_function") {
  CHECK(parse_function("neg-log").kind == OmdKind::neg_log);
  CHECK(parse_function("neg-power:p=0.5").name == "neg-power:p=0.5");
  CHECK(parse_function("neg-power:0.5").name == "neg-power:p=0.5");
  CHECK(parse_function("tsallis:q=0.3").name == "tsallis:q=0.3");
  CHECK(parse_function("tsallis:1.5").parameter == 1.5);
  CHECK(tsallis_name(0.3) == "tsallis:q=0.3");
  for (const char* bad : {"tsallis:q=1", "tsallis:q=2", "tsallis", "neg-power:p=1.5",
                          "neg-power:p=abc", "neg-log:1", "log", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_function(bad), std::invalid_argument);
  }
}

TEST_CASE("dual_function") {
  const ScalarFunction g = dual_function(neg_log());
  for (double x : {0.1, 0.5, 2.0, 7.0}) CHECK(g(x) == doctest::Approx(x * std::log(x)));
  CHECK(g.limit_at_zero() == 0.0);

  const ScalarFunction lin{"1-x", [](double x) { return 1 - x; }, std::nullopt};
  const ScalarFunction dl = dual_function(lin);
  for (double x : {0.1, 0.5, 2.0}) CHECK(dl(x) == doctest::Approx(x - 1));

  for (const auto& f : builtins()) {
    const ScalarFunction twice = dual_function(dual_function(f.scalar()));
    for (int i = -20; i <= 20; ++i) {
      const double x = std::pow(10.0, i / 10.0);
      REQUIRE(std::abs(twice(x) - f(x)) <= 1e-12 * std::max(1.0, std::abs(f(x))));
    }
  }
}

TEST_CASE("monotonicity spot check") {
  Rng rng(12);
  const auto r = monotonicity_spot_check(neg_log().scalar(), 3, 100, rng);
  CHECK(r.trials == 100);
  CHECK(r.violations == 0);
  for (const auto& f : builtins()) {
    CAPTURE(f.name);
    CHECK(monotonicity_spot_check(f.scalar(), 4, 50, rng).violations == 0);
  }

  const ScalarFunction square{"x^2", [](double x) { return x * x; }, std::nullopt};
  CHECK(monotonicity_spot_check(square, 2, 50, rng).violations > 0);

  const ScalarFunction decreasing{"exp(-x)", [](double x) { return std::exp(-x); }, std::nullopt};
  CHECK(monotonicity_spot_check(decreasing, 1, 200, rng).violations == 0);
  CHECK_THROWS_AS(monotonicity_spot_check(square, 9, 1, rng), std::invalid_argument);
}
