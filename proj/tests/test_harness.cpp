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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qre;

namespace {

struct Result {
  int status;
  std::string out;
  std::string log;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qre");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, log;
  const int status = cli_main(static_cast<int>(argv.size()), argv.data(), out, log);
  return {status, out.str(), log.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) v.push_back(line);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(cell);
  return v;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("parse_dims") {
  CHECK(parse_dims("5..8") == std::vector<Eigen::Index>{5, 6, 7, 8});
  CHECK(parse_dims("2,3,7") == std::vector<Eigen::Index>{2, 3, 7});
  CHECK(parse_dims("4") == std::vector<Eigen::Index>{4});
  CHECK_THROWS_AS(parse_dims("8..5"), UsageError);
  CHECK_THROWS_AS(parse_dims("a"), UsageError);
  CHECK_THROWS_AS(parse_dims("3,,x"), UsageError);
  CHECK_THROWS_AS(parse_dims(""), UsageError);
}

TEST_CASE("config JSON overlay and validation") {
  RunConfig c;
  c.command = Command::sweep;
  c = apply_config_json(nlohmann::json{{"dims", "2..3"},
                                       {"trials", 5},
                                       {"seed", 9},
                                       {"f", {"neg-log", "tsallis:q=0.3"}},
                                       {"log-base", "2"},
                                       {"format", "json"}},
                        c);
  CHECK(c.dims == std::vector<Eigen::Index>{2, 3});
  CHECK(c.trials == 5);
  CHECK(c.seed == 9);
  CHECK(c.f_specs.size() == 2);
  CHECK(c.log_base == LogBase::two);
  CHECK(c.format == OutputFormat::json);
  CHECK_NOTHROW(validate(c));
  CHECK_THROWS_AS(apply_config_json(nlohmann::json{{"bogus", 1}}, c), UsageError);
  CHECK_THROWS_AS(apply_config_json(nlohmann::json{{"trials", "many"}}, c), UsageError);
  CHECK_THROWS_AS(apply_config_json(nlohmann::json::array(), c), UsageError);

  RunConfig bad = c;
  bad.trials = 0;
  CHECK_THROWS_AS(validate(bad), UsageError);
  bad = c;
  bad.f_specs = {"nope"};
  CHECK_THROWS_AS(validate(bad), UsageError);
  bad = c;
  bad.command = Command::paper_example;
  bad.dims = {2};
  CHECK_THROWS_AS(validate(bad), UsageError);

  RunConfig dflt;
  dflt.command = Command::repr_check;
  CHECK(resolve_functions(dflt).size() == 6);
  dflt.q = {0.4};
  CHECK(resolve_functions(dflt).front().name == "tsallis:q=0.4");
}

TEST_CASE("paper-example table") {
  const Result r = cli({"paper-example", "--dims", "3..16"});
  REQUIRE(r.status == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 15);
  CHECK(rows[0] == "d,trace_dist,new_bound,ae11_natural,ae11_base2,winner_per_base");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    REQUIRE(cells.size() == 6);
    const double d = std::stod(cells[0]);
    CHECK(std::abs(std::stod(cells[1]) - (2 - 4 / d)) < 1e-12);
  }
  const auto d5 = split(rows[3]);
  CHECK(std::stod(d5[2]) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(std::stod(d5[3]) == doctest::Approx(0.8318).epsilon(1e-4));
  CHECK(std::stod(d5[4]) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(d5[5] == "e=ae11;2=tie");
  const auto d10 = split(rows[8]);
  CHECK(std::stod(d10[2]) == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(std::stod(d10[4]) == doctest::Approx(2.5359).epsilon(1e-4));
  CHECK(d10[5] == "e=new;2=new");

  const Result dflt = cli({"paper-example"});
  CHECK(lines(dflt.out).size() == 9);  // d = 5..12
  const Result js = cli({"paper-example", "--dims", "5", "--format", "json"});
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j.size() == 1);
  CHECK(j[0]["d"] == 5);
  CHECK(j[0]["winner_per_base"] == "e=ae11;2=tie");
}

TEST_CASE("divergence command on a serialized pair") {
  const std::string path = temp_path("qre_harness_eq_pair.json");
  Rng rng(1);
  const StatePair p = random_pair(3, rng);
  save_pair(StatePair(p.rho, p.rho), path);
  const Result r = cli({"divergence", "--pair", path});
  CHECK(r.status == kExitOk);
  const auto rows = lines(r.out);
  CHECK(rows.size() == 1 + 4 * 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    CHECK(std::abs(std::stod(cells[5])) < 1e-12);
    CHECK(cells[8] == "true");
  }
  std::remove(path.c_str());

  const Result seeded = cli({"divergence", "--dims", "4", "--seed", "5", "--f", "neg-log"});
  CHECK(seeded.status == kExitOk);
  CHECK(lines(seeded.out).size() == 4);
  CHECK(seeded.log.find("seed=5") != std::string::npos);
}

TEST_CASE("bounds command and log base") {
  const Result r = cli({"bounds", "--dims", "2", "--seed", "3", "--f", "neg-log"});
  CHECK(r.status == kExitOk);
  CHECK(lines(r.out).size() == 1 + 8);
  const Result b2 = cli({"bounds", "--dims", "2", "--seed", "3", "--f", "neg-log", "--log-base", "2"});
  CHECK(b2.status == kExitOk);
  const auto e_row = split(lines(r.out)[1]);
  const auto two_row = split(lines(b2.out)[1]);
  CHECK(two_row[3] == "neg-log:base=2");
  CHECK(std::stod(two_row[7]) == doctest::Approx(std::stod(e_row[7]) / std::log(2.0)));

  // rank-deficient sigma: infinite divergence, vacuous but not a violation
  const std::string path = temp_path("qre_harness_mixed.json");
  save_pair(mixed_rank_two_pair(5), path);
  const Result m = cli({"bounds", "--pair", path, "--f", "neg-log"});
  CHECK(m.status == kExitOk);
  CHECK(m.log.find("vacuous") != std::string::npos);
  CHECK(m.out.find(",inf,") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("sweep: clean exit, deterministic bytes, worker-count independence") {
  const Result a = cli({"sweep", "--dims", "2", "--trials", "300", "--f", "neg-log", "--seed", "4"});
  CHECK(a.status == kExitOk);
  CHECK(a.log.find("violations: 0") != std::string::npos);
  CHECK(lines(a.out).size() == 1 + 300 * 8);
  const Result b = cli({"sweep", "--dims", "2", "--trials", "300", "--f", "neg-log", "--seed", "4",
                        "--jobs", "3"});
  CHECK(a.out == b.out);
  const Result c = cli({"sweep", "--dims", "2", "--trials", "300", "--f", "neg-log", "--seed", "5"});
  CHECK(a.out != c.out);

  const Result j = cli({"sweep", "--dims", "2,3", "--trials", "3", "--q", "0.5", "--format", "json"});
  const auto arr = nlohmann::json::parse(j.out);
  REQUIRE(arr.size() > 0);
  for (const auto& row : arr) CHECK(row.size() == 10);
  CHECK(arr.front()["dim"] == 2);
  CHECK(arr.back()["dim"] == 3);
}

TEST_CASE("sweep rows reproduce with the bounds command") {
  const Result s = cli({"sweep", "--dims", "3", "--trials", "2", "--f", "neg-log", "--seed", "8"});
  const auto row = split(lines(s.out)[1]);
  const Result b = cli({"bounds", "--dims", "3", "--seed", row[1], "--f", "neg-log"});
  CHECK(lines(b.out)[1] == lines(s.out)[1]);
}

TEST_CASE("conjecture and repr-check commands") {
  const Result c = cli({"conjecture", "--dims", "3", "--trials", "50", "--seed", "1", "--format", "json"});
  CHECK(c.status == kExitOk);
  const auto j = nlohmann::json::parse(c.out);
  REQUIRE(j["records"].size() == 2);
  CHECK(j["records"][0]["form"] == "general");
  CHECK(j["records"][1]["form"] == "modular");
  CHECK(j["records"][0]["trial_count"] == 50);

  const Result h = cli({"conjecture", "--dims", "3", "--trials", "2", "--strategy", "hill_climb",
                        "--form", "general", "--steps", "20", "--plateau", "5"});
  CHECK(h.status == kExitOk);
  CHECK(lines(h.out).size() == 2);

  const Result r = cli({"repr-check", "--f", "neg-log", "--f", "neg-power:p=0.25"});
  CHECK(r.status == kExitOk);
  CHECK(lines(r.out).size() == 1 + 120);
}

TEST_CASE("exit codes") {
  CHECK(cli({}).status == kExitUsage);
  CHECK(cli({"nonsense"}).status == kExitUsage);
  CHECK(cli({"sweep", "--trials", "x"}).status == kExitUsage);
  CHECK(cli({"sweep", "--trials", "0"}).status == kExitUsage);
  CHECK(cli({"sweep", "--f", "tsallis:q=1"}).status == kExitUsage);
  CHECK(cli({"sweep", "--dims", "9..2"}).status == kExitUsage);
  CHECK(cli({"paper-example", "--log-base", "10"}).status == kExitUsage);
  CHECK(cli({"bounds", "--pair", temp_path("qre_missing_dir/none.json")}).status == kExitIo);
  CHECK(cli({"paper-example", "--out", temp_path("qre_missing_dir/out.csv")}).status == kExitIo);
  CHECK(cli({"sweep", "--config", temp_path("qre_missing_config.json")}).status == kExitIo);
  CHECK(cli({"paper-example", "--help"}).status == 0);

  const std::string bad_pair = temp_path("qre_harness_bad_pair.json");
  {
    nlohmann::json j = to_json(mixed_rank_two_pair(3));
    j["rho"][0] = {3.0, 0.0};
    std::ofstream(bad_pair) << j.dump();
  }
  CHECK(cli({"bounds", "--pair", bad_pair}).status == kExitValidation);
  {
    std::ofstream(bad_pair) << "{not json";
  }
  CHECK(cli({"bounds", "--pair", bad_pair}).status == kExitValidation);
  std::remove(bad_pair.c_str());
}

TEST_CASE("config file with flag override") {
  const std::string cfg = temp_path("qre_harness_config.json");
  std::ofstream(cfg) << R"({"dims": [5, 6], "format": "json"})";
  const Result a = cli({"paper-example", "--config", cfg});
  CHECK(a.status == kExitOk);
  CHECK(nlohmann::json::parse(a.out).size() == 2);
  const Result b = cli({"paper-example", "--config", cfg, "--dims", "7"});
  const auto j = nlohmann::json::parse(b.out);
  CHECK(j.size() == 1);
  CHECK(j[0]["d"] == 7);
  std::ofstream(cfg) << "{oops";
  CHECK(cli({"paper-example", "--config", cfg}).status == kExitUsage);
  std::remove(cfg.c_str());
}

TEST_CASE("output file") {
  const std::string path = temp_path("qre_harness_out.csv");
  const Result r = cli({"paper-example", "--dims", "5", "--out", path});
  CHECK(r.status == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "d,trace_dist,new_bound,ae11_natural,ae11_base2,winner_per_base");
  std::remove(path.c_str());
}
