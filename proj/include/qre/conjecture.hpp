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

// Weighted-overlap operators
//
//   D = sum_{k,j} C_kj <psi_j|phi_k> |psi_j><phi_k|,   0 <= C_kj <= C,
//
// and the dimension-free inequality |Tr(D X)| <= C ||X||_1.  The inequality
// is known when X is diagonal in one of the two bases, or when d = 2 and X
// is traceless.  For X = rho - sigma with psi, phi the eigenbases it is open
// in general; conjecture_search looks for counterexamples.

#include "qre/states.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qre {

struct WeightedOverlapFunctional {
  RealMatrix C;      // C(k, j): k indexes phi, j indexes psi
  double C_cap = 1;  // bound on every entry
  Matrix psi;        // columns psi_j
  Matrix phi;        // columns phi_k

  Eigen::Index dim() const { return C.rows(); }
};

/// Functional on the eigenbases of `pair` (psi from rho, phi from sigma).
/// Throws std::invalid_argument if an entry leaves [0, C_cap].
WeightedOverlapFunctional functional_on_pair(const StatePair& pair, RealMatrix C, double C_cap);

/// C_kj = (t + mu_k/lambda_j)^-1, C_cap = (t + alpha_sigma/lambda_rho)^-1.
/// Requires t > 0 and rho strictly positive.
WeightedOverlapFunctional modular_weight_matrix(const StatePair& pair, double t);

/// The operator D itself: Psi (C^T .* Psi^H Phi) Phi^H.
Matrix d_matrix(const WeightedOverlapFunctional& w);

/// sum_{k,j} C_kj (lambda_j - mu_k) |<phi_k|psi_j>|^2, using the pair's
/// spectra and overlaps.  The functional's bases must be the pair's.
double functional_value(const WeightedOverlapFunctional& w, const StatePair& pair);

/// Tr(D (rho - sigma)) through the explicit matrix D.
double functional_value_explicit(const WeightedOverlapFunctional& w, const StatePair& pair);

/// |Tr(D (rho - sigma))| / (C ||rho - sigma||_1); 0 when rho = sigma.
double conjecture_ratio(const WeightedOverlapFunctional& w, const StatePair& pair);

enum class ProvenCase {
  diagonal,         // X diagonal in the psi or in the phi basis
  qubit_traceless,  // d = 2 and Tr X = 0
};

std::string to_string(ProvenCase c);

/// True iff |Tr(D X)| <= C ||X||_1 + 1e-10.  Throws std::invalid_argument
/// when X does not satisfy the case's hypothesis.
bool proven_case_check(const WeightedOverlapFunctional& w, const HermitianMatrix& x,
                       ProvenCase which);

struct ProvenCaseSweep {
  long trials = 0;
  long violations = 0;
  double max_ratio = 0;  // max |Tr(DX)| / (C ||X||_1)
};

/// Random bases, C uniform on [0, 1] and X drawn to satisfy the hypothesis.
ProvenCaseSweep proven_case_sweep(ProvenCase which, Eigen::Index dim, long trials,
                                  std::uint64_t seed);

enum class SearchStrategy { random, hill_climb };
enum class WeightForm { general, modular };

std::string to_string(SearchStrategy s);
std::string to_string(WeightForm f);

inline constexpr double kViolationSlack = 1e-10;

struct SearchOptions {
  std::vector<Eigen::Index> dims{3, 4, 5, 6};
  long trials = 1000;  // random: instances; hill_climb: restarts
  SearchStrategy strategy = SearchStrategy::random;
  WeightForm form = WeightForm::general;
  std::uint64_t seed = 0;
  bool commuting = false;  // draw commuting pairs (a proven case)
  double step = 0.05;
  int steps_per_restart = 200;
  int plateau = 30;
  std::size_t max_recorded_violations = 100;
  unsigned jobs = 1;
};

/// One evaluated instance with everything needed to replay it.
struct SearchInstance {
  long trial = 0;
  double ratio = 0;
  nlohmann::json data;  // {pair, C, C_cap, t?, ratio, trial}
};

struct SearchRecord {
  std::uint64_t seed = 0;
  std::vector<Eigen::Index> dims;
  SearchStrategy strategy = SearchStrategy::random;
  WeightForm form = WeightForm::general;
  bool commuting = false;
  long trial_count = 0;      // instances evaluated
  double max_ratio = 0;
  std::optional<SearchInstance> argmax;
  long violation_count = 0;  // instances with ratio > 1 + 1e-10
  std::vector<SearchInstance> violations;  // first few, by trial index
};

/// Associative and commutative: max ratio (ties to the lower trial index),
/// union of violations.
SearchRecord merge(SearchRecord a, const SearchRecord& b, std::size_t max_recorded);

/// Deterministic for a fixed seed irrespective of opts.jobs.
SearchRecord conjecture_search(const SearchOptions& opts);

nlohmann::json to_json(const SearchRecord& r);

/// Recomputes the ratio of a serialized instance from its pair and weights.
double replay_instance(const nlohmann::json& data);

}  // namespace qre
