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

#include "qre/hermitian.hpp"
#include "qre/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qre {

/// Eigenvalues at or below this count as zero.
inline constexpr double kRankThreshold = 1e-10;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-12;

/// A validated density matrix with its cached spectral decomposition.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument unless trace == 1 and eigenvalues >= 0
  /// (both within 1e-12).
  explicit DensityMatrix(HermitianMatrix m);
  explicit DensityMatrix(const Matrix& m) : DensityMatrix(HermitianMatrix(m)) {}

  static DensityMatrix maximally_mixed(Eigen::Index d);
  static DensityMatrix diagonal(const Vector& probabilities);

  Eigen::Index dim() const { return m_.dim(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const Matrix& matrix() const { return m_.matrix(); }
  const EigenSystem<double>& spectral() const { return es_; }
  const Vector& eigenvalues() const { return es_.values; }

  double largest_eigenvalue() const { return es_.largest(); }
  /// Smallest eigenvalue above the rank threshold.
  double smallest_positive_eigenvalue() const;
  bool is_strictly_positive() const { return es_.smallest() > kRankThreshold; }
  Eigen::Index rank() const;

 private:
  HermitianMatrix m_;
  EigenSystem<double> es_;
};

/// Two states plus the squared-overlap matrix O(k, j) = |<phi_k|psi_j>|^2,
/// where psi_j are the eigenvectors of rho and phi_k those of sigma.
struct StatePair {
  StatePair(DensityMatrix rho_in, DensityMatrix sigma_in, std::uint64_t seed_in = 0,
            std::vector<std::string> tags_in = {});

  DensityMatrix rho;
  DensityMatrix sigma;
  RealMatrix overlaps;
  std::uint64_t seed = 0;
  std::vector<std::string> tags;

  Eigen::Index dim() const { return rho.dim(); }
  std::string tag() const;
};

/// Scalar inputs consumed by the continuity bounds.
struct ScalarSummary {
  double lambda_rho = 0;   // largest eigenvalue of rho
  double lambda_sigma = 0; // largest eigenvalue of sigma
  double alpha_rho = 0;    // smallest non-zero eigenvalue of rho
  double alpha_sigma = 0;  // smallest non-zero eigenvalue of sigma
  double alpha = 0;        // min(alpha_rho, alpha_sigma)
  double T = 0;            // ||rho - sigma||_1 / 2
  double trace_distance_1 = 0;
  double commutator_norm = 0;  // ||[rho, sigma]||_F
  bool rho_strict = false;
  bool sigma_strict = false;
  Eigen::Index dim = 0;
};

inline constexpr double kCommutingTolerance = 1e-10;

ScalarSummary summarize(const StatePair& pair);

/// G G^H / Tr(G G^H) for a complex Ginibre matrix G, redrawn until the
/// smallest eigenvalue clears the rank threshold.
DensityMatrix random_state(Eigen::Index dim, Rng& rng);

/// Haar-random unitary: QR of a complex Ginibre matrix with R's diagonal
/// made positive.
Matrix random_unitary(Eigen::Index dim, Rng& rng);

/// Independent random_state draws for rho and sigma.
StatePair random_pair(Eigen::Index dim, Rng& rng);

enum class Alignment {
  sorted,    // both spectra descending along the shared basis: overlaps = I
  shuffled,  // sigma's spectrum in random order: overlaps is a permutation
};

/// Two states diagonal in one shared Haar-random basis.
StatePair random_classical_pair(Eigen::Index dim, Rng& rng,
                                Alignment alignment = Alignment::shuffled);

/// rho = I/d, sigma = (1/d)|1><1| + (1 - 1/d)|2><2|.  Requires d >= 3.
StatePair mixed_rank_two_pair(Eigen::Index dim);

/// Joint conjugation rho -> U rho U^H, sigma -> U sigma U^H.
StatePair conjugate(const StatePair& pair, const Matrix& u);

// JSON schema: {dim, rho: [[re, im], ...] row-major, sigma: ..., seed, tags}
nlohmann::json to_json(const StatePair& pair);
StatePair pair_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, Eigen::Index dim);

StatePair load_pair(const std::string& path);
void save_pair(const StatePair& pair, const std::string& path);

}  // namespace qre
