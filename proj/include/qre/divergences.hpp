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

// Quasi-relative entropy S_f(rho||sigma) = Tr(f(Delta_{sigma,rho}) rho),
// where Delta_{sigma,rho}(X) = sigma X rho^-1 is the relative modular
// operator.  Three independent evaluations are provided:
//
//  * spectral:      sum_{j,k} lambda_j f(mu_k/lambda_j) |<phi_k|psi_j>|^2
//  * direct:        trace formulas (Umegaki, Tsallis, power)
//  * superoperator: the d^2 x d^2 matrix of Delta, diagonalized on its own,
//                   paired with vec(rho^1/2) in the Hilbert-Schmidt product.

#include "qre/omd.hpp"
#include "qre/states.hpp"

#include <limits>
#include <optional>
#include <string>

namespace qre {

enum class Method { spectral, direct, superoperator };

std::string to_string(Method m);

struct DivergenceResult {
  double value = 0;  // may be +inf
  Method method = Method::spectral;
  std::string f_name;
  ScalarSummary pair_summary;

  bool is_finite() const { return std::isfinite(value); }
};

/// Overlap weights below this are skipped in the spectral sum.
inline constexpr double kOverlapCutoff = 1e-16;

/// The spectral double sum on raw data.  Terms with lambda_j at or below the
/// rank threshold carry zero weight (generalized inverse); mu_k at or below
/// the threshold use f's limit at 0, so an unbounded f yields +inf.
double quasi_entropy_from_spectra(const Vector& lambda, const Vector& mu,
                                  const RealMatrix& overlaps, const ScalarFunction& f);

DivergenceResult quasi_entropy_spectral(const StatePair& pair, const ScalarFunction& f);
inline DivergenceResult quasi_entropy_spectral(const StatePair& pair, const OmdFunction& f) {
  return quasi_entropy_spectral(pair, f.scalar());
}

/// Tr(rho (log rho - log sigma)), natural log; +inf unless ker sigma is in ker rho.
DivergenceResult umegaki(const StatePair& pair);

/// (1 - Tr(rho^q sigma^(1-q))) / (1 - q), q in (0, 2) \ {1}.
DivergenceResult tsallis_direct(const StatePair& pair, double q);

/// 1 - Tr(rho^(1-p) sigma^p), the divergence of 1 - x^p.
DivergenceResult power_direct(const StatePair& pair, double p);

/// The direct formula matching a builtin, or nullopt for custom functions.
std::optional<DivergenceResult> direct_for(const StatePair& pair, const OmdFunction& f);

inline constexpr Eigen::Index kSuperoperatorMaxDim = 12;

/// Matrix of Delta_{sigma,rho} under column stacking, (rho^-1)^T kron sigma,
/// diagonalized once so several functions can be applied.
class ModularOperator {
 public:
  /// Requires both states strictly positive and dim <= 12.
  explicit ModularOperator(const StatePair& pair);

  const HermitianMatrix& matrix() const { return delta_; }
  const EigenSystem<double>& spectral() const { return es_; }

  /// <vec(rho^1/2), f(Delta) vec(rho^1/2)>
  double pairing(const ScalarFunction& f) const;

 private:
  HermitianMatrix delta_;
  EigenSystem<double> es_;
  Matrix weights_;  // V^H vec(rho^1/2)
  RVector<long double> values_;
  CMatrix<long double> weights_ld_;
};

DivergenceResult quasi_entropy_superoperator(const StatePair& pair, const ScalarFunction& f);
inline DivergenceResult quasi_entropy_superoperator(const StatePair& pair, const OmdFunction& f) {
  return quasi_entropy_superoperator(pair, f.scalar());
}

/// Tr(f(Delta_{rho,sigma}) sigma) = S_f(sigma||rho).
DivergenceResult swapped_entropy(const StatePair& pair, const ScalarFunction& f);

}  // namespace qre
