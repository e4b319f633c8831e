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

#include "qre/divergences.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qre {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DivergenceResult make_result(double value, Method method, std::string name,
                             const StatePair& pair) {
  return {value, method, std::move(name), summarize(pair)};
}

// Weight of rho on ker(sigma).
double kernel_weight(const StatePair& pair) {
  const auto& es = pair.sigma.spectral();
  double w = 0;
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    if (es.values(k) > kRankThreshold) continue;
    const auto phi = es.vectors.col(k);
    w += (phi.adjoint() * pair.rho.matrix() * phi)(0, 0).real();
  }
  return w;
}

// f applied on the support of a state, 0 on its kernel.
HermitianMatrix on_support(const DensityMatrix& d, const std::function<double(double)>& f) {
  return mat_func(d.spectral(), [&](double x) { return x > kRankThreshold ? f(x) : 0.0; });
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  // Tr(AB) = sum_ij A_ij B_ji
  return (a.matrix().transpose().cwiseProduct(b.matrix())).sum().real();
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::spectral:
      return "spectral";
    case Method::direct:
      return "direct";
    case Method::superoperator:
      return "superoperator";
  }
  return "unknown";
}

double quasi_entropy_from_spectra(const Vector& lambda, const Vector& mu,
                                  const RealMatrix& overlaps, const ScalarFunction& f) {
  const Eigen::Index d = lambda.size();
  if (mu.size() != d || overlaps.rows() != d || overlaps.cols() != d) {
    throw std::invalid_argument("quasi_entropy_from_spectra: dimension mismatch");
  }
  const double f0 = f.limit_at_zero();
  double s = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (lambda(j) <= kRankThreshold) continue;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double o = overlaps(k, j);
      if (o < kOverlapCutoff) continue;
      const double fx = mu(k) <= kRankThreshold ? f0 : f(mu(k) / lambda(j));
      if (fx == kInf) return kInf;
      s += lambda(j) * fx * o;
    }
  }
  return s;
}

DivergenceResult quasi_entropy_spectral(const StatePair& pair, const ScalarFunction& f) {
  const double v = quasi_entropy_from_spectra(pair.rho.eigenvalues(), pair.sigma.eigenvalues(),
                                              pair.overlaps, f);
  return make_result(v, Method::spectral, f.name, pair);
}

DivergenceResult umegaki(const StatePair& pair) {
  if (kernel_weight(pair) > kRankThreshold) {
    return make_result(kInf, Method::direct, "neg-log", pair);
  }
  const auto xlogx = [](double x) { return x * std::log(x); };
  const double rho_log_rho = on_support(pair.rho, xlogx).trace();
  const HermitianMatrix log_sigma = on_support(pair.sigma, [](double x) { return std::log(x); });
  const double rho_log_sigma = trace_product(pair.rho.hermitian(), log_sigma);
  return make_result(rho_log_rho - rho_log_sigma, Method::direct, "neg-log", pair);
}

namespace {

// Tr(rho^s sigma^(1-s)) with powers taken on the supports.
double power_trace(const StatePair& pair, double s) {
  const HermitianMatrix rs = on_support(pair.rho, [s](double x) { return std::pow(x, s); });
  const HermitianMatrix ss = on_support(pair.sigma, [s](double x) { return std::pow(x, 1 - s); });
  return trace_product(rs, ss);
}

}  // namespace

DivergenceResult tsallis_direct(const StatePair& pair, double q) {
  const OmdFunction f = tsallis(q);  // validates q
  if (q > 1 && kernel_weight(pair) > kRankThreshold) {
    return make_result(kInf, Method::direct, f.name, pair);
  }
  return make_result((1 - power_trace(pair, q)) / (1 - q), Method::direct, f.name, pair);
}

DivergenceResult power_direct(const StatePair& pair, double p) {
  const OmdFunction f = neg_power(p);
  return make_result(1 - power_trace(pair, 1 - p), Method::direct, f.name, pair);
}

std::optional<DivergenceResult> direct_for(const StatePair& pair, const OmdFunction& f) {
  switch (f.kind) {
    case OmdKind::neg_log:
      return umegaki(pair);
    case OmdKind::neg_power:
      return power_direct(pair, f.parameter);
    case OmdKind::tsallis:
      return tsallis_direct(pair, f.parameter);
    case OmdKind::custom:
      return std::nullopt;
  }
  return std::nullopt;
}

ModularOperator::ModularOperator(const StatePair& pair) {
  const Eigen::Index d = pair.dim();
  if (d > kSuperoperatorMaxDim) {
    throw std::invalid_argument("ModularOperator: dimension " + std::to_string(d) +
                                " exceeds cap " + std::to_string(kSuperoperatorMaxDim));
  }
  if (!pair.rho.is_strictly_positive() || !pair.sigma.is_strictly_positive()) {
    throw std::invalid_argument("ModularOperator: both states must be strictly positive");
  }
  // Built in long double: when sigma has eigenvalues near 1e-6 the spread of
  // Delta costs several digits, and the oracle must still resolve 1e-9.
  using LD = long double;
  const Hermitian<LD> rho(pair.rho.matrix().cast<std::complex<LD>>());
  const Hermitian<LD> sigma(pair.sigma.matrix().cast<std::complex<LD>>());
  const EigenSystem<LD> rho_es = eigh(rho, LD(0));
  const Hermitian<LD> rho_inv = mat_func(rho_es, [](LD x) { return 1 / x; });
  const Hermitian<LD> rho_sqrt = mat_func(rho_es, [](LD x) { return std::sqrt(x); });
  // vec(sigma X rho^-1) = ((rho^-1)^T kron sigma) vec(X)
  const CMatrix<LD> k = kron<LD>(rho_inv.matrix().transpose(), sigma.matrix());
  const Hermitian<LD> delta(k, LD(1e-12) * std::max(LD(1), k.norm()));
  // Delta is positive definite: the relative stopping rule alone keeps small
  // eigenvalues accurate to a few ulps.
  const EigenSystem<LD> es = eigh(delta, LD(0));
  const CMatrix<LD> w = es.vectors.adjoint() * vec<LD>(rho_sqrt.matrix());

  const double scale = std::max(1.0, static_cast<double>(k.norm()));
  delta_ = HermitianMatrix(delta.matrix().cast<std::complex<double>>(), 1e-12 * scale);
  es_.values = es.values.cast<double>();
  es_.vectors = es.vectors.cast<std::complex<double>>();
  weights_ = w.cast<std::complex<double>>();
  values_ = es.values;
  weights_ld_ = w;
}

double ModularOperator::pairing(const ScalarFunction& f) const {
  const double f0 = f.limit_at_zero();
  long double s = 0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const long double w = std::norm(weights_ld_(i, 0));
    if (w == 0) continue;
    const double e = static_cast<double>(values_(i));
    const double fe = e > 0 ? f(e) : f0;
    if (fe == kInf) return kInf;
    s += fe * w;
  }
  return static_cast<double>(s);
}

DivergenceResult quasi_entropy_superoperator(const StatePair& pair, const ScalarFunction& f) {
  const ModularOperator delta(pair);
  return make_result(delta.pairing(f), Method::superoperator, f.name, pair);
}

DivergenceResult swapped_entropy(const StatePair& pair, const ScalarFunction& f) {
  const double v = quasi_entropy_from_spectra(pair.sigma.eigenvalues(), pair.rho.eigenvalues(),
                                              pair.overlaps.transpose(), f);
  return make_result(v, Method::spectral, "swapped(" + f.name + ")", pair);
}

}  // namespace qre
