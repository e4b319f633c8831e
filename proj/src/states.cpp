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

#include "qre/states.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qre {

DensityMatrix::DensityMatrix(HermitianMatrix m) : m_(std::move(m)), es_(eigh(m_)) {
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityMatrix: trace is " << tr << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  if (es_.smallest() < -kPositivityTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityMatrix: negative eigenvalue " << es_.smallest();
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index d) {
  return DensityMatrix(HermitianMatrix(Matrix::Identity(d, d) / static_cast<double>(d)));
}

DensityMatrix DensityMatrix::diagonal(const Vector& probabilities) {
  return DensityMatrix(HermitianMatrix::diagonal(probabilities));
}

double DensityMatrix::smallest_positive_eigenvalue() const {
  for (Eigen::Index i = es_.dim() - 1; i >= 0; --i) {
    if (es_.values(i) > kRankThreshold) return es_.values(i);
  }
  throw std::logic_error("DensityMatrix: no positive eigenvalue");
}

Eigen::Index DensityMatrix::rank() const {
  return (es_.values.array() > kRankThreshold).count();
}

StatePair::StatePair(DensityMatrix rho_in, DensityMatrix sigma_in, std::uint64_t seed_in,
                     std::vector<std::string> tags_in)
    : rho(std::move(rho_in)),
      sigma(std::move(sigma_in)),
      seed(seed_in),
      tags(std::move(tags_in)) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("StatePair: dimension mismatch");
  }
  // M(k, j) = <phi_k|psi_j>
  const Matrix m = sigma.spectral().vectors.adjoint() * rho.spectral().vectors;
  overlaps = m.cwiseAbs2();
}

std::string StatePair::tag() const {
  std::string out;
  for (const auto& t : tags) {
    if (!out.empty()) out += '+';
    out += t;
  }
  return out;
}

ScalarSummary summarize(const StatePair& pair) {
  ScalarSummary s;
  s.dim = pair.dim();
  s.lambda_rho = pair.rho.largest_eigenvalue();
  s.lambda_sigma = pair.sigma.largest_eigenvalue();
  s.alpha_rho = pair.rho.smallest_positive_eigenvalue();
  s.alpha_sigma = pair.sigma.smallest_positive_eigenvalue();
  s.alpha = std::min(s.alpha_rho, s.alpha_sigma);
  s.trace_distance_1 = trace_norm(pair.rho.hermitian() - pair.sigma.hermitian());
  s.T = s.trace_distance_1 / 2.0;
  const Matrix& r = pair.rho.matrix();
  const Matrix& g = pair.sigma.matrix();
  s.commutator_norm = (r * g - g * r).norm();
  s.rho_strict = pair.rho.is_strictly_positive();
  s.sigma_strict = pair.sigma.is_strictly_positive();
  return s;
}

namespace {

Matrix ginibre(Eigen::Index dim, Rng& rng) {
  Matrix g(dim, dim);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

}  // namespace

DensityMatrix random_state(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("random_state: dim must be >= 1");
  for (;;) {
    const Matrix g = ginibre(dim, rng);
    Matrix w = g * g.adjoint();
    w /= w.trace().real();
    // Exact Hermitian symmetrization, then renormalize the real diagonal.
    HermitianMatrix h(w, 1e-12);
    const double tr = h.trace();
    HermitianMatrix hn((1.0 / tr) * h);
    DensityMatrix d(hn);
    if (d.is_strictly_positive()) return d;
  }
}

Matrix random_unitary(Eigen::Index dim, Rng& rng) {
  const Matrix g = ginibre(dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::complex<double> rii = r(i, i);
    const double a = std::abs(rii);
    if (a > 0) q.col(i) *= rii / a;
  }
  return q;
}

StatePair random_pair(Eigen::Index dim, Rng& rng) {
  const std::uint64_t seed = rng.seed();
  DensityMatrix rho = random_state(dim, rng);
  DensityMatrix sigma = random_state(dim, rng);
  return StatePair(std::move(rho), std::move(sigma), seed, {"random"});
}

namespace {

// Probability vector from a random state's spectrum, descending.
Vector random_spectrum(Eigen::Index dim, Rng& rng) {
  return random_state(dim, rng).eigenvalues();
}

DensityMatrix from_spectrum(const Matrix& u, const Vector& p) {
  Matrix m = u * p.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  HermitianMatrix h(m, 1e-12);
  return DensityMatrix(HermitianMatrix((1.0 / h.trace()) * h));
}

}  // namespace

StatePair random_classical_pair(Eigen::Index dim, Rng& rng, Alignment alignment) {
  if (dim < 1) throw std::invalid_argument("random_classical_pair: dim must be >= 1");
  const std::uint64_t seed = rng.seed();
  const Matrix u = random_unitary(dim, rng);
  const Vector p = random_spectrum(dim, rng);
  Vector q = random_spectrum(dim, rng);
  if (alignment == Alignment::shuffled) {
    for (Eigen::Index i = dim - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
      std::swap(q(i), q(j));
    }
  }
  return StatePair(from_spectrum(u, p), from_spectrum(u, q), seed, {"commuting"});
}

StatePair mixed_rank_two_pair(Eigen::Index dim) {
  if (dim < 3) throw std::invalid_argument("mixed_rank_two_pair: dim must be >= 3");
  const double d = static_cast<double>(dim);
  Vector s = Vector::Zero(dim);
  s(0) = 1.0 / d;
  s(1) = 1.0 - 1.0 / d;
  return StatePair(DensityMatrix::maximally_mixed(dim), DensityMatrix::diagonal(s), 0,
                   {"mixed-rank2"});
}

StatePair conjugate(const StatePair& pair, const Matrix& u) {
  auto conj = [&](const DensityMatrix& d) {
    Matrix m = u * d.matrix() * u.adjoint();
    HermitianMatrix h(m, 1e-12);
    return DensityMatrix(HermitianMatrix((1.0 / h.trace()) * h));
  };
  auto tags = pair.tags;
  tags.emplace_back("conjugated");
  return StatePair(conj(pair.rho), conj(pair.sigma), pair.seed, std::move(tags));
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      arr.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return arr;
}

Matrix matrix_from_json(const nlohmann::json& j, Eigen::Index dim) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim * dim)) {
    throw std::invalid_argument("matrix_from_json: expected " + std::to_string(dim * dim) +
                                " [re, im] entries");
  }
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto& e = j.at(static_cast<std::size_t>(i * dim + k));
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("matrix_from_json: entries must be [re, im]");
      }
      m(i, k) = {e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

nlohmann::json to_json(const StatePair& pair) {
  return {{"dim", pair.dim()},
          {"rho", matrix_to_json(pair.rho.matrix())},
          {"sigma", matrix_to_json(pair.sigma.matrix())},
          {"seed", pair.seed},
          {"tags", pair.tags}};
}

StatePair pair_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  if (dim < 1) throw std::invalid_argument("pair_from_json: dim must be >= 1");
  std::vector<std::string> tags;
  if (j.contains("tags")) tags = j.at("tags").get<std::vector<std::string>>();
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  return StatePair(DensityMatrix(matrix_from_json(j.at("rho"), dim)),
                   DensityMatrix(matrix_from_json(j.at("sigma"), dim)), seed, std::move(tags));
}

StatePair load_pair(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return pair_from_json(j);
}

void save_pair(const StatePair& pair, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << to_json(pair).dump(2) << '\n';
}

}  // namespace qre
