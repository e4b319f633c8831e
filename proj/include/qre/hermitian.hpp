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

// Dense Hermitian linear algebra for small dimensions.
//
// Everything here is templated on the real scalar type and works on
// Eigen::Matrix<std::complex<Real>, Dynamic, Dynamic>.  The eigensolver is
// a cyclic complex Jacobi method; for positive definite input it resolves
// small eigenvalues to high relative accuracy, which the divergence code
// relies on when eigenvalue ratios span several orders of magnitude.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qre {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Matrix = CMatrix<double>;
using Vector = RVector<double>;
using RealMatrix = Eigen::MatrixXd;

/// Thrown when the Jacobi sweep cap is reached.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A square complex matrix that is exactly Hermitian.
///
/// Construction checks |A_ij - conj(A_ji)| <= tol and then stores (A + A^H)/2.
template <typename Real>
class Hermitian {
 public:
  using Scalar = std::complex<Real>;
  using Storage = CMatrix<Real>;

  static constexpr Real kHermitianTolerance = Real(1e-12);

  Hermitian() = default;

  explicit Hermitian(const Storage& a, Real tol = kHermitianTolerance) {
    if (a.rows() != a.cols() || a.rows() == 0) {
      throw std::invalid_argument("Hermitian: matrix must be square and non-empty");
    }
    const Real defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (!(defect <= tol)) {
      throw std::invalid_argument("Hermitian: matrix is not Hermitian (defect " +
                                  std::to_string(static_cast<double>(defect)) + ")");
    }
    m_ = (a + a.adjoint()) / Real(2);
  }

  static Hermitian zero(Eigen::Index d) { return Hermitian(Storage::Zero(d, d)); }
  static Hermitian identity(Eigen::Index d) { return Hermitian(Storage::Identity(d, d)); }
  static Hermitian diagonal(const RVector<Real>& diag) {
    return Hermitian(diag.template cast<Scalar>().asDiagonal().toDenseMatrix());
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Storage& matrix() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  Real trace() const { return m_.diagonal().real().sum(); }

  friend Hermitian operator+(const Hermitian& a, const Hermitian& b) {
    return Hermitian(a.m_ + b.m_);
  }
  friend Hermitian operator-(const Hermitian& a, const Hermitian& b) {
    return Hermitian(a.m_ - b.m_);
  }
  friend Hermitian operator*(Real s, const Hermitian& a) { return Hermitian(s * a.m_); }

 private:
  Storage m_;
};

using HermitianMatrix = Hermitian<double>;

/// Eigenvalues sorted descending; column i of `vectors` pairs with values(i).
template <typename Real>
struct EigenSystem {
  RVector<Real> values;
  CMatrix<Real> vectors;

  Eigen::Index dim() const { return values.size(); }
  Real largest() const { return values(0); }
  Real smallest() const { return values(values.size() - 1); }

  /// V diag(values) V^H
  CMatrix<Real> reconstruct() const {
    return vectors * values.template cast<std::complex<Real>>().asDiagonal() *
           vectors.adjoint();
  }
};

namespace detail {

// Off-diagonal Frobenius norm.
template <typename Real>
Real off_norm(const CMatrix<Real>& a) {
  Real s = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace detail

inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// A rotation is applied to (p, q) whenever |a_pq| exceeds both
/// eps * sqrt(|a_pp a_qq|) and tol * ||A||_F / n; iteration stops after a
/// sweep with no rotation, which implies off(A) <= tol * ||A||_F.
template <typename Real>
EigenSystem<Real> eigh(const Hermitian<Real>& h, Real tol = Real(1e-14)) {
  using C = std::complex<Real>;
  const Eigen::Index n = h.dim();
  CMatrix<Real> a = h.matrix();
  CMatrix<Real> v = CMatrix<Real>::Identity(n, n);

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real norm_f = a.norm();
  const Real abs_floor = tol * norm_f / Real(std::max<Eigen::Index>(n, 1));

  bool converged = (n == 1) || norm_f == Real(0);
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    int rotations = 0;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real b = std::abs(a(p, q));
        if (b <= abs_floor) continue;
        const Real app = a(p, p).real();
        const Real aqq = a(q, q).real();
        if (b <= eps * std::sqrt(std::abs(app * aqq))) continue;
        ++rotations;

        const C e = a(p, q) / b;  // phase of a_pq
        const Real theta = (aqq - app) / (Real(2) * b);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                       (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
        const Real c = Real(1) / std::sqrt(t * t + Real(1));
        const Real s = t * c;
        const C ce = std::conj(e);

        // A <- A J with J = [[c, s], [-s conj(e), c conj(e)]] on (p, q)
        for (Eigen::Index k = 0; k < n; ++k) {
          const C akp = a(k, p);
          const C akq = a(k, q);
          a(k, p) = c * akp - s * ce * akq;
          a(k, q) = s * akp + c * ce * akq;
        }
        // A <- J^H A
        for (Eigen::Index k = 0; k < n; ++k) {
          const C apk = a(p, k);
          const C aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = C(0);
        a(q, p) = C(0);
        a(p, p) = C(app - t * b);
        a(q, q) = C(aqq + t * b);

        for (Eigen::Index k = 0; k < n; ++k) {
          const C vkp = v(k, p);
          const C vkq = v(k, q);
          v(k, p) = c * vkp - s * ce * vkq;
          v(k, q) = s * vkp + c * ce * vkq;
        }
      }
    }
    converged = (rotations == 0);
  }
  if (!converged) {
    throw ConvergenceError("eigh: Jacobi iteration did not converge after " +
                           std::to_string(kJacobiMaxSweeps) + " sweeps (off-norm " +
                           std::to_string(static_cast<double>(detail::off_norm(a))) + ")");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenSystem<Real> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]).real();
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

/// Sum of absolute eigenvalues.
template <typename Real>
Real trace_norm(const Hermitian<Real>& a) {
  return eigh(a).values.cwiseAbs().sum();
}

/// Largest absolute eigenvalue.
template <typename Real>
Real operator_norm(const Hermitian<Real>& a) {
  return eigh(a).values.cwiseAbs().maxCoeff();
}

/// Thrown when a spectral function is evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// V f(Lambda) V^H from an existing decomposition.  f must return a finite
/// value at every eigenvalue.
template <typename Real, typename F>
Hermitian<Real> mat_func(const EigenSystem<Real>& es, F&& f) {
  RVector<Real> fv(es.dim());
  for (Eigen::Index i = 0; i < es.dim(); ++i) {
    fv(i) = static_cast<Real>(f(es.values(i)));
    if (!std::isfinite(fv(i))) {
      throw DomainError("mat_func: function not finite at eigenvalue " +
                        std::to_string(static_cast<double>(es.values(i))));
    }
  }
  CMatrix<Real> m =
      es.vectors * fv.template cast<std::complex<Real>>().asDiagonal() * es.vectors.adjoint();
  // Round-off leaves an O(eps ||m||) anti-Hermitian part; the constructor
  // symmetrizes it away.
  return Hermitian<Real>(m, std::max(Real(1e-12), Real(1e-12) * m.norm()));
}

template <typename Real, typename F>
Hermitian<Real> mat_func(const Hermitian<Real>& a, F&& f) {
  return mat_func(eigh(a), std::forward<F>(f));
}

/// Checks |Tr(XYZ)| <= ||X||_inf ||Z||_inf Tr|Y| with `slack` absolute room.
template <typename Real>
bool holder3_check(const Hermitian<Real>& x, const Hermitian<Real>& y, const Hermitian<Real>& z,
                   Real slack = Real(1e-12)) {
  if (x.dim() != y.dim() || y.dim() != z.dim()) {
    throw std::invalid_argument("holder3_check: dimension mismatch");
  }
  const Real lhs = std::abs((x.matrix() * y.matrix() * z.matrix()).trace());
  const Real rhs = operator_norm(x) * operator_norm(z) * trace_norm(y);
  return lhs <= rhs + slack;
}

// Vectorization uses column stacking: vec(AXB) = (B^T kron A) vec(X).

template <typename Real>
CMatrix<Real> kron(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
CMatrix<Real> vec(const CMatrix<Real>& x) {
  return Eigen::Map<const CMatrix<Real>>(x.data(), x.size(), 1);
}

template <typename Real>
CMatrix<Real> unvec(const CMatrix<Real>& v, Eigen::Index rows) {
  if (v.cols() != 1 || rows <= 0 || v.rows() % rows != 0) {
    throw std::invalid_argument("unvec: shape mismatch");
  }
  return Eigen::Map<const CMatrix<Real>>(v.data(), rows, v.rows() / rows);
}

/// Superoperator X -> A X as a d^2 x d^2 matrix.
template <typename Real>
Hermitian<Real> left_multiplication(const Hermitian<Real>& a) {
  return Hermitian<Real>(kron<Real>(CMatrix<Real>::Identity(a.dim(), a.dim()), a.matrix()));
}

/// Superoperator X -> X B as a d^2 x d^2 matrix.
template <typename Real>
Hermitian<Real> right_multiplication(const Hermitian<Real>& b) {
  return Hermitian<Real>(
      kron<Real>(b.matrix().transpose(), CMatrix<Real>::Identity(b.dim(), b.dim())));
}

}  // namespace qre
