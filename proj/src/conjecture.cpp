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

#include "qre/conjecture.hpp"

#include "qre/parallel.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qre {

namespace {

constexpr double kZeroTraceNorm = 1e-14;
constexpr double kHypothesisTolerance = 1e-10;

void check_entries(const RealMatrix& c, double cap) {
  if (!(cap >= 0)) throw std::invalid_argument("weighted functional: C_cap must be >= 0");
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
      const double v = c(k, j);
      if (!(v >= 0) || v > cap * (1 + 1e-12)) {
        throw std::invalid_argument("weighted functional: C(" + std::to_string(k) + ", " +
                                    std::to_string(j) + ") = " + std::to_string(v) +
                                    " outside [0, C_cap]");
      }
    }
  }
}

std::complex<double> trace_dx(const WeightedOverlapFunctional& w, const Matrix& x) {
  return (d_matrix(w) * x).trace();
}

}  // namespace

WeightedOverlapFunctional functional_on_pair(const StatePair& pair, RealMatrix C, double C_cap) {
  if (C.rows() != pair.dim() || C.cols() != pair.dim()) {
    throw std::invalid_argument("functional_on_pair: C has the wrong shape");
  }
  check_entries(C, C_cap);
  return {std::move(C), C_cap, pair.rho.spectral().vectors, pair.sigma.spectral().vectors};
}

WeightedOverlapFunctional modular_weight_matrix(const StatePair& pair, double t) {
  if (!(t > 0)) throw std::invalid_argument("modular_weight_matrix: t must be > 0");
  if (!pair.rho.is_strictly_positive()) {
    throw std::invalid_argument("modular_weight_matrix: rho must be strictly positive");
  }
  const Vector& lambda = pair.rho.eigenvalues();
  const Vector& mu = pair.sigma.eigenvalues();
  const Eigen::Index d = pair.dim();
  RealMatrix c(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) c(k, j) = 1.0 / (t + mu(k) / lambda(j));
  }
  const double cap = 1.0 / (t + mu.minCoeff() / lambda.maxCoeff());
  return {std::move(c), cap, pair.rho.spectral().vectors, pair.sigma.spectral().vectors};
}

Matrix d_matrix(const WeightedOverlapFunctional& w) {
  const Matrix g = w.psi.adjoint() * w.phi;  // g(j, k) = <psi_j|phi_k>
  const Matrix m = w.C.transpose().cast<std::complex<double>>().cwiseProduct(g);
  return w.psi * m * w.phi.adjoint();
}

double functional_value(const WeightedOverlapFunctional& w, const StatePair& pair) {
  const Eigen::Index d = pair.dim();
  if (w.dim() != d) throw std::invalid_argument("functional_value: dimension mismatch");
  const Vector& lambda = pair.rho.eigenvalues();
  const Vector& mu = pair.sigma.eigenvalues();
  double s = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      s += w.C(k, j) * (lambda(j) - mu(k)) * pair.overlaps(k, j);
    }
  }
  return s;
}

double functional_value_explicit(const WeightedOverlapFunctional& w, const StatePair& pair) {
  if (w.dim() != pair.dim()) {
    throw std::invalid_argument("functional_value_explicit: dimension mismatch");
  }
  return trace_dx(w, pair.rho.matrix() - pair.sigma.matrix()).real();
}

double conjecture_ratio(const WeightedOverlapFunctional& w, const StatePair& pair) {
  const double tn = trace_norm(pair.rho.hermitian() - pair.sigma.hermitian());
  if (tn < kZeroTraceNorm || w.C_cap == 0) return 0;
  return std::abs(functional_value(w, pair)) / (w.C_cap * tn);
}

std::string to_string(ProvenCase c) {
  return c == ProvenCase::diagonal ? "diagonal" : "qubit-traceless";
}

namespace {

bool diagonal_in(const Matrix& basis, const Matrix& x, double tol) {
  Matrix y = basis.adjoint() * x * basis;
  y.diagonal().setZero();
  return y.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

bool proven_case_check(const WeightedOverlapFunctional& w, const HermitianMatrix& x,
                       ProvenCase which) {
  const Eigen::Index d = x.dim();
  if (w.dim() != d || w.psi.rows() != d || w.phi.rows() != d) {
    throw std::invalid_argument("proven_case_check: dimension mismatch");
  }
  check_entries(w.C, w.C_cap);
  const double scale = std::max(1.0, x.matrix().cwiseAbs().maxCoeff());
  const double tol = kHypothesisTolerance * scale;
  if (which == ProvenCase::diagonal) {
    if (!diagonal_in(w.psi, x.matrix(), tol) && !diagonal_in(w.phi, x.matrix(), tol)) {
      throw std::invalid_argument("proven_case_check: X is diagonal in neither basis");
    }
  } else {
    if (d != 2) throw std::invalid_argument("proven_case_check: qubit case needs d = 2");
    if (std::abs(x.trace()) > tol) {
      throw std::invalid_argument("proven_case_check: X is not traceless");
    }
  }
  const double lhs = std::abs(trace_dx(w, x.matrix()));
  return lhs <= w.C_cap * trace_norm(x) + kViolationSlack;
}

ProvenCaseSweep proven_case_sweep(ProvenCase which, Eigen::Index dim, long trials,
                                  std::uint64_t seed) {
  if (which == ProvenCase::qubit_traceless && dim != 2) {
    throw std::invalid_argument("proven_case_sweep: qubit case needs dim = 2");
  }
  ProvenCaseSweep out;
  for (long i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(which), static_cast<std::uint64_t>(i)}));
    WeightedOverlapFunctional w;
    w.psi = random_unitary(dim, rng);
    w.phi = random_unitary(dim, rng);
    w.C = RealMatrix(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index k = 0; k < dim; ++k) w.C(k, j) = rng.uniform();
    }
    w.C_cap = w.C.maxCoeff();

    Matrix x;
    if (which == ProvenCase::diagonal) {
      Vector diag(dim);
      for (Eigen::Index i2 = 0; i2 < dim; ++i2) diag(i2) = rng.normal();
      const Matrix& basis = rng.below(2) == 0 ? w.psi : w.phi;
      x = basis * diag.cast<std::complex<double>>().asDiagonal() * basis.adjoint();
    } else {
      const double a = rng.normal();
      const std::complex<double> b = rng.complex_normal();
      x.resize(2, 2);
      x << a, b, std::conj(b), -a;
    }
    const HermitianMatrix xh(x, 1e-12 * std::max(1.0, x.norm()));
    ++out.trials;
    if (!proven_case_check(w, xh, which)) ++out.violations;
    const double tn = trace_norm(xh);
    if (tn > 0) {
      out.max_ratio = std::max(out.max_ratio, std::abs(trace_dx(w, xh.matrix())) / (w.C_cap * tn));
    }
  }
  return out;
}

std::string to_string(SearchStrategy s) {
  return s == SearchStrategy::random ? "random" : "hill_climb";
}

std::string to_string(WeightForm f) { return f == WeightForm::general ? "general" : "modular"; }

namespace {

// A search point in spectral coordinates: rho = U diag(lambda) U^H,
// sigma = V diag(mu) V^H, both spectra kept descending.
struct Point {
  Vector lambda;
  Vector mu;
  Matrix u;
  Matrix v;
  RealMatrix c;   // general form
  double t = 1;   // modular form
};

Eigen::Index dim_of(const Point& p) { return p.lambda.size(); }

Matrix rebuild(const Matrix& u, const Vector& p) {
  return u * p.cast<std::complex<double>>().asDiagonal() * u.adjoint();
}

void sort_descending(Point& p) {
  const Eigen::Index d = dim_of(p);
  std::vector<Eigen::Index> pr(static_cast<std::size_t>(d));
  std::vector<Eigen::Index> ps(static_cast<std::size_t>(d));
  std::iota(pr.begin(), pr.end(), Eigen::Index(0));
  std::iota(ps.begin(), ps.end(), Eigen::Index(0));
  std::stable_sort(pr.begin(), pr.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return p.lambda(a) > p.lambda(b); });
  std::stable_sort(ps.begin(), ps.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return p.mu(a) > p.mu(b); });
  Point q = p;
  for (Eigen::Index j = 0; j < d; ++j) {
    q.lambda(j) = p.lambda(pr[j]);
    q.u.col(j) = p.u.col(pr[j]);
    q.mu(j) = p.mu(ps[j]);
    q.v.col(j) = p.v.col(ps[j]);
  }
  if (p.c.size() > 0) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) q.c(k, j) = p.c(ps[k], pr[j]);
    }
  }
  p = std::move(q);
}

struct Evaluation {
  double ratio = 0;
  RealMatrix c;
  double cap = 1;
};

Evaluation evaluate(const Point& p, WeightForm form) {
  const Eigen::Index d = dim_of(p);
  Evaluation e;
  if (form == WeightForm::general) {
    e.c = p.c;
    e.cap = 1;
  } else {
    e.c.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) e.c(k, j) = 1.0 / (p.t + p.mu(k) / p.lambda(j));
    }
    e.cap = 1.0 / (p.t + p.mu.minCoeff() / p.lambda.maxCoeff());
  }
  const Matrix g = p.v.adjoint() * p.u;  // g(k, j) = <phi_k|psi_j>
  double s = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      s += e.c(k, j) * (p.lambda(j) - p.mu(k)) * std::norm(g(k, j));
    }
  }
  const Matrix diff = rebuild(p.u, p.lambda) - rebuild(p.v, p.mu);
  const double tn = trace_norm(HermitianMatrix(diff, 1e-12));
  e.ratio = tn < kZeroTraceNorm ? 0 : std::abs(s) / (e.cap * tn);
  return e;
}

nlohmann::json point_json(const Point& p, WeightForm form, const Evaluation& e, long trial) {
  DensityMatrix rho(HermitianMatrix(rebuild(p.u, p.lambda), 1e-12));
  DensityMatrix sigma(HermitianMatrix(rebuild(p.v, p.mu), 1e-12));
  const StatePair pair(std::move(rho), std::move(sigma));
  nlohmann::json c = nlohmann::json::array();
  for (Eigen::Index k = 0; k < e.c.rows(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < e.c.cols(); ++j) row.push_back(e.c(k, j));
    c.push_back(std::move(row));
  }
  nlohmann::json out = {{"trial", trial}, {"pair", to_json(pair)}, {"C", std::move(c)},
                        {"C_cap", e.cap}, {"ratio", e.ratio}};
  if (form == WeightForm::modular) out["t"] = p.t;
  return out;
}

Point draw_point(Eigen::Index d, const SearchOptions& opts, Rng& rng) {
  const StatePair pair = opts.commuting ? random_classical_pair(d, rng) : random_pair(d, rng);
  Point p;
  p.lambda = pair.rho.eigenvalues();
  p.mu = pair.sigma.eigenvalues();
  p.u = pair.rho.spectral().vectors;
  p.v = pair.sigma.spectral().vectors;
  if (opts.form == WeightForm::general) {
    p.c.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) p.c(k, j) = rng.uniform();
    }
  } else {
    p.t = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
  }
  return p;
}

Matrix unitary_factor(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    const std::complex<double> r = qr.matrixQR()(i, i);
    if (std::abs(r) > 0) q.col(i) *= r / std::abs(r);
  }
  return q;
}

Matrix jitter_unitary(const Matrix& u, double step, Rng& rng) {
  Matrix g(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
  }
  return unitary_factor(u + step * g);
}

void jitter_spectrum(Vector& p, double step, Rng& rng) {
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) *= std::exp(step * rng.normal());
  p /= p.sum();
}

Point perturb(const Point& p, const SearchOptions& opts, Rng& rng) {
  const Eigen::Index d = dim_of(p);
  Point q = p;
  jitter_spectrum(q.lambda, opts.step, rng);
  jitter_spectrum(q.mu, opts.step, rng);
  if (opts.commuting) {
    const Matrix w = jitter_unitary(Matrix::Identity(d, d), opts.step, rng);
    q.u = w * q.u;
    q.v = w * q.v;
  } else {
    q.u = jitter_unitary(q.u, opts.step, rng);
    q.v = jitter_unitary(q.v, opts.step, rng);
  }
  if (opts.form == WeightForm::general) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) {
        q.c(k, j) = std::clamp(q.c(k, j) + opts.step * rng.normal(), 0.0, 1.0);
      }
    }
  } else {
    q.t *= std::exp(opts.step * rng.normal());
  }
  sort_descending(q);
  return q;
}

SearchRecord empty_record(const SearchOptions& opts) {
  SearchRecord r;
  r.seed = opts.seed;
  r.dims = opts.dims;
  r.strategy = opts.strategy;
  r.form = opts.form;
  r.commuting = opts.commuting;
  return r;
}

// Folds one evaluated point into a record.
void observe(SearchRecord& r, const Point& p, const Evaluation& e, long trial,
             const SearchOptions& opts) {
  ++r.trial_count;
  const bool better = !r.argmax || e.ratio > r.max_ratio ||
                      (e.ratio == r.max_ratio && trial < r.argmax->trial);
  if (better) {
    r.max_ratio = e.ratio;
    r.argmax = SearchInstance{trial, e.ratio, point_json(p, opts.form, e, trial)};
  }
  if (e.ratio > 1 + kViolationSlack) {
    ++r.violation_count;
    if (r.violations.size() < opts.max_recorded_violations) {
      r.violations.push_back({trial, e.ratio, point_json(p, opts.form, e, trial)});
    }
  }
}

std::uint64_t stream_tag(const SearchOptions& opts) {
  return (opts.strategy == SearchStrategy::random ? 0u : 1u) |
         (opts.form == WeightForm::general ? 0u : 2u) | (opts.commuting ? 4u : 0u);
}

SearchRecord run_unit(long unit, const SearchOptions& opts) {
  SearchRecord r = empty_record(opts);
  const Eigen::Index d = opts.dims[static_cast<std::size_t>(unit) % opts.dims.size()];
  Rng rng(derive_seed(opts.seed, {stream_tag(opts), static_cast<std::uint64_t>(unit)}));
  Point best = draw_point(d, opts, rng);
  Evaluation best_eval = evaluate(best, opts.form);
  if (opts.strategy == SearchStrategy::random) {
    observe(r, best, best_eval, unit, opts);
    return r;
  }
  const long stride = opts.steps_per_restart + 1;
  observe(r, best, best_eval, unit * stride, opts);
  int stale = 0;
  for (int s = 1; s <= opts.steps_per_restart && stale < opts.plateau; ++s) {
    Point cand = perturb(best, opts, rng);
    Evaluation ev = evaluate(cand, opts.form);
    observe(r, cand, ev, unit * stride + s, opts);
    if (ev.ratio > best_eval.ratio) {
      best = std::move(cand);
      best_eval = std::move(ev);
      stale = 0;
    } else {
      ++stale;
    }
  }
  return r;
}

nlohmann::json instance_json(const SearchInstance& s) { return s.data; }

}  // namespace

SearchRecord merge(SearchRecord a, const SearchRecord& b, std::size_t max_recorded) {
  a.trial_count += b.trial_count;
  if (b.argmax && (!a.argmax || b.max_ratio > a.max_ratio ||
                   (b.max_ratio == a.max_ratio && b.argmax->trial < a.argmax->trial))) {
    a.max_ratio = b.max_ratio;
    a.argmax = b.argmax;
  }
  a.violation_count += b.violation_count;
  a.violations.insert(a.violations.end(), b.violations.begin(), b.violations.end());
  std::sort(a.violations.begin(), a.violations.end(),
            [](const SearchInstance& x, const SearchInstance& y) { return x.trial < y.trial; });
  if (a.violations.size() > max_recorded) a.violations.resize(max_recorded);
  return a;
}

SearchRecord conjecture_search(const SearchOptions& opts) {
  if (opts.dims.empty()) throw std::invalid_argument("conjecture_search: dims is empty");
  for (Eigen::Index d : opts.dims) {
    if (d < 2) throw std::invalid_argument("conjecture_search: dims must be >= 2");
  }
  if (opts.trials < 1) throw std::invalid_argument("conjecture_search: trials must be >= 1");
  if (!(opts.step > 0) || opts.steps_per_restart < 0 || opts.plateau < 1) {
    throw std::invalid_argument("conjecture_search: invalid hill-climb parameters");
  }

  // Units are blocks of trials so each worker builds a partial record and
  // the merge stays cheap.
  constexpr long kUnitsPerShard = 256;
  const long shards = (opts.trials + kUnitsPerShard - 1) / kUnitsPerShard;
  std::vector<SearchRecord> partial(static_cast<std::size_t>(shards), empty_record(opts));
  parallel_for(static_cast<std::size_t>(shards), opts.jobs, [&](std::size_t sh) {
    const long begin = static_cast<long>(sh) * kUnitsPerShard;
    const long end = std::min(opts.trials, begin + kUnitsPerShard);
    SearchRecord r = empty_record(opts);
    for (long u = begin; u < end; ++u) {
      r = merge(std::move(r), run_unit(u, opts), opts.max_recorded_violations);
    }
    partial[sh] = std::move(r);
  });
  SearchRecord out = empty_record(opts);
  for (const auto& p : partial) out = merge(std::move(out), p, opts.max_recorded_violations);
  return out;
}

nlohmann::json to_json(const SearchRecord& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) violations.push_back(instance_json(v));
  return {{"seed", r.seed},
          {"dims", r.dims},
          {"strategy", to_string(r.strategy)},
          {"form", to_string(r.form)},
          {"commuting", r.commuting},
          {"trial_count", r.trial_count},
          {"max_ratio", r.max_ratio},
          {"argmax_instance", r.argmax ? instance_json(*r.argmax) : nlohmann::json(nullptr)},
          {"violation_count", r.violation_count},
          {"violations", std::move(violations)}};
}

double replay_instance(const nlohmann::json& data) {
  const StatePair pair = pair_from_json(data.at("pair"));
  if (data.contains("t")) {
    return conjecture_ratio(modular_weight_matrix(pair, data.at("t").get<double>()), pair);
  }
  const auto& rows = data.at("C");
  const Eigen::Index d = pair.dim();
  if (static_cast<Eigen::Index>(rows.size()) != d) {
    throw std::invalid_argument("replay_instance: C has the wrong shape");
  }
  RealMatrix c(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto& row = rows.at(static_cast<std::size_t>(k));
    if (static_cast<Eigen::Index>(row.size()) != d) {
      throw std::invalid_argument("replay_instance: C has the wrong shape");
    }
    for (Eigen::Index j = 0; j < d; ++j) c(k, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return conjecture_ratio(functional_on_pair(pair, std::move(c), data.at("C_cap").get<double>()),
                          pair);
}

}  // namespace qre
