// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra and special functions used across irssec:
// cyclic Jacobi eigendecomposition for Hermitian matrices, PSD projection,
// circular Gaussian sampling and the exponential integral E1.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "irssec/error.hpp"

namespace irssec {

using cdouble = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kLog2E = 1.44269504088896340736;

/// Explicit random state. Every stochastic routine takes one of these by
/// reference; there is no hidden global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential() { return -std::log1p(-uniform()); }

  /// z = x + jy with x, y ~ N(0, variance/2), so E|z|^2 = variance.
  cdouble complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = s * normal();
    const double im = s * normal();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 mix of (seed, stream); used to give each trial or solver call
/// its own reproducible substream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct EigPair {
  double value = 0.0;
  ComplexVector vector;
};

/// Eigenvalues sorted descending, eigenvectors in matching columns.
struct Eigensystem {
  RealVector values;
  ComplexMatrix vectors;
};

inline bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// ||M - M^H||_max <= tol * ||M||_max (an all-zero matrix is Hermitian).
inline bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const Eigen::Index n = m.rows();
  double scale2 = 0.0;
  double skew2 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      scale2 = std::max({scale2, std::norm(m(i, j)), std::norm(m(j, i))});
      skew2 = std::max(skew2, std::norm(m(i, j) - std::conj(m(j, i))));
    }
  }
  return skew2 <= rel_tol * rel_tol * scale2;
}

/// (M + M^H)/2 with an exactly real diagonal.
inline ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = h(i, i).real();
  return h;
}

namespace detail {

// Rotation on index pair (p, r) with the 2x2 unitary
// [[c, s], [-s e^{-i phi}, c e^{-i phi}]], which zeroes a(p, r). Only the
// columns p, r are computed; rows follow by Hermitian symmetry and the 2x2
// block has the closed form app - t |apq|, aqq + t |apq|.
inline void apply_rotation(ComplexMatrix& a, ComplexMatrix& q, Eigen::Index p,
                           Eigen::Index r, double c, double s, double t,
                           double mag, cdouble cph) {
  const Eigen::Index n = a.rows();
  // Complex entries as interleaved (re, im) doubles.
  double* ad = reinterpret_cast<double*>(a.data());
  const double wr = cph.real();
  const double wi = cph.imag();
  const double sr = -s * wr, si = -s * wi;  // -s e^{-i phi}
  const double cr = c * wr, ci = c * wi;    //  c e^{-i phi}
  const double app = ad[2 * (p + p * n)];
  const double aqq = ad[2 * (r + r * n)];
  double* colp = ad + 2 * p * n;
  double* colr = ad + 2 * r * n;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pr = colp[2 * k], pi = colp[2 * k + 1];
    const double qr = colr[2 * k], qi = colr[2 * k + 1];
    const double npr = c * pr + (qr * sr - qi * si);
    const double npi = c * pi + (qr * si + qi * sr);
    const double nrr = s * pr + (qr * cr - qi * ci);
    const double nri = s * pi + (qr * ci + qi * cr);
    colp[2 * k] = npr;
    colp[2 * k + 1] = npi;
    colr[2 * k] = nrr;
    colr[2 * k + 1] = nri;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    double* rowp = ad + 2 * (p + k * n);
    double* rowr = ad + 2 * (r + k * n);
    rowp[0] = colp[2 * k];
    rowp[1] = -colp[2 * k + 1];
    rowr[0] = colr[2 * k];
    rowr[1] = -colr[2 * k + 1];
  }
  a(p, p) = app - t * mag;
  a(r, r) = aqq + t * mag;
  a(p, r) = 0.0;
  a(r, p) = 0.0;
  double* qd = reinterpret_cast<double*>(q.data());
  double* qp = qd + 2 * p * n;
  double* qq = qd + 2 * r * n;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pr = qp[2 * k], pi = qp[2 * k + 1];
    const double qr = qq[2 * k], qi = qq[2 * k + 1];
    qp[2 * k] = c * pr + (qr * sr - qi * si);
    qp[2 * k + 1] = c * pi + (qr * si + qi * sr);
    qq[2 * k] = s * pr + (qr * cr - qi * ci);
    qq[2 * k + 1] = s * pi + (qr * ci + qi * cr);
  }
}

inline double off_diagonal_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

}  // namespace detail

namespace detail {

// Cyclic Jacobi on `a` (Hermitian, overwritten), accumulating rotations into
// `q`. On entry q A_in q^H = input; on exit a is diagonal to rounding.
inline Eigensystem jacobi_core(ComplexMatrix a, ComplexMatrix q, int max_sweeps) {
  const Eigen::Index n = a.rows();
  const double fro2 = a.squaredNorm();
  const double eps = std::numeric_limits<double>::epsilon();
  const double stop = 1e-28 * fro2;

  int sweep = 0;
  while (off_diagonal_norm2(a) > stop) {
    if (++sweep > max_sweeps)
      throw ConvergenceFailure("hermitian_eig: Jacobi sweep cap exceeded");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const cdouble apq = a(p, r);
        const double mag2 = std::norm(apq);
        if (mag2 == 0.0) continue;
        const double mag = std::sqrt(mag2);
        const double app = a(p, p).real();
        const double aqq = a(r, r).real();
        // Negligible next to the diagonal: zero it instead of rotating.
        if (mag <= eps * 1e-2 * (std::abs(app) + std::abs(aqq)))
        {
          a(p, r) = 0.0;
          a(r, p) = 0.0;
          continue;
        }
        const cdouble phase = apq / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        apply_rotation(a, q, p, r, c, s, t, mag, std::conj(phase));
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return a(i, i).real() > a(j, j).real();
  });

  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    out.vectors.col(k) = q.col(src).normalized();
  }
  return out;
}

inline void check_eig_input(const ComplexMatrix& input) {
  if (input.rows() != input.cols())
    throw NonHermitianInput("hermitian_eig: matrix is not square");
  if (input.rows() > 256)
    throw TooLarge("hermitian_eig: size exceeds 256");
  if (!all_finite(input))
    throw NonHermitianInput("hermitian_eig: non-finite entries");
  if (!is_hermitian(input))
    throw NonHermitianInput("hermitian_eig: matrix is not Hermitian");
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Each rotation first removes the phase of a(p,q) and then
/// applies a real symmetric Jacobi rotation.
inline Eigensystem jacobi_eigensystem(const ComplexMatrix& input,
                                      int max_sweeps = 100) {
  detail::check_eig_input(input);
  const Eigen::Index n = input.rows();
  return detail::jacobi_core(hermitize(input), ComplexMatrix::Identity(n, n),
                             max_sweeps);
}

/// Same decomposition started from an approximate eigenbasis `basis`
/// (unitary). Sequences of slowly varying matrices then need one or two
/// sweeps instead of a full solve.
inline Eigensystem jacobi_eigensystem(const ComplexMatrix& input,
                                      const ComplexMatrix& basis,
                                      int max_sweeps = 100) {
  detail::check_eig_input(input);
  if (basis.rows() != input.rows() || basis.cols() != input.cols())
    throw DimensionMismatch("hermitian_eig: basis size mismatch");
  const ComplexMatrix t = basis.adjoint().lazyProduct(input);
  return detail::jacobi_core(hermitize(t.lazyProduct(basis)), basis, max_sweeps);
}

/// All eigenpairs, descending by value.
inline std::vector<EigPair> hermitian_eig(const ComplexMatrix& a) {
  const Eigensystem es = jacobi_eigensystem(a);
  std::vector<EigPair> pairs;
  pairs.reserve(static_cast<std::size_t>(es.values.size()));
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    pairs.push_back({es.values(k), es.vectors.col(k)});
  return pairs;
}

/// Rotates v so that its largest-magnitude entry (first one on ties) is real
/// and nonnegative.
inline ComplexVector normalize_phase(const ComplexVector& v) {
  if (v.size() == 0) return v;
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_mag * (1.0 + 1e-12)) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag == 0.0) return v;
  ComplexVector out = v * (std::conj(v(best)) / best_mag);
  out(best) = best_mag;
  return out;
}

/// Largest eigenvalue and its unit eigenvector with deterministic phase.
inline EigPair max_eigpair(const ComplexMatrix& a) {
  const Eigensystem es = jacobi_eigensystem(a);
  return {es.values(0), normalize_phase(es.vectors.col(0))};
}

namespace detail {

inline ComplexMatrix clip_negative(const Eigensystem& es, Eigen::Index n) {
  Eigen::Index keep = 0;
  while (keep < n && es.values(keep) > 0.0) ++keep;
  if (keep == 0) return ComplexMatrix::Zero(n, n);
  const ComplexMatrix u = es.vectors.leftCols(keep);
  const ComplexMatrix ul = u * es.values.head(keep).asDiagonal();
  return hermitize(ul.lazyProduct(u.adjoint()));
}

}  // namespace detail

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to 0.
inline ComplexMatrix psd_project(const ComplexMatrix& s) {
  return detail::clip_negative(jacobi_eigensystem(s), s.rows());
}

/// psd_project warm-started from `basis`, which is replaced by the new
/// eigenvectors. An empty or mis-sized basis starts from the identity.
inline ComplexMatrix psd_project(const ComplexMatrix& s, ComplexMatrix& basis) {
  const Eigen::Index n = s.rows();
  if (basis.rows() != n || basis.cols() != n) basis = ComplexMatrix::Identity(n, n);
  Eigensystem es = jacobi_eigensystem(s, basis);
  basis = es.vectors;
  return detail::clip_negative(es, n);
}

/// n i.i.d. CN(0, variance) entries.
inline ComplexVector sample_cn(Eigen::Index n, double variance, Rng& rng) {
  if (!(variance > 0.0))
    throw PreconditionError("sample_cn: variance must be positive");
  if (n < 0) throw PreconditionError("sample_cn: negative length");
  ComplexVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.complex_normal(variance);
  return z;
}

namespace detail {

// Power series E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), x <= 1.
inline double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// Modified Lentz evaluation of the continued fraction for e^x E1(x), x > 1.
inline double e1_scaled_fraction(double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw ConvergenceFailure("exp_integral_e1: continued fraction diverged");
}

}  // namespace detail

/// E1(x) = int_x^inf e^{-t}/t dt for x > 0.
inline double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw DomainError("exp_integral_e1: requires x > 0");
  if (x <= 1.0) return detail::e1_series(x);
  return std::exp(-x) * detail::e1_scaled_fraction(x);
}

/// e^x E1(x) without overflow for large x.
inline double exp_scaled_e1(double x) {
  if (!(x > 0.0)) throw DomainError("exp_scaled_e1: requires x > 0");
  if (x <= 1.0) return std::exp(x) * detail::e1_series(x);
  return detail::e1_scaled_fraction(x);
}

}  // namespace irssec
