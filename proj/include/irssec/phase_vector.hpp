// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <vector>

#include "irssec/numkernel.hpp"

namespace irssec {

/// IRS phase shifts, each wrapped into [0, 2pi).
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> theta) : theta_(std::move(theta)) {
    for (double& t : theta_) t = wrap(t);
  }
  explicit PhaseVector(const RealVector& theta)
      : PhaseVector(std::vector<double>(theta.data(),
                                        theta.data() + theta.size())) {}

  static PhaseVector zeros(Eigen::Index n) {
    return PhaseVector(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }
  static PhaseVector random(Eigen::Index n, Rng& rng) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (double& x : t) x = rng.uniform(-kPi, kPi);
    return PhaseVector(std::move(t));
  }
  /// Phases of the entries of v; zero entries map to phase 0.
  static PhaseVector from_arg(const ComplexVector& v) {
    std::vector<double> t(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
      t[static_cast<std::size_t>(i)] = std::arg(v(i));
    return PhaseVector(std::move(t));
  }

  static double wrap(double t) {
    double w = std::fmod(t, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(theta_.size()); }
  double operator[](Eigen::Index i) const {
    return theta_[static_cast<std::size_t>(i)];
  }
  const std::vector<double>& values() const { return theta_; }

  RealVector as_real() const {
    return Eigen::Map<const RealVector>(theta_.data(), size());
  }

  /// v = [e^{j theta_1}, ..., e^{j theta_N}]^T.
  ComplexVector unimodular() const {
    ComplexVector v(size());
    for (Eigen::Index i = 0; i < size(); ++i) v(i) = std::polar(1.0, (*this)[i]);
    return v;
  }

  /// Theta = diag(v).
  ComplexMatrix diagonal() const { return unimodular().asDiagonal(); }

  PhaseVector shifted(double offset) const {
    std::vector<double> t = theta_;
    for (double& x : t) x += offset;
    return PhaseVector(std::move(t));
  }

 private:
  std::vector<double> theta_;
};

}  // namespace irssec
