// Copyright 2026 The Polymerlab Authors
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

#ifndef POLYMER_SPECTRAL_BASIS_HPP
#define POLYMER_SPECTRAL_BASIS_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

#include "polymer/errors.hpp"

namespace polymer {

using Index = Eigen::Index;

/// Kernel normalization.
///
/// `Literal` is the orthonormal kernel G_t = sum_m a_m^2 rho_m^t phi_m(n) phi_m(k), which is the
/// t-step propagator of the recursion (noise enters unsmoothed). `Paper` keeps a single factor
/// a_m and propagates noise through G_{t-s}, exactly as the printed kernel and solution formula.
enum class Convention : std::uint8_t { Literal = 0, Paper = 1 };

constexpr std::string_view to_string(Convention c) noexcept {
  return c == Convention::Literal ? "literal" : "paper";
}

Convention parse_convention(std::string_view text);

inline constexpr Index kMaxChainLength = 4096;

/// Cosine eigenstructure of the Neumann lattice heat semigroup with kappa = 1/2.
///
///   rho_m = cos(m pi / J),   a_0 = sqrt(1/J), a_m = sqrt(2/J) (m >= 1),
///   phi_m(n) = cos(m pi (n + 1/2) / J).
///
/// The vectors e_m = a_m phi_m form an orthonormal basis of R^J. Immutable after construction.
template <typename Scalar>
class SpectralBasis {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit SpectralBasis(Index J) : J_(J) {
    if (J < 1 || J > kMaxChainLength) {
      throw InvalidParameter("chain length J must lie in [1, " + std::to_string(kMaxChainLength) +
                             "], got " + std::to_string(J));
    }
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar len = static_cast<Scalar>(J);
    rho_.resize(J);
    a_.resize(J);
    phi_.resize(J, J);
    for (Index m = 0; m < J; ++m) {
      rho_(m) = m == 0 ? Scalar(1) : std::cos(static_cast<Scalar>(m) * pi / len);
      a_(m) = std::sqrt((m == 0 ? Scalar(1) : Scalar(2)) / len);
      for (Index n = 0; n < J; ++n) {
        phi_(m, n) = m == 0 ? Scalar(1) : std::cos(static_cast<Scalar>(m) * pi * (static_cast<Scalar>(n) + Scalar(0.5)) / len);
      }
    }
    // J even: the middle mode has rho = cos(pi/2), which should be exactly zero.
    if (J % 2 == 0) {
      rho_(J / 2) = Scalar(0);
    }
  }

  Index size() const noexcept { return J_; }
  const Vector& rho() const noexcept { return rho_; }
  const Vector& a() const noexcept { return a_; }
  Scalar rho(Index m) const { return rho_(m); }
  Scalar a(Index m) const { return a_(m); }

  /// phi_m(n); row m of the (unnormalized) cosine table.
  Scalar phi(Index m, Index n) const { return phi_(m, n); }
  const Matrix& phi_table() const noexcept { return phi_; }

  /// Orthonormal eigenvectors e_m = a_m phi_m as rows.
  Matrix orthonormal_table() const { return a_.asDiagonal() * phi_; }

  void check_site(Index n) const {
    if (n < 0 || n >= J_) {
      throw InvalidParameter("site " + std::to_string(n) + " outside {0.." + std::to_string(J_ - 1) + "}");
    }
  }

 private:
  Index J_;
  Vector rho_;
  Vector a_;
  Matrix phi_;
};

using SpectralBasisd = SpectralBasis<double>;

template <typename Scalar>
SpectralBasis<Scalar> build_basis(Index J) {
  return SpectralBasis<Scalar>(J);
}

/// rho^t with rho^0 = 1 (including rho = 0).
template <typename Scalar>
Scalar int_power(Scalar rho, std::int64_t t) {
  Scalar result(1);
  Scalar base = rho;
  while (t > 0) {
    if (t & 1) result *= base;
    base *= base;
    t >>= 1;
  }
  return result;
}

/// Per-mode kernel weight: a_m^2 (Literal) or a_m (Paper).
template <typename Scalar>
Scalar kernel_weight(const SpectralBasis<Scalar>& basis, Index m, Convention conv) {
  return conv == Convention::Literal ? basis.a(m) * basis.a(m) : basis.a(m);
}

/// G_t(n, k) by eigen-expansion.
template <typename Scalar>
Scalar green_function(const SpectralBasis<Scalar>& basis, std::int64_t t, Index n, Index k,
                      Convention conv = Convention::Literal) {
  basis.check_site(n);
  basis.check_site(k);
  if (t < 0) throw InvalidParameter("kernel time must be nonnegative");
  Scalar sum(0);
  for (Index m = 0; m < basis.size(); ++m) {
    sum += kernel_weight(basis, m, conv) * int_power(basis.rho(m), t) * basis.phi(m, n) * basis.phi(m, k);
  }
  return sum;
}

/// Full kernel matrix [G_t(n, k)]_{n,k}.
template <typename Scalar>
typename SpectralBasis<Scalar>::Matrix green_matrix(const SpectralBasis<Scalar>& basis, std::int64_t t,
                                                    Convention conv = Convention::Literal) {
  if (t < 0) throw InvalidParameter("kernel time must be nonnegative");
  typename SpectralBasis<Scalar>::Vector diag(basis.size());
  for (Index m = 0; m < basis.size(); ++m) {
    diag(m) = kernel_weight(basis, m, conv) * int_power(basis.rho(m), t);
  }
  return basis.phi_table().transpose() * diag.asDiagonal() * basis.phi_table();
}

/// One-step propagator of the recursion with kappa = 1/2 and Neumann ghosts.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> one_step_propagator(Index J) {
  if (J < 1) throw InvalidParameter("chain length J must be positive");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> P = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(J, J);
  const Scalar half(0.5);
  for (Index n = 0; n < J; ++n) {
    P(n, n == 0 ? 0 : n - 1) += half;
    P(n, n == J - 1 ? J - 1 : n + 1) += half;
  }
  return P;
}

/// P^t by repeated squaring; the oracle for the Literal kernel.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> transition_matrix_power(Index J, std::int64_t t) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (t < 0) throw InvalidParameter("matrix power must be nonnegative");
  Matrix base = one_step_propagator<Scalar>(J);
  Matrix result = Matrix::Identity(J, J);
  while (t > 0) {
    if (t & 1) result = result * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  return result;
}

/// Sum_{m=1}^{J-1} csc^2(m pi / J), summed directly.
double csc2_sum(Index J);

/// c0(J) = 3 / (J^2 - 1), the reciprocal of the csc^2 sum.
double normalizing_constant_c0(Index J);

}  // namespace polymer

#endif  // POLYMER_SPECTRAL_BASIS_HPP
