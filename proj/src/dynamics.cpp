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

#include "polymer/dynamics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace polymer {
namespace {

void check_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa <= 0.5)) {
    throw InvalidParameter("kappa must lie in (0, 1/2], got " + std::to_string(kappa));
  }
}

void check_shapes(const Profile& u0, const NoiseField& noise) {
  if (noise.xi.rows() != noise.T || noise.xi.cols() != noise.J) {
    throw DimensionMismatch("noise array is not T x J");
  }
  if (u0.size() != noise.J) {
    throw DimensionMismatch("initial profile has " + std::to_string(u0.size()) + " sites, noise has " +
                            std::to_string(noise.J));
  }
}

Trajectory make_trajectory(const Profile& u0, const NoiseField& noise, Convention conv, double kappa) {
  Trajectory traj;
  traj.T = noise.T;
  traj.J = noise.J;
  traj.u.resize(noise.T + 1, noise.J);
  traj.u.row(0) = u0.transpose();
  traj.convention = conv;
  traj.kappa = kappa;
  traj.seed = noise.seed;
  return traj;
}

void recursion_step(const double* in, const double* xi, double* out, Index J, double kappa) {
  if (J == 1) {
    out[0] = in[0] + xi[0];
    return;
  }
  out[0] = in[0] + kappa * (in[1] - in[0]) + xi[0];
  for (Index n = 1; n + 1 < J; ++n) {
    out[n] = in[n] + kappa * (in[n + 1] - 2.0 * in[n] + in[n - 1]) + xi[n];
  }
  out[J - 1] = in[J - 1] + kappa * (in[J - 2] - in[J - 1]) + xi[J - 1];
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) throw InvalidParameter("truncated trajectory dump");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

constexpr std::array<char, 8> kMagic = {'P', 'L', 'M', 'R', 'T', 'R', 'J', '\0'};

}  // namespace

NoiseField sample_noise(std::uint64_t seed, Index T, Index J, double drift) {
  if (T < 1 || J < 1) throw InvalidParameter("noise field needs T, J >= 1");
  NoiseField noise;
  noise.T = T;
  noise.J = J;
  noise.seed = seed;
  noise.drift = drift;
  noise.xi.resize(T, J);
  const CounterRng rng(seed);
  double* data = noise.xi.data();
  const auto count = static_cast<std::uint64_t>(T * J);
  for (std::uint64_t k = 0; k < count; ++k) {
    data[k] = drift + rng.normal(k);
  }
  return noise;
}

Trajectory simulate_recursion(const Profile& u0, const NoiseField& noise, double kappa) {
  check_kappa(kappa);
  check_shapes(u0, noise);
  Trajectory traj = make_trajectory(u0, noise, Convention::Literal, kappa);
  for (Index t = 0; t < noise.T; ++t) {
    recursion_step(traj.u.row(t).data(), noise.xi.row(t).data(), traj.u.row(t + 1).data(), noise.J, kappa);
  }
  return traj;
}

Trajectory solution_formula(const Profile& u0, const NoiseField& noise, const SpectralBasisd& basis,
                            Convention conv) {
  check_shapes(u0, noise);
  if (basis.size() != noise.J) throw DimensionMismatch("basis size differs from noise width");
  const Index J = noise.J;
  const Index T = noise.T;
  Trajectory traj = make_trajectory(u0, noise, conv, kDefaultKappa);

  const Eigen::MatrixXd& phi = basis.phi_table();
  Eigen::VectorXd weight(J);
  for (Index m = 0; m < J; ++m) weight(m) = kernel_weight(basis, m, conv);

  // Projections <phi_m, u0> and <phi_m, xi(s)>.
  const Eigen::VectorXd init = phi * u0;
  const Eigen::MatrixXd forcing = phi * noise.xi.transpose();  // J x T

  const std::int64_t lag = conv == Convention::Literal ? 1 : 0;
  Eigen::VectorXd coeff(J);
  for (Index t = 1; t <= T; ++t) {
    for (Index m = 0; m < J; ++m) {
      const double rho = basis.rho(m);
      double c = int_power(rho, t) * init(m);
      for (Index s = 0; s < t; ++s) {
        c += int_power(rho, t - s - lag) * forcing(m, s);
      }
      coeff(m) = weight(m) * c;
    }
    traj.u.row(t) = (phi.transpose() * coeff).transpose();
  }
  return traj;
}

Propagator::Propagator(const SpectralBasisd& basis, Convention conv, double kappa)
    : basis_(&basis), conv_(conv), kappa_(kappa), phi_(basis.phi_table()) {
  check_kappa(kappa);
  if (conv == Convention::Paper && kappa != kDefaultKappa) {
    throw InvalidParameter("the paper kernel is defined for kappa = 1/2 only");
  }
}

void Propagator::step(const double* in, const double* xi, double* out, bool initial_row) const {
  const Index J = phi_.rows();
  if (conv_ == Convention::Literal) {
    recursion_step(in, xi, out, J, kappa_);
    return;
  }
  const Eigen::VectorXd& rho = basis_->rho();
  const Eigen::VectorXd& a = basis_->a();
  const Eigen::Map<const Eigen::VectorXd> u(in, J);
  const Eigen::Map<const Eigen::VectorXd> forcing(xi, J);
  // b_m(0) = a_m <phi_m, u0>; later rows invert u = sum_m b_m phi_m via b_m = a_m^2 <phi_m, u>.
  Eigen::VectorXd b = phi_ * u;
  if (initial_row) {
    b = a.cwiseProduct(b);
  } else {
    b = a.cwiseAbs2().cwiseProduct(b);
  }
  b = rho.cwiseProduct(b) + a.cwiseProduct(rho).cwiseProduct(phi_ * forcing);
  Eigen::Map<Eigen::VectorXd>(out, J) = phi_.transpose() * b;
}

void Propagator::advance(const Field& xi, Field& u, Index from_row) const {
  const Index J = u.cols();
  const Index T = u.rows() - 1;
  if (xi.rows() != T || xi.cols() != J || J != phi_.rows()) {
    throw DimensionMismatch("noise array does not match trajectory");
  }
  for (Index t = from_row; t < T; ++t) {
    step(u.row(t).data(), xi.row(t).data(), u.row(t + 1).data(), t == 0);
  }
}

Trajectory simulate(const Profile& u0, const NoiseField& noise, const SpectralBasisd& basis, Convention conv,
                    double kappa) {
  if (conv == Convention::Literal) return simulate_recursion(u0, noise, kappa);
  check_shapes(u0, noise);
  if (basis.size() != noise.J) throw DimensionMismatch("basis size differs from noise width");
  const Propagator prop(basis, conv, kappa);
  Trajectory traj = make_trajectory(u0, noise, conv, kappa);
  prop.advance(noise.xi, traj.u, 0);
  return traj;
}

Trajectory sample_trajectory(const ModelConfig& config, const SpectralBasisd& basis, std::uint64_t seed,
                             double drift) {
  const NoiseField noise = sample_noise(seed, config.T, config.J, drift);
  return simulate(Profile::Zero(config.J), noise, basis, config.convention, config.kappa);
}

Index required_past_depth(const SpectralBasisd& basis, double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidParameter("truncation tolerance must be positive");
  const Index J = basis.size();
  const auto neglected = [&](Index S) {
    double total = 0.0;
    for (Index j = 1; j < J; ++j) {
      const double r2 = basis.rho(j) * basis.rho(j);
      if (r2 == 0.0) continue;
      total += 4.0 * std::pow(r2, static_cast<double>(S + 1)) / (1.0 - r2);
    }
    return total;
  };
  Index hi = 1;
  while (neglected(hi) > tolerance) {
    if (hi > (Index{1} << 60)) return hi;
    hi *= 2;
  }
  Index lo = hi / 2;
  if (lo < 1) return 1;
  // neglected(lo) > tolerance >= neglected(hi)
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    (neglected(mid) > tolerance ? lo : hi) = mid;
  }
  return hi;
}

PinnedString pinned_string(const SpectralBasisd& basis, Index t0, Index n0, Index T, double tolerance,
                           std::uint64_t seed, Convention conv) {
  const Index J = basis.size();
  if (J < 2) throw InvalidParameter("pinned string needs J >= 2");
  basis.check_site(n0);
  if (T < 0 || t0 < 0) throw InvalidParameter("pinned string times must be nonnegative");
  const Index depth = required_past_depth(basis, tolerance);
  if (depth > kMaxPastDepth) throw TruncationError(depth, kMaxPastDepth);

  // Single-row stepping keeps memory at O(J) for long pasts. Noise is keyed by absolute time
  // (negative times wrap to the top of the counter range), so overlapping windows share noise.
  const Propagator prop(basis, conv);
  const CounterRng rng(seed);
  PinnedString out;
  out.t0 = t0;
  out.n0 = n0;
  out.depth = depth;
  out.convention = conv;
  out.truncation_bound = 0.0;
  for (Index j = 1; j < J; ++j) {
    const double r2 = basis.rho(j) * basis.rho(j);
    if (r2 != 0.0) out.truncation_bound += 4.0 * std::pow(r2, static_cast<double>(depth + 1)) / (1.0 - r2);
  }
  out.field.resize(T + 1, J);

  Eigen::VectorXd current = Eigen::VectorXd::Zero(J);
  Eigen::VectorXd next(J);
  Eigen::VectorXd xi(J);
  Index row = 0;
  for (Index k = 0; k < depth + T; ++k) {
    if (k >= depth) out.field.row(row++) = current.transpose();
    const auto base = static_cast<std::uint64_t>(t0 - depth + k) * static_cast<std::uint64_t>(J);
    for (Index n = 0; n < J; ++n) xi(n) = rng.normal(base + static_cast<std::uint64_t>(n));
    prop.step(current.data(), xi.data(), next.data(), k == 0);
    current.swap(next);
  }
  out.field.row(row) = current.transpose();
  const double anchor = out.field(0, n0);
  out.field.array() -= anchor;
  return out;
}

double truncation_error_bound(const SpectralBasisd& basis, Index S, Index n, Index n0, Index dt) {
  if (S < 1) throw InvalidParameter("truncation depth S must be >= 1");
  basis.check_site(n);
  basis.check_site(n0);
  if (dt < 0) throw InvalidParameter("time offset must be nonnegative");
  double total = 0.0;
  for (Index j = 1; j < basis.size(); ++j) {
    const double rho = basis.rho(j);
    const double r2 = rho * rho;
    if (r2 == 0.0) continue;
    const double amp = int_power(rho, dt) * basis.phi(j, n) - basis.phi(j, n0);
    total += amp * amp * std::pow(r2, static_cast<double>(S + 1)) / (1.0 - r2);
  }
  return total;
}

Profile sample_stationary_profile(const SpectralBasisd& basis, Convention conv, Index n0, RngStream& rng) {
  basis.check_site(n0);
  const Index J = basis.size();
  Profile field = Profile::Zero(J);
  for (Index m = 1; m < J; ++m) {
    const double rho = basis.rho(m);
    const double stat_sd = 1.0 / std::sqrt(1.0 - rho * rho);
    const double scale = conv == Convention::Literal ? basis.a(m) * stat_sd : std::abs(rho) * stat_sd;
    const double z = rng.normal();
    field += (scale * z) * basis.phi_table().row(m).transpose();
  }
  field.array() -= field(n0);
  return field;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,n,u\n";
  char buf[64];
  for (Index t = 0; t <= traj.T; ++t) {
    for (Index n = 0; n < traj.J; ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.u(t, n));
      out << t << ',' << n << ',' << buf << '\n';
    }
  }
}

void write_trajectory_binary(std::ostream& out, const Trajectory& traj) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kTrajectoryFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(traj.J));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(traj.T));
  put_le<std::uint64_t>(out, traj.seed);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(traj.convention));
  for (int i = 0; i < 7; ++i) put_le<std::uint8_t>(out, 0);
  put_le<double>(out, traj.kappa);
  for (Index t = 0; t <= traj.T; ++t) {
    for (Index n = 0; n < traj.J; ++n) put_le<double>(out, traj.u(t, n));
  }
}

Trajectory read_trajectory_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InvalidParameter("not a trajectory dump (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kTrajectoryFormatVersion) {
    throw InvalidParameter("unsupported trajectory dump version " + std::to_string(version));
  }
  Trajectory traj;
  traj.J = get_le<std::uint32_t>(in);
  traj.T = get_le<std::uint32_t>(in);
  traj.seed = get_le<std::uint64_t>(in);
  const auto conv = get_le<std::uint8_t>(in);
  if (conv > 1) throw InvalidParameter("bad convention tag in trajectory dump");
  traj.convention = static_cast<Convention>(conv);
  for (int i = 0; i < 7; ++i) get_le<std::uint8_t>(in);
  traj.kappa = get_le<double>(in);
  traj.u.resize(traj.T + 1, traj.J);
  for (Index t = 0; t <= traj.T; ++t) {
    for (Index n = 0; n < traj.J; ++n) traj.u(t, n) = get_le<double>(in);
  }
  return traj;
}

}  // namespace polymer
