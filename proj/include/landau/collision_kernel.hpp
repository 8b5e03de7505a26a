#pragma once

#include <array>
#include <cmath>
#include <span>

#include "landau/core.hpp"

namespace landau {

/// Relative speeds below this are treated as coincident particles.
inline constexpr double kCoincidentSpeed = 1e-12;

/// Dense d x d matrix, d <= 3, row major.
struct KernelMatrix {
  int dim = 2;
  std::array<double, 9> a{};

  double operator()(int r, int c) const { return a[r * dim + c]; }
  double& operator()(int r, int c) { return a[r * dim + c]; }
};

/// |z|^gamma given |z|^2, returning 0 for coincident velocities so the
/// pair drops out of every sum.
inline double kernel_radial_factor(double r2, double gamma) {
  if (r2 < kCoincidentSpeed * kCoincidentSpeed) return 0.0;
  if (gamma == 0.0) return 1.0;
  if (gamma == -3.0) return 1.0 / (r2 * std::sqrt(r2));
  if (gamma == 1.0) return std::sqrt(r2);
  if (gamma == -2.0) return 1.0 / r2;
  return std::pow(r2, 0.5 * gamma);
}

/// A(z) = (strength / mass) |z|^gamma (|z|^2 I - z (x) z).
KernelMatrix eval_kernel(std::span<const double> z, double gamma, double strength,
                         double mass);

/// Kernel acting on species i from species j, i.e. B_ij / m_i scaling.
/// For i > j the matrix is derived from the (j, i) evaluation scaled by
/// m_j / m_i, so pair(z, j, i) == (m_i / m_j) * pair(z, i, j) bitwise for i < j.
KernelMatrix eval_kernel_pair(std::span<const double> z, const KernelSpec& kernel,
                              std::span<const double> masses, std::size_t i, std::size_t j);

KernelMatrix eval_kernel_pair(std::span<const double> z, const SystemState& state,
                              std::size_t i, std::size_t j);

}  // namespace landau
