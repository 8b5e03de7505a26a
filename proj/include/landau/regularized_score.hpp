#pragma once

#include <span>
#include <vector>

#include "landau/core.hpp"

namespace landau {

/// Frozen tensor grid of element midpoints covering [c - L, c + L]^d.
/// Centers are ordered lexicographically with the first axis slowest.
struct QuadratureGrid {
  int dim = 2;
  int n = 2;
  double h = 1.0;
  double cell_volume = 1.0;
  std::vector<std::vector<double>> axes;  // axes[k][a]: coordinate of cell a on axis k
  std::vector<double> centers;            // interleaved, n^d * dim

  std::size_t size() const { return centers.size() / static_cast<std::size_t>(dim); }
  std::span<const double> center(std::size_t idx) const {
    return {centers.data() + idx * dim, static_cast<std::size_t>(dim)};
  }
};

/// Gaussian mollifier (2 pi eps)^{-d/2} exp(-|x|^2 / (2 eps)).
double mollifier(std::span<const double> x, double eps);

/// log(sum_r w_r psi_eps(x - v_r)) at every point of an interleaved point
/// array, evaluated with a log-sum-exp reduction. Throws ZeroWeight when
/// the ensemble has no positive weight.
std::vector<double> log_blob_density(const ParticleEnsemble& ensemble,
                                     std::span<const double> points);

/// sum_r w_r psi_eps(x - v_r); underflows to zero far from the particles.
std::vector<double> blob_density(const ParticleEnsemble& ensemble,
                                 std::span<const double> points);

/// Log blob density on every cell center of the grid.
std::vector<double> grid_log_density(const ParticleEnsemble& ensemble, const QuadratureGrid& grid);

/// Midpoint-rule score
///   F(v) = h^d sum_h grad psi_eps(v - v_h) log f~(v_h)
/// given precomputed grid log densities. Output is interleaved like queries.
std::vector<double> score_from_grid_log(const QuadratureGrid& grid, std::span<const double> log_density,
                                        double eps, std::span<const double> queries);

std::vector<double> score(const ParticleEnsemble& ensemble, const QuadratureGrid& grid,
                          std::span<const double> queries);

/// Midpoint-rule regularized entropy h^d sum_h f~(v_h) log f~(v_h).
double discrete_entropy(const ParticleEnsemble& ensemble, const QuadratureGrid& grid);

}  // namespace landau
