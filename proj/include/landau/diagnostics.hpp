#pragma once

#include <span>
#include <vector>

#include "landau/core.hpp"
#include "landau/initialization.hpp"
#include "landau/regularized_score.hpp"

namespace landau {

/// n_i, rho_i, u_i, T_i of one species. Throws ZeroWeight if n_i == 0.
SpeciesMoments species_moments(const ParticleEnsemble& ensemble);

/// Totals across species. Kinetic energy is sum m w |v|^2 (no factor 1/2).
/// The entropy field is left at zero; see record().
TotalMoments total_moments(const SystemState& state);

struct ErrorNorms {
  double L1 = 0.0;
  double L2 = 0.0;
  double Linf = 0.0;
  double rel_L1 = 0.0;
  double rel_L2 = 0.0;
  double rel_Linf = 0.0;
};

/// Discrete L1 / L2 / Linf errors over grid samples with cell volume h^d.
/// Relative norms divide by the same norm of the exact samples.
ErrorNorms error_norms(std::span<const double> approx, std::span<const double> exact,
                       double cell_volume);

/// Errors of the blob reconstruction against an exact density on the grid.
ErrorNorms error_norms(const ParticleEnsemble& ensemble, const QuadratureGrid& grid,
                       const DensityFunction& exact);

MomentRecord record(const SystemState& state, std::span<const QuadratureGrid> grids);

}  // namespace landau
