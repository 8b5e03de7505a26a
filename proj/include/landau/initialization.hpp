#pragma once

#include <functional>
#include <span>

#include "landau/core.hpp"
#include "landau/regularized_score.hpp"

namespace landau {

using DensityFunction = std::function<double(std::span<const double>)>;

inline constexpr double kDefaultEpsCoeff = 0.64;
inline constexpr double kDefaultEpsPower = 1.98;

/// The n^d element midpoints of [c - L, c + L]^d with h = 2L/n.
QuadratureGrid build_grid(const SpeciesSpec& spec, int dim);

/// Particles at the grid centers with midpoint-quadrature weights
/// w_p = h^d f0(v_p). Zero-weight particles are kept.
ParticleEnsemble init_particles(const DensityFunction& f0, const QuadratureGrid& grid,
                                const SpeciesSpec& spec);

/// Regularization parameter coeff * h^power.
double epsilon_from_h(double h, double coeff = kDefaultEpsCoeff, double power = kDefaultEpsPower);

/// Half width L_2 = (m_1 / m_2)^{1/power} L_1, which makes m_1 eps_1 = m_2 eps_2
/// when both species share grid_n and the eps rule.
double constrained_half_width(double m1, double m2, double L1, double power = kDefaultEpsPower);

}  // namespace landau
