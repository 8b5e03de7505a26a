#pragma once

#include <span>
#include <vector>

#include "landau/core.hpp"
#include "landau/regularized_score.hpp"

namespace landau {

/// One interleaved d-vector array per species.
using SpeciesVectors = std::vector<std::vector<double>>;

/// Scores F_i at the current particle velocities of every species.
SpeciesVectors compute_scores(const SystemState& state, std::span<const QuadratureGrid> grids);

/// Collisional velocity field
///   dv_p^i/dt = -sum_j sum_q w_q^j A_ji(v_p^i - v_q^j) (F_i(v_p^i)/m_i - F_j(v_q^j)/m_j)
/// from precomputed scores. Each target sums j ascending, then q ascending.
/// Throws NonFinite naming the first offending particle.
SpeciesVectors rhs_from_scores(const SystemState& state, const SpeciesVectors& scores);

SpeciesVectors rhs(const SystemState& state, std::span<const QuadratureGrid> grids);

}  // namespace landau
