#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "landau/analytic_oracles.hpp"
#include "landau/core.hpp"
#include "landau/initialization.hpp"
#include "landau/regularized_score.hpp"

namespace landau::test {

inline SpeciesSpec make_spec(double mass, double half_width, int n, int dim,
                             std::vector<double> center = {}) {
  SpeciesSpec s;
  s.mass = mass;
  s.half_width = half_width;
  s.grid_n = n;
  s.center = center.empty() ? std::vector<double>(dim, 0.0) : std::move(center);
  s.epsilon = epsilon_from_h(s.h());
  return s;
}

struct Species {
  ParticleEnsemble ensemble;
  QuadratureGrid grid;
};

inline Species maxwellian_species(double n, double mass, std::vector<double> u, double T,
                                  double half_width, int grid_n) {
  const int dim = static_cast<int>(u.size());
  auto spec = make_spec(mass, half_width, grid_n, dim, u);
  auto grid = build_grid(spec, dim);
  MaxwellianParams p{n, mass, u, T};
  auto ens = init_particles([&](std::span<const double> v) { return maxwellian_density(v, p, dim); },
                            grid, spec);
  return {std::move(ens), std::move(grid)};
}

struct StateWithGrids {
  SystemState state;
  std::vector<QuadratureGrid> grids;
};

inline StateWithGrids two_species_maxwellians(int dim, int grid_n, double gamma) {
  std::vector<double> u1(dim, 0.0), u2(dim, 0.0);
  u1[0] = 0.3;
  u2[0] = -0.2;
  if (dim > 1) u2[1] = 0.1;
  auto a = maxwellian_species(1.0, 2.0, u1, 0.5, 2.5, grid_n);
  auto b = maxwellian_species(0.8, 1.0, u2, 0.3, 3.0, grid_n);
  StateWithGrids s;
  s.state.dim = dim;
  s.state.kernel.gamma = gamma;
  s.state.kernel.strength = StrengthMatrix{{0.125, 0.0625}, {0.0625, 0.03125}};
  s.state.ensembles = {std::move(a.ensemble), std::move(b.ensemble)};
  s.grids = {std::move(a.grid), std::move(b.grid)};
  return s;
}

// Grid-initialized ensembles with jittered velocities, random masses, weights
// and strengths: generic inputs for identity checks.
inline StateWithGrids random_state(std::mt19937_64& rng, int dim, double gamma) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::size_t s = 1 + static_cast<std::size_t>(uni(rng) * 3.0);
  StateWithGrids out;
  out.state.dim = dim;
  out.state.kernel.gamma = gamma;
  out.state.kernel.strength = StrengthMatrix(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j)
      out.state.kernel.strength(i, j) = out.state.kernel.strength(j, i) = 0.05 + uni(rng);
  const int n = dim == 2 ? 6 : 4;
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<double> center(dim);
    for (auto& c : center) c = uni(rng) - 0.5;
    auto spec = make_spec(0.5 + 2.0 * uni(rng), 1.0 + uni(rng), n, dim, center);
    auto grid = build_grid(spec, dim);
    auto ens = init_particles([&](std::span<const double>) { return 0.1 + uni(rng); }, grid, spec);
    for (auto& v : ens.velocities) v += 0.3 * spec.h() * (uni(rng) - 0.5);
    out.state.ensembles.push_back(std::move(ens));
    out.grids.push_back(std::move(grid));
  }
  return out;
}

inline double norm(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

}  // namespace landau::test
