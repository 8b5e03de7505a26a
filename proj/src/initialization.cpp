#include "landau/initialization.hpp"

#include <cmath>

namespace landau {

QuadratureGrid build_grid(const SpeciesSpec& spec, int dim) {
  if (dim != 2 && dim != 3) throw Error("dimension must be 2 or 3");
  if (static_cast<int>(spec.center.size()) != dim) throw Error("center has wrong dimension");
  QuadratureGrid g;
  g.dim = dim;
  g.n = spec.grid_n;
  g.h = spec.h();
  g.cell_volume = std::pow(g.h, dim);
  g.axes.resize(dim);
  for (int k = 0; k < dim; ++k) {
    g.axes[k].resize(g.n);
    const double lo = spec.center[k] - spec.half_width;
    for (int a = 0; a < g.n; ++a) g.axes[k][a] = lo + (a + 0.5) * g.h;
  }
  const std::size_t M = expected_particle_count(g.n, dim);
  g.centers.resize(M * dim);
  for (std::size_t idx = 0; idx < M; ++idx) {
    std::size_t rem = idx;
    for (int k = dim - 1; k >= 0; --k) {
      g.centers[idx * dim + k] = g.axes[k][rem % g.n];
      rem /= g.n;
    }
  }
  return g;
}

ParticleEnsemble init_particles(const DensityFunction& f0, const QuadratureGrid& grid,
                                const SpeciesSpec& spec) {
  ParticleEnsemble e;
  e.species = spec;
  e.dim = grid.dim;
  e.velocities = grid.centers;
  e.weights.resize(grid.size());
  bool any = false;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double f = f0(grid.center(p));
    if (!std::isfinite(f) || f < 0.0)
      throw Error("initial density must be finite and nonnegative on the grid");
    e.weights[p] = grid.cell_volume * f;
    any = any || e.weights[p] > 0.0;
  }
  if (!any) throw ZeroWeight("initial density vanishes on every grid cell of '" + spec.label + "'");
  return e;
}

double epsilon_from_h(double h, double coeff, double power) {
  if (!(h > 0.0)) throw Error("mesh size must be positive");
  return coeff * std::pow(h, power);
}

double constrained_half_width(double m1, double m2, double L1, double power) {
  if (!(m1 > 0.0 && m2 > 0.0 && L1 > 0.0 && power > 0.0))
    throw Error("constrained_half_width requires positive inputs");
  return std::pow(m1 / m2, 1.0 / power) * L1;
}

}  // namespace landau
