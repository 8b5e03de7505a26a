#include "landau/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace landau {

SpeciesMoments species_moments(const ParticleEnsemble& e) {
  const int d = e.dim;
  SpeciesMoments m;
  m.number_density = e.total_weight();
  if (!(m.number_density > 0.0))
    throw ZeroWeight("species '" + e.species.label + "' has zero number density");
  m.mass_density = e.species.mass * m.number_density;
  m.bulk_velocity.assign(d, 0.0);
  for (std::size_t p = 0; p < e.size(); ++p)
    for (int k = 0; k < d; ++k) m.bulk_velocity[k] += e.weights[p] * e.velocities[p * d + k];
  for (auto& u : m.bulk_velocity) u /= m.number_density;
  double spread = 0.0;
  for (std::size_t p = 0; p < e.size(); ++p) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dv = e.velocities[p * d + k] - m.bulk_velocity[k];
      r2 += dv * dv;
    }
    spread += e.weights[p] * r2;
  }
  m.temperature = e.species.mass * spread / (d * m.number_density);
  return m;
}

TotalMoments total_moments(const SystemState& state) {
  const int d = state.dim;
  TotalMoments t;
  t.momentum.assign(d, 0.0);
  t.bulk_velocity.assign(d, 0.0);
  for (const auto& e : state.ensembles) {
    const auto sm = species_moments(e);
    t.number_density += sm.number_density;
    t.mass_density += sm.mass_density;
    for (int k = 0; k < d; ++k) t.bulk_velocity[k] += sm.mass_density * sm.bulk_velocity[k];
    const double m = e.species.mass;
    for (std::size_t p = 0; p < e.size(); ++p) {
      double v2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double v = e.velocities[p * d + k];
        t.momentum[k] += m * e.weights[p] * v;
        v2 += v * v;
      }
      t.kinetic_energy += m * e.weights[p] * v2;
    }
  }
  for (auto& u : t.bulk_velocity) u /= t.mass_density;
  double spread = 0.0;
  for (const auto& e : state.ensembles) {
    double s = 0.0;
    for (std::size_t p = 0; p < e.size(); ++p) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double dv = e.velocities[p * d + k] - t.bulk_velocity[k];
        r2 += dv * dv;
      }
      s += e.weights[p] * r2;
    }
    spread += e.species.mass * s;
  }
  t.temperature = spread / (d * t.number_density);
  return t;
}

ErrorNorms error_norms(std::span<const double> approx, std::span<const double> exact,
                       double cell_volume) {
  if (approx.size() != exact.size()) throw Error("error_norms: sample counts differ");
  double e1 = 0.0, e2 = 0.0, einf = 0.0, x1 = 0.0, x2 = 0.0, xinf = 0.0;
  for (std::size_t k = 0; k < approx.size(); ++k) {
    const double diff = std::abs(approx[k] - exact[k]);
    const double ex = std::abs(exact[k]);
    e1 += diff;
    e2 += diff * diff;
    einf = std::max(einf, diff);
    x1 += ex;
    x2 += ex * ex;
    xinf = std::max(xinf, ex);
  }
  ErrorNorms out;
  out.L1 = cell_volume * e1;
  out.L2 = std::sqrt(cell_volume * e2);
  out.Linf = einf;
  out.rel_L1 = out.L1 / (cell_volume * x1);
  out.rel_L2 = out.L2 / std::sqrt(cell_volume * x2);
  out.rel_Linf = out.Linf / xinf;
  return out;
}

ErrorNorms error_norms(const ParticleEnsemble& ensemble, const QuadratureGrid& grid,
                       const DensityFunction& exact) {
  const auto approx = blob_density(ensemble, grid.centers);
  std::vector<double> ref(grid.size());
  for (std::size_t h = 0; h < grid.size(); ++h) ref[h] = exact(grid.center(h));
  return error_norms(approx, ref, grid.cell_volume);
}

MomentRecord record(const SystemState& state, std::span<const QuadratureGrid> grids) {
  MomentRecord r;
  r.time = state.time;
  for (const auto& e : state.ensembles) r.per_species.push_back(species_moments(e));
  r.totals = total_moments(state);
  for (std::size_t i = 0; i < state.num_species(); ++i)
    r.totals.entropy += discrete_entropy(state.ensembles[i], grids[i]);
  return r;
}

}  // namespace landau
