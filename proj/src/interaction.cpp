#include "landau/interaction.hpp"

#include <cmath>
#include <sstream>

#include "landau/collision_kernel.hpp"
#include "landau/parallel.hpp"

namespace landau {
namespace {

struct Maxwell {
  static double radial(double) { return 1.0; }
};
struct Coulomb {
  static double radial(double r2) { return 1.0 / (r2 * std::sqrt(r2)); }
};
struct General {
  double gamma;
  double radial(double r2) const { return std::pow(r2, 0.5 * gamma); }
};

// Flattened, axis-major view of every species so the pair loop streams contiguous arrays.
struct Packed {
  std::vector<std::size_t> offset;     // particle offset of each species, size s + 1
  std::vector<std::vector<double>> v;  // v[k][p]
  std::vector<std::vector<double>> g;  // (F / m)[k][p]
  std::vector<double> w;
};

Packed pack(const SystemState& state, const SpeciesVectors& scores) {
  Packed pk;
  const int d = state.dim;
  pk.v.resize(d);
  pk.g.resize(d);
  pk.offset.push_back(0);
  for (std::size_t i = 0; i < state.num_species(); ++i) {
    const auto& e = state.ensembles[i];
    const double inv_m = 1.0 / e.species.mass;
    for (std::size_t p = 0; p < e.size(); ++p)
      for (int k = 0; k < d; ++k) {
        pk.v[k].push_back(e.velocities[p * d + k]);
        pk.g[k].push_back(scores[i][p * d + k] * inv_m);
      }
    pk.w.insert(pk.w.end(), e.weights.begin(), e.weights.end());
    pk.offset.push_back(pk.offset.back() + e.size());
  }
  return pk;
}

template <class Radial>
void pair_sum_2d(const Packed& pk, std::size_t t, std::size_t q0, std::size_t q1,
                 const Radial& radial, double* acc) {
  constexpr double tiny2 = kCoincidentSpeed * kCoincidentSpeed;
  const double* v0 = pk.v[0].data();
  const double* v1 = pk.v[1].data();
  const double* g0 = pk.g[0].data();
  const double* g1 = pk.g[1].data();
  const double* w = pk.w.data();
  const double p0 = v0[t], p1 = v1[t], h0 = g0[t], h1 = g1[t];
  double a0 = 0.0, a1 = 0.0;
#pragma omp simd reduction(+ : a0, a1)
  for (std::size_t q = q0; q < q1; ++q) {
    const double z0 = p0 - v0[q], z1 = p1 - v1[q];
    const double b0 = h0 - g0[q], b1 = h1 - g1[q];
    const double r2 = z0 * z0 + z1 * z1;
    const double zb = z0 * b0 + z1 * b1;
    const bool near = r2 < tiny2;
    const double f = near ? 0.0 : w[q] * radial.radial(near ? 1.0 : r2);
    a0 += f * (r2 * b0 - z0 * zb);
    a1 += f * (r2 * b1 - z1 * zb);
  }
  acc[0] = a0;
  acc[1] = a1;
}

template <class Radial>
void pair_sum_3d(const Packed& pk, std::size_t t, std::size_t q0, std::size_t q1,
                 const Radial& radial, double* acc) {
  constexpr double tiny2 = kCoincidentSpeed * kCoincidentSpeed;
  const double* v0 = pk.v[0].data();
  const double* v1 = pk.v[1].data();
  const double* v2 = pk.v[2].data();
  const double* g0 = pk.g[0].data();
  const double* g1 = pk.g[1].data();
  const double* g2 = pk.g[2].data();
  const double* w = pk.w.data();
  const double p0 = v0[t], p1 = v1[t], p2 = v2[t], h0 = g0[t], h1 = g1[t], h2 = g2[t];
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
#pragma omp simd reduction(+ : a0, a1, a2)
  for (std::size_t q = q0; q < q1; ++q) {
    const double z0 = p0 - v0[q], z1 = p1 - v1[q], z2 = p2 - v2[q];
    const double b0 = h0 - g0[q], b1 = h1 - g1[q], b2 = h2 - g2[q];
    const double r2 = z0 * z0 + z1 * z1 + z2 * z2;
    const double zb = z0 * b0 + z1 * b1 + z2 * b2;
    const bool near = r2 < tiny2;
    const double f = near ? 0.0 : w[q] * radial.radial(near ? 1.0 : r2);
    a0 += f * (r2 * b0 - z0 * zb);
    a1 += f * (r2 * b1 - z1 * zb);
    a2 += f * (r2 * b2 - z2 * zb);
  }
  acc[0] = a0;
  acc[1] = a1;
  acc[2] = a2;
}

template <int D, class Radial>
void accumulate(const SystemState& state, const Packed& pk, const Radial& radial,
                SpeciesVectors& out) {
  const std::size_t s = state.num_species();
  const std::size_t total = pk.offset.back();
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    std::size_t i = 0;
    for (std::size_t t = begin; t < end; ++t) {
      while (t >= pk.offset[i + 1]) ++i;
      const double inv_mi = 1.0 / state.species(i).mass;
      double result[D] = {};
      for (std::size_t j = 0; j < s; ++j) {
        double acc[D];
        if constexpr (D == 2)
          pair_sum_2d(pk, t, pk.offset[j], pk.offset[j + 1], radial, acc);
        else
          pair_sum_3d(pk, t, pk.offset[j], pk.offset[j + 1], radial, acc);
        const double c = state.kernel.strength(i, j) * inv_mi;
        for (int k = 0; k < D; ++k) result[k] += c * acc[k];
      }
      double* o = out[i].data() + (t - pk.offset[i]) * D;
      for (int k = 0; k < D; ++k) o[k] = -result[k];
    }
  });
}

template <int D>
void dispatch_gamma(const SystemState& state, const Packed& pk, SpeciesVectors& out) {
  const double g = state.kernel.gamma;
  if (g == 0.0)
    accumulate<D>(state, pk, Maxwell{}, out);
  else if (g == -3.0)
    accumulate<D>(state, pk, Coulomb{}, out);
  else
    accumulate<D>(state, pk, General{g}, out);
}

}  // namespace

SpeciesVectors compute_scores(const SystemState& state, std::span<const QuadratureGrid> grids) {
  if (grids.size() != state.num_species()) throw Error("one quadrature grid per species is required");
  SpeciesVectors scores(state.num_species());
  for (std::size_t i = 0; i < state.num_species(); ++i)
    scores[i] = score(state.ensembles[i], grids[i], state.ensembles[i].velocities);
  return scores;
}

SpeciesVectors rhs_from_scores(const SystemState& state, const SpeciesVectors& scores) {
  const int d = state.dim;
  SpeciesVectors out(state.num_species());
  for (std::size_t i = 0; i < state.num_species(); ++i)
    out[i].assign(state.ensembles[i].velocities.size(), 0.0);
  const Packed pk = pack(state, scores);
  if (d == 2)
    dispatch_gamma<2>(state, pk, out);
  else if (d == 3)
    dispatch_gamma<3>(state, pk, out);
  else
    throw Error("dimension must be 2 or 3");

  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = 0; k < out[i].size(); ++k)
      if (!std::isfinite(out[i][k])) {
        std::ostringstream os;
        os << "non-finite velocity field at species " << i << ", particle " << k / d;
        throw NonFinite(i, k / d, os.str());
      }
  return out;
}

SpeciesVectors rhs(const SystemState& state, std::span<const QuadratureGrid> grids) {
  return rhs_from_scores(state, compute_scores(state, grids));
}

}  // namespace landau
