#include "landau/collision_kernel.hpp"

#include <vector>

namespace landau {

KernelMatrix eval_kernel(std::span<const double> z, double gamma, double strength,
                         double mass) {
  KernelMatrix out;
  out.dim = static_cast<int>(z.size());
  double r2 = 0.0;
  for (double c : z) r2 += c * c;
  const double scale = strength / mass * kernel_radial_factor(r2, gamma);
  if (scale == 0.0) return out;
  for (int r = 0; r < out.dim; ++r)
    for (int c = 0; c < out.dim; ++c)
      out(r, c) = scale * ((r == c ? r2 : 0.0) - z[r] * z[c]);
  return out;
}

KernelMatrix eval_kernel_pair(std::span<const double> z, const KernelSpec& kernel,
                              std::span<const double> masses, std::size_t i, std::size_t j) {
  if (i <= j) return eval_kernel(z, kernel.gamma, kernel.strength(i, j), masses[i]);
  KernelMatrix out = eval_kernel(z, kernel.gamma, kernel.strength(j, i), masses[j]);
  const double ratio = masses[j] / masses[i];
  for (auto& v : out.a) v = ratio * v;
  return out;
}

KernelMatrix eval_kernel_pair(std::span<const double> z, const SystemState& state,
                              std::size_t i, std::size_t j) {
  std::vector<double> masses;
  masses.reserve(state.num_species());
  for (const auto& e : state.ensembles) masses.push_back(e.species.mass);
  return eval_kernel_pair(z, state.kernel, masses, i, j);
}

}  // namespace landau
