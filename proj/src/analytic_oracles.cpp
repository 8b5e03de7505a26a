#include "landau/analytic_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "landau/diagnostics.hpp"

namespace landau {
namespace {

std::string describe_betas(const std::vector<double>& betas) {
  std::ostringstream os;
  os.precision(17);
  os << "BKW beta mismatch:";
  for (std::size_t i = 0; i < betas.size(); ++i) os << " beta_" << i << "=" << betas[i];
  return os.str();
}

}  // namespace

BetaMismatch::BetaMismatch(std::vector<double> betas)
    : Error(describe_betas(betas)), betas_(std::move(betas)) {}

double validate_bkw(std::span<const double> masses, std::span<const double> densities,
                    const StrengthMatrix& strength) {
  const std::size_t s = masses.size();
  if (s == 0 || densities.size() != s || strength.size() != s)
    throw Error("BKW parameters must have one mass, density and strength row per species");
  if (!strength.is_symmetric()) throw Error("BKW strength matrix must be symmetric");
  std::vector<double> betas(s, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      betas[i] += strength(i, j) * densities[j] / (masses[i] * masses[j]);
  const auto [lo, hi] = std::minmax_element(betas.begin(), betas.end());
  if (!(*hi - *lo <= 1e-10 * std::abs(*hi)) || !(*hi > 0.0)) throw BetaMismatch(betas);
  return betas[0];
}

BKWParams make_bkw_params(std::vector<double> masses, std::vector<double> densities,
                          StrengthMatrix strength, double C, int dim) {
  if (masses.size() != 2) throw Error("the BKW solution is implemented for two species");
  if (!(C > 0.0 && C < 1.0)) throw Error("BKW constant C must lie in (0, 1)");
  BKWParams p;
  p.beta = validate_bkw(masses, densities, strength);
  p.masses = std::move(masses);
  p.densities = std::move(densities);
  p.strength = std::move(strength);
  p.C = C;
  p.dim = dim;
  return p;
}

double bkw_K(double t, double C, double beta, int dim) {
  return 1.0 - C * std::exp(-2.0 * beta * (dim - 1) * t);
}

double bkw_density(double t, std::span<const double> v, std::size_t species, const BKWParams& p) {
  const int d = p.dim;
  const double K = bkw_K(t, p.C, p.beta, d);
  const double m = p.masses[species];
  double v2 = 0.0;
  for (double c : v) v2 += c * c;
  const double Q = (1.0 - K) / (2.0 * K);
  const double poly = 1.0 - d * Q + (m / K) * Q * v2;
  return p.densities[species] * std::pow(m / (2.0 * std::numbers::pi * K), 0.5 * d) *
         std::exp(-m * v2 / (2.0 * K)) * poly;
}

double maxwellian_density(std::span<const double> v, const MaxwellianParams& p, int dim) {
  double r2 = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double dv = v[k] - (p.u.empty() ? 0.0 : p.u[k]);
    r2 += dv * dv;
  }
  return p.n * std::pow(p.m / (2.0 * std::numbers::pi * p.T), 0.5 * dim) *
         std::exp(-p.m * r2 / (2.0 * p.T));
}

EquilibriumPrediction predict_equilibrium(const SystemState& state) {
  const TotalMoments tot = total_moments(state);
  EquilibriumPrediction out;
  out.u_eq = tot.bulk_velocity;
  out.T_eq = tot.temperature;
  const double ref = state.species(0).mass * state.species(0).epsilon;
  double spread = 0.0;
  for (std::size_t i = 0; i < state.num_species(); ++i)
    for (std::size_t j = 0; j < state.num_species(); ++j)
      spread = std::max(spread, std::abs(state.species(i).mass * state.species(i).epsilon -
                                         state.species(j).mass * state.species(j).epsilon));
  out.species_independent = spread <= 1e-10 * ref;
  return out;
}

}  // namespace landau
