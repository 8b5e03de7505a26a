#pragma once

#include <span>
#include <vector>

#include "landau/core.hpp"

namespace landau {

/// The Maxwell-kernel BKW ansatz is invalid: the per-species rates differ.
class BetaMismatch : public Error {
public:
  explicit BetaMismatch(std::vector<double> betas);
  const std::vector<double>& betas() const { return betas_; }

private:
  std::vector<double> betas_;
};

/// Parameters of the two-species BKW exact solution (gamma = 0).
struct BKWParams {
  std::vector<double> masses;
  std::vector<double> densities;
  StrengthMatrix strength;
  double C = 0.5;
  double beta = 0.0625;
  int dim = 2;
};

struct MaxwellianParams {
  double n = 1.0;
  double m = 1.0;
  std::vector<double> u;
  double T = 1.0;
};

/// beta_i = sum_j B_ij n_j / (m_i m_j); returns the common value, or throws
/// BetaMismatch when the relative spread exceeds 1e-10.
double validate_bkw(std::span<const double> masses, std::span<const double> densities,
                    const StrengthMatrix& strength);

/// Builds BKWParams after checking the beta identity and 0 < C < 1.
BKWParams make_bkw_params(std::vector<double> masses, std::vector<double> densities,
                          StrengthMatrix strength, double C, int dim);

/// K(t) = 1 - C exp(-2 beta (d - 1) t).
double bkw_K(double t, double C, double beta, int dim);

double bkw_density(double t, std::span<const double> v, std::size_t species, const BKWParams& p);

double maxwellian_density(std::span<const double> v, const MaxwellianParams& p, int dim);

struct EquilibriumPrediction {
  std::vector<double> u_eq;
  double T_eq = 0.0;
  bool species_independent = false;
};

/// Equilibrium bulk velocity and temperature from the conserved moments,
/// plus whether m_i eps_i agrees across species (relative 1e-10).
EquilibriumPrediction predict_equilibrium(const SystemState& state);

}  // namespace landau
