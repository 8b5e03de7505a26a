#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Total weight of an ensemble is zero, so moments / log-densities are undefined.
class ZeroWeight : public Error {
public:
  using Error::Error;
};

/// A computed velocity field contained NaN or Inf.
class NonFinite : public Error {
public:
  NonFinite(std::size_t species, std::size_t particle, const std::string& what)
      : Error(what), species_(species), particle_(particle) {}
  std::size_t species() const { return species_; }
  std::size_t particle() const { return particle_; }

private:
  std::size_t species_;
  std::size_t particle_;
};

/// Physical and numerical parameters of one species.
///
/// The mesh size h = 2 L / n is always derived from half_width and grid_n.
struct SpeciesSpec {
  double mass = 1.0;
  double half_width = 1.0;
  std::vector<double> center;  // one entry per velocity axis
  int grid_n = 2;
  double epsilon = 1.0;
  std::string label;

  double h() const { return 2.0 * half_width / grid_n; }
};

/// Symmetric species-by-species interaction strengths B_ij, row major.
class StrengthMatrix {
public:
  StrengthMatrix() = default;
  explicit StrengthMatrix(std::size_t s) : size_(s), data_(s * s, 0.0) {}
  StrengthMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
  bool is_symmetric() const;

private:
  std::size_t size_ = 0;
  std::vector<double> data_;
};

/// Collision-kernel exponent gamma and interaction strengths.
struct KernelSpec {
  double gamma = 0.0;
  StrengthMatrix strength;
};

/// Weighted Dirac-sum solution of one species. Velocities are stored
/// interleaved: particle p occupies velocities[p*dim .. p*dim+dim).
/// Weights never change after construction.
struct ParticleEnsemble {
  SpeciesSpec species;
  int dim = 2;
  std::vector<double> weights;
  std::vector<double> velocities;

  std::size_t size() const { return weights.size(); }
  std::span<const double> velocity(std::size_t p) const {
    return {velocities.data() + p * dim, static_cast<std::size_t>(dim)};
  }
  std::span<double> velocity(std::size_t p) {
    return {velocities.data() + p * dim, static_cast<std::size_t>(dim)};
  }
  double total_weight() const;
};

struct SystemState {
  int dim = 2;
  std::vector<ParticleEnsemble> ensembles;
  KernelSpec kernel;
  double time = 0.0;

  std::size_t num_species() const { return ensembles.size(); }
  const SpeciesSpec& species(std::size_t i) const { return ensembles[i].species; }
};

struct SpeciesMoments {
  double number_density = 0.0;
  double mass_density = 0.0;
  std::vector<double> bulk_velocity;
  double temperature = 0.0;
};

struct TotalMoments {
  double number_density = 0.0;
  double mass_density = 0.0;
  std::vector<double> momentum;
  std::vector<double> bulk_velocity;
  double kinetic_energy = 0.0;
  double temperature = 0.0;
  double entropy = 0.0;
};

struct MomentRecord {
  double time = 0.0;
  std::vector<SpeciesMoments> per_species;
  TotalMoments totals;
};

struct Violation {
  int species = -1;  // -1 when the violation is not tied to one species
  std::string field;
  std::string message;
};

/// Lists every violated invariant of the state. Never throws.
std::vector<Violation> validate_state(const SystemState& state);

std::string format_violations(const std::vector<Violation>& violations);

/// grid_n^dim, the particle count required for a species.
std::size_t expected_particle_count(int grid_n, int dim);

}  // namespace landau
