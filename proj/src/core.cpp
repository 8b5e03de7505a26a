#include "landau/core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace landau {

StrengthMatrix::StrengthMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : size_(rows.size()), data_(rows.size() * rows.size(), 0.0) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != size_) throw Error("strength matrix must be square");
    std::size_t j = 0;
    for (double v : row) data_[i * size_ + j++] = v;
    ++i;
  }
}

bool StrengthMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = i + 1; j < size_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

double ParticleEnsemble::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::size_t expected_particle_count(int grid_n, int dim) {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(grid_n);
  return n;
}

std::vector<Violation> validate_state(const SystemState& state) {
  std::vector<Violation> out;
  auto add = [&out](int sp, std::string field, std::string msg) {
    out.push_back({sp, std::move(field), std::move(msg)});
  };

  if (state.dim != 2 && state.dim != 3) add(-1, "dim", "dimension must be 2 or 3");
  if (state.ensembles.empty()) add(-1, "species", "at least one species is required");
  if (!(state.time >= 0.0)) add(-1, "time", "time must be nonnegative");

  const auto& B = state.kernel.strength;
  if (B.size() != state.ensembles.size()) {
    add(-1, "strength shape", "strength matrix must be s x s");
  } else {
    if (!B.is_symmetric()) add(-1, "strength symmetry", "strength matrix must be symmetric");
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j)
        if (!(B(i, j) >= 0.0)) {
          add(-1, "strength sign", "strength entries must be nonnegative");
          i = B.size();
          break;
        }
  }
  const double g = state.kernel.gamma;
  if (!(g >= -state.dim - 1.0 && g <= 1.0)) add(-1, "gamma", "gamma must lie in [-d-1, 1]");

  for (std::size_t i = 0; i < state.ensembles.size(); ++i) {
    const auto& e = state.ensembles[i];
    const auto& sp = e.species;
    const int si = static_cast<int>(i);
    if (!(sp.mass > 0.0)) add(si, "mass", "mass must be positive");
    if (!(sp.half_width > 0.0)) add(si, "half_width", "half width must be positive");
    if (sp.grid_n < 2) add(si, "grid_n", "grid_n must be at least 2");
    if (!(sp.epsilon > 0.0)) add(si, "epsilon", "epsilon must be positive");
    if (e.dim != state.dim) add(si, "dim", "ensemble dimension differs from state dimension");
    if (static_cast<int>(sp.center.size()) != state.dim)
      add(si, "center", "center must have one entry per axis");
    if (e.velocities.size() != e.weights.size() * static_cast<std::size_t>(e.dim))
      add(si, "velocities", "velocity array length must equal N * dim");
    if (sp.grid_n >= 2 && (state.dim == 2 || state.dim == 3) &&
        e.weights.size() != expected_particle_count(sp.grid_n, state.dim)) {
      std::ostringstream os;
      os << "particle count " << e.weights.size() << " != grid_n^d = "
         << expected_particle_count(sp.grid_n, state.dim);
      add(si, "particle count", os.str());
    }
    for (double w : e.weights)
      if (!(w >= 0.0) || !std::isfinite(w)) {
        add(si, "weights", "weights must be finite and nonnegative");
        break;
      }
    for (double v : e.velocities)
      if (!std::isfinite(v)) {
        add(si, "velocities", "velocities must be finite");
        break;
      }
  }
  return out;
}

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) {
    if (v.species >= 0) os << "species " << v.species << ": ";
    os << v.field << ": " << v.message << '\n';
  }
  return os.str();
}

}  // namespace landau
