#include "landau/time_integrators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "landau/interaction.hpp"

namespace landau {
namespace {

std::string nonconvergence_message(int iterations, double residual) {
  std::ostringstream os;
  os << "implicit midpoint fixed-point iteration did not converge after " << iterations
     << " iterations (residual " << residual << "); reduce dt";
  return os.str();
}

double landing_slack(double t_final) { return 1e-12 * std::max(1.0, std::abs(t_final)); }

}  // namespace

std::string to_string(Scheme s) {
  return s == Scheme::ForwardEuler ? "forward_euler" : "implicit_midpoint";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "forward_euler") return Scheme::ForwardEuler;
  if (s == "implicit_midpoint") return Scheme::ImplicitMidpoint;
  throw Error("unknown scheme '" + s + "' (expected forward_euler or implicit_midpoint)");
}

NonConvergence::NonConvergence(int iterations, double residual)
    : Error(nonconvergence_message(iterations, residual)),
      iterations_(iterations),
      residual_(residual) {}

SystemState step_forward_euler(const SystemState& state, std::span<const QuadratureGrid> grids,
                               double dt) {
  const auto field = rhs(state, grids);
  SystemState next = state;
  for (std::size_t i = 0; i < next.num_species(); ++i) {
    auto& v = next.ensembles[i].velocities;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += dt * field[i][k];
  }
  next.time = state.time + dt;
  return next;
}

MidpointStep step_implicit_midpoint(const SystemState& state, std::span<const QuadratureGrid> grids,
                                    const StepControl& control) {
  const double dt = control.dt;
  SystemState mid = state;
  SystemState iterate = state;
  if (control.euler_predictor) iterate = step_forward_euler(state, grids, dt);

  double residual = 0.0;
  for (int it = 1; it <= control.fp_max_iters; ++it) {
    for (std::size_t i = 0; i < state.num_species(); ++i) {
      const auto& v0 = state.ensembles[i].velocities;
      const auto& vk = iterate.ensembles[i].velocities;
      auto& vm = mid.ensembles[i].velocities;
      for (std::size_t k = 0; k < v0.size(); ++k) vm[k] = 0.5 * (v0[k] + vk[k]);
    }
    const auto field = rhs(mid, grids);
    residual = 0.0;
    for (std::size_t i = 0; i < state.num_species(); ++i) {
      const auto& v0 = state.ensembles[i].velocities;
      auto& vk = iterate.ensembles[i].velocities;
      for (std::size_t k = 0; k < v0.size(); ++k) {
        const double updated = v0[k] + dt * field[i][k];
        residual = std::max(residual, std::abs(updated - vk[k]));
        vk[k] = updated;
      }
    }
    if (residual <= control.fp_tolerance) {
      iterate.time = state.time + dt;
      return {std::move(iterate), it, residual};
    }
  }
  throw NonConvergence(control.fp_max_iters, residual);
}

int step_count(double t0, double t_final, double dt) {
  if (!(dt > 0.0)) throw Error("dt must be positive");
  if (t_final < t0) throw Error("t_final precedes the current time");
  const double span = t_final - t0;
  if (span <= landing_slack(t_final)) return 0;
  const auto full = static_cast<long long>(std::floor(span / dt * (1.0 + 1e-12)));
  const double remainder = span - static_cast<double>(full) * dt;
  return static_cast<int>(full + (remainder > landing_slack(t_final) ? 1 : 0));
}

SystemState integrate(SystemState state, std::span<const QuadratureGrid> grids,
                      const StepControl& control, double t_final, const StepObserver& observer) {
  const double t0 = state.time;
  const int steps = step_count(t0, t_final, control.dt);
  for (int n = 1; n <= steps; ++n) {
    const double target = n == steps ? t_final : t0 + n * control.dt;
    StepControl ctl = control;
    if (n == steps) ctl.dt = t_final - state.time;
    int iterations = 0;
    if (ctl.scheme == Scheme::ForwardEuler) {
      state = step_forward_euler(state, grids, ctl.dt);
    } else {
      auto result = step_implicit_midpoint(state, grids, ctl);
      iterations = result.iterations;
      state = std::move(result.state);
    }
    state.time = target;
    if (observer) observer(state, StepInfo{n, ctl.dt, iterations});
  }
  return state;
}

}  // namespace landau
