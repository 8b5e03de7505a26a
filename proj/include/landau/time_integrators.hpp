#pragma once

#include <functional>
#include <span>
#include <string>

#include "landau/core.hpp"
#include "landau/regularized_score.hpp"

namespace landau {

enum class Scheme { ForwardEuler, ImplicitMidpoint };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct StepControl {
  double dt = 0.01;
  Scheme scheme = Scheme::ForwardEuler;
  double fp_tolerance = 1e-8;
  int fp_max_iters = 200;
  /// Start the fixed-point iteration from an Euler predictor instead of v^n.
  bool euler_predictor = false;
};

/// The implicit-midpoint fixed-point iteration hit fp_max_iters.
class NonConvergence : public Error {
public:
  NonConvergence(int iterations, double residual);
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

private:
  int iterations_;
  double residual_;
};

SystemState step_forward_euler(const SystemState& state, std::span<const QuadratureGrid> grids,
                               double dt);

struct MidpointStep {
  SystemState state;
  int iterations = 0;
  double residual = 0.0;
};

/// Solves v^{n+1} = v^n + dt rhs((v^n + v^{n+1}) / 2) by fixed-point iteration,
/// stopping once the max-norm update is <= fp_tolerance.
MidpointStep step_implicit_midpoint(const SystemState& state, std::span<const QuadratureGrid> grids,
                                    const StepControl& control);

struct StepInfo {
  int step = 0;  // 1-based
  double dt = 0.0;
  int fp_iterations = 0;  // 0 for forward Euler
};

/// Called after every step with the new state.
using StepObserver = std::function<void(const SystemState&, const StepInfo&)>;

/// Advances to t_final in steps of dt, shortening the last step to land
/// exactly on t_final.
SystemState integrate(SystemState state, std::span<const QuadratureGrid> grids,
                      const StepControl& control, double t_final, const StepObserver& observer = {});

/// Number of steps integrate() takes from t0 to t_final.
int step_count(double t0, double t_final, double dt);

}  // namespace landau
