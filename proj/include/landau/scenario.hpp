#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "landau/analytic_oracles.hpp"
#include "landau/core.hpp"
#include "landau/diagnostics.hpp"
#include "landau/regularized_score.hpp"
#include "landau/time_integrators.hpp"

namespace landau {

/// Malformed configuration text, wrong value types or unknown keys.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Well-formed configuration that violates one or more invariants.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

private:
  std::vector<std::string> violations_;
};

struct InitialCondition {
  enum class Type { BKW, Maxwellian };
  Type type = Type::Maxwellian;
  double C = 0.5;  // BKW
  double n = 1.0;  // number density (both types)
  std::vector<double> u;
  double T = 1.0;
};

enum class CenterMode { Origin, BulkVelocity, Explicit };

struct SpeciesConfig {
  std::string label;
  double mass = 1.0;
  std::optional<double> half_width;  // empty when constrained
  bool constrained = false;
  int constrained_to = -1;
  CenterMode center_mode = CenterMode::Origin;
  std::vector<double> center;  // for CenterMode::Explicit
  int grid_n = 2;
  std::optional<double> epsilon_override;
  double eps_coeff = 0.64;
  double eps_power = 1.98;
  InitialCondition initial;
};

struct TimeConfig {
  double dt = 0.0;
  double t_final = 0.0;
  Scheme scheme = Scheme::ForwardEuler;
  double fp_tolerance = 1e-8;
  int fp_max_iters = 200;
  bool euler_predictor = false;
};

struct OutputConfig {
  std::string directory = "output";
  std::vector<double> snapshot_times;
  int diagnostics_every = 1;
};

/// Reduced-cost variant of a preset, applied with --desk.
struct DeskOverrides {
  std::optional<int> grid_n;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::optional<std::vector<double>> snapshot_times;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  int dim = 2;
  KernelSpec kernel;
  std::vector<SpeciesConfig> species;
  TimeConfig time;
  OutputConfig output;
  std::optional<DeskOverrides> desk;
};

ScenarioConfig parse_config(std::string_view text, const std::string& source = "<string>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every invariant violation of a parsed configuration (empty when valid).
std::vector<std::string> config_violations(const ScenarioConfig& cfg);

ScenarioConfig apply_desk(const ScenarioConfig& cfg);
ScenarioConfig with_grid_n(const ScenarioConfig& cfg, int n);

/// Species parameters after resolving constrained widths, centers and eps.
std::vector<SpeciesSpec> resolve_species(const ScenarioConfig& cfg);

/// BKW parameters when every species starts from the BKW solution.
std::optional<BKWParams> bkw_params(const ScenarioConfig& cfg);

struct Scenario {
  SystemState state;
  std::vector<QuadratureGrid> grids;
  std::optional<BKWParams> bkw;
};

Scenario build_scenario(const ScenarioConfig& cfg);

StepControl step_control(const ScenarioConfig& cfg);

/// diagnostics.csv header and rows, 17 significant digits.
std::string diagnostics_header(int dim, std::size_t num_species);
std::string diagnostics_row(int step, const MomentRecord& rec);

std::string format_double(double v);

struct RunSummary {
  int steps = 0;
  double final_time = 0.0;
  // Drifts are maxima over recorded rows.
  double mass_drift = 0.0;      // |n(t) - n(0)| / n(0)
  double momentum_drift = 0.0;  // |P(t) - P(0)| / sum_i sum_p m_i w_p |v_p(0)|
  double energy_drift = 0.0;    // |E(t) - E(0)| / E(0)
  double max_entropy_increase = 0.0;
  int max_fp_iterations = 0;
  double wall_seconds = 0.0;
  MomentRecord initial;
  MomentRecord final;
};

/// Integrates the scenario and writes diagnostics.csv, snapshot CSVs and
/// summary.json into out_dir.
RunSummary run(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

struct ConvergenceRow {
  std::size_t species = 0;
  int n = 0;
  double h = 0.0;
  ErrorNorms errors;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  /// orders[species] = fitted slopes of {rel L1, rel L2, rel Linf} vs h.
  std::vector<std::array<double, 3>> orders;
};

/// Runs the BKW scenario at every grid size and fits log(error) vs log(h).
/// Writes errors.csv into out_dir when it is not empty.
ConvergenceResult convergence(const ScenarioConfig& cfg, const std::vector<int>& n_list,
                              const std::filesystem::path& out_dir = {});

/// Least-squares slope of log(y) against log(x); NaN for fewer than two points.
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

/// Human-readable report of derived quantities. Throws ValidationError when invalid.
std::string check_config_report(const ScenarioConfig& cfg);

}  // namespace landau
