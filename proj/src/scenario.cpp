#include "landau/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "landau/initialization.hpp"
#include "landau/parallel.hpp"

namespace landau {

using json = nlohmann::json;

namespace {

std::string join_lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += "  " + s + "\n";
  return out;
}

// Typed access to one JSON object with unknown-key rejection. Missing
// required keys are collected so they can be reported together.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string path, std::vector<std::string>& missing)
      : obj_(obj), path_(std::move(path)), missing_(missing) {
    if (!obj_.is_object()) throw ParseError(where() + ": expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& item : obj_.items())
      if (!known.count(item.key())) throw ParseError(where() + ": unknown key '" + item.key() + "'");
  }

  bool has(const char* key) const { return obj_.contains(key); }
  const json& raw(const char* key) const { return obj_.at(key); }
  std::string child(const char* key) const { return path_ + "/" + key; }

  template <class T>
  std::optional<T> optional(const char* key) const {
    if (!obj_.contains(key)) return std::nullopt;
    try {
      return obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ParseError(child(key) + ": wrong value type (" + e.what() + ")");
    }
  }

  template <class T>
  T required(const char* key, T fallback) const {
    auto v = optional<T>(key);
    if (!v) {
      missing_.push_back(child(key) + ": required key is missing");
      return fallback;
    }
    return *v;
  }

private:
  std::string where() const { return path_.empty() ? "/" : path_; }

  const json& obj_;
  std::string path_;
  std::vector<std::string>& missing_;
};

InitialCondition parse_initial(const ObjectReader& r, std::vector<std::string>& missing) {
  InitialCondition ic;
  const std::string type = r.required<std::string>("type", "maxwellian");
  if (type == "bkw") {
    r.allow({"type", "C", "n"});
    ic.type = InitialCondition::Type::BKW;
    ic.C = r.optional<double>("C").value_or(0.5);
    ic.n = r.optional<double>("n").value_or(1.0);
  } else if (type == "maxwellian") {
    r.allow({"type", "n", "u", "T"});
    ic.type = InitialCondition::Type::Maxwellian;
    ic.n = r.required<double>("n", 1.0);
    ic.u = r.required<std::vector<double>>("u", {});
    ic.T = r.required<double>("T", 1.0);
  } else {
    missing.push_back(r.child("type") + ": unknown initial condition type '" + type + "'");
  }
  return ic;
}

SpeciesConfig parse_species(const json& j, const std::string& path, std::vector<std::string>& missing) {
  ObjectReader r(j, path, missing);
  r.allow({"label", "mass", "half_width", "constrained_to", "center", "grid_n", "epsilon_override",
           "eps_coeff", "eps_power", "initial_condition"});
  SpeciesConfig s;
  s.label = r.optional<std::string>("label").value_or("");
  s.mass = r.required<double>("mass", 1.0);
  if (!r.has("half_width")) {
    missing.push_back(r.child("half_width") + ": required key is missing");
  } else if (r.raw("half_width").is_string()) {
    if (r.raw("half_width").get<std::string>() != "constrained")
      throw ParseError(r.child("half_width") + ": expected a number or \"constrained\"");
    s.constrained = true;
  } else {
    s.half_width = r.optional<double>("half_width");
  }
  s.constrained_to = r.optional<int>("constrained_to").value_or(-1);
  if (r.has("center")) {
    const auto& c = r.raw("center");
    if (c.is_string()) {
      const auto mode = c.get<std::string>();
      if (mode == "origin")
        s.center_mode = CenterMode::Origin;
      else if (mode == "bulk_velocity")
        s.center_mode = CenterMode::BulkVelocity;
      else
        throw ParseError(r.child("center") + ": expected \"origin\", \"bulk_velocity\" or an array");
    } else {
      s.center_mode = CenterMode::Explicit;
      s.center = r.optional<std::vector<double>>("center").value();
    }
  }
  s.grid_n = r.required<int>("grid_n", 2);
  s.epsilon_override = r.optional<double>("epsilon_override");
  s.eps_coeff = r.optional<double>("eps_coeff").value_or(kDefaultEpsCoeff);
  s.eps_power = r.optional<double>("eps_power").value_or(kDefaultEpsPower);
  if (r.has("initial_condition")) {
    ObjectReader ic(r.raw("initial_condition"), r.child("initial_condition"), missing);
    s.initial = parse_initial(ic, missing);
  } else {
    missing.push_back(r.child("initial_condition") + ": required key is missing");
  }
  return s;
}

double half_width_of(const ScenarioConfig& cfg, std::size_t i) {
  const auto& s = cfg.species[i];
  if (!s.constrained) return *s.half_width;
  int ref = s.constrained_to;
  if (ref < 0)
    for (std::size_t k = 0; k < cfg.species.size(); ++k)
      if (!cfg.species[k].constrained) {
        ref = static_cast<int>(k);
        break;
      }
  const auto& r = cfg.species[static_cast<std::size_t>(ref)];
  return constrained_half_width(r.mass, s.mass, *r.half_width, s.eps_power);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

void write_snapshot(const std::filesystem::path& dir, const SystemState& state,
                    std::span<const QuadratureGrid> grids) {
  const int d = state.dim;
  static const char* axis_names[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < state.num_species(); ++i) {
    const auto& e = state.ensembles[i];
    const std::string suffix = "_t" + time_tag(state.time) + "_s" + std::to_string(i + 1) + ".csv";
    std::string text = "w";
    for (int k = 0; k < d; ++k) text += std::string(",v") + axis_names[k];
    text += '\n';
    for (std::size_t p = 0; p < e.size(); ++p) {
      text += format_double(e.weights[p]);
      for (int k = 0; k < d; ++k) text += "," + format_double(e.velocities[p * d + k]);
      text += '\n';
    }
    write_text(dir / ("snapshot" + suffix), text);

    const auto f = blob_density(e, grids[i].centers);
    std::string blob;
    for (int k = 0; k < d; ++k) blob += std::string(k ? "," : "") + axis_names[k];
    blob += ",f\n";
    for (std::size_t h = 0; h < grids[i].size(); ++h) {
      for (int k = 0; k < d; ++k) blob += format_double(grids[i].centers[h * d + k]) + ",";
      blob += format_double(f[h]) + '\n';
    }
    write_text(dir / ("blob" + suffix), blob);
  }
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

json moments_json(const MomentRecord& r) {
  json species = json::array();
  for (const auto& s : r.per_species)
    species.push_back({{"number_density", s.number_density},
                       {"mass_density", s.mass_density},
                       {"bulk_velocity", s.bulk_velocity},
                       {"temperature", s.temperature}});
  return {{"time", r.time},
          {"species", species},
          {"total",
           {{"number_density", r.totals.number_density},
            {"mass_density", r.totals.mass_density},
            {"momentum", r.totals.momentum},
            {"bulk_velocity", r.totals.bulk_velocity},
            {"kinetic_energy", r.totals.kinetic_energy},
            {"temperature", r.totals.temperature},
            {"entropy", r.totals.entropy}}}};
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error("invalid configuration:\n" + join_lines(violations)), violations_(std::move(violations)) {}

ScenarioConfig parse_config(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  std::vector<std::string> missing;
  ObjectReader r(root, "", missing);
  r.allow({"name", "description", "dim", "kernel", "species", "time", "output", "desk"});

  ScenarioConfig cfg;
  cfg.name = r.optional<std::string>("name").value_or("");
  cfg.description = r.optional<std::string>("description").value_or("");
  cfg.dim = r.required<int>("dim", 2);

  if (r.has("kernel")) {
    ObjectReader k(r.raw("kernel"), "/kernel", missing);
    k.allow({"gamma", "strength"});
    cfg.kernel.gamma = k.required<double>("gamma", 0.0);
    const auto rows = k.required<std::vector<std::vector<double>>>("strength", {});
    cfg.kernel.strength = StrengthMatrix(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        missing.push_back("/kernel/strength: matrix must be square");
        break;
      }
      for (std::size_t j = 0; j < rows.size(); ++j) cfg.kernel.strength(i, j) = rows[i][j];
    }
  } else {
    missing.push_back("/kernel: required key is missing");
  }

  if (r.has("species")) {
    const auto& arr = r.raw("species");
    if (!arr.is_array()) throw ParseError("/species: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      cfg.species.push_back(parse_species(arr[i], "/species/" + std::to_string(i), missing));
  } else {
    missing.push_back("/species: required key is missing");
  }

  if (r.has("time")) {
    ObjectReader t(r.raw("time"), "/time", missing);
    t.allow({"dt", "t_final", "scheme", "fp_tolerance", "fp_max_iters", "euler_predictor"});
    cfg.time.dt = t.required<double>("dt", 0.0);
    cfg.time.t_final = t.required<double>("t_final", 0.0);
    const auto scheme = t.optional<std::string>("scheme").value_or("forward_euler");
    try {
      cfg.time.scheme = scheme_from_string(scheme);
    } catch (const Error& e) {
      throw ParseError(std::string("/time/scheme: ") + e.what());
    }
    cfg.time.fp_tolerance = t.optional<double>("fp_tolerance").value_or(1e-8);
    cfg.time.fp_max_iters = t.optional<int>("fp_max_iters").value_or(200);
    cfg.time.euler_predictor = t.optional<bool>("euler_predictor").value_or(false);
  } else {
    missing.push_back("/time: required key is missing");
  }

  if (r.has("output")) {
    ObjectReader o(r.raw("output"), "/output", missing);
    o.allow({"directory", "snapshot_times", "diagnostics_every"});
    cfg.output.directory = o.optional<std::string>("directory").value_or("output");
    cfg.output.snapshot_times = o.optional<std::vector<double>>("snapshot_times").value_or(std::vector<double>{});
    cfg.output.diagnostics_every = o.optional<int>("diagnostics_every").value_or(1);
  }

  if (r.has("desk")) {
    ObjectReader dk(r.raw("desk"), "/desk", missing);
    dk.allow({"grid_n", "dt", "t_final", "snapshot_times"});
    DeskOverrides desk;
    desk.grid_n = dk.optional<int>("grid_n");
    desk.dt = dk.optional<double>("dt");
    desk.t_final = dk.optional<double>("t_final");
    desk.snapshot_times = dk.optional<std::vector<double>>("snapshot_times");
    cfg.desk = desk;
  }

  auto violations = missing;
  if (missing.empty()) {
    const auto more = config_violations(cfg);
    violations.insert(violations.end(), more.begin(), more.end());
  }
  if (!violations.empty()) throw ValidationError(violations);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::vector<std::string> config_violations(const ScenarioConfig& cfg) {
  std::vector<std::string> v;
  const std::size_t s = cfg.species.size();
  if (cfg.dim != 2 && cfg.dim != 3) v.push_back("/dim: must be 2 or 3");
  if (s == 0) v.push_back("/species: at least one species is required");
  if (cfg.kernel.strength.size() != s) v.push_back("/kernel/strength: must be an s x s matrix");
  else if (!cfg.kernel.strength.is_symmetric())
    v.push_back("/kernel/strength: strength symmetry violated (B_ij != B_ji)");
  for (std::size_t i = 0; i < cfg.kernel.strength.size(); ++i)
    for (std::size_t j = 0; j < cfg.kernel.strength.size(); ++j)
      if (!(cfg.kernel.strength(i, j) >= 0.0)) {
        v.push_back("/kernel/strength: entries must be nonnegative");
        i = cfg.kernel.strength.size();
        break;
      }
  if (!(cfg.kernel.gamma >= -cfg.dim - 1.0 && cfg.kernel.gamma <= 1.0))
    v.push_back("/kernel/gamma: must lie in [-d-1, 1]");

  int constrained = 0;
  int bkw = 0;
  for (std::size_t i = 0; i < s; ++i) {
    const auto& sp = cfg.species[i];
    const std::string p = "/species/" + std::to_string(i);
    if (!(sp.mass > 0.0)) v.push_back(p + "/mass: must be positive");
    if (sp.grid_n < 2) v.push_back(p + "/grid_n: must be at least 2");
    if (sp.constrained) {
      ++constrained;
      if (sp.constrained_to >= 0) {
        const auto ref = static_cast<std::size_t>(sp.constrained_to);
        if (ref >= s || ref == i || cfg.species[ref].constrained)
          v.push_back(p + "/constrained_to: must name another species with a concrete half_width");
      }
    } else if (!(sp.half_width && *sp.half_width > 0.0)) {
      v.push_back(p + "/half_width: must be positive");
    }
    if (sp.epsilon_override && !(*sp.epsilon_override > 0.0))
      v.push_back(p + "/epsilon_override: must be positive");
    if (!(sp.eps_coeff > 0.0) || !(sp.eps_power > 0.0))
      v.push_back(p + ": eps_coeff and eps_power must be positive");
    if (sp.center_mode == CenterMode::Explicit && static_cast<int>(sp.center.size()) != cfg.dim)
      v.push_back(p + "/center: must have dim entries");
    const auto& ic = sp.initial;
    if (!(ic.n > 0.0)) v.push_back(p + "/initial_condition/n: must be positive");
    if (ic.type == InitialCondition::Type::BKW) {
      ++bkw;
      if (sp.center_mode == CenterMode::BulkVelocity)
        v.push_back(p + "/center: bulk_velocity centering needs a maxwellian initial condition");
    } else {
      if (static_cast<int>(ic.u.size()) != cfg.dim)
        v.push_back(p + "/initial_condition/u: must have dim entries");
      if (!(ic.T > 0.0)) v.push_back(p + "/initial_condition/T: must be positive");
    }
  }
  if (constrained > 1) v.push_back("/species: at most one species may use a constrained half_width");
  if (constrained == 1 && constrained == static_cast<int>(s))
    v.push_back("/species: a constrained half_width needs a concrete reference species");

  if (bkw > 0) {
    if (bkw != static_cast<int>(s)) {
      v.push_back("/species: bkw initial conditions must be used by every species");
    } else if (s != 2) {
      v.push_back("/species: the bkw initial condition supports exactly two species");
    } else {
      if (cfg.kernel.gamma != 0.0) v.push_back("/kernel/gamma: bkw initial condition requires gamma = 0");
      if (cfg.species[0].initial.C != cfg.species[1].initial.C)
        v.push_back("/species: bkw constant C must agree across species");
      const double C = cfg.species[0].initial.C;
      if (!(C > 0.0 && C < 1.0)) v.push_back("/species/0/initial_condition/C: must lie in (0, 1)");
      if (cfg.kernel.strength.size() == s && cfg.kernel.strength.is_symmetric()) {
        std::vector<double> m, n;
        for (const auto& sp : cfg.species) {
          m.push_back(sp.mass);
          n.push_back(sp.initial.n);
        }
        try {
          validate_bkw(m, n, cfg.kernel.strength);
        } catch (const Error& e) {
          v.push_back(std::string("/kernel/strength: ") + e.what());
        }
      }
    }
  }

  if (!(cfg.time.dt > 0.0)) v.push_back("/time/dt: must be positive");
  if (!(cfg.time.t_final >= 0.0)) v.push_back("/time/t_final: must be nonnegative");
  if (!(cfg.time.fp_tolerance > 0.0)) v.push_back("/time/fp_tolerance: must be positive");
  if (cfg.time.fp_max_iters < 1) v.push_back("/time/fp_max_iters: must be at least 1");
  if (cfg.output.diagnostics_every < 1) v.push_back("/output/diagnostics_every: must be at least 1");
  if (cfg.desk) {
    if (cfg.desk->grid_n && *cfg.desk->grid_n < 2) v.push_back("/desk/grid_n: must be at least 2");
    if (cfg.desk->dt && !(*cfg.desk->dt > 0.0)) v.push_back("/desk/dt: must be positive");
    if (cfg.desk->t_final && !(*cfg.desk->t_final >= 0.0))
      v.push_back("/desk/t_final: must be nonnegative");
  }
  return v;
}

ScenarioConfig apply_desk(const ScenarioConfig& cfg) {
  if (!cfg.desk) return cfg;
  ScenarioConfig out = cfg;
  if (cfg.desk->grid_n)
    for (auto& s : out.species) s.grid_n = *cfg.desk->grid_n;
  if (cfg.desk->dt) out.time.dt = *cfg.desk->dt;
  if (cfg.desk->t_final) out.time.t_final = *cfg.desk->t_final;
  if (cfg.desk->snapshot_times) out.output.snapshot_times = *cfg.desk->snapshot_times;
  out.desk.reset();
  return out;
}

ScenarioConfig with_grid_n(const ScenarioConfig& cfg, int n) {
  ScenarioConfig out = cfg;
  for (auto& s : out.species) s.grid_n = n;
  return out;
}

std::vector<SpeciesSpec> resolve_species(const ScenarioConfig& cfg) {
  std::vector<SpeciesSpec> out;
  for (std::size_t i = 0; i < cfg.species.size(); ++i) {
    const auto& sc = cfg.species[i];
    SpeciesSpec sp;
    sp.label = sc.label.empty() ? "species" + std::to_string(i + 1) : sc.label;
    sp.mass = sc.mass;
    sp.half_width = half_width_of(cfg, i);
    sp.grid_n = sc.grid_n;
    switch (sc.center_mode) {
      case CenterMode::Origin: sp.center.assign(cfg.dim, 0.0); break;
      case CenterMode::BulkVelocity: sp.center = sc.initial.u; break;
      case CenterMode::Explicit: sp.center = sc.center; break;
    }
    sp.epsilon = sc.epsilon_override ? *sc.epsilon_override
                                     : epsilon_from_h(sp.h(), sc.eps_coeff, sc.eps_power);
    out.push_back(std::move(sp));
  }
  return out;
}

std::optional<BKWParams> bkw_params(const ScenarioConfig& cfg) {
  if (cfg.species.empty()) return std::nullopt;
  for (const auto& s : cfg.species)
    if (s.initial.type != InitialCondition::Type::BKW) return std::nullopt;
  std::vector<double> m, n;
  for (const auto& s : cfg.species) {
    m.push_back(s.mass);
    n.push_back(s.initial.n);
  }
  return make_bkw_params(m, n, cfg.kernel.strength, cfg.species[0].initial.C, cfg.dim);
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  const auto violations = config_violations(cfg);
  if (!violations.empty()) throw ValidationError(violations);
  Scenario sc;
  sc.bkw = bkw_params(cfg);
  sc.state.dim = cfg.dim;
  sc.state.kernel = cfg.kernel;
  const auto specs = resolve_species(cfg);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    sc.grids.push_back(build_grid(specs[i], cfg.dim));
    DensityFunction f0;
    if (sc.bkw) {
      f0 = [&bkw = *sc.bkw, i](std::span<const double> v) { return bkw_density(0.0, v, i, bkw); };
    } else {
      const auto& ic = cfg.species[i].initial;
      MaxwellianParams mp{ic.n, specs[i].mass, ic.u, ic.T};
      f0 = [mp, d = cfg.dim](std::span<const double> v) { return maxwellian_density(v, mp, d); };
    }
    sc.state.ensembles.push_back(init_particles(f0, sc.grids.back(), specs[i]));
  }
  return sc;
}

StepControl step_control(const ScenarioConfig& cfg) {
  StepControl c;
  c.dt = cfg.time.dt;
  c.scheme = cfg.time.scheme;
  c.fp_tolerance = cfg.time.fp_tolerance;
  c.fp_max_iters = cfg.time.fp_max_iters;
  c.euler_predictor = cfg.time.euler_predictor;
  return c;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string diagnostics_header(int dim, std::size_t num_species) {
  static const char* axes[] = {"x", "y", "z"};
  std::string h = "step,time,total_mass";
  for (int k = 0; k < dim; ++k) h += std::string(",mom_") + axes[k];
  h += ",energy,entropy";
  for (std::size_t i = 1; i <= num_species; ++i) {
    const auto id = std::to_string(i);
    h += ",n_" + id;
    for (int k = 0; k < dim; ++k) h += std::string(",u") + axes[k] + "_" + id;
    h += ",T_" + id;
  }
  return h + "\n";
}

std::string diagnostics_row(int step, const MomentRecord& rec) {
  std::string row = std::to_string(step) + "," + format_double(rec.time) + "," +
                    format_double(rec.totals.number_density);
  for (double p : rec.totals.momentum) row += "," + format_double(p);
  row += "," + format_double(rec.totals.kinetic_energy) + "," + format_double(rec.totals.entropy);
  for (const auto& s : rec.per_species) {
    row += "," + format_double(s.number_density);
    for (double u : s.bulk_velocity) row += "," + format_double(u);
    row += "," + format_double(s.temperature);
  }
  return row + "\n";
}

RunSummary run(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  Scenario sc = build_scenario(cfg);
  std::filesystem::create_directories(out_dir);
  std::ofstream diag(out_dir / "diagnostics.csv", std::ios::binary);
  if (!diag) throw Error("cannot write " + (out_dir / "diagnostics.csv").string());

  const StepControl control = step_control(cfg);
  const int steps = step_count(sc.state.time, cfg.time.t_final, control.dt);

  RunSummary summary;
  summary.initial = record(sc.state, sc.grids);
  diag << diagnostics_header(cfg.dim, sc.state.num_species()) << diagnostics_row(0, summary.initial);

  double momentum_scale = 0.0;
  for (const auto& e : sc.state.ensembles)
    for (std::size_t p = 0; p < e.size(); ++p) {
      double v2 = 0.0;
      for (int k = 0; k < cfg.dim; ++k) v2 += e.velocities[p * cfg.dim + k] * e.velocities[p * cfg.dim + k];
      momentum_scale += e.species.mass * e.weights[p] * std::sqrt(v2);
    }

  auto snapshots = cfg.output.snapshot_times;
  std::sort(snapshots.begin(), snapshots.end());
  std::size_t next_snapshot = 0;
  auto maybe_snapshot = [&](const SystemState& s, bool last) {
    bool due = false;
    while (next_snapshot < snapshots.size() &&
           (snapshots[next_snapshot] <= s.time + 1e-12 * std::max(1.0, s.time) || last)) {
      due = true;
      ++next_snapshot;
    }
    if (due) write_snapshot(out_dir, s, sc.grids);
  };
  maybe_snapshot(sc.state, steps == 0);

  MomentRecord previous = summary.initial;
  auto track = [&](const MomentRecord& rec) {
    const auto& t0 = summary.initial.totals;
    summary.mass_drift = std::max(summary.mass_drift,
                                  std::abs(rec.totals.number_density - t0.number_density) / t0.number_density);
    std::vector<double> dp(rec.totals.momentum.size());
    for (std::size_t k = 0; k < dp.size(); ++k) dp[k] = rec.totals.momentum[k] - t0.momentum[k];
    summary.momentum_drift = std::max(summary.momentum_drift, norm(dp) / momentum_scale);
    summary.energy_drift = std::max(
        summary.energy_drift, std::abs(rec.totals.kinetic_energy - t0.kinetic_energy) / t0.kinetic_energy);
    summary.max_entropy_increase =
        std::max(summary.max_entropy_increase, rec.totals.entropy - previous.totals.entropy);
    previous = rec;
  };

  SystemState final_state = integrate(
      sc.state, sc.grids, control, cfg.time.t_final, [&](const SystemState& s, const StepInfo& info) {
        summary.max_fp_iterations = std::max(summary.max_fp_iterations, info.fp_iterations);
        const bool last = info.step == steps;
        if (info.step % cfg.output.diagnostics_every == 0 || last) {
          const auto rec = record(s, sc.grids);
          diag << diagnostics_row(info.step, rec);
          track(rec);
        }
        maybe_snapshot(s, last);
      });
  diag.close();

  summary.steps = steps;
  summary.final_time = final_state.time;
  summary.final = steps == 0 ? summary.initial : previous;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json js;
  js["scenario"] = cfg.name;
  js["scheme"] = to_string(cfg.time.scheme);
  js["dt"] = cfg.time.dt;
  js["t_final"] = cfg.time.t_final;
  js["steps"] = steps;
  js["threads"] = num_threads();
  js["grid_n"] = json::array();
  for (const auto& e : final_state.ensembles) js["grid_n"].push_back(e.species.grid_n);
  js["epsilon"] = json::array();
  for (const auto& e : final_state.ensembles) js["epsilon"].push_back(e.species.epsilon);
  js["half_width"] = json::array();
  for (const auto& e : final_state.ensembles) js["half_width"].push_back(e.species.half_width);
  js["drift"] = {{"mass", summary.mass_drift},
                 {"momentum", summary.momentum_drift},
                 {"energy", summary.energy_drift},
                 {"max_entropy_increase", summary.max_entropy_increase}};
  js["max_fp_iterations"] = summary.max_fp_iterations;
  js["initial"] = moments_json(summary.initial);
  js["final"] = moments_json(summary.final);
  js["wall_seconds"] = summary.wall_seconds;
  write_text(out_dir / "summary.json", js.dump(2) + "\n");
  return summary;
}

double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size()) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence(const ScenarioConfig& cfg, const std::vector<int>& n_list,
                              const std::filesystem::path& out_dir) {
  const auto bkw = bkw_params(cfg);  // throws BetaMismatch before any run
  if (!bkw) throw ValidationError({"convergence: every species needs a bkw initial condition"});
  if (n_list.empty()) throw ValidationError({"convergence: the grid list is empty"});

  ConvergenceResult result;
  const std::size_t s = cfg.species.size();
  for (int n : n_list) {
    const auto run_cfg = with_grid_n(cfg, n);
    Scenario sc = build_scenario(run_cfg);
    const SystemState final_state =
        integrate(sc.state, sc.grids, step_control(run_cfg), run_cfg.time.t_final);
    for (std::size_t i = 0; i < s; ++i) {
      const double t = final_state.time;
      auto exact = [&, i, t](std::span<const double> v) { return bkw_density(t, v, i, *bkw); };
      result.rows.push_back(
          {i, n, sc.grids[i].h, error_norms(final_state.ensembles[i], sc.grids[i], exact)});
    }
  }
  result.orders.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<double> h, e1, e2, einf;
    for (const auto& r : result.rows)
      if (r.species == i) {
        h.push_back(r.h);
        e1.push_back(r.errors.rel_L1);
        e2.push_back(r.errors.rel_L2);
        einf.push_back(r.errors.rel_Linf);
      }
    result.orders[i] = {fitted_order(h, e1), fitted_order(h, e2), fitted_order(h, einf)};
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::string text = "kind,species,n,h,L1,L2,Linf,rel_L1,rel_L2,rel_Linf\n";
    for (const auto& r : result.rows) {
      const auto& e = r.errors;
      text += "error," + std::to_string(r.species + 1) + "," + std::to_string(r.n) + "," +
              format_double(r.h) + "," + format_double(e.L1) + "," + format_double(e.L2) + "," +
              format_double(e.Linf) + "," + format_double(e.rel_L1) + "," + format_double(e.rel_L2) +
              "," + format_double(e.rel_Linf) + "\n";
    }
    for (std::size_t i = 0; i < s; ++i) {
      const auto& o = result.orders[i];
      text += "order," + std::to_string(i + 1) + ",,,,,," + format_double(o[0]) + "," +
              format_double(o[1]) + "," + format_double(o[2]) + "\n";
    }
    write_text(out_dir / "errors.csv", text);
  }
  return result;
}

std::string check_config_report(const ScenarioConfig& cfg) {
  const auto violations = config_violations(cfg);
  if (!violations.empty()) throw ValidationError(violations);
  std::ostringstream os;
  os.precision(10);
  os << "scenario: " << (cfg.name.empty() ? "(unnamed)" : cfg.name) << "\n";
  os << "dim: " << cfg.dim << ", gamma: " << cfg.kernel.gamma << ", scheme: " << to_string(cfg.time.scheme)
     << ", dt: " << cfg.time.dt << ", t_final: " << cfg.time.t_final << "\n";
  const auto specs = resolve_species(cfg);
  std::vector<double> products;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& sp = specs[i];
    products.push_back(sp.mass * sp.epsilon);
    os << "species " << i + 1 << " (" << sp.label << "): m=" << sp.mass << " L=" << sp.half_width
       << " n=" << sp.grid_n << " h=" << sp.h() << " eps=" << sp.epsilon
       << " m*eps=" << sp.mass * sp.epsilon << " center=(";
    for (std::size_t k = 0; k < sp.center.size(); ++k) os << (k ? "," : "") << sp.center[k];
    os << ")\n";
  }
  const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
  os << "m*eps relative spread: " << (*hi - *lo) / products[0]
     << ((*hi - *lo) <= 1e-12 * products[0] ? " (matched)" : " (not matched)") << "\n";
  if (const auto bkw = bkw_params(cfg)) os << "BKW beta: " << bkw->beta << ", C: " << bkw->C << "\n";
  const Scenario sc = build_scenario(cfg);
  const auto eq = predict_equilibrium(sc.state);
  os << "predicted equilibrium: u=(";
  for (std::size_t k = 0; k < eq.u_eq.size(); ++k) os << (k ? "," : "") << eq.u_eq[k];
  os << ") T=" << eq.T_eq << " species_independent=" << (eq.species_independent ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace landau
