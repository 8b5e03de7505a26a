// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   landau_acceptance [OUT_DIR]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "landau/collision_kernel.hpp"
#include "landau/interaction.hpp"
#include "landau/parallel.hpp"
#include "landau/scenario.hpp"
#include "support.hpp"

using namespace landau;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kOrderLo = 1.5, kOrderHi = 2.5;
constexpr double kBetaTol = 1e-12;
constexpr double kMomentumTol = 1e-10;
constexpr double kEnergyRatioLo = 1.6, kEnergyRatioHi = 2.4;
constexpr double kMidpointEnergyTol = 1e-5;
constexpr double kEntropyRelTol = 1e-8;
constexpr double kEntropySlackC = 1e-3;  // slack = C * max_i h_i^2
constexpr double kTempGapTol = 0.05;
constexpr double kVelocityTol = 0.02;
constexpr double kIdentityTol = 1e-12;
constexpr int kKernelTrials = 10000;
constexpr double kScoreTol = 0.02;
constexpr int kThreadsK = 4;

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path g_out = "acceptance_out";

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ScenarioConfig preset(const std::string& name) {
  return load_config(std::string(LANDAU_CONFIG_DIR) + "/" + name + ".json");
}

ScenarioConfig criterion1_config() {
  auto cfg = preset("bkw_example1");
  cfg.time.scheme = Scheme::ForwardEuler;
  cfg.time.dt = 0.005;
  cfg.time.t_final = 2.0;
  cfg.output.snapshot_times.clear();
  return cfg;
}

double max_h(const ScenarioConfig& cfg) {
  double h = 0.0;
  for (const auto& s : resolve_species(cfg)) h = std::max(h, s.h());
  return h;
}

// Desk runs shared by several criteria, recorded every step.
struct DeskRun {
  std::string name;
  ScenarioConfig cfg;
  RunSummary summary;
};

DeskRun desk_run(const std::string& name, ScenarioConfig cfg) {
  cfg.output.diagnostics_every = 1;
  cfg.output.snapshot_times.clear();
  DeskRun r{name, cfg, {}};
  r.summary = run(cfg, g_out / name);
  std::printf("  run %-26s %5d steps  %7.1fs\n", name.c_str(), r.summary.steps, r.summary.wall_seconds);
  std::fflush(stdout);
  return r;
}

std::vector<DeskRun> g_runs;

const DeskRun& find_run(const std::string& name) {
  for (const auto& r : g_runs)
    if (r.name == name) return r;
  throw Error("no run named " + name);
}

Outcome c1_convergence() {
  const auto res = convergence(criterion1_config(), {20, 30, 40}, g_out / "c1_convergence");
  bool ok = true;
  std::string d = "fitted rel-L2 orders:";
  for (std::size_t i = 0; i < res.orders.size(); ++i) {
    const double p = res.orders[i][1];
    ok = ok && p >= kOrderLo && p <= kOrderHi;
    d += " species " + std::to_string(i + 1) + " " + fmt("%.3f", p);
  }
  return {ok, d + " (band [1.5, 2.5])"};
}

Outcome c2_beta() {
  const double n[] = {1.0, 1.0};
  struct Set {
    double m1;
    StrengthMatrix B;
  };
  const Set sets[] = {{2.0, StrengthMatrix{{1.0 / 8, 1.0 / 16}, {1.0 / 16, 1.0 / 32}}},
                      {20.0, StrengthMatrix{{0.5, 49.0 / 40}, {49.0 / 40, 1.0 / 800}}},
                      {100.0, StrengthMatrix{{0.5, 1249.0 / 200}, {1249.0 / 200, 1.0 / 20000}}}};
  double worst = 0.0;
  for (const auto& s : sets) {
    const double m[] = {s.m1, 1.0};
    worst = std::max(worst, std::abs(validate_bkw(m, n, s.B) - 1.0 / 16));
  }
  return {worst <= kBetaTol, "max |beta - 1/16| = " + fmt("%.2e", worst)};
}

Outcome c3_momentum() {
  double worst = 0.0;
  std::string which;
  for (const auto& r : g_runs)
    if (r.summary.momentum_drift >= worst) {
      worst = r.summary.momentum_drift;
      which = r.name;
    }
  return {worst <= kMomentumTol, "max relative drift " + fmt("%.2e", worst) + " (" + which + ") over " +
                                     std::to_string(g_runs.size()) + " runs, both schemes"};
}

Outcome c4_energy() {
  const double coarse = find_run("bkw1_euler_dt0.02").summary.energy_drift;
  const double fine = find_run("bkw1_euler_dt0.01").summary.energy_drift;
  const double mid = find_run("bkw1_midpoint_dt0.01").summary.energy_drift;
  const double ratio = coarse / fine;
  const bool ok = ratio >= kEnergyRatioLo && ratio <= kEnergyRatioHi && mid <= kMidpointEnergyTol;
  return {ok, "Euler drift " + fmt("%.3e", coarse) + " / " + fmt("%.3e", fine) + " = ratio " + fmt("%.3f", ratio) +
                  "; midpoint drift " + fmt("%.2e", mid)};
}

Outcome c5_entropy() {
  bool ok = true;
  std::string d;
  for (const auto& name : {"bkw1_euler_dt0.02", "coulomb1_desk", "coulomb2_desk"}) {
    const auto& r = find_run(name);
    const double E = std::abs(r.summary.initial.totals.entropy);
    const double h = max_h(r.cfg);
    const double slack = std::max(kEntropyRelTol * E, kEntropySlackC * h * h);
    ok = ok && r.summary.max_entropy_increase <= slack;
    d += std::string(d.empty() ? "" : "; ") + name + " max increase " + fmt("%.2e", r.summary.max_entropy_increase) +
         " <= " + fmt("%.2e", slack);
  }
  return {ok, d};
}

Outcome c6_mass() {
  // Per-step check on an explicit integration, plus the recorded totals of every run.
  auto cfg = apply_desk(preset("bkw_example1"));
  auto sc = build_scenario(cfg);
  std::vector<std::vector<double>> w0;
  std::vector<double> n0;
  for (const auto& e : sc.state.ensembles) {
    w0.push_back(e.weights);
    n0.push_back(species_moments(e).number_density);
  }
  const double total0 = total_moments(sc.state).number_density;
  int bad = 0;
  for (Scheme s : {Scheme::ForwardEuler, Scheme::ImplicitMidpoint}) {
    StepControl ctl = step_control(cfg);
    ctl.scheme = s;
    ctl.dt = 0.01;
    integrate(sc.state, sc.grids, ctl, 0.5, [&](const SystemState& st, const StepInfo&) {
      for (std::size_t i = 0; i < st.num_species(); ++i) {
        if (st.ensembles[i].weights != w0[i]) ++bad;
        if (species_moments(st.ensembles[i]).number_density != n0[i]) ++bad;
      }
      if (total_moments(st).number_density != total0) ++bad;
    });
  }
  for (const auto& r : g_runs)
    if (r.summary.mass_drift != 0.0) ++bad;
  return {bad == 0, std::to_string(bad) + " inexact steps (per-step weights, species and total mass; " +
                        std::to_string(g_runs.size()) + " runs)"};
}

Outcome c7_temperature() {
  auto gap = [](const DeskRun& r) {
    const auto& f = r.summary.final;
    const double T1 = f.per_species[0].temperature, T2 = f.per_species[1].temperature;
    const double T = r.summary.initial.totals.temperature;
    return std::array<double, 3>{std::abs(T1 - T2) / T, std::abs(T1 - T) / T, std::abs(T2 - T) / T};
  };
  const auto m = gap(find_run("coulomb2_desk"));
  const auto u = gap(find_run("coulomb2_same_domain_desk"));
  const bool ok = m[0] <= kTempGapTol && m[1] <= kTempGapTol && m[2] <= kTempGapTol && u[0] >= kTempGapTol;
  return {ok, "matched |T1-T2|/T = " + fmt("%.4f", m[0]) + ", |Ti-T|/T = " + fmt("%.4f", m[1]) + ", " +
                  fmt("%.4f", m[2]) + "; mismatched |T1-T2|/T = " + fmt("%.4f", u[0])};
}

Outcome c8_velocity() {
  const auto& r = find_run("coulomb1_desk");
  const auto sc = build_scenario(r.cfg);
  const auto eq = predict_equilibrium(sc.state);
  double worst = 0.0;
  for (const auto& s : r.summary.final.per_species)
    for (std::size_t k = 0; k < eq.u_eq.size(); ++k) worst = std::max(worst, std::abs(s.bulk_velocity[k] - eq.u_eq[k]));
  return {worst <= kVelocityTol, "u_eq = (" + fmt("%.4f", eq.u_eq[0]) + ", " + fmt("%.4f", eq.u_eq[1]) +
                                     "), max component deviation " + fmt("%.4f", worst)};
}

Outcome c9_identities() {
  std::mt19937_64 rng(2024);
  const double gammas[] = {0.0, -3.0, -1.0, 1.0};
  double wm = 0.0, we = 0.0, ws = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto s = test::random_state(rng, trial % 4 == 3 ? 3 : 2, gammas[trial % 4]);
    const auto F = compute_scores(s.state, s.grids);
    const auto r = rhs_from_scores(s.state, F);
    const int d = s.state.dim;
    std::vector<double> mom(d, 0.0), mom_abs(d, 0.0);
    double en = 0.0, en_abs = 0.0, sg = 0.0, sg_abs = 0.0;
    for (std::size_t i = 0; i < s.state.num_species(); ++i) {
      const auto& e = s.state.ensembles[i];
      for (std::size_t p = 0; p < e.size(); ++p)
        for (int k = 0; k < d; ++k) {
          const double mw = e.species.mass * e.weights[p];
          const double rk = r[i][p * d + k];
          mom[k] += mw * rk;
          mom_abs[k] += std::abs(mw * rk);
          en += mw * e.velocities[p * d + k] * rk;
          en_abs += std::abs(mw * e.velocities[p * d + k] * rk);
          sg += e.weights[p] * F[i][p * d + k] * rk;
          sg_abs += std::abs(e.weights[p] * F[i][p * d + k] * rk);
        }
    }
    wm = std::max(wm, test::norm(mom) / test::norm(mom_abs));
    we = std::max(we, std::abs(en) / en_abs);
    ws = std::max(ws, sg / sg_abs);
  }
  return {wm <= kIdentityTol && we <= kIdentityTol && ws <= kIdentityTol,
          "100 states: momentum " + fmt("%.1e", wm) + ", energy " + fmt("%.1e", we) + ", entropy sign " +
              fmt("%.1e", ws) + " (relative)"};
}

Outcome c10_kernel() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  const double gammas[] = {0.0, -3.0, 1.0, -2.0, -1.5, 0.5, -4.0};
  auto vec = [&](int dim, double scale) {
    std::vector<double> v(dim);
    for (auto& c : v) c = scale * g(rng);
    return v;
  };
  int bad_psd = 0, bad_null = 0, bad_recip = 0;
  for (int t = 0; t < kKernelTrials; ++t) {
    const int dim = t % 2 ? 3 : 2;
    const double gamma = gammas[t % 7];
    const auto z = vec(dim, std::pow(10.0, 2.0 * uni(rng) - 1.0));
    const auto x = vec(dim, 1.0);
    const auto A = eval_kernel(z, gamma, 0.01 + uni(rng), 0.1 + 10.0 * uni(rng));
    double nA = 0.0, xAx = 0.0, xx = 0.0, zz = 0.0, Az2 = 0.0;
    for (int r = 0; r < dim; ++r) {
      double Az = 0.0;
      for (int c = 0; c < dim; ++c) {
        nA += A(r, c) * A(r, c);
        xAx += x[r] * A(r, c) * x[c];
        Az += A(r, c) * z[c];
      }
      xx += x[r] * x[r];
      zz += z[r] * z[r];
      Az2 += Az * Az;
    }
    nA = std::sqrt(nA);
    if (xAx < -1e-14 * xx * nA) ++bad_psd;
    if (std::sqrt(Az2) > 1e-12 * nA * std::sqrt(zz)) ++bad_null;

    KernelSpec k;
    k.gamma = gamma;
    k.strength = StrengthMatrix(2);
    k.strength(0, 0) = uni(rng);
    k.strength(1, 1) = uni(rng);
    k.strength(0, 1) = k.strength(1, 0) = uni(rng);
    const std::vector<double> m = {0.5 + 100.0 * uni(rng), 0.01 + uni(rng)};
    const auto A01 = eval_kernel_pair(z, k, m, 0, 1);
    const auto A10 = eval_kernel_pair(z, k, m, 1, 0);
    for (int e = 0; e < dim * dim; ++e)
      if (A10.a[e] != A01.a[e] * (m[0] / m[1])) ++bad_recip;
  }
  return {bad_psd + bad_null + bad_recip == 0,
          std::to_string(kKernelTrials) + " trials each: " + std::to_string(bad_psd) + " PSD, " +
              std::to_string(bad_null) + " null-space, " + std::to_string(bad_recip) + " reciprocity failures"};
}

Outcome c11_score() {
  struct Setting {
    double m, T;
    std::vector<double> u;
  };
  double worst = 0.0;
  std::string d;
  for (const auto& s : {Setting{1.0, 1.0, {0.0, 0.0}}, Setting{2.0, 0.25, {0.5, -0.25}}}) {
    const double sigma2 = s.T / s.m, sigma = std::sqrt(sigma2);
    auto sp = test::maxwellian_species(1.0, s.m, s.u, s.T, 5.0 * sigma, 40);
    const double eps = sp.ensemble.species.epsilon;
    const auto F = score(sp.ensemble, sp.grid, sp.grid.centers);
    double w = 0.0;
    for (std::size_t p = 0; p < sp.grid.size(); ++p) {
      const auto v = sp.grid.center(p);
      const double dv[] = {v[0] - s.u[0], v[1] - s.u[1]};
      if (test::norm(dv) > 2.0 * sigma) continue;
      const double err[] = {F[2 * p] + dv[0] / (sigma2 + eps), F[2 * p + 1] + dv[1] / (sigma2 + eps)};
      w = std::max(w, test::norm(err) / (test::norm(dv) / (sigma2 + eps)));
    }
    worst = std::max(worst, w);
    d += std::string(d.empty() ? "" : ", ") + "(m=" + fmt("%g", s.m) + ", T=" + fmt("%g", s.T) + ", eps=" +
         fmt("%.2e", eps) + ") " + fmt("%.4f", w);
  }
  return {worst <= kScoreTol, "max relative error within 2 sigma: " + d};
}

Outcome c12_determinism() {
  auto cfg = with_grid_n(criterion1_config(), 40);
  set_num_threads(1);
  (void)run(cfg, g_out / "c12_threads1");
  set_num_threads(kThreadsK);
  (void)run(cfg, g_out / "c12_threadsK");
  set_num_threads(1);
  const auto a = slurp(g_out / "c12_threads1" / "diagnostics.csv");
  const auto b = slurp(g_out / "c12_threadsK" / "diagnostics.csv");
  return {!a.empty() && a == b, "n=40 criterion-1 run, 1 vs " + std::to_string(kThreadsK) + " threads: " +
                                    (a == b ? "identical" : "different") + " diagnostics.csv (" +
                                    std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_out = argv[1];
  fs::create_directories(g_out);

  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"C1  spatial convergence (BKW Ex. 1)", c1_convergence},
      {"C2  BKW beta identities", c2_beta},
      {"C3  momentum conservation", c3_momentum},
      {"C4  energy behavior", c4_energy},
      {"C5  entropy decay", c5_entropy},
      {"C6  mass conservation", c6_mass},
      {"C7  temperature relaxation", c7_temperature},
      {"C8  velocity relaxation", c8_velocity},
      {"C9  interaction identities", c9_identities},
      {"C10 kernel properties", c10_kernel},
      {"C11 Maxwellian score oracle", c11_score},
      {"C12 thread determinism", c12_determinism},
  };

  std::printf("desk runs:\n");
  try {
    const auto ex1 = apply_desk(preset("bkw_example1"));
    auto fe01 = ex1;
    fe01.time.dt = 0.01;
    auto mid = ex1;
    mid.time.scheme = Scheme::ImplicitMidpoint;
    mid.time.dt = 0.01;
    g_runs.push_back(desk_run("bkw1_euler_dt0.02", ex1));
    g_runs.push_back(desk_run("bkw1_euler_dt0.01", fe01));
    g_runs.push_back(desk_run("bkw1_midpoint_dt0.01", mid));
    g_runs.push_back(desk_run("coulomb1_desk", apply_desk(preset("coulomb_example1"))));
    g_runs.push_back(desk_run("coulomb2_desk", apply_desk(preset("coulomb_example2"))));
    g_runs.push_back(desk_run("coulomb2_same_domain_desk", apply_desk(preset("coulomb_example2_same_domain"))));
  } catch (const std::exception& e) {
    std::printf("  desk run failed: %s\n", e.what());
  }

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
