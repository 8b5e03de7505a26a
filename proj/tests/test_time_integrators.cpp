#include <doctest.h>

#include <cmath>

#include "landau/diagnostics.hpp"
#include "landau/scenario.hpp"
#include "landau/time_integrators.hpp"
#include "support.hpp"

using namespace landau;

namespace {

test::StateWithGrids lone_particles() {
  test::StateWithGrids s;
  s.state.dim = 2;
  s.state.kernel = {-3.0, StrengthMatrix{{1.0, 0.5}, {0.5, 1.0}}};
  for (double m : {1.0, 4.0}) {
    ParticleEnsemble e;
    e.dim = 2;
    e.species = test::make_spec(m, 2.0, 10, 2);
    e.weights = {0.7};
    e.velocities = {0.3, -0.1};
    s.grids.push_back(build_grid(e.species, 2));
    s.state.ensembles.push_back(std::move(e));
  }
  return s;
}

Scenario bkw_desk(int n) {
  auto cfg = load_config(LANDAU_CONFIG_DIR "/bkw_example1.json");
  return build_scenario(with_grid_n(cfg, n));
}

double momentum_drift(const SystemState& a, const SystemState& b) {
  const auto pa = total_moments(a).momentum;
  const auto pb = total_moments(b).momentum;
  double scale = 0.0;
  for (const auto& e : a.ensembles)
    for (std::size_t p = 0; p < e.size(); ++p)
      scale += e.species.mass * e.weights[p] * test::norm(e.velocity(p));
  double diff = 0.0;
  for (std::size_t k = 0; k < pa.size(); ++k) diff = std::max(diff, std::abs(pa[k] - pb[k]));
  return diff / scale;
}

double energy(const SystemState& s) { return total_moments(s).kinetic_energy; }

}  // namespace

TEST_CASE("scheme names round trip") {
  CHECK(scheme_from_string(to_string(Scheme::ForwardEuler)) == Scheme::ForwardEuler);
  CHECK(scheme_from_string(to_string(Scheme::ImplicitMidpoint)) == Scheme::ImplicitMidpoint);
  CHECK_THROWS_AS(scheme_from_string("rk4"), Error);
}

TEST_CASE("zero field leaves velocities unchanged") {
  auto s = lone_particles();
  const auto next = step_forward_euler(s.state, s.grids, 0.1);
  CHECK(next.ensembles[0].velocities == s.state.ensembles[0].velocities);
  CHECK(next.ensembles[1].velocities == s.state.ensembles[1].velocities);
  CHECK(next.time == doctest::Approx(0.1));

  StepControl ctl;
  ctl.dt = 0.1;
  ctl.scheme = Scheme::ImplicitMidpoint;
  const auto mid = step_implicit_midpoint(s.state, s.grids, ctl);
  CHECK(mid.iterations == 1);
  CHECK(mid.state.ensembles[0].velocities == s.state.ensembles[0].velocities);
}

TEST_CASE("forward Euler conserves momentum per step") {
  auto sc = bkw_desk(12);
  auto s = test::two_species_maxwellians(2, 12, -3.0);
  for (auto* st : {&sc.state, &s.state}) {
    auto& grids = st == &sc.state ? sc.grids : s.grids;
    const auto next = step_forward_euler(*st, grids, 0.02);
    CHECK(momentum_drift(*st, next) <= 1e-12);
  }
}

TEST_CASE("implicit midpoint conserves momentum and energy per step") {
  auto s = test::two_species_maxwellians(2, 12, -3.0);
  StepControl ctl;
  ctl.dt = 0.05;
  ctl.scheme = Scheme::ImplicitMidpoint;
  const auto r = step_implicit_midpoint(s.state, s.grids, ctl);
  CHECK(r.iterations > 1);
  CHECK(r.residual <= ctl.fp_tolerance);
  CHECK(momentum_drift(s.state, r.state) <= 1e-12);
  const double e0 = energy(s.state);
  CHECK(std::abs(energy(r.state) - e0) <= 10.0 * ctl.fp_tolerance * e0);

  ctl.euler_predictor = true;
  const auto p = step_implicit_midpoint(s.state, s.grids, ctl);
  CHECK(momentum_drift(s.state, p.state) <= 1e-12);
  CHECK(std::abs(energy(p.state) - e0) <= 10.0 * ctl.fp_tolerance * e0);
}

TEST_CASE("midpoint reports non-convergence") {
  auto s = test::two_species_maxwellians(2, 8, 0.0);
  StepControl ctl;
  ctl.dt = 0.05;
  ctl.scheme = Scheme::ImplicitMidpoint;
  ctl.fp_max_iters = 2;
  ctl.fp_tolerance = 1e-14;
  try {
    (void)step_implicit_midpoint(s.state, s.grids, ctl);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > 1e-14);
  }
}

TEST_CASE("forward Euler energy error is first order in dt") {
  auto sc = bkw_desk(16);
  auto drift = [&](double dt) {
    StepControl ctl;
    ctl.dt = dt;
    const auto out = integrate(sc.state, sc.grids, ctl, 1.0);
    return std::abs(energy(out) - energy(sc.state)) / energy(sc.state);
  };
  const double ratio = drift(0.04) / drift(0.02);
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.4);
}

TEST_CASE("integrate lands exactly on t_final") {
  auto s = lone_particles();
  StepControl ctl;
  ctl.dt = 0.1;
  int calls = 0;
  double last = -1.0;
  auto obs = [&](const SystemState& st, const StepInfo& info) {
    ++calls;
    CHECK(info.step == calls);
    last = st.time;
  };
  const auto out = integrate(s.state, s.grids, ctl, 1.05, obs);
  CHECK(calls == 11);
  CHECK(std::abs(last - 1.05) <= 1e-12);
  CHECK(out.time == 1.05);

  calls = 0;
  const auto same = integrate(s.state, s.grids, ctl, 0.0, obs);
  CHECK(calls == 0);
  CHECK(same.ensembles[0].velocities == s.state.ensembles[0].velocities);
  CHECK(same.time == 0.0);

  CHECK(step_count(0.0, 1.0, 0.1) == 10);
  CHECK(step_count(0.0, 2.0, 0.005) == 400);
  CHECK(step_count(0.0, 1.05, 0.1) == 11);
  CHECK_THROWS_AS(step_count(1.0, 0.5, 0.1), Error);
}

TEST_CASE("species mass is bitwise constant across every step") {
  auto sc = bkw_desk(12);
  StepControl ctl;
  ctl.dt = 0.02;
  std::vector<double> n0;
  for (const auto& e : sc.state.ensembles) n0.push_back(species_moments(e).number_density);
  int bad = 0;
  integrate(sc.state, sc.grids, ctl, 0.4, [&](const SystemState& st, const StepInfo&) {
    for (std::size_t i = 0; i < n0.size(); ++i)
      if (species_moments(st.ensembles[i]).number_density != n0[i]) ++bad;
  });
  CHECK(bad == 0);
}

TEST_CASE("BKW example 1 midpoint at n=40, dt=0.002 converges every step") {
  auto sc = bkw_desk(40);
  StepControl ctl;
  ctl.dt = 0.002;
  ctl.scheme = Scheme::ImplicitMidpoint;
  int worst = 0;
  integrate(sc.state, sc.grids, ctl, 0.02,
            [&](const SystemState&, const StepInfo& info) { worst = std::max(worst, info.fp_iterations); });
  CHECK(worst > 0);
  CHECK(worst < ctl.fp_max_iters);
}
