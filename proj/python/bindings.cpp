#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "landau/analytic_oracles.hpp"
#include "landau/collision_kernel.hpp"
#include "landau/initialization.hpp"
#include "landau/parallel.hpp"
#include "landau/regularized_score.hpp"
#include "landau/scenario.hpp"

namespace py = pybind11;
using namespace landau;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

StrengthMatrix to_strength(const std::vector<std::vector<double>>& rows) {
  StrengthMatrix B(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw py::value_error("strength must be a square matrix");
    for (std::size_t j = 0; j < rows.size(); ++j) B(i, j) = rows[i][j];
  }
  return B;
}

std::vector<double> flat(const Array& a) {
  const auto* p = static_cast<const double*>(a.request().ptr);
  return std::vector<double>(p, p + a.size());
}

// Rows of an (M, d) array, copied to a contiguous buffer.
std::vector<double> rows(const Array& a, std::size_t& d) {
  if (a.ndim() != 2) throw py::value_error("expected an array of shape (M, d)");
  const auto r = a.unchecked<2>();
  d = static_cast<std::size_t>(r.shape(1));
  std::vector<double> out;
  out.reserve(r.shape(0) * d);
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    for (py::ssize_t k = 0; k < r.shape(1); ++k) out.push_back(r(i, k));
  return out;
}

ScenarioConfig load(const std::string& path, bool desk) {
  auto cfg = load_config(path);
  return desk ? apply_desk(cfg) : cfg;
}

py::dict moments_dict(const MomentRecord& r) {
  py::list species;
  for (const auto& s : r.per_species)
    species.append(py::dict(py::arg("n") = s.number_density, py::arg("rho") = s.mass_density,
                            py::arg("u") = s.bulk_velocity, py::arg("T") = s.temperature));
  const auto& t = r.totals;
  return py::dict(py::arg("time") = r.time, py::arg("species") = species, py::arg("n") = t.number_density,
                  py::arg("momentum") = t.momentum, py::arg("energy") = t.kinetic_energy,
                  py::arg("T") = t.temperature, py::arg("entropy") = t.entropy);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deterministic particle method for the multispecies Landau equation";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BetaMismatch>(m, "BetaMismatch", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  m.def("num_threads", &num_threads);
  m.def("set_num_threads", &set_num_threads, py::arg("n"));

  m.def(
      "eval_kernel",
      [](const Array& z, double gamma, double strength, double mass) {
        const auto zv = flat(z);
        const auto A = eval_kernel(zv, gamma, strength, mass);
        Array out({A.dim, A.dim});
        std::copy(A.a.begin(), A.a.begin() + A.dim * A.dim, out.mutable_data());
        return out;
      },
      py::arg("z"), py::arg("gamma"), py::arg("strength"), py::arg("mass"),
      "(B/m) |z|^gamma (|z|^2 I - z z^T)");

  m.def("epsilon_from_h", &epsilon_from_h, py::arg("h"), py::arg("coeff") = kDefaultEpsCoeff,
        py::arg("power") = kDefaultEpsPower);
  m.def("constrained_half_width", &constrained_half_width, py::arg("m1"), py::arg("m2"), py::arg("L1"),
        py::arg("power") = kDefaultEpsPower);

  m.def(
      "validate_bkw",
      [](const std::vector<double>& masses, const std::vector<double>& densities,
         const std::vector<std::vector<double>>& strength) {
        return validate_bkw(masses, densities, to_strength(strength));
      },
      py::arg("masses"), py::arg("densities"), py::arg("strength"));
  m.def("bkw_K", &bkw_K, py::arg("t"), py::arg("C"), py::arg("beta"), py::arg("dim"));
  m.def(
      "bkw_density",
      [](double t, const Array& v, std::size_t species, const std::vector<double>& masses,
         const std::vector<double>& densities, const std::vector<std::vector<double>>& strength, double C) {
        std::size_t d = 0;
        const auto pts = rows(v, d);
        const auto p = make_bkw_params(masses, densities, to_strength(strength), C, static_cast<int>(d));
        std::vector<double> out(pts.size() / d);
        for (std::size_t k = 0; k < out.size(); ++k)
          out[k] = bkw_density(t, std::span(pts.data() + k * d, d), species, p);
        return Array(static_cast<py::ssize_t>(out.size()), out.data());
      },
      py::arg("t"), py::arg("v"), py::arg("species"), py::arg("masses"), py::arg("densities"),
      py::arg("strength"), py::arg("C") = 0.5);
  m.def(
      "maxwellian_density",
      [](const Array& v, double n, double mass, const std::vector<double>& u, double T) {
        std::size_t d = 0;
        const auto pts = rows(v, d);
        if (d != u.size()) throw py::value_error("v must have shape (M, len(u))");
        const MaxwellianParams p{n, mass, u, T};
        std::vector<double> out(pts.size() / d);
        for (std::size_t k = 0; k < out.size(); ++k)
          out[k] = maxwellian_density(std::span(pts.data() + k * d, d), p, static_cast<int>(d));
        return Array(static_cast<py::ssize_t>(out.size()), out.data());
      },
      py::arg("v"), py::arg("n"), py::arg("mass"), py::arg("u"), py::arg("T"));

  m.def(
      "log_blob_density",
      [](const Array& weights, const Array& velocities, double eps, const Array& points) {
        std::size_t d = 0, dq = 0;
        ParticleEnsemble e;
        e.velocities = rows(velocities, d);
        e.weights = flat(weights);
        const auto q = rows(points, dq);
        if (d != dq || e.weights.size() * d != e.velocities.size())
          throw py::value_error("expected weights (N,), velocities (N, d), points (M, d)");
        e.dim = static_cast<int>(d);
        e.species.epsilon = eps;
        const auto L = log_blob_density(e, q);
        return Array(static_cast<py::ssize_t>(L.size()), L.data());
      },
      py::arg("weights"), py::arg("velocities"), py::arg("eps"), py::arg("points"));

  m.def(
      "check_config", [](const std::string& path, bool desk) { return check_config_report(load(path, desk)); },
      py::arg("path"), py::arg("desk") = false);

  m.def(
      "run",
      [](const std::string& path, const std::string& out_dir, bool desk) {
        const auto cfg = load(path, desk);
        RunSummary s;
        {
          py::gil_scoped_release release;
          s = run(cfg, out_dir.empty() ? cfg.output.directory : out_dir);
        }
        return py::dict(py::arg("steps") = s.steps, py::arg("final_time") = s.final_time,
                        py::arg("mass_drift") = s.mass_drift, py::arg("momentum_drift") = s.momentum_drift,
                        py::arg("energy_drift") = s.energy_drift,
                        py::arg("max_entropy_increase") = s.max_entropy_increase,
                        py::arg("max_fp_iterations") = s.max_fp_iterations,
                        py::arg("initial") = moments_dict(s.initial), py::arg("final") = moments_dict(s.final));
      },
      py::arg("path"), py::arg("out_dir") = "", py::arg("desk") = false,
      "Integrate a scenario file; writes diagnostics.csv, snapshots and summary.json");

  m.def(
      "convergence",
      [](const std::string& path, const std::vector<int>& n_list, const std::string& out_dir, bool desk) {
        const auto cfg = load(path, desk);
        ConvergenceResult r;
        {
          py::gil_scoped_release release;
          r = convergence(cfg, n_list, out_dir);
        }
        py::list rows;
        for (const auto& row : r.rows)
          rows.append(py::dict(py::arg("species") = row.species, py::arg("n") = row.n, py::arg("h") = row.h,
                               py::arg("rel_L1") = row.errors.rel_L1, py::arg("rel_L2") = row.errors.rel_L2,
                               py::arg("rel_Linf") = row.errors.rel_Linf));
        return py::dict(py::arg("rows") = rows, py::arg("orders") = r.orders);
      },
      py::arg("path"), py::arg("n_list"), py::arg("out_dir") = "", py::arg("desk") = false);
}
