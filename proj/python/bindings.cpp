#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/fock.hpp"
#include "sqzmetro/gaussian.hpp"
#include "sqzmetro/metrology.hpp"
#include "sqzmetro/network.hpp"

namespace py = pybind11;
using namespace sqzmetro;

namespace {

network::NetworkUnitary as_unitary(const Eigen::MatrixXcd& u) { return network::NetworkUnitary::from_matrix(u); }

metrology::SweepModel model_from(const std::string& s) {
  if (s == "leading") return metrology::SweepModel::leading;
  if (s == "quadratic") return metrology::SweepModel::quadratic;
  if (s == "exact") return metrology::SweepModel::exact;
  throw ValidationError("model must be leading, quadratic or exact");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian engine, Fock oracle and estimation routines";
  m.attr("__version__") = SQZMETRO_VERSION;
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<SqueezeParameter>(m, "SqueezeParameter")
      .def(py::init<double, double>(), py::arg("r"), py::arg("theta") = 0.0)
      .def_static("from_mean_photons", &SqueezeParameter::from_mean_photons, py::arg("nbar"),
                  py::arg("theta") = 0.0)
      .def_property_readonly("r", &SqueezeParameter::r)
      .def_property_readonly("theta", &SqueezeParameter::theta)
      .def_property_readonly("mean_photon_number", &SqueezeParameter::mean_photon_number)
      .def("__repr__", [](const SqueezeParameter& s) {
        return "SqueezeParameter(r=" + std::to_string(s.r()) + ", theta=" + std::to_string(s.theta()) + ")";
      });

  m.def(
      "embed_weights_unitary",
      [](std::vector<double> w) { return network::embed_weights_unitary(WeightVector(std::move(w))).matrix(); },
      py::arg("weights"));
  m.def(
      "mach_zehnder_unitary", [](double w1) { return network::mach_zehnder_unitary(w1).matrix(); }, py::arg("w1"));
  m.def(
      "haar_random_unitary",
      [](int dim, std::uint64_t seed) { return network::haar_random_unitary(dim, seed).matrix(); }, py::arg("dim"),
      py::arg("seed"));
  m.def(
      "reck_decompose",
      [](const Eigen::MatrixXcd& u) {
        const auto mesh = network::reck_decompose(as_unitary(u));
        py::list elements;
        for (const auto& el : mesh.elements) elements.append(py::make_tuple(el.mode, el.angle, el.phase));
        return py::make_tuple(elements, mesh.output_phases);
      },
      py::arg("u"), "Returns ([(mode, angle, phase), ...], output_phases).");
  m.def(
      "recompose",
      [](const std::vector<std::tuple<int, double, double>>& elements, const std::vector<double>& phases) {
        network::RotationMesh mesh;
        mesh.dim = static_cast<int>(phases.size());
        for (const auto& [mode, angle, phase] : elements) mesh.elements.push_back({mode, angle, phase});
        mesh.output_phases = phases;
        return network::recompose(mesh).matrix();
      },
      py::arg("elements"), py::arg("output_phases"));

  m.def(
      "expectation_O_gaussian",
      [](const SqueezeParameter& s, const Eigen::MatrixXcd& u, std::vector<double> phases) {
        return gaussian::expectation_O(s, as_unitary(u), PhaseVector(std::move(phases)));
      },
      py::arg("squeeze"), py::arg("u"), py::arg("phases"));
  m.def(
      "expectation_O_exact",
      [](const SqueezeParameter& s, const Eigen::MatrixXcd& u, std::vector<double> phases, double tol) {
        return fock::expectation_O_exact(s, as_unitary(u), PhaseVector(std::move(phases)), tol);
      },
      py::arg("squeeze"), py::arg("u"), py::arg("phases"), py::arg("tail_tolerance") = fock::kTailTolerance);
  m.def("certified_cutoff", &fock::certified_cutoff, py::arg("squeeze"), py::arg("tolerance") = fock::kTailTolerance,
        py::arg("moment_order") = 0);
  m.def("mz_factorization_residual", &fock::mz_factorization_residual, py::arg("phi1"), py::arg("phi2"),
        py::arg("cutoff"));
  m.def(
      "photon_moments",
      [](const SqueezeParameter& s, int modes) {
        const auto pm = gaussian::photon_moments(gaussian::input_state(modes, s));
        return py::dict(py::arg("meanN") = pm.meanN, py::arg("meanN2") = pm.meanN2, py::arg("varN") = pm.varN);
      },
      py::arg("squeeze"), py::arg("modes") = 1);

  m.def(
      "phase_moments",
      [](std::vector<double> w, std::vector<double> phi) {
        const auto pm = metrology::phase_moments(WeightVector(std::move(w)), PhaseVector(std::move(phi)));
        return py::make_tuple(pm.phiBar, pm.phiSqBar);
      },
      py::arg("weights"), py::arg("phases"), "Returns (phiBar, phiSqBar).");
  m.def("sensitivity_heisenberg", &metrology::sensitivity_heisenberg, py::arg("nbar"));
  m.def("simulate_shots", &metrology::simulate_shots, py::arg("p"), py::arg("shots"), py::arg("seed"));
  m.def("estimate_phase", &metrology::estimate_phase, py::arg("count"), py::arg("shots"), py::arg("nbar"));
  m.def(
      "sweep_scaling",
      [](std::vector<double> nbars, double phi_bar_times_nbar, std::uint64_t shots, int repetitions,
         std::uint64_t seed, const std::string& model, bool coherent, int threads, bool force) {
        metrology::SweepConfig c;
        c.nbars = std::move(nbars);
        c.phiBarTimesNbar = phi_bar_times_nbar;
        c.shots = shots;
        c.repetitions = repetitions;
        c.seed = seed;
        c.model = model_from(model);
        c.probe = coherent ? metrology::Probe::coherent : metrology::Probe::squeezed;
        c.threads = threads;
        c.force = force;
        const auto r = metrology::sweep_scaling(c);
        py::list points;
        for (const auto& p : r.points) {
          points.append(py::dict(py::arg("nbar") = p.nbar, py::arg("phi_bar") = p.phiBar,
                                 py::arg("delta_phi_sq") = p.deltaPhiSq,
                                 py::arg("heisenberg_prediction") = p.heisenbergPrediction,
                                 py::arg("ratio") = p.ratio));
        }
        return py::make_tuple(points, r.slope);
      },
      py::arg("nbars"), py::arg("phi_bar_times_nbar") = 0.05, py::arg("shots") = 100000,
      py::arg("repetitions") = 200, py::arg("seed") = 1, py::arg("model") = "leading", py::arg("coherent") = false,
      py::arg("threads") = 1, py::arg("force") = false, "Returns (points, slope).");
}
