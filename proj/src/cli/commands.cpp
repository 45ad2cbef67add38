#include "sqzmetro/cli/commands.hpp"

#include <cmath>
#include <sstream>

#include "sqzmetro/fock.hpp"
#include "sqzmetro/format.hpp"
#include "sqzmetro/network.hpp"

namespace sqzmetro::cli {

std::string Manifest::render() const {
  std::ostringstream out;
  out << "# sqzmetro " << SQZMETRO_VERSION << '\n';
  out << "# command: " << command << '\n';
  for (const auto& [k, v] : fields) out << "# " << k << ": " << v << '\n';
  return out.str();
}

SynthesisOutput cmd_synthesize(const WeightVector& weights) {
  const auto u = network::embed_weights_unitary(weights);
  const auto mesh = network::reck_decompose(u);

  SynthesisOutput out;
  out.unitarityResidual = u.unitarity_residual();
  double col = 0.0;
  for (int j = 0; j < u.dim(); ++j) col += std::norm(u(j, 0) - std::sqrt(weights[j]));
  out.firstColumnResidual = std::sqrt(col);

  Manifest m;
  m.command = "synthesize";
  m.add("weights", format_list(weights.values()));
  m.add("modes", std::to_string(u.dim()));
  m.add("elements", std::to_string(mesh.elements.size()));
  out.netlist = network::write_netlist(mesh, m.render());
  out.unitary = network::write_unitary(u, m.render());
  return out;
}

SimulateOutput cmd_simulate(const ConfigMap& config) {
  const auto e = to_experiment(config);
  SimulateOutput out;
  out.result = metrology::run_experiment(e);
  out.regime = metrology::check_regime(e.truePhases, e.squeeze.mean_photon_number());

  Manifest m;
  m.command = "simulate";
  m.add("seed", std::to_string(e.seed));
  m.add("engine", to_string(e.engine));
  if (e.engine == metrology::Engine::fock) {
    m.add("cutoff", std::to_string(e.cutoff ? *e.cutoff : fock::certified_cutoff(e.squeeze)));
  } else {
    m.add("cutoff", "none");
  }
  m.add("config", "weights=" + format_list(e.weights.values()));
  m.add("config", "truePhases=" + format_list(e.truePhases.values()));
  m.add("config", "squeeze=" + format_double(e.squeeze.r()) + "," + format_double(e.squeeze.theta()));
  m.add("config", "shots=" + std::to_string(e.shots));
  m.add("config", "seed=" + std::to_string(e.seed));
  m.add("config", "engine=" + to_string(e.engine));
  if (e.cutoff) m.add("config", "cutoff=" + std::to_string(*e.cutoff));

  std::ostringstream csv;
  csv << m.render();
  csv << "phiBar_true,p_exact,p_hat,phi_hat,regime_ratio\n";
  const auto& r = out.result;
  csv << format_double(r.phiBarTrue) << ',' << format_double(r.pExact) << ',' << format_double(r.pHat) << ','
      << format_double(r.phiHat) << ',' << format_double(r.regimeRatio) << '\n';
  out.csv = csv.str();
  return out;
}

SweepOutput cmd_sweep(const ConfigMap& config, bool force) {
  auto s = to_sweep(config);
  s.force = force;
  SweepOutput out;
  out.result = metrology::sweep_scaling(s);

  Manifest m;
  m.command = "sweep";
  m.add("seed", std::to_string(s.seed));
  m.add("engine", s.model == metrology::SweepModel::exact ? "gaussian" : "analytic");
  m.add("cutoff", "none");
  m.add("config", "nbars=" + format_list(s.nbars));
  m.add("config", "phiBarTimesNbar=" + format_double(s.phiBarTimesNbar));
  m.add("config", "shots=" + std::to_string(s.shots));
  m.add("config", "repetitions=" + std::to_string(s.repetitions));
  m.add("config", "seed=" + std::to_string(s.seed));
  m.add("config", "model=" + to_string(s.model));
  m.add("config", "baseline=" + to_string(s.probe));
  if (s.model == metrology::SweepModel::exact) m.add("config", "weights=" + format_list(s.weights.values()));
  if (force) m.add("forced", "true");

  std::ostringstream csv;
  csv << m.render();
  csv << "nbar,nu,delta_phi_sq_empirical,heisenberg_prediction,ratio,phi_bar,p_model,mean_phi_hat\n";
  for (const auto& p : out.result.points) {
    csv << format_double(p.nbar) << ',' << s.shots << ',' << format_double(p.deltaPhiSq) << ','
        << format_double(p.heisenbergPrediction) << ',' << format_double(p.ratio) << ','
        << format_double(p.phiBar) << ',' << format_double(p.pModel) << ',' << format_double(p.meanPhiHat)
        << '\n';
  }
  csv << "slope=" << format_double(out.result.slope) << '\n';
  out.csv = csv.str();
  return out;
}

}  // namespace sqzmetro::cli
