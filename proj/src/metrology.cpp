#include "sqzmetro/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/fock.hpp"
#include "sqzmetro/format.hpp"
#include "sqzmetro/network.hpp"

namespace sqzmetro::metrology {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void require_positive_nbar(double nbar, const char* what) {
  if (!(nbar > 0.0) || !std::isfinite(nbar)) {
    throw UndefinedSensitivity(std::string(what) + " needs a positive mean photon number, got " +
                               format_double(nbar));
  }
}

}  // namespace

PhaseMoments phase_moments(const WeightVector& w, const PhaseVector& phi) {
  if (w.size() != phi.size()) {
    throw ValidationError("weights have " + std::to_string(w.size()) + " entries but phases have " +
                          std::to_string(phi.size()));
  }
  PhaseMoments m;
  for (std::size_t j = 0; j < w.size(); ++j) {
    m.phiBar += w[j] * phi[j];
    m.phiSqBar += w[j] * phi[j] * phi[j];
  }
  return m;
}

double variance_G_analytic(const PhaseMoments& m, const gaussian::PhotonMoments& pm) {
  return m.phiBar * m.phiBar * pm.varN + (m.phiSqBar - m.phiBar * m.phiBar) * pm.meanN;
}

double expectation_O_approx(const PhaseMoments& m, double nbar) {
  return 1.0 - 2.0 * nbar * nbar * m.phiBar * m.phiBar;
}

double expectation_O_quadratic(double varG) { return 1.0 - varG; }

RegimeCheck check_regime(const PhaseVector& phases, double nbar) {
  RegimeCheck c;
  c.ratio = phases.max_abs() * nbar;
  c.ok = c.ratio < kRegimeThreshold;
  return c;
}

double sensitivity_heisenberg(double nbar) {
  require_positive_nbar(nbar, "Heisenberg sensitivity");
  return 1.0 / (8.0 * nbar * nbar);
}

double sensitivity_error_propagation(double p, double dpdphi) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probability outside [0, 1]: " + format_double(p));
  if (dpdphi == 0.0 || !std::isfinite(dpdphi)) {
    throw SingularBiasPoint("error propagation is singular: d<O>/dphi = " + format_double(dpdphi));
  }
  return p * (1.0 - p) / (dpdphi * dpdphi);
}

std::uint64_t simulate_shots(double p, std::uint64_t shots, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probability outside [0, 1]: " + format_double(p));
  std::mt19937_64 gen(seed);
  std::binomial_distribution<std::uint64_t> draw(shots, p);
  return draw(gen);
}

double estimate_phase_with_prefactor(std::uint64_t count, std::uint64_t shots, double kappa) {
  if (shots == 0) throw ValidationError("estimator needs at least one shot");
  if (count > shots) throw ValidationError("count exceeds the number of shots");
  if (!(kappa > 0.0)) throw UndefinedSensitivity("estimator prefactor must be positive");
  const double loss = 1.0 - static_cast<double>(count) / static_cast<double>(shots);
  return std::sqrt(std::max(0.0, loss) / kappa);
}

double estimate_phase(std::uint64_t count, std::uint64_t shots, double nbar) {
  require_positive_nbar(nbar, "phase estimator");
  return estimate_phase_with_prefactor(count, shots, 2.0 * nbar * (nbar + 1.0));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t repetition) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ splitmix64(point + 0x632BE59BD9B4E019ULL));
  h = splitmix64(h ^ splitmix64(repetition + 0x8CB92BA72F3D8DD7ULL));
  return h;
}

void validate(const ExperimentConfig& config) {
  if (config.weights.size() != config.truePhases.size()) {
    throw InvalidDimension("weights have " + std::to_string(config.weights.size()) + " channels but truePhases has " +
                           std::to_string(config.truePhases.size()));
  }
  if (config.shots < 1) throw ValidationError("shots must be at least 1");
  if (config.cutoff) {
    if (config.engine != Engine::fock) throw ValidationError("cutoff applies to the fock engine only");
    if (*config.cutoff < 0 || *config.cutoff % 2 != 0) {
      throw ValidationError("cutoff must be a non-negative even integer, got " + std::to_string(*config.cutoff));
    }
  }
}

double exact_probability(const ExperimentConfig& config) {
  validate(config);
  const auto u = network::embed_weights_unitary(config.weights);
  if (config.engine == Engine::gaussian) return gaussian::expectation_O(config.squeeze, u, config.truePhases);
  if (!config.cutoff) return fock::expectation_O_exact(config.squeeze, u, config.truePhases);
  const auto state = fock::spread_over_channels(fock::prepare_probe(config.squeeze, *config.cutoff), u);
  return fock::expectation_O_fock(state, config.truePhases);
}

EstimationResult run_experiment(const ExperimentConfig& config) {
  const double nbar = config.squeeze.mean_photon_number();
  EstimationResult r;
  r.pExact = exact_probability(config);
  r.phiBarTrue = phase_moments(config.weights, config.truePhases).phiBar;
  r.regimeRatio = check_regime(config.truePhases, nbar).ratio;
  const auto count = simulate_shots(r.pExact, config.shots, derive_seed(config.seed, 0, 0));
  r.pHat = static_cast<double>(count) / static_cast<double>(config.shots);
  r.phiHat = estimate_phase(count, config.shots, nbar);
  r.deltaPhiSq = std::pow(r.phiHat - std::abs(r.phiBarTrue), 2);
  r.heisenbergBound = sensitivity_heisenberg(nbar) / static_cast<double>(config.shots);
  return r;
}

ResponseModel response_model(const SweepConfig& config, double nbar, double phiBar) {
  ResponseModel m;
  const double phi2 = phiBar * phiBar;
  if (config.probe == Probe::coherent) {
    m.kappa = nbar;
    m.p = config.model == SweepModel::exact ? std::exp(-2.0 * nbar * (1.0 - std::cos(phiBar))) : 1.0 - nbar * phi2;
  } else {
    switch (config.model) {
      case SweepModel::leading:
        m.kappa = 2.0 * nbar * nbar;
        m.p = 1.0 - m.kappa * phi2;
        break;
      case SweepModel::quadratic:
        m.kappa = 2.0 * nbar * (nbar + 1.0);
        m.p = 1.0 - m.kappa * phi2;
        break;
      case SweepModel::exact: {
        m.kappa = 2.0 * nbar * (nbar + 1.0);
        const auto u = network::embed_weights_unitary(config.weights);
        const auto s = SqueezeParameter::from_mean_photons(nbar);
        m.p = gaussian::expectation_O(s, u, PhaseVector::uniform(config.weights.size(), phiBar));
        break;
      }
    }
  }
  m.p = std::clamp(m.p, 0.0, 1.0);
  return m;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

SweepResult sweep_scaling(const SweepConfig& config) {
  if (config.nbars.empty()) throw ValidationError("sweep needs at least one nbar");
  if (config.shots < 1) throw ValidationError("shots must be at least 1");
  if (config.repetitions < 1) throw ValidationError("repetitions must be at least 1");
  if (config.threads < 1) throw ValidationError("threads must be at least 1");
  if (!std::isfinite(config.phiBarTimesNbar)) throw ValidationError("phiBarTimesNbar must be finite");
  for (double nbar : config.nbars) {
    if (!(nbar > 0.0) || !std::isfinite(nbar)) {
      throw ValidationError("sweep nbars must be positive, got " + format_double(nbar));
    }
  }

  const std::size_t n_points = config.nbars.size();
  const auto reps = static_cast<std::size_t>(config.repetitions);
  std::vector<ResponseModel> models(n_points);
  SweepResult result;
  result.points.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double nbar = config.nbars[i];
    const double phi = config.phiBarTimesNbar / nbar;
    const double ratio = std::abs(phi) * nbar;
    if (ratio >= kRegimeThreshold && !config.force) {
      throw RegimeViolation("sweep point nbar=" + format_double(nbar) + " has |phi|max*nbar=" + format_double(ratio) +
                            " >= " + format_double(kRegimeThreshold) + "; pass --force to run it anyway");
    }
    models[i] = response_model(config, nbar, phi);
    result.points[i].nbar = nbar;
    result.points[i].phiBar = phi;
    result.points[i].pModel = models[i].p;
  }

  std::vector<double> estimates(n_points * reps);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < estimates.size(); t += stride) {
      const std::size_t point = t / reps;
      const std::size_t rep = t % reps;
      const auto count = simulate_shots(models[point].p, config.shots, derive_seed(config.seed, point, rep));
      estimates[t] = estimate_phase_with_prefactor(count, config.shots, models[point].kappa);
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), estimates.size());
  if (n_threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(work, k, n_threads);
  }

  std::vector<double> lx, ly;
  const double nu = static_cast<double>(config.shots);
  for (std::size_t i = 0; i < n_points; ++i) {
    auto& pt = result.points[i];
    double sum = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double e = estimates[i * reps + r];
      sum += e;
      sq += (e - std::abs(pt.phiBar)) * (e - std::abs(pt.phiBar));
    }
    pt.meanPhiHat = sum / static_cast<double>(reps);
    pt.deltaPhiSq = sq / static_cast<double>(reps);
    pt.heisenbergPrediction = sensitivity_heisenberg(pt.nbar) / nu;
    pt.ratio = pt.deltaPhiSq / pt.heisenbergPrediction;
    lx.push_back(std::log(pt.nbar));
    ly.push_back(std::log(pt.deltaPhiSq));
  }
  result.slope = n_points >= 2 ? fit_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace sqzmetro::metrology
