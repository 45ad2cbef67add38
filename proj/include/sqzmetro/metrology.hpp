#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sqzmetro/gaussian.hpp"
#include "sqzmetro/types.hpp"

namespace sqzmetro::metrology {

struct PhaseMoments {
  double phiBar = 0.0;    ///< sum_j w_j phi_j
  double phiSqBar = 0.0;  ///< sum_j w_j phi_j^2
};

PhaseMoments phase_moments(const WeightVector& w, const PhaseVector& phi);

/// phiBar^2 Var(N) + (phiSqBar - phiBar^2) <N>
double variance_G_analytic(const PhaseMoments& m, const gaussian::PhotonMoments& pm);

/// 1 - 2 nbar^2 phiBar^2
double expectation_O_approx(const PhaseMoments& m, double nbar);
/// 1 - varG
double expectation_O_quadratic(double varG);

inline constexpr double kRegimeThreshold = 0.3;

struct RegimeCheck {
  bool ok = true;
  double ratio = 0.0;  ///< |phi|_max * nbar
};

/// Warns (ok = false) once |phi|_max * nbar reaches kRegimeThreshold.
RegimeCheck check_regime(const PhaseVector& phases, double nbar);

/// 1 / (8 nbar^2). Throws UndefinedSensitivity for nbar <= 0.
double sensitivity_heisenberg(double nbar);

/// p(1-p) / dpdphi^2. Throws SingularBiasPoint when dpdphi = 0.
double sensitivity_error_propagation(double p, double dpdphi);

/// Number of "unchanged" outcomes among `shots` Bernoulli(p) trials.
std::uint64_t simulate_shots(double p, std::uint64_t shots, std::uint64_t seed);

/// sqrt(max(0, 1 - count/shots) / kappa). Only |phiBar| is identifiable, so
/// the non-negative root is returned.
double estimate_phase_with_prefactor(std::uint64_t count, std::uint64_t shots, double kappa);
/// estimate_phase_with_prefactor with kappa = 2 nbar (nbar + 1).
double estimate_phase(std::uint64_t count, std::uint64_t shots, double nbar);

/// Task seed keyed by (master, point, repetition).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t repetition);

enum class Engine { gaussian, fock };

struct ExperimentConfig {
  WeightVector weights{{1.0}};
  PhaseVector truePhases{{0.0}};
  SqueezeParameter squeeze;
  std::uint64_t shots = 10'000;
  std::uint64_t seed = 1;
  Engine engine = Engine::gaussian;
  /// Fock engine only; a certified cutoff is chosen when absent.
  std::optional<int> cutoff;
};

/// Throws ValidationError / InvalidDimension for inconsistent configs.
void validate(const ExperimentConfig& config);

/// Exact <O> of the configured protocol under the chosen engine.
double exact_probability(const ExperimentConfig& config);

struct EstimationResult {
  double phiBarTrue = 0.0;
  double pExact = 0.0;
  double pHat = 0.0;
  double phiHat = 0.0;
  double deltaPhiSq = 0.0;       ///< (phiHat - |phiBar|)^2 for a single run
  double heisenbergBound = 0.0;  ///< 1 / (8 nbar^2 nu)
  double regimeRatio = 0.0;
};

/// One experiment of `shots` detections.
EstimationResult run_experiment(const ExperimentConfig& config);

/// Response model used by the sweep.
enum class SweepModel {
  leading,    ///< p = 1 - 2 nbar^2 phi^2, inverted with 2 nbar^2
  quadratic,  ///< p = 1 - 2 nbar (nbar + 1) phi^2, inverted with the same prefactor
  exact,      ///< Gaussian engine, inverted with 2 nbar (nbar + 1)
};

enum class Probe {
  squeezed,
  coherent,  ///< Poissonian baseline: Var(N) = nbar
};

struct SweepConfig {
  std::vector<double> nbars{0.5, 1.0, 2.0, 4.0};
  double phiBarTimesNbar = 0.05;
  std::uint64_t shots = 100'000;
  int repetitions = 200;
  std::uint64_t seed = 1;
  SweepModel model = SweepModel::leading;
  Probe probe = Probe::squeezed;
  /// Channel weights for the exact model (equal phases on every channel).
  WeightVector weights{{1.0}};
  bool force = false;
  int threads = 1;
};

struct SweepPoint {
  double nbar = 0.0;
  double phiBar = 0.0;
  double pModel = 0.0;
  double meanPhiHat = 0.0;
  double deltaPhiSq = 0.0;           ///< mean squared error about phiBar
  double heisenbergPrediction = 0.0;  ///< 1 / (8 nbar^2 nu)
  double ratio = 0.0;                ///< deltaPhiSq / heisenbergPrediction
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double slope = 0.0;  ///< least-squares slope of log deltaPhiSq against log nbar
};

/// Detection probability and estimator prefactor of one sweep point.
struct ResponseModel {
  double p = 1.0;
  double kappa = 1.0;
};
ResponseModel response_model(const SweepConfig& config, double nbar, double phiBar);

/// Throws ValidationError for empty or non-positive nbars, and
/// RegimeViolation for points with ratio >= kRegimeThreshold unless forced.
/// The result does not depend on `threads`.
SweepResult sweep_scaling(const SweepConfig& config);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sqzmetro::metrology
