#include "sqzmetro/cli/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sqzmetro/fock.hpp"
#include "sqzmetro/format.hpp"
#include "sqzmetro/gaussian.hpp"
#include "sqzmetro/metrology.hpp"

namespace sqzmetro::cli {

namespace {

constexpr std::uint64_t kSuiteSeed = 20240611;

struct Case {
  SqueezeParameter squeeze;
  network::NetworkUnitary u = network::NetworkUnitary::identity(1);
  PhaseVector phases{{0.0}};
};

Case random_case(std::mt19937_64& gen, int max_modes, double max_r, double max_phase) {
  std::uniform_int_distribution<int> modes(1, max_modes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Case c;
  const int m = modes(gen);
  c.squeeze = SqueezeParameter(0.1 + (max_r - 0.1) * unit(gen), 2.0 * kPi * unit(gen));
  c.u = network::haar_random_unitary(m, gen());
  std::vector<double> phi(m);
  for (auto& p : phi) p = max_phase * (2.0 * unit(gen) - 1.0);
  c.phases = PhaseVector(std::move(phi));
  return c;
}

// Rescales the phases so that |phi|_max * nbar equals `ratio`.
PhaseVector at_ratio(const PhaseVector& phases, double nbar, double ratio) {
  return phases.scaled(ratio / (phases.max_abs() * nbar));
}

WeightVector channel_weights(const network::NetworkUnitary& u) {
  std::vector<double> w(u.dim());
  for (int j = 0; j < u.dim(); ++j) w[j] = std::norm(u(j, 0));
  return WeightVector(std::move(w));
}

CheckResult check_cross_engine(const ValidationHooks& hooks) {
  CheckResult r{"cross-engine equality", true, {}};
  std::mt19937_64 gen(kSuiteSeed);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto c = random_case(gen, 4, 1.0, 0.5);
    const double g = hooks.gaussian_overlap(c.squeeze, c.u, c.phases);
    const double f = fock::expectation_O_exact(c.squeeze, c.u, c.phases);
    const double diff = std::abs(g - f);
    if (!(diff <= 1e-6)) {
      r.passed = false;
      r.detail = "case " + std::to_string(i) + ": gaussian " + format_double(g) + " vs fock " + format_double(f);
      return r;
    }
    worst = std::max(worst, diff);
  }
  r.detail = "20 cases, max |gaussian - fock| = " + format_double(worst);
  return r;
}

CheckResult check_odd_terms() {
  CheckResult r{"odd series terms vanish", true, {}};
  std::mt19937_64 gen(kSuiteSeed + 1);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto c = random_case(gen, 4, 1.0, 1.0);
    const double nbar = c.squeeze.mean_photon_number();
    const auto phases = at_ratio(c.phases, nbar, 0.2);
    const auto state = fock::spread_over_channels(fock::prepare_certified_probe(c.squeeze, 1e-12, 7), c.u);
    const auto t = fock::moments_G_fock(state, phases, 7);
    if (!(std::abs(t.Ol[0] - 1.0) <= 1e-12)) {
      r.passed = false;
      r.detail = "case " + std::to_string(i) + ": O_0 = " + format_double(t.Ol[0]);
      return r;
    }
    for (int l = 1; l <= 7; l += 2) {
      const double v = std::abs(t.Ol[l]);
      if (!(v <= 1e-10)) {
        r.passed = false;
        r.detail = "case " + std::to_string(i) + ": |O_" + std::to_string(l) + "| = " + format_double(v);
        return r;
      }
      worst = std::max(worst, v);
    }
  }
  r.detail = "20 cases, max odd |O_l| = " + format_double(worst);
  return r;
}

CheckResult check_variance_identity() {
  CheckResult r{"phase variance identity", true, {}};
  std::mt19937_64 gen(kSuiteSeed + 2);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto c = random_case(gen, 4, 1.0, 1.0);
    const auto state = fock::spread_over_channels(fock::prepare_certified_probe(c.squeeze, 1e-14, 2), c.u);
    const auto t = fock::moments_G_fock(state, c.phases, 2);
    const double oracle = t.gk[2] - t.gk[1] * t.gk[1];
    const auto pm = gaussian::photon_moments(gaussian::input_state(c.u.dim(), c.squeeze));
    const double analytic =
        metrology::variance_G_analytic(metrology::phase_moments(channel_weights(c.u), c.phases), pm);
    const double diff = std::abs(oracle - analytic);
    if (!(diff <= 1e-9)) {
      r.passed = false;
      r.detail = "case " + std::to_string(i) + ": oracle " + format_double(oracle) + " vs analytic " +
                 format_double(analytic);
      return r;
    }
    worst = std::max(worst, diff);
  }
  r.detail = "20 cases, max difference = " + format_double(worst);
  return r;
}

CheckResult check_mach_zehnder() {
  CheckResult r{"mach-zehnder factorization", true, {}};
  std::mt19937_64 gen(kSuiteSeed + 3);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double a = angle(gen);
    const double b = angle(gen);
    const double res = fock::mz_factorization_residual(a, b, 12);
    if (!(res <= 1e-9)) {
      r.passed = false;
      r.detail = "phi = (" + format_double(a) + ", " + format_double(b) + "): residual " + format_double(res);
      return r;
    }
    worst = std::max(worst, res);
  }
  r.detail = "50 phase pairs at cutoff 12, max residual = " + format_double(worst);
  return r;
}

CheckResult check_series_ladder() {
  CheckResult r{"series convergence ladder", true, {}};
  std::mt19937_64 gen(kSuiteSeed + 4);
  const std::vector<double> ratios{0.05, 0.1, 0.15, 0.2};
  double min_exponent = 1e300;
  for (double nbar : {0.5, 1.0, 2.0}) {
    auto c = random_case(gen, 3, 1.0, 1.0);
    c.squeeze = SqueezeParameter::from_mean_photons(nbar, c.squeeze.theta());
    const auto state = fock::spread_over_channels(fock::prepare_certified_probe(c.squeeze, 1e-13, 6), c.u);
    std::vector<double> lx, ly;
    for (double ratio : ratios) {
      const auto phases = at_ratio(c.phases, nbar, ratio);
      const double exact = fock::expectation_O_fock(state, phases);
      const auto t = fock::moments_G_fock(state, phases, 6);
      double previous = 1e300;
      for (int terms = 0; terms <= 3; ++terms) {
        const double res = std::abs(t.partial_sum(terms) - exact);
        if (!(res < previous)) {
          r.passed = false;
          r.detail = "nbar " + format_double(nbar) + ", ratio " + format_double(ratio) + ": partial sum " +
                     std::to_string(terms) + " does not improve";
          return r;
        }
        previous = res;
      }
      lx.push_back(std::log(ratio));
      ly.push_back(std::log(previous));
    }
    const double exponent = metrology::fit_slope(lx, ly);
    if (!(exponent >= 7.0)) {
      r.passed = false;
      r.detail = "nbar " + format_double(nbar) + ": residual exponent " + format_double(exponent) + " < 7";
      return r;
    }
    min_exponent = std::min(min_exponent, exponent);
  }
  r.detail = "minimum residual exponent through O_6 = " + format_double(min_exponent);
  return r;
}

}  // namespace

bool ValidationReport::passed() const { return first_failure() == nullptr; }

const CheckResult* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

ValidationReport run_validation(ValidationLevel level, const ValidationHooks& hooks) {
  ValidationHooks h = hooks;
  if (!h.gaussian_overlap) h.gaussian_overlap = gaussian::expectation_O;
  ValidationReport report;
  auto guarded = [&](const char* name, auto&& check) {
    try {
      report.checks.push_back(check());
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("cross-engine equality", [&] { return check_cross_engine(h); });
  guarded("odd series terms vanish", check_odd_terms);
  guarded("phase variance identity", check_variance_identity);
  if (level == ValidationLevel::full) {
    guarded("mach-zehnder factorization", check_mach_zehnder);
    guarded("series convergence ladder", check_series_ladder);
  }
  return report;
}

}  // namespace sqzmetro::cli
