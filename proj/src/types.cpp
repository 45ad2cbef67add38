#include "sqzmetro/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sqzmetro/errors.hpp"

namespace sqzmetro {

double normalize_angle(double angle) {
  double a = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (a <= -kPi) a += kTwoPi;
  return a;
}

SqueezeParameter::SqueezeParameter(double r, double theta) : r_(r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw ValidationError("squeezing magnitude must be finite and non-negative, got " +
                          std::to_string(r));
  }
  if (!std::isfinite(theta)) throw ValidationError("squeezing phase must be finite");
  theta_ = std::fmod(theta, kTwoPi);
  if (theta_ < 0.0) theta_ += kTwoPi;
  if (theta_ >= kTwoPi) theta_ = 0.0;
}

SqueezeParameter SqueezeParameter::from_mean_photons(double nbar, double theta) {
  if (!std::isfinite(nbar) || nbar < 0.0) {
    throw ValidationError("mean photon number must be finite and non-negative");
  }
  return SqueezeParameter(std::asinh(std::sqrt(nbar)), theta);
}

double SqueezeParameter::mean_photon_number() const noexcept {
  const double s = std::sinh(r_);
  return s * s;
}

PhaseVector::PhaseVector(std::vector<double> phi) : phi_(std::move(phi)) {
  if (phi_.empty()) throw InvalidDimension("phase vector must have at least one entry");
  for (double p : phi_) {
    if (!std::isfinite(p)) throw ValidationError("phases must be finite");
  }
}

PhaseVector PhaseVector::uniform(std::size_t modes, double phi) {
  return PhaseVector(std::vector<double>(modes, phi));
}

double PhaseVector::max_abs() const noexcept {
  double m = 0.0;
  for (double p : phi_) m = std::max(m, std::abs(p));
  return m;
}

PhaseVector PhaseVector::scaled(double factor) const {
  std::vector<double> out(phi_);
  for (double& p : out) p *= factor;
  return PhaseVector(std::move(out));
}

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw InvalidDimension("weight vector must have at least one entry");
  for (double x : w_) {
    if (!std::isfinite(x)) throw ValidationError("weights must be finite");
    if (x < 0.0) throw ValidationError("weights must be non-negative, got " + std::to_string(x));
  }
  const double total = std::accumulate(w_.begin(), w_.end(), 0.0);
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw ValidationError("weights must sum to 1 (got sum " + std::to_string(total) + ")");
  }
}

WeightVector WeightVector::uniform(std::size_t modes) {
  if (modes == 0) throw InvalidDimension("weight vector must have at least one entry");
  return WeightVector(std::vector<double>(modes, 1.0 / static_cast<double>(modes)));
}

}  // namespace sqzmetro
