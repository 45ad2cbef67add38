#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sqzmetro {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Maps an angle to (-pi, pi].
double normalize_angle(double angle);

/// Squeezing parameter z = r e^{i theta} of the single-mode probe.
///
/// r is the squeezing magnitude |z| (r >= 0); theta is stored in [0, 2 pi).
/// The probe carries sinh^2(r) photons on average.
class SqueezeParameter {
 public:
  SqueezeParameter() = default;
  explicit SqueezeParameter(double r, double theta = 0.0);

  /// Squeezer whose vacuum image carries `nbar` photons on average.
  static SqueezeParameter from_mean_photons(double nbar, double theta = 0.0);

  double r() const noexcept { return r_; }
  double theta() const noexcept { return theta_; }
  double mean_photon_number() const noexcept;

 private:
  double r_ = 0.0;
  double theta_ = 0.0;
};

/// Phase delays phi_j, one per channel, in radians.
class PhaseVector {
 public:
  explicit PhaseVector(std::vector<double> phi);
  /// M copies of the same phase.
  static PhaseVector uniform(std::size_t modes, double phi);

  std::size_t size() const noexcept { return phi_.size(); }
  double operator[](std::size_t j) const { return phi_[j]; }
  std::span<const double> values() const noexcept { return phi_; }
  /// max_j |phi_j|
  double max_abs() const noexcept;
  /// Every phase multiplied by `factor`.
  PhaseVector scaled(double factor) const;

 private:
  std::vector<double> phi_;
};

/// Non-negative channel weights summing to one.
class WeightVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit WeightVector(std::vector<double> w);
  static WeightVector uniform(std::size_t modes);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t j) const { return w_[j]; }
  std::span<const double> values() const noexcept { return w_; }

 private:
  std::vector<double> w_;
};

}  // namespace sqzmetro
