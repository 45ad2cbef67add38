#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "sqzmetro/network.hpp"
#include "sqzmetro/types.hpp"

namespace sqzmetro::testing {

// Flat Dirichlet draw, normalised so the entries sum to one.
inline WeightVector dirichlet_weights(std::mt19937_64& gen, int modes) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(modes);
  double sum = 0.0;
  for (auto& x : w) sum += x = e(gen);
  for (auto& x : w) x /= sum;
  return WeightVector(std::move(w));
}

inline PhaseVector uniform_phases(std::mt19937_64& gen, int modes, double max_abs) {
  std::uniform_real_distribution<double> u(-max_abs, max_abs);
  std::vector<double> phi(modes);
  for (auto& p : phi) p = u(gen);
  return PhaseVector(std::move(phi));
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(gen);
}

// |U_j1|^2 as weights.
inline WeightVector first_column_weights(const network::NetworkUnitary& u) {
  std::vector<double> w(u.dim());
  for (int j = 0; j < u.dim(); ++j) w[j] = std::norm(u(j, 0));
  return WeightVector(std::move(w));
}

// Closed-form single-mode overlap 1 / (cosh^2 r |1 - e^{-2 i phi} tanh^2 r|).
inline double single_mode_overlap(double r, double phi) {
  const double t2 = std::tanh(r) * std::tanh(r);
  const double c = std::cosh(r);
  return 1.0 / (c * c * std::abs(1.0 - std::polar(t2, -2.0 * phi)));
}

}  // namespace sqzmetro::testing
