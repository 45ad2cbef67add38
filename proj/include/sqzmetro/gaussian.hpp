#pragma once

#include <Eigen/Dense>

#include "sqzmetro/network.hpp"
#include "sqzmetro/types.hpp"

/// Cutoff-free Gaussian engine.
///
/// States are zero-mean pure M-mode Gaussian states described by their real
/// 2M x 2M covariance matrix in the interleaved quadrature ordering
/// (x_1, p_1, ..., x_M, p_M), with x = (a + a^dag)/sqrt(2) and
/// p = (a - a^dag)/(i sqrt(2)); the vacuum has covariance I/2.
namespace sqzmetro::gaussian {

inline constexpr double kPurityTolerance = 1e-9;
/// Purity residual above which overlaps refuse to evaluate.
inline constexpr double kOverlapPurityLimit = 1e-6;

class GaussianState {
 public:
  /// Throws InvalidDimension for odd/non-square shapes and ValidationError
  /// when the matrix is not symmetric positive definite.
  static GaussianState from_covariance(Eigen::MatrixXd covariance);

  int modes() const noexcept { return static_cast<int>(v_.rows() / 2); }
  const Eigen::MatrixXd& covariance() const noexcept { return v_; }
  /// |det(2V) - 1|; zero for a pure state.
  double purity_residual() const;

 private:
  explicit GaussianState(Eigen::MatrixXd v) : v_(std::move(v)) {}
  Eigen::MatrixXd v_;
};

struct PhotonMoments {
  double meanN = 0.0;   ///< <N>
  double meanN2 = 0.0;  ///< <N^2>
  double varN = 0.0;    ///< <N^2> - <N>^2
};

GaussianState vacuum_state(int modes);

/// Applies S(z) to `mode`. The symplectic map rotates the quadratures by
/// -theta/2, scales them by diag(e^r, e^-r) and rotates back, so theta = 0
/// stretches x. Phase shifts act as theta -> theta - 2 phi.
GaussianState apply_squeeze(const GaussianState& state, int mode, const SqueezeParameter& s);

/// Exact inverse of apply_squeeze with the same parameter.
GaussianState apply_antisqueeze(const GaussianState& state, int mode, const SqueezeParameter& s);

/// Passive network: a_i -> sum_j U_ij a_j.
GaussianState apply_network(const GaussianState& state, const network::NetworkUnitary& u);

/// Phase shifts exp(-i sum_j phi_j n_j).
GaussianState apply_phases(const GaussianState& state, const PhaseVector& phases);

/// Real 2M x 2M orthogonal-symplectic representation of U.
Eigen::MatrixXd passive_symplectic(const Eigen::MatrixXcd& u);

double mean_photon_number(const GaussianState& state);
PhotonMoments photon_moments(const GaussianState& state);

/// |<psi_1|psi_2>|^2 = 1/sqrt(det(V_1 + V_2)) for two zero-mean pure states.
double pure_state_fidelity(const GaussianState& a, const GaussianState& b);

/// <O> = |<vac| S_1^dag(z) |state>|^2: undo the probe squeezer on mode 1 and
/// project onto the vacuum.
///
/// Throws InvalidState when the purity residual exceeds kOverlapPurityLimit.
double vacuum_overlap_probability(const GaussianState& state, const SqueezeParameter& s);

/// Probe S_1(z)|vac> on `modes` channels.
GaussianState input_state(int modes, const SqueezeParameter& s);

/// U^dag exp(-iG) U S_1(z)|vac>.
GaussianState output_state(const SqueezeParameter& s, const network::NetworkUnitary& u,
                           const PhaseVector& phases);

/// vacuum_overlap_probability(output_state(s, u, phases), s)
double expectation_O(const SqueezeParameter& s, const network::NetworkUnitary& u,
                     const PhaseVector& phases);

}  // namespace sqzmetro::gaussian
