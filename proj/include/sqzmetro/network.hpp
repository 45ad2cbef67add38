#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqzmetro/types.hpp"

namespace sqzmetro::network {

using cplx = std::complex<double>;

/// Frobenius norm of U^dagger U - I.
double unitarity_residual(const Eigen::MatrixXcd& u);

/// M x M unitary matrix of a passive linear optical network.
///
/// Entry (i, j) is the transition amplitude from channel j to channel i, so the
/// Heisenberg action is a_i -> sum_j U_ij a_j and a photon injected in channel
/// j leaves in superposition sum_i U_ij |1_i>.
class NetworkUnitary {
 public:
  static constexpr double kUnitarityTolerance = 1e-10;

  /// Throws ValidationError when the residual exceeds `tolerance`.
  static NetworkUnitary from_matrix(Eigen::MatrixXcd u, double tolerance = kUnitarityTolerance);
  static NetworkUnitary identity(int dim);

  int dim() const noexcept { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return u_; }
  cplx operator()(int i, int j) const { return u_(i, j); }
  Eigen::VectorXcd first_column() const { return u_.col(0); }
  NetworkUnitary adjoint() const;
  double unitarity_residual() const { return network::unitarity_residual(u_); }

 private:
  explicit NetworkUnitary(Eigen::MatrixXcd u) : u_(std::move(u)) {}
  Eigen::MatrixXcd u_;
};

/// Unitary whose first column is (sqrt w_1, ..., sqrt w_M).
///
/// Columns 2..M come from the Householder reflection that maps e_1 onto
/// sqrt(w), so the result is real, symmetric and deterministic in w. For
/// w = e_1 the reflection degenerates and the identity is returned; for
/// w = e_k (k > 1) the result is the transposition of channels 1 and k. For
/// M = 2 this reproduces the Mach-Zehnder beam splitter
/// [[sqrt w1, sqrt w2], [sqrt w2, -sqrt w1]] whenever w1 < 1.
NetworkUnitary embed_weights_unitary(const WeightVector& w);

/// Beam splitter of reflectivity w1: [[sqrt w1, sqrt(1-w1)], [sqrt(1-w1), -sqrt w1]].
NetworkUnitary mach_zehnder_unitary(double w1);

/// Haar-distributed unitary from the QR factorisation of a seeded complex
/// Gaussian matrix (phases of R's diagonal absorbed into Q).
NetworkUnitary haar_random_unitary(int dim, std::uint64_t seed);

/// Two-mode element acting on channels (mode, mode + 1):
///   [[e^{i phase} cos(angle), -sin(angle)],
///    [e^{i phase} sin(angle),  cos(angle)]]
struct GivensElement {
  int mode = 0;
  double angle = 0.0;  ///< mixing angle in [0, pi/2]
  double phase = 0.0;  ///< internal phase in (-pi, pi]

  Eigen::Matrix2cd block() const;
};

/// Triangular mesh of adjacent-channel rotations followed by output phases.
///
/// The network is U = diag(e^{i output_phases}) * T_K ... T_2 T_1, i.e. light
/// meets elements[0] first.
struct RotationMesh {
  int dim = 0;
  std::vector<GivensElement> elements;
  std::vector<double> output_phases;
};

/// Reck-style decomposition into at most M(M-1)/2 adjacent rotations.
/// Rotations that would be exactly the identity are omitted.
RotationMesh reck_decompose(const NetworkUnitary& u);
/// Same, for a raw matrix; throws ValidationError when it is not unitary.
RotationMesh reck_decompose(const Eigen::MatrixXcd& u);

/// Multiplies the mesh back together.
NetworkUnitary recompose(const RotationMesh& mesh);

/// Plain-text netlist:
///
///     pair <i> <i+1> angle <radians> phase <radians>
///     ...
///     diag <phi_1> ... <phi_M>
///
/// Lines starting with '#' are comments. Numbers use the shortest
/// round-trip representation, so parsing reproduces the mesh bit-exactly.
std::string write_netlist(const RotationMesh& mesh, std::string_view header_comment = {});
RotationMesh parse_netlist(std::string_view text);

/// One matrix row per line, entries written as "re,im" separated by spaces.
std::string write_unitary(const NetworkUnitary& u, std::string_view header_comment = {});

}  // namespace sqzmetro::network
