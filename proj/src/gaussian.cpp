#include "sqzmetro/gaussian.hpp"

#include <cmath>
#include <limits>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/format.hpp"

namespace sqzmetro::gaussian {

namespace {

Eigen::MatrixXd conjugate(const Eigen::MatrixXd& s, const Eigen::MatrixXd& v) {
  Eigen::MatrixXd out = s * v * s.transpose();
  return 0.5 * (out + out.transpose());
}

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

// Single-mode symplectic R(theta/2) diag(e^{r}, e^{-r}) R(-theta/2), or its
// inverse when `sign` = -1.
Eigen::Matrix2d squeeze_block(const SqueezeParameter& s, double sign) {
  const Eigen::Matrix2d rot = rotation(0.5 * s.theta());
  const Eigen::Vector2d scale(std::exp(sign * s.r()), std::exp(-sign * s.r()));
  return rot * scale.asDiagonal() * rot.transpose();
}

GaussianState apply_local(const GaussianState& state, int mode, const Eigen::Matrix2d& block) {
  if (mode < 0 || mode >= state.modes()) {
    throw IndexOutOfRange("mode " + std::to_string(mode) + " outside a " +
                          std::to_string(state.modes()) + "-mode state");
  }
  const int n = 2 * state.modes();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  s.block<2, 2>(2 * mode, 2 * mode) = block;
  return GaussianState::from_covariance(conjugate(s, state.covariance()));
}

}  // namespace

GaussianState GaussianState::from_covariance(Eigen::MatrixXd covariance) {
  if (covariance.rows() == 0 || covariance.rows() != covariance.cols() || covariance.rows() % 2 != 0) {
    throw InvalidDimension("covariance must be a non-empty 2M x 2M matrix");
  }
  if (!covariance.allFinite()) throw ValidationError("covariance has non-finite entries");
  const double asym = (covariance - covariance.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, covariance.norm())) {
    throw ValidationError("covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw ValidationError("covariance is not positive definite");
  return GaussianState(std::move(covariance));
}

double GaussianState::purity_residual() const {
  Eigen::LLT<Eigen::MatrixXd> llt(2.0 * v_);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  double logdet = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
  return std::abs(std::expm1(logdet));
}

GaussianState vacuum_state(int modes) {
  if (modes < 1) throw InvalidDimension("a state needs at least one mode");
  return GaussianState::from_covariance(0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GaussianState apply_squeeze(const GaussianState& state, int mode, const SqueezeParameter& s) {
  return apply_local(state, mode, squeeze_block(s, +1.0));
}

GaussianState apply_antisqueeze(const GaussianState& state, int mode, const SqueezeParameter& s) {
  return apply_local(state, mode, squeeze_block(s, -1.0));
}

Eigen::MatrixXd passive_symplectic(const Eigen::MatrixXcd& u) {
  const auto m = u.rows();
  Eigen::MatrixXd s(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double re = u(i, j).real();
      const double im = u(i, j).imag();
      s(2 * i, 2 * j) = re;
      s(2 * i, 2 * j + 1) = -im;
      s(2 * i + 1, 2 * j) = im;
      s(2 * i + 1, 2 * j + 1) = re;
    }
  }
  return s;
}

GaussianState apply_network(const GaussianState& state, const network::NetworkUnitary& u) {
  if (u.dim() != state.modes()) {
    throw InvalidDimension("network has " + std::to_string(u.dim()) + " channels but the state has " +
                           std::to_string(state.modes()) + " modes");
  }
  return GaussianState::from_covariance(conjugate(passive_symplectic(u.matrix()), state.covariance()));
}

GaussianState apply_phases(const GaussianState& state, const PhaseVector& phases) {
  const int m = state.modes();
  if (static_cast<int>(phases.size()) != m) {
    throw InvalidDimension("phase vector length does not match the number of modes");
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  // a_j -> a_j e^{-i phi_j}
  for (int j = 0; j < m; ++j) s.block<2, 2>(2 * j, 2 * j) = rotation(-phases[j]);
  return GaussianState::from_covariance(conjugate(s, state.covariance()));
}

double mean_photon_number(const GaussianState& state) {
  return 0.5 * (state.covariance().trace() - state.modes());
}

PhotonMoments photon_moments(const GaussianState& state) {
  // N = (xi^T xi - M)/2; the zero-mean Wick expansion of its second moment
  // gives Var N = tr(V^2)/2 - M/4.
  const auto& v = state.covariance();
  PhotonMoments pm;
  pm.meanN = mean_photon_number(state);
  pm.varN = 0.5 * v.cwiseAbs2().sum() - 0.25 * state.modes();
  pm.meanN2 = pm.varN + pm.meanN * pm.meanN;
  return pm;
}

double pure_state_fidelity(const GaussianState& a, const GaussianState& b) {
  if (a.modes() != b.modes()) throw InvalidDimension("fidelity between states of different size");
  Eigen::LLT<Eigen::MatrixXd> llt(a.covariance() + b.covariance());
  if (llt.info() != Eigen::Success) throw InvalidState("V1 + V2 is not positive definite");
  // 1/sqrt(det) = 1/prod(L_ii); accumulated in log space for large M.
  double log_prod = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_prod += std::log(l(i, i));
  return std::exp(-log_prod);
}

double vacuum_overlap_probability(const GaussianState& state, const SqueezeParameter& s) {
  const double residual = state.purity_residual();
  if (!(residual <= kOverlapPurityLimit)) {
    throw InvalidState("state is not pure (|det(2V) - 1| = " + format_double(residual) + ")");
  }
  return pure_state_fidelity(apply_antisqueeze(state, 0, s), vacuum_state(state.modes()));
}

GaussianState input_state(int modes, const SqueezeParameter& s) {
  return apply_squeeze(vacuum_state(modes), 0, s);
}

GaussianState output_state(const SqueezeParameter& s, const network::NetworkUnitary& u,
                           const PhaseVector& phases) {
  const auto spread = apply_network(input_state(u.dim(), s), u);
  return apply_network(apply_phases(spread, phases), u.adjoint());
}

double expectation_O(const SqueezeParameter& s, const network::NetworkUnitary& u,
                     const PhaseVector& phases) {
  return vacuum_overlap_probability(output_state(s, u, phases), s);
}

}  // namespace sqzmetro::gaussian
