#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sqzmetro/network.hpp"
#include "sqzmetro/types.hpp"

/// Exact truncated Fock-space oracle.
///
/// The probe S_1(z)|vac> populates only the first mode, so behind any passive
/// network the 2n-photon sector is the multinomial image
///
///     amp(n_1..n_M) = c_{2n} sqrt((2n)! / prod n_j!) prod_j U_{j1}^{n_j}.
///
/// Phase shifts are diagonal in the occupation basis, which makes every
/// quantity of the protocol a weighted sum over |amp|^2. Two evaluators share
/// this structure: FockAmplitudes materialises the occupation table, and
/// MultinomialState sums the same table mode by mode without storing it (for
/// cutoffs where the table would not fit in memory).
namespace sqzmetro::fock {

using cplx = std::complex<double>;
using Occupation = std::vector<int>;

inline constexpr double kTailTolerance = 1e-10;
/// O_l involves catastrophic cancellation beyond this order.
inline constexpr int kMaxSeriesOrder = 8;
inline constexpr std::size_t kMaxTableEntries = 4'000'000;

/// c_{2n} for n = 0..cutoff/2 with
/// c_{2n} = (cosh r)^{-1/2} (-e^{i theta} tanh r)^n sqrt((2n)!) / (2^n n!).
/// Throws ValidationError for negative or odd cutoffs.
std::vector<cplx> squeezed_vacuum_amplitudes(const SqueezeParameter& s, int cutoff);

/// Certified upper bound on sum_{2n > cutoff} (2n)^k |c_{2n}|^2, from the
/// amplitude ratio |c_{2n+2}|^2 / |c_{2n}|^2 <= tanh^2 r. Infinity when the
/// geometric bound does not apply yet.
double tail_bound(const SqueezeParameter& s, int cutoff, int moment_order = 0);

/// Smallest even cutoff whose tail_bound is below `tolerance`.
int certified_cutoff(const SqueezeParameter& s, double tolerance = kTailTolerance,
                     int moment_order = 0);

/// Single-mode probe truncated at `cutoff` photons.
struct SqueezedVacuum {
  SqueezeParameter squeeze;
  int cutoff = 0;
  std::vector<cplx> amplitudes;  ///< amplitudes[n] = c_{2n}
  double tail = 0.0;             ///< tail_bound(squeeze, cutoff)
};

SqueezedVacuum prepare_probe(const SqueezeParameter& s, int cutoff);
/// prepare_probe at certified_cutoff(s, tolerance, moment_order).
SqueezedVacuum prepare_certified_probe(const SqueezeParameter& s, double tolerance = kTailTolerance,
                                       int moment_order = 0);

/// Sparse occupation-number table of U S_1(z)|vac>.
class FockAmplitudes {
 public:
  FockAmplitudes(int modes, SqueezedVacuum probe, std::map<Occupation, cplx> table);

  int modes() const noexcept { return modes_; }
  int cutoff() const noexcept { return probe_.cutoff; }
  double tail_bound() const noexcept { return probe_.tail; }
  const SqueezeParameter& squeeze() const noexcept { return probe_.squeeze; }
  const std::map<Occupation, cplx>& table() const noexcept { return table_; }
  std::size_t size() const noexcept { return table_.size(); }

  /// Zero for occupations that are absent (odd totals, unreachable channels).
  cplx amplitude(const Occupation& n) const;
  /// sum |amp|^2
  double norm() const;

 private:
  int modes_;
  SqueezedVacuum probe_;
  std::map<Occupation, cplx> table_;
};

/// Builds the occupation table. Throws InvalidDimension when the first column
/// of `u` is not normalised within 1e-12, and ValidationError when the table
/// would exceed `max_entries`.
FockAmplitudes propagate_through_network(const SqueezedVacuum& probe, const network::NetworkUnitary& u,
                                         std::size_t max_entries = kMaxTableEntries);

/// Same distribution as propagate_through_network, kept as sector weights
/// |c_{2n}|^2 and channel weights |U_{j1}|^2.
class MultinomialState {
 public:
  MultinomialState(SqueezedVacuum probe, std::vector<double> channel_weights);

  int modes() const noexcept { return static_cast<int>(q_.size()); }
  int cutoff() const noexcept { return probe_.cutoff; }
  double tail_bound() const noexcept { return probe_.tail; }
  const SqueezeParameter& squeeze() const noexcept { return probe_.squeeze; }
  std::span<const double> channel_weights() const noexcept { return q_; }
  /// |c_{2n}|^2, n = 0..cutoff/2
  std::span<const double> sector_weights() const noexcept { return sector_; }

 private:
  SqueezedVacuum probe_;
  std::vector<double> q_;
  std::vector<double> sector_;
};

MultinomialState spread_over_channels(const SqueezedVacuum& probe, const network::NetworkUnitary& u);

/// g^(k) = <G^k>_U for k = 0..K, and O_l = sum_k (-1)^k C(l,k) g^(l-k) g^(k).
struct SeriesTerms {
  std::vector<double> gk;
  std::vector<double> Ol;

  /// sum_{l <= terms} (-1)^l O_{2l} / (2l)!
  double partial_sum(int terms) const;
};

/// |<exp(-iG)>_U|^2. Throws TruncationError when the state's tail bound is
/// above `tail_tolerance`.
double expectation_O_fock(const FockAmplitudes& state, const PhaseVector& phases,
                          double tail_tolerance = kTailTolerance);
double expectation_O_fock(const MultinomialState& state, const PhaseVector& phases,
                          double tail_tolerance = kTailTolerance);

/// Throws ValidationError unless 0 <= K <= kMaxSeriesOrder.
SeriesTerms moments_G_fock(const FockAmplitudes& state, const PhaseVector& phases, int max_order);
SeriesTerms moments_G_fock(const MultinomialState& state, const PhaseVector& phases, int max_order);

/// <N^k> for k = 0..K (the truncated sums, no tail correction).
std::vector<double> number_moments(const FockAmplitudes& state, int max_order);
std::vector<double> number_moments(const MultinomialState& state, int max_order);

/// Exact oracle for <O> at a cutoff certified to `tail_tolerance`.
double expectation_O_exact(const SqueezeParameter& s, const network::NetworkUnitary& u,
                           const PhaseVector& phases, double tail_tolerance = kTailTolerance);

// ---------------------------------------------------------------------------
// Operators on a truncated occupation basis.

/// Occupations of `modes` channels with total photon number <= cutoff,
/// ordered by total and then lexicographically.
class FockBasis {
 public:
  FockBasis(int modes, int cutoff);

  int modes() const noexcept { return modes_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return states_.size(); }
  const Occupation& state(std::size_t i) const { return states_[i]; }
  int total(std::size_t i) const;
  /// Index of `n`, or size() when it lies outside the basis.
  std::size_t index(const Occupation& n) const;

 private:
  int modes_;
  int cutoff_;
  std::vector<Occupation> states_;
  std::map<Occupation, std::size_t> lookup_;
};

/// Matrix of an observable on a FockBasis.
class TruncatedOperator {
 public:
  TruncatedOperator(std::shared_ptr<const FockBasis> basis, Eigen::MatrixXcd matrix);

  const FockBasis& basis() const noexcept { return *basis_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  bool is_hermitian(double tol = 1e-12) const;
  /// Largest singular value of the block acting on sectors with total <= max_total.
  double sector_norm(int max_total) const;

 private:
  std::shared_ptr<const FockBasis> basis_;
  Eigen::MatrixXcd m_;
};

/// Truncated a_j; a_j^dag is its adjoint (and drops the top sector).
TruncatedOperator annihilation(std::shared_ptr<const FockBasis> basis, int mode);
TruncatedOperator number_operator(std::shared_ptr<const FockBasis> basis);
/// G = sum_j phi_j a_j^dag a_j
TruncatedOperator generator_G(std::shared_ptr<const FockBasis> basis, const PhaseVector& phases);
/// J_y = -(i/2)(a_1^dag a_2 - a_1 a_2^dag), from the number-conserving product a_1^dag a_2.
TruncatedOperator jy_operator(std::shared_ptr<const FockBasis> basis);

/// Fock representation of the passive unitary U on the basis, built by
/// substituting a_k^dag -> sum_j U_jk a_j^dag (exact in every sector).
TruncatedOperator passive_unitary(std::shared_ptr<const FockBasis> basis, const Eigen::MatrixXcd& u);

/// Balanced symmetric beam splitter (1/sqrt 2)[[1, i], [i, 1]].
Eigen::Matrix2cd symmetric_beam_splitter();

/// Operator-norm residual, on sectors with total <= cutoff - 2, between the
/// composed interferometer B^dag exp(-iG) B (B the symmetric balanced beam
/// splitter) and the factorised form exp(i (phi1 - phi2) J_y) exp(-(i/2)(phi1 + phi2) N).
double mz_factorization_residual(double phi1, double phi2, int cutoff);

}  // namespace sqzmetro::fock
