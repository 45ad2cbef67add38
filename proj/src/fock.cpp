#include "sqzmetro/fock.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/format.hpp"

namespace sqzmetro::fock {

namespace {

constexpr int kCutoffSearchLimit = 200'000;

// log |c_{2n}|^2
double log_sector_weight(const SqueezeParameter& s, int n) {
  const double r = s.r();
  if (r == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -std::log(std::cosh(r)) + 2.0 * n * std::log(std::tanh(r)) + std::lgamma(2.0 * n + 1.0) -
         2.0 * n * std::log(2.0) - 2.0 * std::lgamma(n + 1.0);
}

void require_even_cutoff(int cutoff) {
  if (cutoff < 0 || cutoff % 2 != 0) {
    throw ValidationError("photon-number cutoff must be a non-negative even integer, got " +
                          std::to_string(cutoff));
  }
}

void require_phase_length(int modes, const PhaseVector& phases) {
  if (static_cast<int>(phases.size()) != modes) {
    throw InvalidDimension("phase vector has " + std::to_string(phases.size()) + " entries for " +
                           std::to_string(modes) + " modes");
  }
}

void require_order(int max_order) {
  if (max_order < 0 || max_order > kMaxSeriesOrder) {
    throw ValidationError("series order must lie in [0, " + std::to_string(kMaxSeriesOrder) +
                          "], got " + std::to_string(max_order));
  }
}

void require_tail(const SqueezeParameter& s, double tail, double tolerance) {
  if (!(tail <= tolerance)) {
    const int suggested = certified_cutoff(s, tolerance);
    throw TruncationError("truncation tail " + format_double(tail) + " exceeds " + format_double(tolerance) +
                              "; use cutoff >= " + std::to_string(suggested),
                          suggested);
  }
}

std::vector<double> log_factorials(int n_max) {
  std::vector<double> lf(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) lf[n] = lf[n - 1] + std::log(static_cast<double>(n));
  return lf;
}

std::vector<std::vector<double>> binomials(int n_max) {
  std::vector<std::vector<double>> c(n_max + 1, std::vector<double>(n_max + 1, 0.0));
  for (int n = 0; n <= n_max; ++n) {
    c[n][0] = c[n][n] = 1.0;
    for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
  }
  return c;
}

SeriesTerms series_from_moments(std::vector<double> g) {
  const int k_max = static_cast<int>(g.size()) - 1;
  const auto c = binomials(k_max);
  SeriesTerms out;
  out.Ol.assign(g.size(), 0.0);
  // Mirrored terms k and l - k are bitwise negatives; Neumaier-compensated sum.
  for (int l = 0; l <= k_max; ++l) {
    double sum = 0.0;
    double comp = 0.0;
    for (int k = 0; k <= l; ++k) {
      const double t = ((k % 2) ? -1.0 : 1.0) * c[l][k] * (g[l - k] * g[k]);
      const double next = sum + t;
      comp += std::abs(sum) >= std::abs(t) ? (sum - next) + t : (t - next) + sum;
      sum = next;
    }
    out.Ol[l] = sum + comp;
  }
  out.gk = std::move(g);
  return out;
}

// Multinomial weight C(R, n) q^n; q = 0 handled by the caller.
class BinomialWeights {
 public:
  BinomialWeights(int n_max, double q, const std::vector<double>& lf) : n_max_(n_max) {
    w_.assign(static_cast<std::size_t>(n_max + 1) * (n_max + 1), 0.0);
    const double lq = std::log(q);
    for (int r = 0; r <= n_max; ++r) {
      for (int n = 0; n <= r; ++n) w_[idx(r, n)] = std::exp(lf[r] - lf[n] - lf[r - n] + n * lq);
    }
  }
  double operator()(int r, int n) const { return w_[idx(r, n)]; }

 private:
  std::size_t idx(int r, int n) const { return static_cast<std::size_t>(r) * (n_max_ + 1) + n; }
  int n_max_;
  std::vector<double> w_;
};

// For every total R <= n_max: sum over occupations with that total of
// multinomial(R; n) prod q_j^{n_j} (n . phi)^m, m = 0..K. The sum is taken
// mode by mode from the last channel to the first.
std::vector<std::vector<double>> multinomial_moments(std::span<const double> q, std::span<const double> phi,
                                                     int max_order, int n_max) {
  const auto lf = log_factorials(n_max);
  const auto cm = binomials(max_order);
  const int width = max_order + 1;
  std::vector<std::vector<double>> acc(n_max + 1, std::vector<double>(width, 0.0));
  acc[0][0] = 1.0;
  std::vector<double> pw(static_cast<std::size_t>(n_max + 1) * width);
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    if (q[k] == 0.0) continue;
    const BinomialWeights w(n_max, q[k], lf);
    for (int n = 0; n <= n_max; ++n) {
      double x = 1.0;
      for (int a = 0; a < width; ++a, x *= n * phi[k]) pw[static_cast<std::size_t>(n) * width + a] = x;
    }
    std::vector<std::vector<double>> next(n_max + 1, std::vector<double>(width, 0.0));
    for (int r = 0; r <= n_max; ++r) {
      auto& out = next[r];
      for (int n = 0; n <= r; ++n) {
        const double weight = w(r, n);
        if (weight == 0.0) continue;
        const auto& prev = acc[r - n];
        const double* p = &pw[static_cast<std::size_t>(n) * width];
        for (int m = 0; m < width; ++m) {
          double inner = 0.0;
          for (int a = 0; a <= m; ++a) inner += cm[m][a] * p[a] * prev[m - a];
          out[m] += weight * inner;
        }
      }
    }
    acc = std::move(next);
  }
  return acc;
}

// Same recursion for sum multinomial(R; n) prod q_j^{n_j} exp(-i n . phi).
std::vector<cplx> multinomial_phase_sums(std::span<const double> q, std::span<const double> phi, int n_max) {
  const auto lf = log_factorials(n_max);
  std::vector<cplx> acc(n_max + 1, cplx(0.0, 0.0));
  acc[0] = 1.0;
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    if (q[k] == 0.0) continue;
    const BinomialWeights w(n_max, q[k], lf);
    std::vector<cplx> ph(n_max + 1);
    for (int n = 0; n <= n_max; ++n) ph[n] = std::polar(1.0, -n * phi[k]);
    std::vector<cplx> next(n_max + 1, cplx(0.0, 0.0));
    for (int r = 0; r <= n_max; ++r) {
      cplx s(0.0, 0.0);
      for (int n = 0; n <= r; ++n) s += w(r, n) * ph[n] * acc[r - n];
      next[r] = s;
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

std::vector<cplx> squeezed_vacuum_amplitudes(const SqueezeParameter& s, int cutoff) {
  require_even_cutoff(cutoff);
  std::vector<cplx> c(static_cast<std::size_t>(cutoff / 2) + 1, cplx(0.0, 0.0));
  for (int n = 0; n <= cutoff / 2; ++n) {
    const double lw = log_sector_weight(s, n);
    if (!std::isfinite(lw)) continue;
    c[n] = std::polar(std::exp(0.5 * lw), n * (s.theta() + kPi));
  }
  return c;
}

double tail_bound(const SqueezeParameter& s, int cutoff, int moment_order) {
  if (cutoff < 0) throw ValidationError("cutoff must be non-negative");
  if (moment_order < 0) throw ValidationError("moment order must be non-negative");
  if (s.r() == 0.0) return 0.0;
  const int n0 = cutoff / 2 + 1;  // first omitted sector
  const double t = std::tanh(s.r());
  const double rho = t * t * std::pow(1.0 + 1.0 / n0, moment_order);
  if (!(rho < 1.0)) return std::numeric_limits<double>::infinity();
  const double first = std::exp(log_sector_weight(s, n0)) * std::pow(2.0 * n0, moment_order);
  return first / (1.0 - rho);
}

int certified_cutoff(const SqueezeParameter& s, double tolerance, int moment_order) {
  if (!(tolerance > 0.0)) throw ValidationError("tail tolerance must be positive");
  for (int cutoff = 0; cutoff <= kCutoffSearchLimit; cutoff += 2) {
    if (tail_bound(s, cutoff, moment_order) < tolerance) return cutoff;
  }
  throw TruncationError("no cutoff below " + std::to_string(kCutoffSearchLimit) + " certifies tolerance " +
                            format_double(tolerance),
                        kCutoffSearchLimit);
}

SqueezedVacuum prepare_probe(const SqueezeParameter& s, int cutoff) {
  SqueezedVacuum p;
  p.squeeze = s;
  p.cutoff = cutoff;
  p.amplitudes = squeezed_vacuum_amplitudes(s, cutoff);
  p.tail = tail_bound(s, cutoff);
  return p;
}

SqueezedVacuum prepare_certified_probe(const SqueezeParameter& s, double tolerance, int moment_order) {
  return prepare_probe(s, certified_cutoff(s, tolerance, moment_order));
}

FockAmplitudes::FockAmplitudes(int modes, SqueezedVacuum probe, std::map<Occupation, cplx> table)
    : modes_(modes), probe_(std::move(probe)), table_(std::move(table)) {}

cplx FockAmplitudes::amplitude(const Occupation& n) const {
  const auto it = table_.find(n);
  return it == table_.end() ? cplx(0.0, 0.0) : it->second;
}

double FockAmplitudes::norm() const {
  double acc = 0.0;
  for (const auto& [occ, a] : table_) acc += std::norm(a);
  return acc;
}

namespace {

std::vector<double> channel_weights_of(const network::NetworkUnitary& u) {
  std::vector<double> q(u.dim());
  double total = 0.0;
  for (int j = 0; j < u.dim(); ++j) total += q[j] = std::norm(u(j, 0));
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidDimension("first network column is not normalised (sum |U_j1|^2 = " + format_double(total) + ")");
  }
  return q;
}

}  // namespace

FockAmplitudes propagate_through_network(const SqueezedVacuum& probe, const network::NetworkUnitary& u,
                                         std::size_t max_entries) {
  const int m = u.dim();
  channel_weights_of(u);
  std::vector<int> active;
  for (int j = 0; j < m; ++j) {
    if (u(j, 0) != cplx(0.0, 0.0)) active.push_back(j);
  }
  const int n_active = static_cast<int>(active.size());
  const int half = probe.cutoff / 2;

  double count = 0.0;
  for (int n = 0; n <= half; ++n) {
    count += std::exp(std::lgamma(2.0 * n + n_active) - std::lgamma(2.0 * n + 1.0) - std::lgamma(n_active));
  }
  if (count > static_cast<double>(max_entries)) {
    throw ValidationError("occupation table would hold ~" + format_double(std::round(count)) +
                          " entries (limit " + std::to_string(max_entries) + "); use spread_over_channels");
  }

  std::vector<double> log_mag(m), arg(m);
  for (int j : active) {
    log_mag[j] = std::log(std::abs(u(j, 0)));
    arg[j] = std::arg(u(j, 0));
  }

  std::map<Occupation, cplx> table;
  Occupation occ(m, 0);
  for (int n = 0; n <= half; ++n) {
    const cplx c = probe.amplitudes[n];
    if (c == cplx(0.0, 0.0)) continue;
    const int total = 2 * n;
    const double base = std::log(std::abs(c)) + 0.5 * std::lgamma(total + 1.0);
    // Distribute `total` photons over the active channels.
    auto fill = [&](auto&& self, int pos, int remaining, double lm, double ph) -> void {
      const int j = active[pos];
      if (pos == n_active - 1) {
        occ[j] = remaining;
        const double l = lm - 0.5 * std::lgamma(remaining + 1.0) + remaining * log_mag[j];
        table.emplace(occ, std::polar(std::exp(l), ph + remaining * arg[j]));
        occ[j] = 0;
        return;
      }
      for (int k = 0; k <= remaining; ++k) {
        occ[j] = k;
        self(self, pos + 1, remaining - k, lm - 0.5 * std::lgamma(k + 1.0) + k * log_mag[j], ph + k * arg[j]);
      }
      occ[j] = 0;
    };
    fill(fill, 0, total, base, std::arg(c));
  }
  return FockAmplitudes(m, probe, std::move(table));
}

MultinomialState::MultinomialState(SqueezedVacuum probe, std::vector<double> channel_weights)
    : probe_(std::move(probe)), q_(std::move(channel_weights)) {
  if (q_.empty()) throw InvalidDimension("a state needs at least one channel");
  sector_.reserve(probe_.amplitudes.size());
  for (const auto& c : probe_.amplitudes) sector_.push_back(std::norm(c));
}

MultinomialState spread_over_channels(const SqueezedVacuum& probe, const network::NetworkUnitary& u) {
  return MultinomialState(probe, channel_weights_of(u));
}

double SeriesTerms::partial_sum(int terms) const {
  if (terms < 0 || 2 * terms >= static_cast<int>(Ol.size())) {
    throw ValidationError("series holds " + std::to_string(Ol.size()) + " terms, cannot sum through O_" +
                          std::to_string(2 * terms));
  }
  double acc = 0.0;
  double fact = 1.0;  // (2l)!
  for (int l = 0; l <= terms; ++l) {
    if (l > 0) fact *= (2.0 * l - 1.0) * (2.0 * l);
    acc += ((l % 2) ? -1.0 : 1.0) * Ol[2 * l] / fact;
  }
  return acc;
}

double expectation_O_fock(const FockAmplitudes& state, const PhaseVector& phases, double tail_tolerance) {
  require_phase_length(state.modes(), phases);
  require_tail(state.squeeze(), state.tail_bound(), tail_tolerance);
  cplx acc(0.0, 0.0);
  for (const auto& [occ, a] : state.table()) {
    double x = 0.0;
    for (int j = 0; j < state.modes(); ++j) x += occ[j] * phases[j];
    acc += std::norm(a) * std::polar(1.0, -x);
  }
  return std::norm(acc);
}

double expectation_O_fock(const MultinomialState& state, const PhaseVector& phases, double tail_tolerance) {
  require_phase_length(state.modes(), phases);
  require_tail(state.squeeze(), state.tail_bound(), tail_tolerance);
  const auto sums = multinomial_phase_sums(state.channel_weights(), phases.values(), state.cutoff());
  cplx acc(0.0, 0.0);
  const auto p = state.sector_weights();
  for (std::size_t n = 0; n < p.size(); ++n) acc += p[n] * sums[2 * n];
  return std::norm(acc);
}

SeriesTerms moments_G_fock(const FockAmplitudes& state, const PhaseVector& phases, int max_order) {
  require_order(max_order);
  require_phase_length(state.modes(), phases);
  std::vector<double> g(max_order + 1, 0.0);
  for (const auto& [occ, a] : state.table()) {
    double x = 0.0;
    for (int j = 0; j < state.modes(); ++j) x += occ[j] * phases[j];
    const double p = std::norm(a);
    double xk = 1.0;
    for (int k = 0; k <= max_order; ++k, xk *= x) g[k] += p * xk;
  }
  return series_from_moments(std::move(g));
}

SeriesTerms moments_G_fock(const MultinomialState& state, const PhaseVector& phases, int max_order) {
  require_order(max_order);
  require_phase_length(state.modes(), phases);
  const auto b = multinomial_moments(state.channel_weights(), phases.values(), max_order, state.cutoff());
  std::vector<double> g(max_order + 1, 0.0);
  const auto p = state.sector_weights();
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (int k = 0; k <= max_order; ++k) g[k] += p[n] * b[2 * n][k];
  }
  return series_from_moments(std::move(g));
}

std::vector<double> number_moments(const FockAmplitudes& state, int max_order) {
  if (max_order < 0) throw ValidationError("moment order must be non-negative");
  std::vector<double> out(max_order + 1, 0.0);
  for (const auto& [occ, a] : state.table()) {
    const double total = std::accumulate(occ.begin(), occ.end(), 0.0);
    double nk = 1.0;
    for (int k = 0; k <= max_order; ++k, nk *= total) out[k] += std::norm(a) * nk;
  }
  return out;
}

std::vector<double> number_moments(const MultinomialState& state, int max_order) {
  if (max_order < 0) throw ValidationError("moment order must be non-negative");
  // Only the total matters, so the channel split is irrelevant.
  std::vector<double> out(max_order + 1, 0.0);
  const auto p = state.sector_weights();
  for (std::size_t n = 0; n < p.size(); ++n) {
    double nk = 1.0;
    for (int k = 0; k <= max_order; ++k, nk *= 2.0 * n) out[k] += p[n] * nk;
  }
  return out;
}

double expectation_O_exact(const SqueezeParameter& s, const network::NetworkUnitary& u, const PhaseVector& phases,
                           double tail_tolerance) {
  const auto state = spread_over_channels(prepare_certified_probe(s, tail_tolerance), u);
  return expectation_O_fock(state, phases, tail_tolerance);
}

// ---------------------------------------------------------------------------

FockBasis::FockBasis(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1) throw InvalidDimension("basis needs at least one mode");
  if (cutoff < 0) throw ValidationError("cutoff must be non-negative");
  Occupation occ(modes, 0);
  for (int total = 0; total <= cutoff; ++total) {
    auto fill = [&](auto&& self, int pos, int remaining) -> void {
      if (pos == modes - 1) {
        occ[pos] = remaining;
        lookup_.emplace(occ, states_.size());
        states_.push_back(occ);
        return;
      }
      for (int k = 0; k <= remaining; ++k) {
        occ[pos] = k;
        self(self, pos + 1, remaining - k);
      }
    };
    fill(fill, 0, total);
  }
}

int FockBasis::total(std::size_t i) const {
  return std::accumulate(states_[i].begin(), states_[i].end(), 0);
}

std::size_t FockBasis::index(const Occupation& n) const {
  const auto it = lookup_.find(n);
  return it == lookup_.end() ? states_.size() : it->second;
}

TruncatedOperator::TruncatedOperator(std::shared_ptr<const FockBasis> basis, Eigen::MatrixXcd matrix)
    : basis_(std::move(basis)), m_(std::move(matrix)) {
  if (static_cast<std::size_t>(m_.rows()) != basis_->size() || m_.rows() != m_.cols()) {
    throw InvalidDimension("operator matrix does not match its basis");
  }
}

bool TruncatedOperator::is_hermitian(double tol) const { return (m_ - m_.adjoint()).norm() <= tol; }

double TruncatedOperator::sector_norm(int max_total) const {
  Eigen::Index k = 0;
  while (static_cast<std::size_t>(k) < basis_->size() && basis_->total(k) <= max_total) ++k;
  if (k == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m_.topLeftCorner(k, k));
  return svd.singularValues()(0);
}

TruncatedOperator annihilation(std::shared_ptr<const FockBasis> basis, int mode) {
  if (mode < 0 || mode >= basis->modes()) throw IndexOutOfRange("mode outside the basis");
  const auto n = static_cast<Eigen::Index>(basis->size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    Occupation occ = basis->state(i);
    if (occ[mode] == 0) continue;
    const double amp = std::sqrt(static_cast<double>(occ[mode]));
    --occ[mode];
    a(static_cast<Eigen::Index>(basis->index(occ)), static_cast<Eigen::Index>(i)) = amp;
  }
  return TruncatedOperator(std::move(basis), std::move(a));
}

TruncatedOperator number_operator(std::shared_ptr<const FockBasis> basis) {
  Eigen::VectorXcd d(basis->size());
  for (std::size_t i = 0; i < basis->size(); ++i) d(i) = static_cast<double>(basis->total(i));
  return TruncatedOperator(std::move(basis), d.asDiagonal());
}

TruncatedOperator generator_G(std::shared_ptr<const FockBasis> basis, const PhaseVector& phases) {
  require_phase_length(basis->modes(), phases);
  Eigen::VectorXcd d(basis->size());
  for (std::size_t i = 0; i < basis->size(); ++i) {
    double x = 0.0;
    for (int j = 0; j < basis->modes(); ++j) x += basis->state(i)[j] * phases[j];
    d(i) = x;
  }
  return TruncatedOperator(std::move(basis), d.asDiagonal());
}

TruncatedOperator jy_operator(std::shared_ptr<const FockBasis> basis) {
  if (basis->modes() < 2) throw InvalidDimension("J_y needs two modes");
  const Eigen::MatrixXcd hop = annihilation(basis, 0).matrix().adjoint() * annihilation(basis, 1).matrix();
  return TruncatedOperator(std::move(basis), cplx(0.0, -0.5) * (hop - hop.adjoint()));
}

TruncatedOperator passive_unitary(std::shared_ptr<const FockBasis> basis, const Eigen::MatrixXcd& u) {
  const int m = basis->modes();
  if (u.rows() != m || u.cols() != m) throw InvalidDimension("unitary does not match the basis");
  const auto dim = static_cast<Eigen::Index>(basis->size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t col = 0; col < basis->size(); ++col) {
    const Occupation& in = basis->state(col);
    // Polynomial in the creation operators: exponent vector -> coefficient.
    std::map<Occupation, cplx> poly{{Occupation(m, 0), cplx(1.0, 0.0)}};
    double norm = 1.0;
    for (int k = 0; k < m; ++k) {
      for (int rep = 0; rep < in[k]; ++rep) {
        std::map<Occupation, cplx> next;
        for (const auto& [mono, coef] : poly) {
          for (int j = 0; j < m; ++j) {
            if (u(j, k) == cplx(0.0, 0.0)) continue;
            Occupation e = mono;
            ++e[j];
            next[e] += coef * u(j, k);
          }
        }
        poly = std::move(next);
      }
      norm *= std::exp(std::lgamma(in[k] + 1.0));
    }
    for (const auto& [mono, coef] : poly) {
      double fact = 1.0;
      for (int v : mono) fact *= std::exp(std::lgamma(v + 1.0));
      out(static_cast<Eigen::Index>(basis->index(mono)), static_cast<Eigen::Index>(col)) =
          coef * std::sqrt(fact / norm);
    }
  }
  return TruncatedOperator(std::move(basis), std::move(out));
}

Eigen::Matrix2cd symmetric_beam_splitter() {
  const double s = std::sqrt(0.5);
  Eigen::Matrix2cd b;
  b << s, cplx(0.0, s), cplx(0.0, s), s;
  return b;
}

double mz_factorization_residual(double phi1, double phi2, int cutoff) {
  if (cutoff < 2) throw ValidationError("factorisation check needs cutoff >= 2");
  const auto basis = std::make_shared<const FockBasis>(2, cutoff);
  const PhaseVector phases({phi1, phi2});

  const Eigen::MatrixXcd b = passive_unitary(basis, symmetric_beam_splitter()).matrix();
  const Eigen::VectorXcd g = generator_G(basis, phases).matrix().diagonal();
  const Eigen::VectorXcd phase_layer = (cplx(0.0, -1.0) * g).array().exp();
  const Eigen::MatrixXcd composed = b.adjoint() * phase_layer.asDiagonal() * b;

  const Eigen::MatrixXcd jy = jy_operator(basis).matrix();
  const Eigen::VectorXcd n = number_operator(basis).matrix().diagonal();
  const Eigen::MatrixXcd rel = (cplx(0.0, phi1 - phi2) * jy).exp();
  const Eigen::VectorXcd global = (cplx(0.0, -0.5 * (phi1 + phi2)) * n).array().exp();
  const Eigen::MatrixXcd factorised = rel * global.asDiagonal();

  return TruncatedOperator(basis, composed - factorised).sector_norm(cutoff - 2);
}

}  // namespace sqzmetro::fock
