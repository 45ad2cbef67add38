#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/fock.hpp"
#include "sqzmetro/gaussian.hpp"
#include "sqzmetro/metrology.hpp"
#include "support.hpp"

using namespace sqzmetro;
using namespace sqzmetro::fock;
namespace st = sqzmetro::testing;

namespace {

const double kR1 = std::asinh(1.0);

double sector_norm(const FockAmplitudes& a, int total) {
  double s = 0.0;
  for (const auto& [occ, amp] : a.table()) {
    int t = 0;
    for (int v : occ) t += v;
    if (t == total) s += std::norm(amp);
  }
  return s;
}

}  // namespace

TEST_CASE("squeezed vacuum amplitudes") {
  const auto vac = squeezed_vacuum_amplitudes(SqueezeParameter(0.0), 10);
  CHECK(vac[0] == cplx(1.0, 0.0));
  for (std::size_t n = 1; n < vac.size(); ++n) CHECK(vac[n] == cplx(0.0, 0.0));

  const auto c = squeezed_vacuum_amplitudes(SqueezeParameter(kR1), 80);
  CHECK(std::abs(c[0]) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-15));
  CHECK(std::abs(c[0]) == doctest::Approx(0.840896).epsilon(1e-6));
  CHECK(std::abs(c[1]) == doctest::Approx(0.420448).epsilon(1e-6));
  CHECK(std::abs(c[1]) == doctest::Approx(std::abs(c[0]) / 2).epsilon(1e-14));
  // c_2 / c_0 = -e^{i theta} tanh r / sqrt 2
  const auto ct = squeezed_vacuum_amplitudes(SqueezeParameter(kR1, 0.7), 4);
  CHECK(std::abs(ct[1] / ct[0] - (-std::polar(std::tanh(kR1), 0.7) / std::sqrt(2.0))) <= 1e-15);

  double norm = 0.0, n1 = 0.0, n2 = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    norm += std::norm(c[n]);
    n1 += 2.0 * n * std::norm(c[n]);
    n2 += 4.0 * n * n * std::norm(c[n]);
  }
  CHECK(std::abs(norm - 1.0) <= 1e-12);
  CHECK(std::abs(n1 - 1.0) <= 1e-10);
  CHECK(std::abs(n2 - 5.0) <= 1e-9);

  CHECK_THROWS_AS(squeezed_vacuum_amplitudes(SqueezeParameter(0.5), 7), ValidationError);
  CHECK_THROWS_AS(squeezed_vacuum_amplitudes(SqueezeParameter(0.5), -2), ValidationError);
}

TEST_CASE("tail bound is certified") {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 40; ++i) {
    const SqueezeParameter s(st::uniform(gen, 0.05, 1.5));
    const int cutoff = 2 * st::uniform_int(gen, 0, 60);
    for (int k : {0, 1, 2, 4}) {
      // True tail, summed far beyond the cutoff.
      const auto c = squeezed_vacuum_amplitudes(s, cutoff + 4000);
      double tail = 0.0;
      for (std::size_t n = cutoff / 2 + 1; n < c.size(); ++n) tail += std::pow(2.0 * n, k) * std::norm(c[n]);
      const double bound = tail_bound(s, cutoff, k);
      CHECK(bound >= tail * (1 - 1e-12));
    }
  }
  CHECK(tail_bound(SqueezeParameter(0.0), 0) == 0.0);
}

TEST_CASE("certified cutoff") {
  const SqueezeParameter s(kR1);
  const int cutoff = certified_cutoff(s);
  CHECK(cutoff % 2 == 0);
  CHECK(tail_bound(s, cutoff) < kTailTolerance);
  CHECK(tail_bound(s, cutoff - 2) >= kTailTolerance);
  CHECK(certified_cutoff(SqueezeParameter(0.0)) == 0);
  CHECK(certified_cutoff(s, 1e-10, 4) > cutoff);
}

TEST_CASE("propagation preserves sector norms") {
  const auto probe = prepare_probe(SqueezeParameter(kR1), 6);
  const auto id = propagate_through_network(probe, network::NetworkUnitary::identity(3));
  for (const auto& [occ, a] : id.table()) {
    CHECK(occ[1] == 0);
    CHECK(occ[2] == 0);
  }

  const auto bs = propagate_through_network(probe, network::embed_weights_unitary(WeightVector({0.5, 0.5})));
  const double c2 = std::norm(probe.amplitudes[1]);
  CHECK(std::norm(bs.amplitude({2, 0})) == doctest::Approx(0.25 * c2).epsilon(1e-14));
  CHECK(std::norm(bs.amplitude({1, 1})) == doctest::Approx(0.5 * c2).epsilon(1e-14));
  CHECK(std::norm(bs.amplitude({0, 2})) == doctest::Approx(0.25 * c2).epsilon(1e-14));
  CHECK(bs.amplitude({1, 0}) == cplx(0.0, 0.0));

  std::mt19937_64 gen(22);
  for (int i = 0; i < 5; ++i) {
    const auto w = st::dirichlet_weights(gen, 4);
    const auto p20 = prepare_probe(SqueezeParameter(st::uniform(gen, 0.2, 1.2), st::uniform(gen, 0, kTwoPi)), 20);
    const auto a = propagate_through_network(p20, network::embed_weights_unitary(w));
    for (int n = 0; n <= 10; ++n) {
      CHECK(std::abs(sector_norm(a, 2 * n) - std::norm(p20.amplitudes[n])) <= 1e-12);
      CHECK(sector_norm(a, 2 * n + 1) == 0.0);
    }
    CHECK(a.norm() <= 1.0 + 1e-12);
    CHECK(a.norm() >= 1.0 - tail_bound(p20.squeeze, 20) - 1e-12);
  }
  CHECK_THROWS_AS(propagate_through_network(prepare_probe(SqueezeParameter(1.0), 40),
                                            network::haar_random_unitary(6, 1), 1000),
                  ValidationError);
}

TEST_CASE("multinomial table agrees with the polynomial-substitution operator") {
  // Independent route: build U's Fock representation and apply it to |2n, 0, ...>.
  std::mt19937_64 gen(23);
  for (int i = 0; i < 5; ++i) {
    const int m = st::uniform_int(gen, 2, 3);
    const auto u = network::haar_random_unitary(m, gen());
    const auto probe = prepare_probe(SqueezeParameter(0.8, st::uniform(gen, 0, kTwoPi)), 8);
    const auto table = propagate_through_network(probe, u);
    const auto basis = std::make_shared<const FockBasis>(m, 8);
    const auto op = passive_unitary(basis, u.matrix());
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(basis->size());
    for (int n = 0; n <= 4; ++n) {
      Occupation occ(m, 0);
      occ[0] = 2 * n;
      in(basis->index(occ)) = probe.amplitudes[n];
    }
    const Eigen::VectorXcd out = op.matrix() * in;
    for (std::size_t k = 0; k < basis->size(); ++k) {
      CHECK(std::abs(out(k) - table.amplitude(basis->state(k))) <= 1e-13);
    }
  }
}

TEST_CASE("expectation_O_fock examples") {
  const auto id1 = network::NetworkUnitary::identity(1);
  const auto state = propagate_through_network(prepare_probe(SqueezeParameter(kR1), 80), id1);
  CHECK(std::abs(expectation_O_fock(state, PhaseVector({0.0})) - 1.0) <= 1e-12);
  const double v = expectation_O_fock(state, PhaseVector({0.1}));
  CHECK(std::abs(v - 0.962369) <= 1e-6);
  CHECK(std::abs(v - st::single_mode_overlap(kR1, 0.1)) <= 1e-7);

  const auto short_state = propagate_through_network(prepare_probe(SqueezeParameter(kR1), 40), id1);
  try {
    expectation_O_fock(short_state, PhaseVector({0.1}));
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.suggested_cutoff() == certified_cutoff(SqueezeParameter(kR1)));
    CHECK(tail_bound(SqueezeParameter(kR1), e.suggested_cutoff()) < kTailTolerance);
  }
  CHECK_NOTHROW(expectation_O_fock(short_state, PhaseVector({0.1}), 1e-6));

  const auto u = network::embed_weights_unitary(WeightVector({0.25, 0.75}));
  const double two = expectation_O_exact(SqueezeParameter(kR1), u, PhaseVector({0.2, 0.0}));
  CHECK(std::abs(two - (1.0 - 0.0175)) <= 3e-3);
  CHECK_THROWS_AS(expectation_O_exact(SqueezeParameter(kR1), u, PhaseVector({0.2})), InvalidDimension);
}

TEST_CASE("table and multinomial evaluators agree") {
  std::mt19937_64 gen(24);
  for (int i = 0; i < 20; ++i) {
    const int m = st::uniform_int(gen, 1, 4);
    const auto u = network::haar_random_unitary(m, gen());
    const SqueezeParameter s(st::uniform(gen, 0.05, 0.6), st::uniform(gen, 0, kTwoPi));
    const auto probe = prepare_certified_probe(s, 1e-12, 6);
    const auto table = propagate_through_network(probe, u);
    const auto multi = spread_over_channels(probe, u);
    const auto phases = st::uniform_phases(gen, m, 1.0);
    CHECK(std::abs(expectation_O_fock(table, phases) - expectation_O_fock(multi, phases)) <= 1e-13);
    const auto a = moments_G_fock(table, phases, 6);
    const auto b = moments_G_fock(multi, phases, 6);
    for (int k = 0; k <= 6; ++k) {
      CHECK(std::abs(a.gk[k] - b.gk[k]) <= 1e-12 * std::max(1.0, std::abs(a.gk[k])));
      CHECK(std::abs(a.Ol[k] - b.Ol[k]) <= 1e-11 * std::max(1.0, std::abs(a.Ol[k])));
    }
    const auto na = number_moments(table, 4);
    const auto nb = number_moments(multi, 4);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(na[k] - nb[k]) <= 1e-12 * std::max(1.0, na[k]));
  }
}

TEST_CASE("oracle agrees with the Gaussian engine") {
  std::mt19937_64 gen(25);
  for (int i = 0; i < 40; ++i) {
    const int m = st::uniform_int(gen, 1, 5);
    const auto u = network::haar_random_unitary(m, gen());
    const SqueezeParameter s(st::uniform(gen, 0.0, 1.2), st::uniform(gen, 0, kTwoPi));
    const auto phases = st::uniform_phases(gen, m, kPi);
    CHECK(std::abs(expectation_O_exact(s, u, phases) - gaussian::expectation_O(s, u, phases)) <= 1e-6);
  }
}

TEST_CASE("moments_G_fock examples") {
  const auto u = network::embed_weights_unitary(WeightVector({0.25, 0.75}));
  const auto state = spread_over_channels(prepare_certified_probe(SqueezeParameter(kR1), 1e-14, 4), u);
  const auto t = moments_G_fock(state, PhaseVector({0.2, 0.0}), 4);
  CHECK(t.Ol[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(t.gk[1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(t.Ol[2] == doctest::Approx(0.035).epsilon(1e-11));

  const auto zero = moments_G_fock(state, PhaseVector({0.0, 0.0}), 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(zero.gk[k] == 0.0);
    CHECK(zero.Ol[k] == 0.0);
  }
  CHECK_THROWS_AS(moments_G_fock(state, PhaseVector({0.0, 0.0}), kMaxSeriesOrder + 1), ValidationError);
  CHECK_THROWS_AS(moments_G_fock(state, PhaseVector({0.0, 0.0}), -1), ValidationError);
  CHECK_THROWS_AS(t.partial_sum(3), ValidationError);
}

TEST_CASE("moment identities and operator bound") {
  std::mt19937_64 gen(26);
  for (int i = 0; i < 50; ++i) {
    const int m = st::uniform_int(gen, 1, 5);
    const auto u = network::haar_random_unitary(m, gen());
    const SqueezeParameter s(st::uniform(gen, 0.0, 1.2), st::uniform(gen, 0, kTwoPi));
    const auto phases = st::uniform_phases(gen, m, 1.0);
    const auto state = spread_over_channels(prepare_certified_probe(s, 1e-14, 4), u);
    const auto t = moments_G_fock(state, phases, 4);
    const auto n = number_moments(state, 4);
    const auto pm = metrology::phase_moments(st::first_column_weights(u), phases);
    CHECK(std::abs(t.gk[1] - pm.phiBar * n[1]) <= 1e-9);
    CHECK(std::abs(t.gk[2] - (pm.phiBar * pm.phiBar * (n[2] - n[1]) + pm.phiSqBar * n[1])) <= 1e-9);
    CHECK(std::abs(n[2] - n[1] * n[1] - 2 * n[1] * (n[1] + 1)) <= 1e-9);
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(t.gk[k]) <= std::pow(phases.max_abs(), k) * n[k] * (1 + 1e-12));
  }
}

TEST_CASE("odd series terms vanish and the series converges") {
  std::mt19937_64 gen(27);
  for (int i = 0; i < 30; ++i) {
    const int m = st::uniform_int(gen, 1, 5);
    const auto u = network::haar_random_unitary(m, gen());
    const SqueezeParameter s(st::uniform(gen, 0.1, 1.2), st::uniform(gen, 0, kTwoPi));
    const double nbar = s.mean_photon_number();
    const auto phases = st::uniform_phases(gen, m, 1.0);
    // Well inside the radius of convergence, ln coth r.
    const double reach = std::min(0.1 / nbar, 0.1 * std::log(1.0 / std::tanh(s.r())));
    const auto small = phases.scaled(reach / phases.max_abs());
    const auto state = spread_over_channels(prepare_certified_probe(s, 1e-13, 8), u);
    const auto t = moments_G_fock(state, small, 8);
    CHECK(t.Ol[0] == doctest::Approx(1.0).epsilon(1e-13));
    for (int l = 1; l <= 7; l += 2) CHECK(std::abs(t.Ol[l]) <= 1e-10);
    const double exact = expectation_O_fock(state, small);
    double previous = 1.0;
    for (int terms = 0; terms <= 4; ++terms) {
      const double res = std::abs(t.partial_sum(terms) - exact);
      CHECK(res <= previous);
      previous = res;
    }
    CHECK(previous <= 1e-8);
  }
}

TEST_CASE("truncated operators") {
  const auto basis = std::make_shared<const FockBasis>(2, 6);
  CHECK(basis->size() == 28);
  CHECK(basis->index({0, 0}) == 0);
  CHECK(basis->total(basis->index({2, 3})) == 5);
  CHECK(basis->index({4, 3}) == basis->size());
  for (std::size_t i = 1; i < basis->size(); ++i) CHECK(basis->total(i - 1) <= basis->total(i));

  CHECK(number_operator(basis).is_hermitian());
  CHECK(generator_G(basis, PhaseVector({0.3, -0.7})).is_hermitian());
  CHECK(jy_operator(basis).is_hermitian());

  const auto a0 = annihilation(basis, 0).matrix();
  const auto a1 = annihilation(basis, 1).matrix();
  const Eigen::MatrixXcd n = a0.adjoint() * a0 + a1.adjoint() * a1;
  CHECK((n - number_operator(basis).matrix()).norm() <= 1e-13);
  // [a, a^dag] = 1 away from the top sector.
  const Eigen::MatrixXcd comm = a0 * a0.adjoint() - a0.adjoint() * a0;
  const auto d = static_cast<Eigen::Index>(basis->size());
  const TruncatedOperator c(basis, comm - Eigen::MatrixXcd::Identity(d, d));
  CHECK(c.sector_norm(5) <= 1e-13);
  CHECK_THROWS_AS(annihilation(basis, 2), IndexOutOfRange);
  CHECK_THROWS_AS(jy_operator(std::make_shared<const FockBasis>(1, 4)), InvalidDimension);

  const auto bs = passive_unitary(basis, symmetric_beam_splitter()).matrix();
  CHECK((bs.adjoint() * bs - Eigen::MatrixXcd::Identity(d, d)).norm() <= 1e-13);
}

TEST_CASE("Mach-Zehnder factorization residual") {
  CHECK(mz_factorization_residual(0.0, 0.0, 10) <= 1e-14);
  CHECK(mz_factorization_residual(0.3, 0.3, 10) <= 1e-10);
  CHECK(mz_factorization_residual(0.2, -0.1, 12) <= 1e-9);
  std::mt19937_64 gen(28);
  for (int i = 0; i < 10; ++i) {
    CHECK(mz_factorization_residual(st::uniform(gen, -kPi, kPi), st::uniform(gen, -kPi, kPi), 10) <= 1e-9);
  }
  CHECK_THROWS_AS(mz_factorization_residual(0.1, 0.2, 1), ValidationError);
}

TEST_CASE("relative phase rotates about J_y with the full phase difference") {
  // Halving the exponent leaves an O(1) residual, which pins the convention.
  const auto basis = std::make_shared<const FockBasis>(2, 8);
  const double p1 = 0.9, p2 = -0.4;
  const auto b = passive_unitary(basis, symmetric_beam_splitter()).matrix();
  const Eigen::VectorXcd g = generator_G(basis, PhaseVector({p1, p2})).matrix().diagonal();
  const Eigen::MatrixXcd lhs = b.adjoint() * (cplx(0, -1) * g).array().exp().matrix().asDiagonal() * b;
  const Eigen::VectorXcd n = number_operator(basis).matrix().diagonal();
  const Eigen::MatrixXcd global = (cplx(0, -0.5 * (p1 + p2)) * n).array().exp().matrix().asDiagonal();
  const Eigen::MatrixXcd half = (cplx(0, 0.5 * (p1 - p2)) * jy_operator(basis).matrix()).exp() * global;
  CHECK(TruncatedOperator(basis, lhs - half).sector_norm(6) > 0.1);
  CHECK(mz_factorization_residual(p1, p2, 8) <= 1e-12);
}
