#include <doctest.h>

#include <cmath>
#include <random>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/gaussian.hpp"
#include "support.hpp"

using namespace sqzmetro;
using namespace sqzmetro::gaussian;
namespace st = sqzmetro::testing;

namespace {

const double kR1 = std::asinh(1.0);

double cov_distance(const GaussianState& a, const GaussianState& b) {
  return (a.covariance() - b.covariance()).norm();
}

}  // namespace

TEST_CASE("vacuum_state") {
  CHECK(vacuum_state(1).covariance() == 0.5 * Eigen::MatrixXd::Identity(2, 2));
  CHECK(vacuum_state(3).covariance() == 0.5 * Eigen::MatrixXd::Identity(6, 6));
  CHECK_THROWS_AS(vacuum_state(0), InvalidDimension);
  CHECK(vacuum_overlap_probability(vacuum_state(2), SqueezeParameter(0.0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("from_covariance validates") {
  CHECK_THROWS_AS(GaussianState::from_covariance(Eigen::MatrixXd::Identity(3, 3)), InvalidDimension);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.2;
  CHECK_THROWS_AS(GaussianState::from_covariance(asym), ValidationError);
  CHECK_THROWS_AS(GaussianState::from_covariance(-Eigen::MatrixXd::Identity(2, 2)), ValidationError);
}

TEST_CASE("apply_squeeze") {
  const auto s = apply_squeeze(vacuum_state(1), 0, SqueezeParameter(kR1));
  CHECK(s.covariance()(0, 0) == doctest::Approx(std::exp(2 * kR1) / 2).epsilon(1e-14));
  CHECK(s.covariance()(1, 1) == doctest::Approx(std::exp(-2 * kR1) / 2).epsilon(1e-14));
  CHECK(s.covariance()(0, 0) == doctest::Approx(2.914214).epsilon(1e-6));
  CHECK(s.covariance()(1, 1) == doctest::Approx(0.085786).epsilon(1e-5));
  CHECK(std::abs(s.covariance()(0, 1)) <= 1e-15);
  CHECK(s.purity_residual() <= 1e-12);
  CHECK(mean_photon_number(s) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(cov_distance(apply_squeeze(vacuum_state(2), 1, SqueezeParameter(0.0, 1.0)), vacuum_state(2)) == 0.0);
  CHECK_THROWS_AS(apply_squeeze(vacuum_state(2), 2, SqueezeParameter(0.1)), IndexOutOfRange);

  std::mt19937_64 gen(5);
  for (int i = 0; i < 50; ++i) {
    const double r = st::uniform(gen, 0.0, 2.0);
    const double th = st::uniform(gen, 0.0, kTwoPi);
    const auto back = apply_squeeze(apply_squeeze(vacuum_state(1), 0, SqueezeParameter(r, th)), 0,
                                    SqueezeParameter(r, th + kPi));
    CHECK(cov_distance(back, vacuum_state(1)) <= 1e-12);
    const auto undone = apply_antisqueeze(apply_squeeze(vacuum_state(1), 0, SqueezeParameter(r, th)), 0,
                                          SqueezeParameter(r, th));
    CHECK(cov_distance(undone, vacuum_state(1)) <= 1e-12);
  }
}

TEST_CASE("apply_network") {
  const auto sq = input_state(2, SqueezeParameter(kR1));
  CHECK(cov_distance(apply_network(sq, network::NetworkUnitary::identity(2)), sq) == 0.0);
  const auto bs = network::mach_zehnder_unitary(0.5);
  CHECK(mean_photon_number(apply_network(sq, bs)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cov_distance(apply_network(vacuum_state(3), network::haar_random_unitary(3, 1)), vacuum_state(3)) <= 1e-14);
  CHECK_THROWS_AS(apply_network(sq, network::NetworkUnitary::identity(3)), InvalidDimension);

  std::mt19937_64 gen(6);
  for (int i = 0; i < 100; ++i) {
    const int m = st::uniform_int(gen, 1, 6);
    const auto s = input_state(m, SqueezeParameter(st::uniform(gen, 0.0, 2.0), st::uniform(gen, 0.0, kTwoPi)));
    const auto out = apply_network(s, network::haar_random_unitary(m, gen()));
    CHECK(std::abs(mean_photon_number(out) - mean_photon_number(s)) <= 1e-12 * std::max(1.0, mean_photon_number(s)));
    CHECK(out.purity_residual() <= kPurityTolerance);
  }
}

TEST_CASE("apply_phases") {
  const auto sq = input_state(1, SqueezeParameter(0.7, 0.4));
  CHECK(cov_distance(apply_phases(sq, PhaseVector({0.0})), sq) == 0.0);
  CHECK(cov_distance(apply_phases(sq, PhaseVector({kTwoPi})), sq) <= 1e-12);
  const auto rotated = apply_phases(sq, PhaseVector({kPi / 2}));
  CHECK(cov_distance(rotated, input_state(1, SqueezeParameter(0.7, 0.4 + kPi))) <= 1e-12);
  CHECK_THROWS_AS(apply_phases(sq, PhaseVector({0.1, 0.2})), InvalidDimension);
}

TEST_CASE("photon moments") {
  const auto v = photon_moments(vacuum_state(2));
  CHECK(std::abs(v.meanN) <= 1e-15);
  CHECK(std::abs(v.varN) <= 1e-15);
  const auto pm = photon_moments(input_state(1, SqueezeParameter(kR1)));
  CHECK(pm.meanN == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pm.varN == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(pm.meanN2 == doctest::Approx(5.0).epsilon(1e-13));

  std::mt19937_64 gen(8);
  for (int i = 0; i < 50; ++i) {
    const int m = st::uniform_int(gen, 1, 5);
    const auto s = apply_network(input_state(m, SqueezeParameter(st::uniform(gen, 0.0, 2.0))),
                                 network::haar_random_unitary(m, gen()));
    const auto q = photon_moments(s);
    CHECK(q.varN >= 0.0);
    CHECK(std::abs(q.varN - 2 * q.meanN * (q.meanN + 1)) <= 1e-9 * std::max(1.0, q.varN));
  }
}

TEST_CASE("vacuum overlap examples") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = network::haar_random_unitary(3, seed);
    CHECK(expectation_O(SqueezeParameter(1.1, 0.3), u, PhaseVector::uniform(3, 0.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  const double v = expectation_O(SqueezeParameter(kR1), network::NetworkUnitary::identity(1), PhaseVector({0.1}));
  CHECK(v == doctest::Approx(0.962369).epsilon(5e-7));
  CHECK(std::abs(v - st::single_mode_overlap(kR1, 0.1)) <= 1e-13);

  const auto bs = network::embed_weights_unitary(WeightVector({0.5, 0.5}));
  CHECK(std::abs(expectation_O(SqueezeParameter(kR1), bs, PhaseVector({0.1, 0.1})) - v) <= 1e-13);
}

TEST_CASE("single-mode overlap matches the closed form") {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 200; ++i) {
    const double r = st::uniform(gen, 0.0, 2.5);
    const double th = st::uniform(gen, 0.0, kTwoPi);
    const double phi = st::uniform(gen, -kPi, kPi);
    const double got = expectation_O(SqueezeParameter(r, th), network::NetworkUnitary::identity(1), PhaseVector({phi}));
    CHECK(std::abs(got - st::single_mode_overlap(r, phi)) <= 1e-12);
  }
}

TEST_CASE("overlap is even and decreasing for M = 1") {
  const SqueezeParameter s(0.6);
  const auto id = network::NetworkUnitary::identity(1);
  double previous = 1.0 + 1e-15;
  for (int k = 1; k < 100; ++k) {
    const double phi = k * (kPi / 2) / 100;
    const double plus = expectation_O(s, id, PhaseVector({phi}));
    CHECK(std::abs(plus - expectation_O(s, id, PhaseVector({-phi}))) <= 1e-14);
    CHECK(plus < previous);
    previous = plus;
  }
}

TEST_CASE("only the first column of U matters") {
  std::mt19937_64 gen(10);
  for (int i = 0; i < 50; ++i) {
    const int m = st::uniform_int(gen, 2, 6);
    const auto u = network::haar_random_unitary(m, gen());
    Eigen::VectorXcd d(m);
    d(0) = 1.0;
    for (int j = 1; j < m; ++j) d(j) = std::polar(1.0, st::uniform(gen, -kPi, kPi));
    const auto ud = network::NetworkUnitary::from_matrix(u.matrix() * d.asDiagonal());
    const SqueezeParameter s(st::uniform(gen, 0.0, 1.5), st::uniform(gen, 0.0, kTwoPi));
    const auto phases = st::uniform_phases(gen, m, 1.0);
    CHECK(std::abs(expectation_O(s, u, phases) - expectation_O(s, ud, phases)) <= 1e-12);
  }
}

TEST_CASE("purity is preserved along the protocol") {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 50; ++i) {
    const int m = st::uniform_int(gen, 1, 8);
    const SqueezeParameter s(st::uniform(gen, 0.0, 2.0), st::uniform(gen, 0.0, kTwoPi));
    const auto out = output_state(s, network::haar_random_unitary(m, gen()), st::uniform_phases(gen, m, kPi));
    CHECK(out.purity_residual() <= kPurityTolerance);
    const double p = vacuum_overlap_probability(out, s);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-12);
  }
}

TEST_CASE("mixed states are refused") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(vacuum_overlap_probability(GaussianState::from_covariance(v), SqueezeParameter(0.1)), InvalidState);
}

TEST_CASE("fidelity between vacua is one") {
  CHECK(pure_state_fidelity(vacuum_state(4), vacuum_state(4)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(pure_state_fidelity(vacuum_state(1), vacuum_state(2)), InvalidDimension);
}
