#include "sqzmetro/network.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/format.hpp"

namespace sqzmetro::network {

double unitarity_residual(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const auto n = u.rows();
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).norm();
}

NetworkUnitary NetworkUnitary::from_matrix(Eigen::MatrixXcd u, double tolerance) {
  if (u.rows() == 0 || u.rows() != u.cols()) {
    throw InvalidDimension("network unitary must be a non-empty square matrix");
  }
  if (!u.allFinite()) throw ValidationError("network unitary has non-finite entries");
  const double res = network::unitarity_residual(u);
  if (!(res <= tolerance)) {
    throw ValidationError("matrix is not unitary: residual " + format_double(res) +
                          " exceeds " + format_double(tolerance));
  }
  return NetworkUnitary(std::move(u));
}

NetworkUnitary NetworkUnitary::identity(int dim) {
  if (dim < 1) throw InvalidDimension("network dimension must be at least 1");
  return NetworkUnitary(Eigen::MatrixXcd::Identity(dim, dim));
}

NetworkUnitary NetworkUnitary::adjoint() const { return NetworkUnitary(u_.adjoint()); }

NetworkUnitary embed_weights_unitary(const WeightVector& w) {
  const int m = static_cast<int>(w.size());
  Eigen::VectorXd s(m);
  for (int j = 0; j < m; ++j) s(j) = std::sqrt(w[j]);

  // Householder vector v = e_1 - sqrt(w). Its first entry 1 - sqrt(w_1) is
  // formed as (1 - w_1) / (1 + sqrt(w_1)) with 1 - w_1 summed from the other
  // weights, and |v|^2 = 2 v_1 exactly because |sqrt(w)| = 1.
  double rest = 0.0;
  for (int j = 1; j < m; ++j) rest += w[j];
  if (rest == 0.0) return NetworkUnitary::identity(m);

  Eigen::VectorXd v = -s;
  v(0) = rest / (1.0 + s(0));
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(m, m) - (v * v.transpose()) / v(0);
  // The first column is sqrt(w) analytically; write it exactly.
  h.col(0) = s;
  h.row(0) = s.transpose();
  return NetworkUnitary::from_matrix(h.cast<cplx>());
}

NetworkUnitary mach_zehnder_unitary(double w1) {
  if (!(w1 >= 0.0 && w1 <= 1.0)) {
    throw ValidationError("beam splitter reflectivity must lie in [0, 1], got " + format_double(w1));
  }
  const double a = std::sqrt(w1);
  const double b = std::sqrt(1.0 - w1);
  Eigen::Matrix2cd u;
  u << a, b, b, -a;
  return NetworkUnitary::from_matrix(u);
}

NetworkUnitary haar_random_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidDimension("network dimension must be at least 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd z(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      z(i, j) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return NetworkUnitary::from_matrix(q);
}

Eigen::Matrix2cd GivensElement::block() const {
  const cplx e = std::polar(1.0, phase);
  Eigen::Matrix2cd t;
  t << e * std::cos(angle), -std::sin(angle), e * std::sin(angle), std::cos(angle);
  return t;
}

RotationMesh reck_decompose(const NetworkUnitary& u) {
  const int m = u.dim();
  Eigen::MatrixXcd work = u.matrix();
  RotationMesh mesh;
  mesh.dim = m;

  // Null row r from the left using column pairs (c, c+1); rows below r are
  // already reduced to a single unit-modulus entry and stay untouched.
  for (int r = m - 1; r >= 1; --r) {
    for (int c = 0; c < r; ++c) {
      const cplx a = work(r, c);
      if (a == cplx(0.0, 0.0)) continue;
      const cplx b = work(r, c + 1);
      GivensElement el;
      el.mode = c;
      el.angle = std::atan2(std::abs(a), std::abs(b));
      el.phase = normalize_angle(std::arg(a) - (b == cplx(0.0, 0.0) ? 0.0 : std::arg(b)));
      const Eigen::Matrix2cd inv = el.block().adjoint();
      work.middleCols(c, 2) = work.middleCols(c, 2) * inv;
      work(r, c) = 0.0;
      mesh.elements.push_back(el);
    }
  }
  mesh.output_phases.resize(m);
  for (int i = 0; i < m; ++i) {
    mesh.output_phases[i] = work(i, i) == cplx(0.0, 0.0) ? 0.0 : normalize_angle(std::arg(work(i, i)));
  }
  return mesh;
}

RotationMesh reck_decompose(const Eigen::MatrixXcd& u) {
  return reck_decompose(NetworkUnitary::from_matrix(u));
}

NetworkUnitary recompose(const RotationMesh& mesh) {
  const int m = mesh.dim;
  if (m < 1 || static_cast<int>(mesh.output_phases.size()) != m) {
    throw InvalidDimension("mesh phase layer does not match its dimension");
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(m, m);
  for (const auto& el : mesh.elements) {
    if (el.mode < 0 || el.mode + 1 >= m) throw IndexOutOfRange("mesh element outside the network");
    acc.middleRows(el.mode, 2) = el.block() * acc.middleRows(el.mode, 2);
  }
  for (int i = 0; i < m; ++i) acc.row(i) *= std::polar(1.0, mesh.output_phases[i]);
  return NetworkUnitary::from_matrix(acc, 1e-9);
}

std::string write_netlist(const RotationMesh& mesh, std::string_view header_comment) {
  std::ostringstream out;
  out << header_comment;
  for (const auto& el : mesh.elements) {
    out << "pair " << el.mode << ' ' << el.mode + 1 << " angle " << format_double(el.angle)
        << " phase " << format_double(el.phase) << '\n';
  }
  out << "diag";
  for (double p : mesh.output_phases) out << ' ' << format_double(p);
  out << '\n';
  return out.str();
}

RotationMesh parse_netlist(std::string_view text) {
  RotationMesh mesh;
  bool have_diag = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (have_diag) throw ValidationError("netlist: content after the diag line (line " + std::to_string(line_no) + ")");
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "pair") {
      std::string i, j, angle_kw, angle, phase_kw, phase;
      fields >> i >> j >> angle_kw >> angle >> phase_kw >> phase;
      if (angle_kw != "angle" || phase_kw != "phase" || phase.empty()) {
        throw ValidationError("netlist: malformed pair line " + std::to_string(line_no));
      }
      GivensElement el;
      el.mode = static_cast<int>(parse_double(i));
      if (static_cast<int>(parse_double(j)) != el.mode + 1) {
        throw ValidationError("netlist: only adjacent pairs are supported (line " + std::to_string(line_no) + ")");
      }
      el.angle = parse_double(angle);
      el.phase = parse_double(phase);
      mesh.elements.push_back(el);
    } else if (kind == "diag") {
      std::string rest;
      std::getline(fields, rest);
      mesh.output_phases = parse_list(rest);
      have_diag = true;
    } else {
      throw ValidationError("netlist: unknown record '" + kind + "' on line " + std::to_string(line_no));
    }
  }
  if (!have_diag) throw ValidationError("netlist: missing trailing diag line");
  mesh.dim = static_cast<int>(mesh.output_phases.size());
  for (const auto& el : mesh.elements) {
    if (el.mode < 0 || el.mode + 1 >= mesh.dim) throw IndexOutOfRange("netlist: pair outside the network");
  }
  return mesh;
}

std::string write_unitary(const NetworkUnitary& u, std::string_view header_comment) {
  std::ostringstream out;
  out << header_comment;
  for (int i = 0; i < u.dim(); ++i) {
    for (int j = 0; j < u.dim(); ++j) {
      if (j) out << ' ';
      out << format_double(u(i, j).real()) << ',' << format_double(u(i, j).imag());
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sqzmetro::network
