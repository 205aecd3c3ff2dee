#include "adiabatic/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "adiabatic/eigensolver.hpp"

namespace adiabatic::oracle {

namespace {

void require_qubits(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("dense oracle supports 1 <= n <= " + std::to_string(kMaxQubits) + ", got " +
                                std::to_string(n));
}

std::uint64_t full_dim(int n) { return std::uint64_t{1} << n; }

int bit_of(std::uint64_t index, int qubit, int n) { return static_cast<int>((index >> (n - 1 - qubit)) & 1U); }

std::uint64_t swap_bits(std::uint64_t index, int a, int b, int n) {
  const int ba = bit_of(index, a, n);
  const int bb = bit_of(index, b, n);
  if (ba == bb) return index;
  return index ^ (std::uint64_t{1} << (n - 1 - a)) ^ (std::uint64_t{1} << (n - 1 - b));
}

// log(cosh x) without overflow.
double log_cosh(double x) {
  x = std::abs(x);
  return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

}  // namespace

std::uint64_t SolutionMask::index() const {
  const int n = static_cast<int>(bits.size());
  std::uint64_t idx = 0;
  for (int k = 0; k < n; ++k)
    if (bits[k] != 0) idx |= std::uint64_t{1} << (n - 1 - k);
  return idx;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd embed(const Eigen::Matrix2d& op, int qubit, int n) {
  require_qubits(n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    if (k == qubit)
      out = kron(out, op);
    else
      out = kron(out, Eigen::Matrix2d::Identity());
  }
  return out;
}

Eigen::MatrixXd sigma_x(int qubit, int n) {
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  return embed(x, qubit, n);
}

Eigen::MatrixXd sigma_z(int qubit, int n) {
  Eigen::Matrix2d z;
  z << 1, 0, 0, -1;
  return embed(z, qubit, n);
}

Eigen::MatrixXd total_sx(int n) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(full_dim(n), full_dim(n));
  for (int k = 0; k < n; ++k) s += 0.5 * sigma_x(k, n);
  return s;
}

Eigen::MatrixXd total_sz(int n) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(full_dim(n), full_dim(n));
  for (int k = 0; k < n; ++k) s += 0.5 * sigma_z(k, n);
  return s;
}

Eigen::MatrixXd total_sy_squared(int n) {
  // sigma_y = i A with A = [[0,-1],[1,0]].
  Eigen::Matrix2d a;
  a << 0, -1, 1, 0;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(full_dim(n), full_dim(n));
  for (int k = 0; k < n; ++k) sum += embed(a, k, n);
  return -0.25 * sum * sum;
}

Eigen::MatrixXd total_spin_squared(int n) {
  require_qubits(n);
  const std::uint64_t d = full_dim(n);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Identity(d, d) * (n * (4.0 - n) / 4.0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (std::uint64_t i = 0; i < d; ++i) s2(swap_bits(i, a, b, n), i) += 1.0;
  return s2;
}

DenseOperator build_full_h0(int n) {
  require_qubits(n);
  const std::uint64_t d = full_dim(n);
  DenseOperator h{n, 0.5 * Eigen::MatrixXd::Identity(d, d) - total_sx(n) / n};
  return h;
}

Eigen::MatrixXd product_form_hp(int n, double p) {
  require_qubits(n);
  Eigen::Matrix2d factor;
  factor << 1 + p, 0, 0, 1 - p;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, factor);
  return out;
}

DenseOperator build_full_hp(int n, double alpha) {
  require_qubits(n);
  if (std::isnan(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  const std::uint64_t d = full_dim(n);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  if (std::isinf(alpha)) {
    // I - |w><w| with |w> = |0...0>.
    id(0, 0) = 0.0;
    return {n, id};
  }
  if (alpha < 1e-8) {
    // Decoupled limit: (1/n) sum_k (I - sigma_z^(k)) / 2.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < n; ++k) h += 0.5 * (id - sigma_z(k, n));
    return {n, h / n};
  }
  // e^{2 alpha S_z / n} = cosh(alpha/n)^n prod_k (I + p sigma_z), p = tanh(alpha/n);
  // H_P = (I - e^{-alpha} e^{2 alpha S_z/n}) / (1 - e^{-2 alpha}).
  const double p = std::tanh(alpha / n);
  const double prefactor = std::exp(-alpha + n * log_cosh(alpha / n));
  Eigen::MatrixXd h = (id - prefactor * product_form_hp(n, p)) / (-std::expm1(-2.0 * alpha));
  return {n, h};
}

DenseOperator build_full(const ModelParams& params) {
  params.validate();
  require_qubits(params.n);
  const DenseOperator h0 = build_full_h0(params.n);
  const DenseOperator hp = build_full_hp(params.n, params.alpha);
  return {params.n, (1.0 - params.s) * h0.entries + params.s * hp.entries};
}

Eigen::MatrixXd gauge_unitary(const SolutionMask& mask) {
  const int n = static_cast<int>(mask.bits.size());
  require_qubits(n);
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(1, 1);
  for (int k = 0; k < n; ++k) u = kron(u, mask.bits[k] != 0 ? Eigen::MatrixXd(x) : Eigen::MatrixXd::Identity(2, 2));
  return u;
}

DenseOperator apply_gauge(const DenseOperator& h, const SolutionMask& mask) {
  if (static_cast<int>(mask.bits.size()) != h.n || h.dim() != full_dim(h.n))
    throw std::invalid_argument("gauge mask length does not match operator dimension");
  const std::uint64_t flip = mask.index();
  const std::uint64_t d = h.dim();
  DenseOperator out{h.n, Eigen::MatrixXd(d, d)};
  for (std::uint64_t i = 0; i < d; ++i)
    for (std::uint64_t j = 0; j < d; ++j) out.entries(i, j) = h.entries(i ^ flip, j ^ flip);
  return out;
}

Eigen::MatrixXd dicke_basis(int n) {
  require_qubits(n);
  const std::uint64_t d = full_dim(n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(d, n + 1);
  std::vector<double> counts(n + 1, 0.0);
  for (std::uint64_t i = 0; i < d; ++i) counts[n - std::popcount(i)] += 1.0;
  for (std::uint64_t i = 0; i < d; ++i) {
    const int k = n - std::popcount(i);
    basis(i, k) = 1.0 / std::sqrt(counts[k]);
  }
  return basis;
}

double spin_commutator_norm(const DenseOperator& h) {
  // [H, S^2] = sum_{a<b} (H P_ab - P_ab H); the identity part of S^2 drops out.
  const int n = h.n;
  const std::uint64_t d = h.dim();
  double worst = 0.0;
  for (std::uint64_t i = 0; i < d; ++i) {
    for (std::uint64_t j = 0; j < d; ++j) {
      double c = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) c += h.entries(i, swap_bits(j, a, b, n)) - h.entries(swap_bits(i, a, b, n), j);
      worst = std::max(worst, std::abs(c));
    }
  }
  return worst;
}

Eigen::MatrixXd symmetric_sector(const DenseOperator& h, int n) {
  require_qubits(n);
  if (h.n != n || h.dim() != full_dim(n)) throw std::invalid_argument("operator dimension does not match n");
  const double comm = spin_commutator_norm(h);
  if (comm > 1e-10) throw std::domain_error("operator does not commute with S^2 (|[H,S^2]| = " + std::to_string(comm) + ")");
  const Eigen::MatrixXd basis = dicke_basis(n);
  return basis.transpose() * h.entries * basis;
}

Eigen::VectorXd full_spectrum(const DenseOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return solver.eigenvalues();
}

Eigen::VectorXd max_spin_spectrum(const DenseOperator& h) {
  const int n = h.n;
  const double j = 0.5 * n;
  // Lower sectors sit at least mu * n above their unpenalized energies.
  const double mu = 10.0;
  const std::uint64_t d = h.dim();
  const Eigen::MatrixXd penalized =
      h.entries + mu * (j * (j + 1.0) * Eigen::MatrixXd::Identity(d, d) - total_spin_squared(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(penalized, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return solver.eigenvalues().head(n + 1);
}

Eigen::VectorXd expand_symmetric(const SymmetricState& psi) {
  const int n = psi.n();
  return dicke_basis(n) * Eigen::Map<const Eigen::VectorXd>(psi.amp().data(), n + 1);
}

PointCheck check_point(const ModelParams& params, const SolutionMask& mask) {
  const DenseOperator h = build_full(params);
  PointCheck c;
  const Eigen::VectorXd sector = max_spin_spectrum(h);
  const std::vector<double> tri = eigen_all(build_hs(params)).values;
  for (std::size_t k = 0; k < tri.size(); ++k)
    c.sector_error = std::max(c.sector_error, std::abs(sector(static_cast<Eigen::Index>(k)) - tri[k]));
  c.gauge_error = (full_spectrum(apply_gauge(h, mask)) - full_spectrum(h)).cwiseAbs().maxCoeff();
  c.commutator = spin_commutator_norm(h);
  return c;
}

Eigen::VectorXcd evolve_full(int n, double alpha, const SolutionMask& mask, double total_time, int steps) {
  require_qubits(n);
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const DenseOperator h0 = apply_gauge(build_full_h0(n), mask);
  const DenseOperator hp = apply_gauge(build_full_hp(n, alpha), mask);
  const std::uint64_t d = full_dim(n);

  // |=>> is gauge invariant.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(d, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
  if (total_time <= 0.0) return psi;

  // Fourth-order commutator-free exponential scheme at the two Gauss nodes.
  const double dt = total_time / steps;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double a1 = 0.25 + std::sqrt(3.0) / 6.0;
  const double a2 = 0.25 - std::sqrt(3.0) / 6.0;
  auto propagate = [&](double w1, double s1, double w2, double s2) {
    // Weighted sum of the generator at two path points, exponentiated exactly.
    const double s_eff = w1 * s1 + w2 * s2;
    const double weight = w1 + w2;
    const Eigen::MatrixXd gen = weight * h0.entries + s_eff * (hp.entries - h0.entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gen);
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::VectorXcd coeff = v.transpose().cast<std::complex<double>>() * psi;
    for (Eigen::Index i = 0; i < coeff.size(); ++i)
      coeff(i) *= std::exp(std::complex<double>(0.0, -es.eigenvalues()(i) * dt));
    psi = v.cast<std::complex<double>>() * coeff;
  };
  for (int step = 0; step < steps; ++step) {
    const double t0 = step * dt;
    const double s1 = (t0 + c1 * dt) / total_time;
    const double s2 = (t0 + c2 * dt) / total_time;
    // exp(-i dt (a2 H1 + a1 H2)) exp(-i dt (a1 H1 + a2 H2))
    propagate(a1, s1, a2, s2);
    propagate(a2, s1, a1, s2);
  }
  return psi;
}

}  // namespace adiabatic::oracle
