#include "adiabatic/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "adiabatic/eigensolver.hpp"
#include "adiabatic/oracle.hpp"

namespace adiabatic {

namespace {

void require_normalized(const SymmetricState& psi) {
  double norm2 = 0.0;
  for (double a : psi.amp()) norm2 += a * a;
  if (std::abs(norm2 - 1.0) > 1e-8)
    throw std::invalid_argument("state is not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
}

double m_of(int n, std::size_t k) { return static_cast<double>(k) - 0.5 * n; }

}  // namespace

double expect_sx(const SymmetricState& psi) {
  require_normalized(psi);
  const int n = psi.n();
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += 2.0 * ladder(n, k) * psi[k] * psi[k + 1];
  return acc;
}

double expect_sz(const SymmetricState& psi) {
  require_normalized(psi);
  double acc = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) acc += m_of(psi.n(), k) * psi[k] * psi[k];
  return acc;
}

double expect_sz2(const SymmetricState& psi) {
  require_normalized(psi);
  double acc = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double m = m_of(psi.n(), k);
    acc += m * m * psi[k] * psi[k];
  }
  return acc;
}

double expect_sx2(const SymmetricState& psi) {
  // |S_x psi|^2 for real psi.
  require_normalized(psi);
  const int n = psi.n();
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    double v = 0.0;
    if (k > 0) v += ladder(n, k - 1) * psi[k - 1];
    if (k < n) v += ladder(n, k) * psi[k + 1];
    acc += v * v;
  }
  return acc;
}

double expect_sy2(const SymmetricState& psi) {
  require_normalized(psi);
  const int n = psi.n();
  const double j = 0.5 * n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double m = m_of(n, k);
    acc += 0.5 * (j * (j + 1.0) - m * m) * psi[k] * psi[k];
  }
  // <m+2| S_y^2 |m> = -t(m) t(m+1), counted twice for the symmetric pair.
  for (int k = 0; k + 2 <= n; ++k) acc -= 2.0 * ladder(n, k) * ladder(n, k + 1) * psi[k] * psi[k + 2];
  return acc;
}

double rescaled_concurrence(const SymmetricState& psi) { return 1.0 - 4.0 * expect_sy2(psi) / psi.n(); }

double wootters_oracle(const SymmetricState& psi) {
  require_normalized(psi);
  const int n = psi.n();
  if (n < 2 || n > kWoottersMaxQubits)
    throw std::invalid_argument("Wootters oracle supports 2 <= n <= " + std::to_string(kWoottersMaxQubits));
  const Eigen::VectorXd full = oracle::expand_symmetric(psi);
  // Rows: state of qubits (0, 1); columns: the traced register. rho = M M^T.
  const Eigen::Index rest = static_cast<Eigen::Index>(1) << (n - 2);
  Eigen::MatrixXd m(4, rest);
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < rest; ++c) m(r, c) = full(r * rest + c);
  // The spin-flip eigenvalues lambda_i are the singular values of M^T Y M with
  // Y = sigma_y (x) sigma_y. Going through the SVD of M avoids sqrt(rho), which
  // would cost half the digits on rank-deficient rho.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Matrix4d y;
  y << 0, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, 0;
  const Eigen::MatrixXd k = sv.asDiagonal() * (u.transpose() * y * u) * sv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  std::array<double, 4> lambda{0.0, 0.0, 0.0, 0.0};
  for (Eigen::Index i = 0; i < es.eigenvalues().size() && i < 4; ++i) lambda[i] = std::abs(es.eigenvalues()(i));
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  const double c = std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
  return (n - 1) * c;
}

StateAnatomy anatomy(const SymmetricState& psi) {
  require_normalized(psi);
  const int n = psi.n();
  const SymmetricState x = polarized_x(n);
  StateAnatomy a;
  double ox = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    ox += x[k] * psi[k];
    a.dicke_weights.push_back(psi[k] * psi[k]);
  }
  a.overlap_x = ox * ox;
  a.overlap_z = psi[n] * psi[n];
  return a;
}

std::vector<double> x_dicke_weights(const SymmetricState& psi) {
  require_normalized(psi);
  // Eigenvectors of H_0 = 1/2 - S_x/n in ascending energy are the S_x eigenstates
  // from m_x = n/2 downwards.
  const EigenResult basis = eigen_all(build_h0(psi.n()), true);
  std::vector<double> w;
  w.reserve(basis.vectors.size());
  for (const auto& v : basis.vectors) {
    double dot = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) dot += v[k] * psi[k];
    w.push_back(dot * dot);
  }
  return w;
}

ConcurrenceJump concurrence_jump(int n, double alpha, double delta, int coarse_points) {
  ModelParams{n, alpha, 0.0}.validate();
  if (n < 2) throw std::invalid_argument("concurrence needs n >= 2");
  if (!(delta > 0.0 && delta < 0.1)) throw std::invalid_argument("delta must lie in (0, 0.1)");
  if (coarse_points < 3) throw std::invalid_argument("coarse grid needs at least 3 points");
  const auto ground = [&](double s) { return ground_pair(build_hs({n, alpha, s})).psi0; };
  const auto sz = [&](double s) { return expect_sz(ground(s)); };

  std::vector<double> z(coarse_points);
  for (int i = 0; i < coarse_points; ++i) z[i] = sz(static_cast<double>(i) / (coarse_points - 1));
  int b = 0;
  for (int i = 1; i + 1 < coarse_points; ++i)
    if (z[i + 1] - z[i] > z[b + 1] - z[b]) b = i;
  double lo = static_cast<double>(b) / (coarse_points - 1);
  double hi = static_cast<double>(b + 1) / (coarse_points - 1);
  const double mid = 0.5 * (z[b] + z[b + 1]);
  while (hi - lo > 1e-9) {
    const double m = 0.5 * (lo + hi);
    (sz(m) < mid ? lo : hi) = m;
  }

  ConcurrenceJump j;
  j.s_star = 0.5 * (lo + hi);
  const auto c = [&](double s) { return rescaled_concurrence(ground(std::clamp(s, 0.0, 1.0))); };
  j.left = 2.0 * c(j.s_star - delta) - c(j.s_star - 2.0 * delta);
  j.right = 2.0 * c(j.s_star + delta) - c(j.s_star + 2.0 * delta);
  j.jump = std::abs(j.right - j.left);
  return j;
}

double richardson_inverse_n(const std::vector<int>& n, const std::vector<double>& values) {
  if (n.size() != 3 || values.size() != 3) throw std::invalid_argument("Richardson extrapolation needs 3 points");
  // Solve f_i = f_inf + a x_i + b x_i^2 with x = 1/n.
  Eigen::Matrix3d a;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    const double x = 1.0 / n[i];
    a(i, 0) = 1.0;
    a(i, 1) = x;
    a(i, 2) = x * x;
    rhs(i) = values[i];
  }
  return a.fullPivLu().solve(rhs)(0);
}

}  // namespace adiabatic
