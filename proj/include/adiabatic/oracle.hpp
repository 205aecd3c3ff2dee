#pragma once

// Brute-force 2^n construction of the path Hamiltonian. Everything here is built
// from explicit Pauli tensor products and bit strings so that it can serve as an
// independent check on the Dicke-basis code path.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "adiabatic/model.hpp"

namespace adiabatic::oracle {

inline constexpr int kMaxQubits = 14;

/// Real symmetric 2^n x 2^n matrix. Qubit 0 is the leftmost Kronecker factor
/// (most significant bit of the basis index); bit value 0 is sigma_z = +1.
struct DenseOperator {
  int n = 0;
  Eigen::MatrixXd entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Target bit string J; the gauge U = prod_k (sigma_x^(k))^J_k maps |0...0> to |J>.
struct SolutionMask {
  std::vector<int> bits;

  static SolutionMask zeros(int n) { return {std::vector<int>(n, 0)}; }
  static SolutionMask ones(int n) { return {std::vector<int>(n, 1)}; }
  /// Basis index of |J> under the qubit ordering above.
  std::uint64_t index() const;
};

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
/// Single-qubit operator `op` acting on `qubit` of an n-qubit register.
Eigen::MatrixXd embed(const Eigen::Matrix2d& op, int qubit, int n);
Eigen::MatrixXd sigma_x(int qubit, int n);
Eigen::MatrixXd sigma_z(int qubit, int n);

/// Total spin components from Pauli sums. S_y^2 is real: S_y = (i/2) sum_k A_k with A real.
Eigen::MatrixXd total_sx(int n);
Eigen::MatrixXd total_sz(int n);
Eigen::MatrixXd total_sy_squared(int n);
/// S^2 = n(4-n)/4 I + sum_{k<l} SWAP_kl, assembled from qubit transpositions.
Eigen::MatrixXd total_spin_squared(int n);

DenseOperator build_full_h0(int n);
/// Problem Hamiltonian from the product form prod_k (I + p sigma_z^(k)), p = tanh(alpha/n).
DenseOperator build_full_hp(int n, double alpha);
DenseOperator build_full(const ModelParams& params);

/// prod_k (I + p sigma_z^(k)) as an explicit tensor product.
Eigen::MatrixXd product_form_hp(int n, double p);

Eigen::MatrixXd gauge_unitary(const SolutionMask& mask);
/// U H U^dagger, applied as a basis relabeling b -> b xor J.
DenseOperator apply_gauge(const DenseOperator& h, const SolutionMask& mask);

/// 2^n x (n+1) matrix whose column k is the normalized Dicke state with k zeros.
Eigen::MatrixXd dicke_basis(int n);

/// Max-norm of [H, S^2].
double spin_commutator_norm(const DenseOperator& h);

/// Projection onto the maximal-spin sector; throws std::domain_error if H does not commute with S^2.
Eigen::MatrixXd symmetric_sector(const DenseOperator& h, int n);

/// Sorted eigenvalues of the full operator.
Eigen::VectorXd full_spectrum(const DenseOperator& h);

/// The j = n/2 sector eigenvalues, isolated by lifting all lower-spin sectors
/// with a penalty mu (j(j+1) - S^2). Does not use the Dicke basis.
Eigen::VectorXd max_spin_spectrum(const DenseOperator& h);

/// Embed a symmetric state as a 2^n amplitude vector.
Eigen::VectorXd expand_symmetric(const SymmetricState& psi);

/// Tridiagonal path against the dense construction at one parameter point.
struct PointCheck {
  double sector_error = 0.0;  // max |E_k(tridiagonal) - E_k(j = n/2 sector)|
  double gauge_error = 0.0;   // max |sorted spectrum of U H U^dagger - sorted spectrum of H|
  double commutator = 0.0;    // max-norm of [H, S^2]
};
PointCheck check_point(const ModelParams& params, const SolutionMask& mask);

/// Exact-exponential propagation of |=>> under the full-space path Hamiltonian
/// with the affine schedule, returning the final 2^n state.
Eigen::VectorXcd evolve_full(int n, double alpha, const SolutionMask& mask, double total_time, int steps);

}  // namespace adiabatic::oracle
