#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace adiabatic {

inline constexpr double kInfiniteAlpha = std::numeric_limits<double>::infinity();

/// Point on the two-parameter path: n qubits, interaction strength alpha, path parameter s.
/// alpha = +inf selects the projector limit of the problem Hamiltonian.
struct ModelParams {
  int n = 1;
  double alpha = 0.0;
  double s = 0.0;

  void validate() const;
};

/// Real symmetric tridiagonal matrix, stored as diagonal plus one off-diagonal.
struct TridiagonalOperator {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size dim()-1

  std::size_t dim() const { return diag.size(); }
  /// Max-row-sum norm (upper bound on the spectral radius).
  double norm_inf() const;
  /// Dense matrix-vector product y = T x.
  std::vector<double> apply(std::span<const double> x) const;
};

/// Amplitudes over the Dicke basis |n/2, m>, index k = m + n/2 ascending.
/// k = n is |0...0> (all spins up along z).
class SymmetricState {
 public:
  SymmetricState() = default;
  /// Throws std::invalid_argument if the size is not n+1 or the norm deviates by more than norm_tol.
  SymmetricState(int n, std::vector<double> amp, double norm_tol = 1e-12);

  int n() const { return n_; }
  std::span<const double> amp() const { return amp_; }
  double operator[](std::size_t k) const { return amp_[k]; }
  std::size_t size() const { return amp_.size(); }

 private:
  int n_ = 0;
  std::vector<double> amp_;
};

/// Ladder coefficient t(m) = 1/2 sqrt(j(j+1) - m(m+1)), j = n/2, m = k - n/2.
/// Equals <m+1|S_x|m>.
double ladder(int n, std::size_t k);

/// Binomial coefficient as a double via lgamma; exact for small arguments.
double binomial(int n, int q);
double log_binomial(int n, int q);

TridiagonalOperator build_h0(int n);
TridiagonalOperator build_hp(int n, double alpha);
TridiagonalOperator build_hs(const ModelParams& params);

/// Diagonal of H_P at excitation count q = n - k (number of flipped spins).
double hp_level(int n, double alpha, int q);

struct Level {
  int q = 0;                  // excitation count from |0...0>
  double energy = 0.0;        // omega_q
  double degeneracy = 0.0;    // C(n, q); may be inf for very large n
  double log_degeneracy = 0.0;
};

/// Problem-Hamiltonian levels at s = 1 with their full-space degeneracies, ordered by q.
std::vector<Level> level_energies_s1(int n, double alpha);

/// Fully x-polarized state |=>>, amplitudes sqrt(C(n,k)) / 2^(n/2).
SymmetricState polarized_x(int n);
/// Fully z-polarized state |0...0>, unit vector at k = n.
SymmetricState polarized_z(int n);

}  // namespace adiabatic
