#pragma once

#include <cstddef>
#include <vector>

#include "adiabatic/model.hpp"

namespace adiabatic {

/// Eigenvalues in ascending order; vectors[i] pairs with values[i] when requested.
struct EigenResult {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

/// Full spectrum by implicit-shift QL. Values-only work is O(dim^2); with
/// vectors it is O(dim^3), so keep dim moderate when asking for them.
EigenResult eigen_all(const TridiagonalOperator& t, bool with_vectors = false);

/// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t sturm_count(const TridiagonalOperator& t, double x);

/// The `count` lowest eigenvalues by bisection, ascending.
std::vector<double> lowest_values(const TridiagonalOperator& t, std::size_t count);

/// The `count` lowest eigenpairs: bisection for values, inverse iteration for vectors.
EigenResult lowest_pairs(const TridiagonalOperator& t, std::size_t count);

struct GroundPair {
  double e0 = 0.0;
  double e1 = 0.0;
  double gap = 0.0;
  SymmetricState psi0;
  SymmetricState psi1;
};

/// Two lowest eigenpairs with the sign convention "first non-negligible component positive".
GroundPair ground_pair(const TridiagonalOperator& t);

/// E1 - E0 without eigenvectors; the hot path for gap searches.
double ground_gap(const TridiagonalOperator& t);

}  // namespace adiabatic
