#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "steinlab/types.hpp"

namespace steinlab {

// Orthogonal decomposition of (C^k)^{tensor n} into subspaces irreducible
// under the n-fold tensor action of SL(k). Every block projector commutes
// with every n-fold tensor-power state.
struct IrreducibleDecomposition {
    int n = 0;
    int k = 0;
    Pvm blocks;
    std::vector<int> block_dims;
};

// Permutation operator transposing tensor factors i and j on (C^k)^{tensor n}.
HermitianOperator swap_unitary(int n, int k, int i, int j);

// Generic element of the symmetric-group commutant: sum_{m=2..n} c_m X_m with
// X_m the m-th Jucys-Murphy element (sum of transpositions (i, m-1), i < m-1).
// Coefficients must be pairwise distinct and nonzero.
HermitianOperator commutant_generic_element(int n, int k, std::span<const double> coefficients);

// Diagonalize a seeded generic commutant element and cluster its eigenvalues;
// the clusters are the irreducible blocks. Retries with fresh coefficients on
// clustering ambiguity, then fails. Postconditions (dimension accounting,
// width bound, commutativity with tensor-power states, invariance under
// g^{tensor n}) are checked before returning.
IrreducibleDecomposition irreducible_decomposition(int n, int k, std::uint64_t seed);

// kHn = C(n+k-1, k-1), the dimension of the n-th symmetric tensor space.
long long repeated_combination(int k, int n);

// Max over trials and blocks of ||[P, rho^{tensor n}]|| for random densities
// (full-rank and rank-deficient both sampled).
double verify_block_commutativity(const IrreducibleDecomposition& d, int trials,
                                  std::uint64_t seed);

}  // namespace steinlab
