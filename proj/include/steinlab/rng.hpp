#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "steinlab/types.hpp"

namespace steinlab {

// Labeled substream: the engine seed is a hash of (master seed, label), so
// adding an experiment never perturbs another experiment's draws.
std::mt19937_64 labeled_stream(std::uint64_t master_seed, std::string_view label);

// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
Matrix haar_unitary(int dim, std::mt19937_64& rng);

// Haar eigenbasis with Dirichlet(1,...,1) spectrum.
DensityOperator random_density(int dim, std::mt19937_64& rng);

// Haar-random pure state.
DensityOperator random_pure(int dim, std::mt19937_64& rng);

HermitianOperator random_hermitian(int dim, std::mt19937_64& rng);

// Random test operator: Haar basis, eigenvalues uniform in [0, 1].
TestOperator random_test(int dim, std::mt19937_64& rng);

// Random rank-one PVM (a Haar-random orthonormal basis).
Pvm random_rank_one_pvm(int dim, std::mt19937_64& rng);

// Random probability vector (Dirichlet(1,...,1)).
std::vector<double> random_distribution(int size, std::mt19937_64& rng);

}  // namespace steinlab
