#pragma once

#include <utility>

#include "steinlab/types.hpp"

namespace steinlab {

// How operations behave on states with (numerically) zero eigenvalues.
//   strict     - logs and negative powers require a faithful state
//   restricted - project onto the support first; mass escaping the support of
//                the second argument signals infinite divergence
enum class SupportMode { strict, restricted };

// rho^{tensor n}. Throws DimensionError when dim^n exceeds the cap.
DensityOperator tensor_power(const DensityOperator& s, int n);

// Spectral decomposition with eigenvalues merged when they fall within
// degeneracy_tol (relative to the spectral range) of each other.
SpectralDecomposition spectral(const HermitianOperator& x, double degeneracy_tol = 1e-8);

// Same, but adjacent eigenvalues merge only when their gap is small relative
// to the eigenvalues themselves. Tensor-power spectra span many decades;
// range-relative clustering would merge distinct small eigenspaces there.
SpectralDecomposition spectral_relative_gaps(const HermitianOperator& x,
                                             double rel_tol = 1e-10);

// Spectral PVM of s^{tensor n}, assembled from the single-copy eigensystem:
// eigenvalues are products, eigenvectors are tensor-product basis vectors.
// A dense eigensolve on s^{tensor n} cannot resolve the eigenvectors of its
// absolutely tiny eigenvalues; this construction is exact.
SpectralDecomposition tensor_power_spectral(const DensityOperator& s, int n,
                                            double rel_tol = 1e-10);

// log of a state via functional calculus (natural log). In restricted mode the
// log acts on the support and vanishes on the kernel.
HermitianOperator matrix_log(const DensityOperator& s, SupportMode mode = SupportMode::strict);

// s^{-t} for 0 < t <= 1; s must be faithful.
HermitianOperator matrix_neg_power(const DensityOperator& s, double t);

// Pinching map: x -> sum_i E_i x E_i.
HermitianOperator pinch(const Pvm& e, const HermitianOperator& x);

// D(r||s) = Tr r (log r - log s), in nats. Returns +infinity when the support
// of r leaks outside the support of s (restricted mode).
double relative_entropy(const DensityOperator& r, const DensityOperator& s,
                        SupportMode mode = SupportMode::strict);

// Tr r (log s - (Tr r log s) I)^2.
double relative_log_variance(const DensityOperator& r, const DensityOperator& s,
                             SupportMode mode = SupportMode::strict);

// True when every element of e is a sum of elements of m (m refines e).
// Membership decided by checking E_i M_j in {0, M_j} within tolerance.
bool refines(const Pvm& m, const Pvm& e, double tolerance = tol::refine);

// Simultaneous-measurement PVM {F_j E_i}, zero products dropped. Inputs must
// commute elementwise; violations raise CommutativityError with the largest
// commutator norm seen.
Pvm pvm_product(const Pvm& f, const Pvm& e, double commute_tol = tol::pvm);

// Born probabilities Tr(M_i s); tiny negatives (within the clip window) are
// clipped to zero, anything more negative is an error.
OutcomeDistribution measure(const DensityOperator& s, const Pvm& m);

// (alpha, beta) = (Tr r (I - a), Tr s a).
std::pair<double, double> test_errors(const TestOperator& a, const DensityOperator& r,
                                      const DensityOperator& s);

}  // namespace steinlab
