#pragma once

#include <vector>

#include "steinlab/schur_weyl.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

// Rank-one PVM refining both E^n and the spectral PVM of sigma^{tensor n}.
// sigma_loglik[i] = -(1/n) log Tr(M_i sigma^{tensor n});
// rho_probs[i]    = Tr(M_i rho^{tensor n}).
struct DesignedMeasurement {
    int n = 0;
    Pvm m;
    std::vector<double> sigma_loglik;
    std::vector<double> rho_probs;
};

// Finite sample of the normalized log-likelihood variable with p- and q-masses
// per outcome. Outcomes with vanishing q-mass are merged into one +inf bucket.
struct SpectrumSample {
    std::vector<double> values;
    std::vector<double> p_mass;
    std::vector<double> q_mass;
};

// Joint blocks E_i ^ (sigma^{tensor n} eigenspace) refined to rank one in the
// eigenbasis of the block-restricted rho^{tensor n}.
DesignedMeasurement design_measurement(const DensityOperator& rho, const DensityOperator& sigma,
                                       const IrreducibleDecomposition& decomp);

// Distribution of -(1/n) log P_sigma^M under both hypotheses.
SpectrumSample sigma_spectrum_under_rho(const DesignedMeasurement& dm,
                                        const DensityOperator& rho_n,
                                        const DensityOperator& sigma_n, int n);

// | sum_i P_rho(i) ((1/n) log P_sigma(i) - Tr rho log sigma)^2
//   - (1/n) relative_log_variance(rho, sigma) |; an exact finite-n identity
// for any valid designed measurement, so the gap is numerical noise only.
double variance_identity_gap(const DesignedMeasurement& dm, const DensityOperator& rho,
                             const DensityOperator& sigma, int n);

// (1/n) Lambda(-log P_sigma^M, P_rho^M, a n): Markov/Chernoff exponent
// certifying P_rho{ -(1/n) log P_sigma > a } <= e^{-n (returned value)}.
// Maximizes the concave t -> a t - (1/n) log sum_i p_i q_i^{-t} over [0, 1].
double chernoff_markov_bound(const DesignedMeasurement& dm, const DensityOperator& rho_n, int n,
                             double a);

// Tr(rho sigma^{-t}) for t in [0, 1]; t = 0 gives 1 exactly.
double tr_rho_sigma_negpower(const DensityOperator& rho, const DensityOperator& sigma, double t);

}  // namespace steinlab
