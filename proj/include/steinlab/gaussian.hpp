#pragma once

#include <utility>
#include <vector>

#include "steinlab/types.hpp"

namespace steinlab {

// Displaced thermal state with mean photon number |theta|^2 + nbar, in a Fock
// space truncated at `cutoff` (exclusive).
struct GaussianParams {
    Complex theta;
    double nbar = 1.0;
    int cutoff = 40;
};

// Policy cutoff: max(40, ceil(8 (nbar + amp2))) where amp2 is the squared
// displacement amplitude.
int recommended_cutoff(double nbar, double amp2);

// Truncated coherent vector e^{-|a|^2/2} sum a^k/sqrt(k!) |k>.
Vector coherent_vector(Complex alpha, int cutoff);

// P-function construction: 2-D Gauss-Hermite quadrature over coherent
// projectors. The raw trace deficit must be <= 1e-8 (else CutoffError); the
// returned state is renormalized.
DensityOperator gaussian_state(const GaussianParams& gp);

// Independent route: D(theta) rho_thermal D(theta)^dagger with the truncated
// displacement exponential. Used to cross-validate the quadrature build.
DensityOperator gaussian_state_displaced(const GaussianParams& gp);

// Photon-number statistics.
struct NumberDistribution {
    std::vector<double> probs;

    double total() const;
    double deficit() const { return 1.0 - total(); }
    double mean() const;
};

// Number statistics of the single concentrated mode with amplitude
// sqrt(n) (theta0 - theta1): the statistical reduction of the n-copy test.
NumberDistribution reduced_number_distribution(Complex theta0, Complex theta1, double nbar,
                                               int n, int cutoff);

// Number statistics of gaussian_state(gp) via the diagonal quadrature path.
NumberDistribution number_distribution(const GaussianParams& gp);

// Threshold test on the concentrated mode. The null is accepted when
// |sqrt(k/n) - |theta0 - theta1|| <= eps_region; alpha is the complement's
// mass under the amplitude-sqrt(n)|dtheta| statistics, beta the mass of
// { sqrt(k/n) >= |theta0 - theta1| } under the amplitude-0 (thermal)
// statistics.
std::pair<double, double> gaussian_test_errors(Complex theta0, Complex theta1, double nbar,
                                               int n, double eps_region, int cutoff);

// |theta0 - theta1|^2 ln(1 + 1/nbar).
double gaussian_relative_entropy(Complex theta0, Complex theta1, double nbar);

}  // namespace steinlab
