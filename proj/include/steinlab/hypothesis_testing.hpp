#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "steinlab/measurement_design.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

// Quantum Neyman-Pearson test: indicator of the strictly positive eigenspace
// of rho_n - e^{n lambda} sigma_n plus a randomized kernel component chosen so
// the first error hits epsilon exactly.
struct NpTest {
    TestOperator projector_part;      // strictly positive eigenspace
    HermitianOperator kernel_part;    // kernel projector (zero matrix when empty)
    double boundary_weight = 0;       // in [0, 1]
    double threshold = 0;             // lambda, nats per copy
    double alpha = 0;
    double beta = 0;

    TestOperator full_operator() const;
};

// n is only used to normalize the reported threshold to nats per copy.
NpTest quantum_np_test(const DensityOperator& rho_n, const DensityOperator& sigma_n,
                       double epsilon, int n = 1);

// beta of the optimal level-epsilon test between rho^{tensor n} and
// sigma^{tensor n}.
double beta_star(const DensityOperator& rho, const DensityOperator& sigma, int n,
                 double epsilon);

// Classical randomized NP beta at level epsilon on the designed measurement's
// outcome statistics.
double measured_beta(const DensityOperator& rho, const DensityOperator& sigma, int n,
                     double epsilon, const DesignedMeasurement& dm);

enum class Strategy { quantum_np, designed_measurement, naive_product_basis };

// Per-n error probabilities under a strategy, with exponent estimates.
// slope_estimate: least-squares slope of -log beta vs n over the largest 60%
// of the n values. slope_estimate_corrected: the n-coefficient of a
// least-squares fit of -log beta against (n, sqrt(n), 1) over the same window,
// which removes the leading finite-size bias of the plain slope.
struct ExponentCurve {
    std::vector<int> n_values;
    std::vector<double> beta_values;
    std::vector<double> alpha_values;
    double slope_estimate = 0;
    double slope_estimate_corrected = 0;
    double residual_norm = 0;  // plain-fit residual 2-norm
};

ExponentCurve exponent_curve(const DensityOperator& rho, const DensityOperator& sigma,
                             double epsilon, std::span<const int> n_range, Strategy strategy,
                             std::uint64_t seed = 0);

const char* strategy_name(Strategy s);

}  // namespace steinlab
