#pragma once

#include <span>
#include <utility>
#include <vector>

namespace steinlab {

// A pair of classical distributions on a common outcome set, at block index n
// (used to normalize log-likelihood ratios per copy).
struct DistributionPair {
    std::vector<double> p;
    std::vector<double> q;
    int n = 1;
};

// Validates lengths, nonnegativity and normalization (1e-9).
void validate_pair(const DistributionPair& dp, const char* op);

// Acceptance region S_n(lambda) = { (1/n) log(p/q) >= lambda }. Outcomes with
// q = 0 < p have ratio +inf (always accepted for finite lambda); outcomes with
// p = 0 have ratio -inf (rejected for finite lambda).
struct ThresholdTest {
    double lambda = 0;
    std::vector<bool> acceptance_mask;
};

ThresholdTest threshold_test(const DistributionPair& dp, double lambda);

// (alpha, beta) = (p-mass rejected, q-mass accepted).
std::pair<double, double> classical_errors(const DistributionPair& dp, const ThresholdTest& t);

// Finite-n inequality beta_n(T^n(lambda)) <= e^{-n lambda}; returns
// (holds, slack = e^{-n lambda} - beta).
std::pair<bool, double> verify_lemma4_bounds(const DistributionPair& dp, double lambda);

// Exact randomized Neyman-Pearson optimum at level epsilon.
struct NpSolution {
    double beta_star = 0;
    double threshold = 0;       // per-copy log-likelihood ratio at the boundary
    double randomization = 0;   // acceptance fraction of the boundary outcome
};

NpSolution classical_np(const DistributionPair& dp, double epsilon);

// Finite-n information-spectrum diagnostics: the p-CDF of the normalized
// log-likelihood ratio on a fixed grid, plus (delta, 1-delta) quantiles for
// delta in {0.01, 0.05}. The limiting spectral rates are deliberately not
// extrapolated.
struct SpectralRecord {
    int n = 1;
    std::vector<double> lambda_grid;
    std::vector<double> p_cdf;       // p{ ratio <= lambda }
    double quantile_lo_01 = 0;
    double quantile_lo_05 = 0;
    double quantile_hi_95 = 0;
    double quantile_hi_99 = 0;
    double p_mass_at_inf = 0;        // outcomes with q = 0 < p
};

std::vector<SpectralRecord> spectral_functionals(std::span<const DistributionPair> seq);

}  // namespace steinlab
