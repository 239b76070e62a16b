#pragma once

#include "steinlab/types.hpp"

namespace steinlab {

// Closed-form maximum of sum_i p_i (ln p_i)^2 over the k-simplex:
// (ln k)^2 for k >= 3; the two-level expression with
// p_{-+} = (1 -+ sqrt(1 - 4/e^2))/2 for k = 2.
double plog2_max(int k);

// Independent brute-force maximum: scans the two-level critical family
// (r entries at one value, m - r at another, over every support size m <= k)
// on a grid, then refines by golden section. k in {2, 3, 4}.
double plog2_max_oracle(int k, int grid);

// Tr rho (log rho - log E_M(rho))^2 <= 4 (ln w(E))^2 for M >= E, rho
// commuting with E, w(E) >= 3.
struct Lemma2Result {
    double lhs = 0;
    double rhs = 0;
    bool ok = false;
};

Lemma2Result check_lemma2(const DensityOperator& rho, const Pvm& e, const Pvm& m);

// lambda_min(k E_M(rho) - rho); the pinching bound asserts >= 0.
double check_lemma_c1(const DensityOperator& rho, const Pvm& m);

// lambda_min(w(E)^t rho^{-t} - (E_M(rho))^{-t}) for 0 < t <= 1, faithful rho
// commuting with E, M >= E; the operator-power bound asserts >= 0.
double check_lemma_c2(const DensityOperator& rho, const Pvm& e, const Pvm& m, double t);

}  // namespace steinlab
