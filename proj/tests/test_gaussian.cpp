#include <doctest.h>

#include <cmath>
#include <complex>

#include "steinlab/gaussian.hpp"
#include "steinlab/operator_algebra.hpp"

using namespace steinlab;

TEST_CASE("coherent vector") {
    const auto vac = coherent_vector(0.0, 8);
    CHECK(std::abs(vac(0) - 1.0) < 1e-15);
    CHECK(vac.tail(7).norm() == doctest::Approx(0.0));

    CHECK(coherent_vector(1.0, 32).norm() == doctest::Approx(1.0).epsilon(1e-12));

    // Overlap <a|b> = exp(-(|a|^2+|b|^2)/2 + conj(a) b).
    const Complex a(0.7, -1.1), b(-0.4, 1.3);
    const Complex overlap = coherent_vector(a, 96).dot(coherent_vector(b, 96));
    const Complex expected =
        std::exp(-0.5 * (std::norm(a) + std::norm(b)) + std::conj(a) * b);
    CHECK(std::abs(overlap - expected) < 1e-10);
}

TEST_CASE("thermal state emerges from the quadrature") {
    const auto rho = gaussian_state({0.0, 1.0, 40});
    for (int k = 0; k < 10; ++k)
        CHECK(rho.matrix()(k, k).real() ==
              doctest::Approx(std::pow(0.5, k + 1)).epsilon(1e-10));
    // Off-diagonals vanish for an undisplaced thermal state.
    CHECK((rho.matrix() - Matrix(rho.matrix().diagonal().asDiagonal())).norm() < 1e-10);

    // Small nbar approaches the vacuum projector.
    const auto cold = gaussian_state({0.0, 0.01, 40});
    CHECK(cold.matrix()(0, 0).real() > 0.98);
}

TEST_CASE("quadrature and displaced constructions agree") {
    const struct {
        Complex theta;
        double nbar;
        int cutoff;
    } grid[] = {
        {{0.0, 0.0}, 1.0, 40},  {{1.0, 0.0}, 1.0, 48},        {{1.5, 0.0}, 0.5, 48},
        {{0.8, 0.0}, 0.5, 40},  {{0.5, 0.8}, 2.0, 80},        {{-1.2, 0.3}, 1.5, 72},
    };
    for (const auto& g : grid) {
        const auto a = gaussian_state({g.theta, g.nbar, g.cutoff});
        const auto b = gaussian_state_displaced({g.theta, g.nbar, g.cutoff});
        CHECK(operator_norm(a.matrix() - b.matrix()) < 1e-7);
    }
}

TEST_CASE("cutoff policy and trace-deficit errors") {
    CHECK(recommended_cutoff(1.0, 0.0) == 40);
    CHECK(recommended_cutoff(1.0, 50.0) == 408);
    // A displacement far too large for the truncation is rejected.
    CHECK_THROWS_AS(gaussian_state({6.0, 1.0, 40}), CutoffError);
    try {
        gaussian_state({6.0, 1.0, 40});
    } catch (const CutoffError& e) {
        CHECK(e.suggested_cutoff() >= 8 * 37);
    }
}

TEST_CASE("reduced number distribution") {
    SUBCASE("equal hypotheses give the thermal law") {
        const auto d = reduced_number_distribution(0.7, 0.7, 1.0, 10, 60);
        for (int k = 0; k < 12; ++k)
            CHECK(d.probs[k] == doctest::Approx(std::pow(0.5, k + 1)).epsilon(1e-10));
    }

    SUBCASE("mean photons equals n |dtheta|^2 + nbar") {
        const int n = 25;
        const int cutoff = recommended_cutoff(1.0, 25.0);
        const auto d = reduced_number_distribution(1.0, 0.0, 1.0, n, cutoff);
        CHECK(d.total() >= 1 - 1e-8);
        CHECK(d.mean() == doctest::Approx(n * 1.0 + 1.0).epsilon(1e-6 / 26.0));
        for (double p : d.probs) CHECK(p >= -1e-12);
    }

    SUBCASE("quadrature diagonal matches the displaced route at large amplitude") {
        const int cutoff = 250;
        const auto d = reduced_number_distribution(1.0, 0.0, 1.0, 25, cutoff);
        const auto ref = gaussian_state_displaced({5.0, 1.0, cutoff});
        for (int k = 0; k < cutoff; ++k) {
            const double r = ref.matrix()(k, k).real();
            CHECK(std::abs(d.probs[k] - r) <= 1e-12 + 1e-8 * std::abs(r));
        }
    }
}

TEST_CASE("gaussian test errors") {
    SUBCASE("named configuration") {
        const auto [alpha, beta] = gaussian_test_errors(1.0, 0.0, 1.0, 25, 0.3, 200);
        // Exact tail mass of the acceptance window at n = 25 (the window spans
        // roughly +-1.6 standard deviations, so alpha sits near 0.09).
        CHECK(alpha == doctest::Approx(0.0856).epsilon(0.02));
        CHECK(alpha < 0.1);
        // Thermal tail from k = 25: 2^{-25}.
        CHECK(beta == doctest::Approx(std::pow(2.0, -25)).epsilon(1e-9));
    }

    SUBCASE("first error shrinks with n") {
        const auto a10 = gaussian_test_errors(1.0, 0.0, 1.0, 10, 0.3, 120).first;
        const auto a50 =
            gaussian_test_errors(1.0, 0.0, 1.0, 50, 0.3, recommended_cutoff(1.0, 50.0)).first;
        CHECK(a50 < a10);
        CHECK(a50 < 0.02);
    }

    SUBCASE("second error decays at the relative-entropy rate") {
        double prev_minus_log = 0;
        for (int n : {10, 20, 40}) {
            const auto [alpha, beta] =
                gaussian_test_errors(1.0, 0.0, 1.0, n, 0.3, recommended_cutoff(1.0, n));
            const double ml = -std::log(beta);
            CHECK(ml > prev_minus_log);  // -log beta grows with n
            CHECK(ml / n == doctest::Approx(std::log(2.0)).epsilon(1e-6));
            prev_minus_log = ml;
        }
    }

    SUBCASE("identical hypotheses") {
        const auto [alpha, beta] = gaussian_test_errors(0.5, 0.5, 1.0, 10, 0.4, 60);
        // Acceptance window k/n <= eps^2 under the same thermal statistics.
        CHECK(beta == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(alpha > 0);
        CHECK(alpha < 1);
    }
}

TEST_CASE("gaussian relative entropy") {
    CHECK(gaussian_relative_entropy(0.3, 0.3, 1.0) == doctest::Approx(0.0));
    CHECK(gaussian_relative_entropy(1.0, 0.0, 1.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // Truncated-matrix cross-check at (dtheta = 0.8, nbar = 0.5).
    const int cutoff = 120;
    const auto r = gaussian_state({0.8, 0.5, cutoff});
    const auto s = gaussian_state({0.0, 0.5, cutoff});
    const double matrix_d = relative_entropy(r, s, SupportMode::restricted);
    CHECK(std::abs(matrix_d - gaussian_relative_entropy(0.8, 0.0, 0.5)) < 1e-4);
}
