#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "steinlab/hypothesis_testing.hpp"
#include "steinlab/info_spectrum.hpp"
#include "steinlab/operator_algebra.hpp"
#include "steinlab/rng.hpp"

using namespace steinlab;

namespace {

DensityOperator diag_state(std::initializer_list<double> values) {
    const int d = static_cast<int>(values.size());
    Matrix m = Matrix::Zero(d, d);
    int i = 0;
    for (double v : values) m(i, i) = v, ++i;
    return DensityOperator(std::move(m));
}

DensityOperator rotated_qubit(double angle, double w0, double w1) {
    const Matrix r = oracles::rotation2(angle);
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << w0, w1;
    return DensityOperator(Matrix(r * d * r.adjoint()));
}

DensityOperator plus_state() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return DensityOperator(std::move(m));
}

// Random test with alpha <= epsilon: blend toward I when the draw rejects too
// much, scale down when it accepts too much.
TestOperator random_level_test(const DensityOperator& rho, double epsilon,
                               std::mt19937_64& rng) {
    const auto a = random_test(rho.dim(), rng);
    const double accept = real_trace_product(rho.matrix(), a.matrix());
    const double target = 1.0 - epsilon;
    Matrix m;
    if (accept >= target) {
        m = (target / accept) * a.matrix();
    } else {
        const double c = (target - accept) / (1.0 - accept);
        m = a.matrix() + c * (Matrix::Identity(rho.dim(), rho.dim()) - a.matrix());
    }
    return TestOperator(HermitianOperator(std::move(m), Validate::trusted), Validate::trusted);
}

}  // namespace

TEST_CASE("identical hypotheses leave only randomization") {
    auto rng = labeled_stream(73, "test.np.same");
    const auto rho = random_density(3, rng);
    const auto t = quantum_np_test(rho, rho, 0.3);
    CHECK(t.alpha == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(t.beta == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("commuting pairs match the classical oracle") {
    const auto rho = diag_state({0.9, 0.1});
    const auto sigma = diag_state({0.2, 0.8});
    for (double eps : {0.05, 0.1, 0.3, 0.6}) {
        const double quantum = quantum_np_test(rho, sigma, eps).beta;
        const double classical = oracles::brute_force_np_beta({0.9, 0.1}, {0.2, 0.8}, eps);
        CHECK(quantum == doctest::Approx(classical).epsilon(1e-10));
    }
    // n = 1, eps = 0.1: acceptance region {0} exactly, no randomization needed.
    const auto t = quantum_np_test(rho, sigma, 0.1);
    CHECK(t.beta == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(t.alpha == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("general and commuting paths agree on nearly-commuting input") {
    // A commuting pair evaluated through the general pencil machinery (forced
    // by a tiny off-diagonal bump below the test tolerance) must agree with
    // the exact classical reduction.
    const auto rho = diag_state({0.7, 0.3});
    const auto sigma = diag_state({0.4, 0.6});
    Matrix bumped = rho.matrix();
    bumped(0, 1) = bumped(1, 0) = 1e-9;  // above the commuting-path cutoff
    const auto rho_bumped = DensityOperator(std::move(bumped));
    for (double eps : {0.2, 0.5}) {
        const double exact = quantum_np_test(rho, sigma, eps).beta;
        const double pencil = quantum_np_test(rho_bumped, sigma, eps).beta;
        CHECK(pencil == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("np test achieves the level exactly and dominates random tests") {
    auto rng = labeled_stream(79, "test.np.dom");
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 2 + trial % 2;
        const auto rho = random_density(dim, rng);
        const auto sigma = random_density(dim, rng);
        const double eps = 0.1 + 0.2 * (trial % 3);
        const auto t = quantum_np_test(rho, sigma, eps);
        CHECK(t.alpha == doctest::Approx(eps).epsilon(1e-8));
        const auto a = t.full_operator();
        Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
        CHECK(es.eigenvalues().maxCoeff() < 1 + 1e-10);

        for (int probe = 0; probe < 20; ++probe) {
            const auto competitor = random_level_test(rho, eps, rng);
            const auto [ca, cb] = test_errors(competitor, rho, sigma);
            CHECK(ca <= eps + 1e-9);
            CHECK(t.beta <= cb + 1e-10);
        }
    }
}

TEST_CASE("pure null hypothesis against the maximally mixed state") {
    const auto rho = plus_state();
    const auto sigma = diag_state({0.5, 0.5});
    const auto t = quantum_np_test(rho, sigma, 0.5);
    CHECK(t.beta == doctest::Approx(0.25).epsilon(1e-10));
    auto rng = labeled_stream(83, "test.np.pure");
    for (int probe = 0; probe < 50; ++probe) {
        const auto competitor = random_level_test(rho, 0.5, rng);
        const auto [ca, cb] = test_errors(competitor, rho, sigma);
        CHECK(t.beta <= cb + 1e-10);
    }
}

TEST_CASE("beta_star basics") {
    const auto rho = diag_state({0.9, 0.1});
    const auto sigma = diag_state({0.2, 0.8});
    CHECK(beta_star(rho, rho, 1, 0.3) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(beta_star(rho, sigma, 1, 0.1) == doctest::Approx(0.2).epsilon(1e-12));

    double prev = 1.0;
    for (double eps = 0.1; eps <= 0.9; eps += 0.1) {
        const double b = beta_star(rho, sigma, 2, eps);
        CHECK(b <= prev + 1e-12);
        prev = b;
    }
}

TEST_CASE("quantum np on tensor powers beats product tests") {
    auto rng = labeled_stream(89, "test.np.power");
    const auto rho = rotated_qubit(0.6, 0.8, 0.2);
    const auto sigma = diag_state({0.3, 0.7});
    const int n = 2;
    const auto rho_n = tensor_power(rho, n);
    const auto sigma_n = tensor_power(sigma, n);
    const auto t = quantum_np_test(rho_n, sigma_n, 0.2, n);
    for (int probe = 0; probe < 50; ++probe) {
        const auto competitor = random_level_test(rho_n, 0.2, rng);
        CHECK(t.beta <= test_errors(competitor, rho_n, sigma_n).second + 1e-10);
    }
}

TEST_CASE("measured_beta") {
    const auto rho = diag_state({0.9, 0.1});
    const auto sigma = diag_state({0.2, 0.8});

    // The designed measurement is sufficient for commuting pairs.
    for (int n : {1, 2, 3}) {
        const auto dm = design_measurement(rho, sigma, irreducible_decomposition(n, 2, n));
        CHECK(measured_beta(rho, sigma, n, 0.1, dm) ==
              doctest::Approx(beta_star(rho, sigma, n, 0.1)).epsilon(1e-9));
    }

    // Identical hypotheses: only randomization survives.
    const auto dm = design_measurement(sigma, sigma, irreducible_decomposition(2, 2, 4));
    CHECK(measured_beta(sigma, sigma, 2, 0.25, dm) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("data processing: measured beta dominates beta_star") {
    auto rng = labeled_stream(97, "test.dataproc");
    for (int trial = 0; trial < 6; ++trial) {
        const auto rho = random_density(2, rng);
        const auto sigma = random_density(2, rng);
        const int n = 1 + trial % 3;
        const double eps = 0.05 + 0.15 * (trial % 3);
        const auto dm =
            design_measurement(rho, sigma, irreducible_decomposition(n, 2, 600 + trial));
        CHECK(measured_beta(rho, sigma, n, eps, dm) >=
              beta_star(rho, sigma, n, eps) - 1e-12);
    }
}

TEST_CASE("exponent curve: identical hypotheses give zero slope") {
    const auto sigma = diag_state({0.35, 0.65});
    const std::vector<int> ns{1, 2, 3, 4, 5};
    const auto curve = exponent_curve(sigma, sigma, 0.2, ns, Strategy::quantum_np);
    CHECK(std::abs(curve.slope_estimate) < 1e-6);
    for (double b : curve.beta_values) CHECK(b == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("exponent curve on the commuting example pair") {
    const auto rho = diag_state({0.9, 0.1});
    const auto sigma = diag_state({0.2, 0.8});
    const std::vector<int> ns{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto curve = exponent_curve(rho, sigma, 0.05, ns, Strategy::quantum_np);

    // Cross-validate every point against the binomial type-class oracle.
    for (size_t i = 0; i < ns.size(); ++i) {
        const int n = ns[i];
        std::vector<double> p(n + 1), q(n + 1);
        for (int c = 0; c <= n; ++c) {
            double logc =
                std::lgamma(n + 1.0) - std::lgamma(c + 1.0) - std::lgamma(n - c + 1.0);
            p[c] = std::exp(logc + c * std::log(0.9) + (n - c) * std::log(0.1));
            q[c] = std::exp(logc + c * std::log(0.2) + (n - c) * std::log(0.8));
        }
        const double brute = oracles::brute_force_np_beta(p, q, 0.05);
        CHECK(curve.beta_values[i] == doctest::Approx(brute).epsilon(1e-8));
    }

    // The plain LS slope at these block lengths sits measurably below the KL
    // rate (second-order effect at epsilon = 0.05); the converse bound still
    // caps it from above.
    const double kl = 0.9 * std::log(4.5) + 0.1 * std::log(0.125);
    CHECK(kl == doctest::Approx(1.1457).epsilon(1e-4));
    CHECK(curve.slope_estimate < kl + 0.05);
    CHECK(curve.slope_estimate > 0.75 * kl);
    CHECK(curve.slope_estimate == doctest::Approx(0.93309).epsilon(1e-3));
}

TEST_CASE("near-pure commuting pairs track the KL rate tightly") {
    // With a near-pure null the NP boundary stays inside the top type class
    // for every n in range, so -log beta is exactly linear in n.
    const auto rho = diag_state({0.995, 0.005});
    const auto sigma = diag_state({0.2, 0.8});
    const std::vector<int> ns{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto curve = exponent_curve(rho, sigma, 0.05, ns, Strategy::quantum_np);
    const double kl = 0.995 * std::log(0.995 / 0.2) + 0.005 * std::log(0.005 / 0.8);
    CHECK(std::abs(curve.slope_estimate - kl) / kl < 0.15);
    CHECK(curve.slope_estimate == doctest::Approx(std::log(0.995 / 0.2)).epsilon(1e-9));
}

TEST_CASE("designed measurement never beats the quantum optimum") {
    const auto rho = rotated_qubit(0.6, 0.8, 0.2);
    const auto sigma = diag_state({0.3, 0.7});
    const std::vector<int> ns{2, 3, 4, 5};
    const auto qc = exponent_curve(rho, sigma, 0.05, ns, Strategy::quantum_np);
    const auto dc = exponent_curve(rho, sigma, 0.05, ns, Strategy::designed_measurement, 7);
    const auto nc = exponent_curve(rho, sigma, 0.05, ns, Strategy::naive_product_basis);
    for (size_t i = 0; i < ns.size(); ++i) {
        CHECK(dc.beta_values[i] >= qc.beta_values[i] - 1e-12);
        CHECK(nc.beta_values[i] >= qc.beta_values[i] - 1e-12);
    }
    CHECK(dc.slope_estimate <= qc.slope_estimate + 1e-9);
}

TEST_CASE("exponent curve input validation") {
    const auto rho = diag_state({0.9, 0.1});
    const auto sigma = diag_state({0.2, 0.8});
    CHECK_THROWS_AS(exponent_curve(rho, sigma, 0.05, std::vector<int>{}, Strategy::quantum_np),
                    PreconditionError);
    CHECK_THROWS_AS(
        exponent_curve(rho, sigma, 0.05, std::vector<int>{3, 2}, Strategy::quantum_np),
        PreconditionError);
    CHECK_THROWS_AS(quantum_np_test(rho, sigma, 1.5), PreconditionError);
    CHECK_THROWS_AS(quantum_np_test(rho, diag_state({1.0, 0.0}), 0.3), SingularStateError);
}
