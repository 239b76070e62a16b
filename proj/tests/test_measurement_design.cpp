#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "oracles.hpp"
#include "steinlab/measurement_design.hpp"
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

DensityOperator plus_state() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return DensityOperator(std::move(m));
}

DensityOperator rotated_qubit(double angle, double w0, double w1) {
    const Matrix r = oracles::rotation2(angle);
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << w0, w1;
    return DensityOperator(Matrix(r * d * r.adjoint()));
}

double max_sigma_commutator(const DesignedMeasurement& dm, const Matrix& sigma_n) {
    double worst = 0;
    for (int i = 0; i < dm.m.size(); ++i)
        worst = std::max(worst,
                         projector_commutator_norm(dm.m.element(i).isometry, sigma_n));
    return worst;
}

}  // namespace

TEST_CASE("design_measurement on a single diagonal copy") {
    const auto sigma = diag_state({0.25, 0.75});
    const auto decomp = irreducible_decomposition(1, 2, 1);
    const auto dm = design_measurement(sigma, sigma, decomp);
    CHECK(dm.n == 1);
    CHECK(dm.m.size() == 2);
    CHECK(dm.m.width() == 1);
    // Outcome masses are sigma's eigenvalues and the stored log-likelihoods
    // match -log sigma_ii.
    std::multiset<double> logs(dm.sigma_loglik.begin(), dm.sigma_loglik.end());
    auto it = logs.begin();
    CHECK(*it == doctest::Approx(-std::log(0.75)));
    CHECK(*std::next(it) == doctest::Approx(-std::log(0.25)));
}

TEST_CASE("design_measurement on two copies") {
    const auto sigma = diag_state({0.25, 0.75});
    const auto rho = plus_state();
    const auto decomp = irreducible_decomposition(2, 2, 7);
    const auto dm = design_measurement(rho, sigma, decomp);

    CHECK(dm.m.size() == 4);  // sym x {1/16, 3/16, 9/16} + antisym x {3/16}
    CHECK(dm.m.width() == 1);
    CHECK(refines(dm.m, decomp.blocks));
    CHECK_NOTHROW(dm.m.verify(1e-9));

    const auto sigma_2 = tensor_power(sigma, 2);
    CHECK(max_sigma_commutator(dm, sigma_2.matrix()) < 1e-8);

    // Outcome q-masses: the sigma^2 eigenvalues split across joint blocks.
    std::multiset<double> qs;
    for (double l : dm.sigma_loglik) qs.insert(std::exp(-2 * l));
    auto it = qs.begin();
    CHECK(*it == doctest::Approx(1.0 / 16));
    CHECK(*std::next(it) == doctest::Approx(3.0 / 16));
    CHECK(*std::next(it, 2) == doctest::Approx(3.0 / 16));
    CHECK(*std::next(it, 3) == doctest::Approx(9.0 / 16));
}

TEST_CASE("design_measurement refines its decomposition on random inputs") {
    auto rng = labeled_stream(61, "test.design");
    for (int n : {2, 3}) {
        const auto rho = random_density(2, rng);
        const auto sigma = random_density(2, rng);
        const auto decomp = irreducible_decomposition(n, 2, 100 + n);
        const auto dm = design_measurement(rho, sigma, decomp);
        CHECK(dm.m.width() == 1);
        CHECK(refines(dm.m, decomp.blocks));
        const auto sigma_n = tensor_power(sigma, n);
        CHECK(max_sigma_commutator(dm, sigma_n.matrix()) < 1e-8);
        // rho outcome masses stored correctly.
        const auto p = measure(tensor_power(rho, n), dm.m);
        for (int i = 0; i < dm.m.size(); ++i)
            CHECK(p.probabilities[i] == doctest::Approx(dm.rho_probs[i]).epsilon(1e-9));
    }
    CHECK_THROWS_AS(
        design_measurement(plus_state(), diag_state({1.0, 0.0}),
                           irreducible_decomposition(2, 2, 1)),
        SingularStateError);
}

TEST_CASE("pinching by the designed measurement fixes sigma powers") {
    auto rng = labeled_stream(67, "test.design.pinch");
    const auto rho = random_density(2, rng);
    const auto sigma = random_density(2, rng);
    const int n = 3;
    const auto dm = design_measurement(rho, sigma, irreducible_decomposition(n, 2, 5));
    const auto sigma_n = tensor_power(sigma, n);
    CHECK(operator_norm(pinch(dm.m, sigma_n.op()).matrix() - sigma_n.matrix()) < 1e-9);
}

TEST_CASE("sigma spectrum under rho") {
    const auto sigma = diag_state({0.25, 0.75});

    SUBCASE("identical hypotheses: mean is the per-copy entropy") {
        const int n = 2;
        const auto dm = design_measurement(sigma, sigma, irreducible_decomposition(n, 2, 2));
        const auto s = sigma_spectrum_under_rho(dm, tensor_power(sigma, n),
                                                tensor_power(sigma, n), n);
        double mean = 0;
        for (size_t i = 0; i < s.values.size(); ++i) mean += s.values[i] * s.p_mass[i];
        CHECK(mean >= -1e-12);  // entropy positivity
        const double entropy = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
        CHECK(mean == doctest::Approx(entropy).epsilon(1e-9));
    }

    SUBCASE("commuting diagonal pair at n = 1") {
        const auto rho = diag_state({0.3, 0.7});
        const auto dm = design_measurement(rho, sigma, irreducible_decomposition(1, 2, 3));
        const auto s =
            sigma_spectrum_under_rho(dm, tensor_power(rho, 1), tensor_power(sigma, 1), 1);
        REQUIRE(s.values.size() == 2);
        // Values -log sigma_ii with masses rho_ii (descending sigma order).
        CHECK(s.values[0] == doctest::Approx(-std::log(0.75)));
        CHECK(s.p_mass[0] == doctest::Approx(0.7));
        CHECK(s.values[1] == doctest::Approx(-std::log(0.25)));
        CHECK(s.p_mass[1] == doctest::Approx(0.3));
    }

    SUBCASE("rotated qubit pair: exact first moment") {
        const auto rho = rotated_qubit(0.5, 0.3, 0.7);
        const int n = 4;
        const auto dm = design_measurement(rho, sigma, irreducible_decomposition(n, 2, 4));
        const auto s = sigma_spectrum_under_rho(dm, tensor_power(rho, n),
                                                tensor_power(sigma, n), n);
        double mean = 0, total_p = 0, total_q = 0;
        for (size_t i = 0; i < s.values.size(); ++i) {
            mean += s.values[i] * s.p_mass[i];
            total_p += s.p_mass[i];
            total_q += s.q_mass[i];
        }
        CHECK(total_p == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(total_q == doctest::Approx(1.0).epsilon(1e-9));
        const double target = -real_trace_product(rho.matrix(), matrix_log(sigma).matrix());
        // For a sigma-commuting rank-one refinement the p-mean is exact.
        CHECK(mean == doctest::Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("variance identity is exact") {
    const auto sigma = diag_state({0.25, 0.75});

    SUBCASE("identical hypotheses") {
        const auto dm = design_measurement(sigma, sigma, irreducible_decomposition(3, 2, 8));
        CHECK(variance_identity_gap(dm, sigma, sigma, 3) < 1e-10);
    }
    SUBCASE("commuting diagonal pair at n = 3") {
        const auto rho = diag_state({0.6, 0.4});
        const auto dm = design_measurement(rho, sigma, irreducible_decomposition(3, 2, 9));
        CHECK(variance_identity_gap(dm, rho, sigma, 3) < 1e-10);
    }
    SUBCASE("non-commuting qubit pair across n") {
        const auto rho = rotated_qubit(0.7, 0.8, 0.2);
        for (int n = 2; n <= 6; ++n) {
            const auto dm =
                design_measurement(rho, sigma, irreducible_decomposition(n, 2, 10 + n));
            CHECK(variance_identity_gap(dm, rho, sigma, n) < 1e-9);

            // Independent evaluation of both sides.
            const auto p = measure(tensor_power(rho, n), dm.m);
            const auto q = measure(tensor_power(sigma, n), dm.m);
            const double tr_rho_log_sigma =
                real_trace_product(rho.matrix(), matrix_log(sigma).matrix());
            const double lhs = oracles::variance_identity_lhs(p.probabilities, q.probabilities,
                                                              n, tr_rho_log_sigma);
            const double rhs = relative_log_variance(rho, sigma) / n;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
    }
    SUBCASE("random qutrit pairs") {
        auto rng = labeled_stream(93, "test.identity.k3");
        for (int n = 2; n <= 4; ++n) {
            const auto rho3 = random_density(3, rng);
            DensityOperator sigma3 = [&] {
                for (;;) {
                    auto s = random_density(3, rng);
                    Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix(),
                                                             Eigen::EigenvaluesOnly);
                    if (es.eigenvalues().minCoeff() > 1e-3) return s;
                }
            }();
            const auto dm =
                design_measurement(rho3, sigma3, irreducible_decomposition(n, 3, 40 + n));
            CHECK(variance_identity_gap(dm, rho3, sigma3, n) < 1e-9);
        }
    }
}

TEST_CASE("variance of the spectrum shrinks like 1/n") {
    const auto rho = rotated_qubit(0.5, 0.3, 0.7);
    const auto sigma = diag_state({0.25, 0.75});
    const double tr_rho_log_sigma =
        real_trace_product(rho.matrix(), matrix_log(sigma).matrix());
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {2, 4, 6, 8}) {
        const auto dm = design_measurement(rho, sigma, irreducible_decomposition(n, 2, 20 + n));
        const auto s =
            sigma_spectrum_under_rho(dm, tensor_power(rho, n), tensor_power(sigma, n), n);
        double var = 0;
        for (size_t i = 0; i < s.values.size(); ++i) {
            const double dev = s.values[i] + tr_rho_log_sigma;
            var += s.p_mass[i] * dev * dev;
        }
        CHECK(var <= prev * 1.05);  // monotone within 5% slack
        prev = var;
    }
}

TEST_CASE("chernoff-markov bound") {
    const auto rho = rotated_qubit(0.6, 0.75, 0.25);
    const auto sigma = diag_state({0.3, 0.7});
    const int n = 4;
    const auto dm = design_measurement(rho, sigma, irreducible_decomposition(n, 2, 12));
    const auto rho_n = tensor_power(rho, n);

    const double target = -real_trace_product(rho.matrix(), matrix_log(sigma).matrix());

    // Above the mean: strictly positive exponent.
    CHECK(chernoff_markov_bound(dm, rho_n, n, target + 0.1) > 0);
    // Far below the mean: the supremum sits at t = 0.
    CHECK(chernoff_markov_bound(dm, rho_n, n, -50.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("chernoff bound dominates direct tail sums") {
    auto rng = labeled_stream(71, "test.chernoff");
    std::uniform_real_distribution<double> adraw(-0.5, 2.5);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = random_density(2, rng);
        const auto sigma = random_density(2, rng);
        const int n = 2 + trial % 4;
        const auto dm =
            design_measurement(rho, sigma, irreducible_decomposition(n, 2, 500 + trial));
        const auto rho_n = tensor_power(rho, n);
        const auto s = sigma_spectrum_under_rho(dm, rho_n, tensor_power(sigma, n), n);
        const double a = adraw(rng);
        double tail = 0;
        for (size_t i = 0; i < s.values.size(); ++i)
            if (s.values[i] > a) tail += s.p_mass[i];
        const double bound = chernoff_markov_bound(dm, rho_n, n, a);
        CHECK(tail <= std::exp(-n * bound) + 1e-12);
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("tr_rho_sigma_negpower") {
    const auto rho = diag_state({0.3, 0.7});
    const auto sigma = diag_state({0.25, 0.75});
    CHECK(tr_rho_sigma_negpower(rho, sigma, 0.0) == doctest::Approx(1.0));
    CHECK(tr_rho_sigma_negpower(diag_state({0.5, 0.5}), diag_state({0.5, 0.5}), 1.0) ==
          doctest::Approx(2.0));
    CHECK(tr_rho_sigma_negpower(rho, sigma, 0.5) ==
          doctest::Approx(0.3 * 2.0 + 0.7 * 2.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(tr_rho_sigma_negpower(rho, sigma, 0.5) == doctest::Approx(1.40829).epsilon(1e-4));
    CHECK_THROWS_AS(tr_rho_sigma_negpower(rho, diag_state({1.0, 0.0}), 0.5),
                    SingularStateError);
}

TEST_CASE("variance identity rejects mismatched preconditions") {
    const auto sigma = diag_state({0.25, 0.75});
    const auto dm = design_measurement(sigma, sigma, irreducible_decomposition(2, 2, 2));
    CHECK_THROWS_AS(variance_identity_gap(dm, sigma, sigma, 3), PreconditionError);
}
