#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "steinlab/inequalities.hpp"
#include "steinlab/operator_algebra.hpp"
#include "steinlab/rng.hpp"

using namespace steinlab;

namespace {

DensityOperator mixed(int dim) {
    return DensityOperator(Matrix(Matrix::Identity(dim, dim) / double(dim)));
}

DensityOperator plus_state() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return DensityOperator(std::move(m));
}

}  // namespace

TEST_CASE("plog2_max closed forms") {
    CHECK(plog2_max(3) == doctest::Approx(std::log(3.0) * std::log(3.0)).epsilon(1e-15));
    CHECK(plog2_max(3) == doctest::Approx(1.20695).epsilon(1e-5));
    CHECK(plog2_max(4) == doctest::Approx(1.92181).epsilon(1e-5));
    CHECK(plog2_max(4) >= plog2_max(3));
    CHECK(plog2_max(2) == doctest::Approx(0.56290).epsilon(1e-4));
    CHECK_THROWS_AS(plog2_max(1), PreconditionError);
}

TEST_CASE("plog2_max matches its oracles") {
    for (int k : {2, 3, 4})
        CHECK(plog2_max(k) == doctest::Approx(plog2_max_oracle(k, 100000)).epsilon(1e-8));
    // Independent fine-grid oracle for the k = 2 constant.
    CHECK(plog2_max(2) == doctest::Approx(oracles::plog2_k2_grid_max(1000000)).epsilon(1e-9));
}

TEST_CASE("degenerate distributions never win") {
    // x (ln x)^2 -> 0 at the simplex vertex, so the max stays above it.
    for (int k : {2, 3, 4}) CHECK(plog2_max_oracle(k, 10000) > 0.1);
}

TEST_CASE("lemma-2 bound") {
    auto rng = labeled_stream(101, "test.lemma2");

    SUBCASE("pinching in the state's own eigenbasis gives zero lhs") {
        const auto rho = mixed(3);
        const auto m = random_rank_one_pvm(3, rng);
        const auto res = check_lemma2(rho, Pvm::trivial(3), m);
        CHECK(res.lhs == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(res.rhs == doctest::Approx(4 * std::log(3.0) * std::log(3.0)));
        CHECK(res.ok);
    }

    SUBCASE("random states against the trivial coarse PVM") {
        for (int trial = 0; trial < 100; ++trial) {
            const auto rho = random_density(4, rng);
            const auto m = random_rank_one_pvm(4, rng);
            CHECK(check_lemma2(rho, Pvm::trivial(4), m).ok);
        }
    }

    SUBCASE("adversarial random search never violates") {
        for (int trial = 0; trial < 200; ++trial) {
            const int dim = 3 + trial % 3;
            const auto rho = random_density(dim, rng);
            const auto m = random_rank_one_pvm(dim, rng);
            const auto res = check_lemma2(rho, Pvm::trivial(dim), m);
            CHECK(res.lhs <= res.rhs + 1e-9);
        }
    }

    SUBCASE("preconditions") {
        const auto rho = mixed(2);
        const auto m = random_rank_one_pvm(2, rng);
        CHECK_THROWS_AS(check_lemma2(rho, Pvm::trivial(2), m), PreconditionError);  // w = 2
        CHECK_THROWS_AS(check_lemma2(plus_state(), Pvm::computational_basis(2),
                                     Pvm::computational_basis(2)),
                        CommutativityError);
    }
}

TEST_CASE("pinching bound rho <= k E_M(rho)") {
    auto rng = labeled_stream(103, "test.c1");

    SUBCASE("diagonal state, computational measurement") {
        const auto rho = DensityOperator(
            Matrix(Eigen::Vector2cd(0.8, 0.2).asDiagonal()));
        CHECK(check_lemma_c1(rho, Pvm::computational_basis(2)) >= -1e-12);
    }

    SUBCASE("pure superposition saturates the bound") {
        const double lam = check_lemma_c1(plus_state(), Pvm::computational_basis(2));
        CHECK(lam >= -1e-10);
        CHECK(lam <= 1e-10);  // I - |+><+| has a kernel vector
    }

    SUBCASE("500 random pairs, with saturation observed") {
        double global_min = 1e9;
        for (int trial = 0; trial < 500; ++trial) {
            const int dim = 2 + trial % 5;
            const auto rho =
                (trial % 10 == 0) ? random_pure(dim, rng) : random_density(dim, rng);
            const auto m = random_rank_one_pvm(dim, rng);
            const double lam = check_lemma_c1(rho, m);
            CHECK(lam >= -1e-10);
            global_min = std::min(global_min, lam);
        }
        CHECK(global_min <= 1e-6);  // pure-state trials sit on the boundary
    }
}

TEST_CASE("operator power bound w^t rho^-t >= pinched^-t") {
    auto rng = labeled_stream(107, "test.c2");

    SUBCASE("uniform state, trivial coarse PVM") {
        CHECK(check_lemma_c2(mixed(3), Pvm::trivial(3), random_rank_one_pvm(3, rng), 1.0) >=
              -1e-9);
    }

    SUBCASE("pinching by the state's own eigen-PVM") {
        const auto rho = random_density(3, rng);
        const auto own = spectral(rho.op(), 1e-12).eigenprojectors;
        // E_M(rho) = rho, so the gap is (w^t - 1) rho^-t >= 0.
        CHECK(check_lemma_c2(rho, own, own, 0.5) >= -1e-9);
    }

    SUBCASE("random stress across t") {
        for (int trial = 0; trial < 100; ++trial) {
            const auto rho = random_density(3, rng);
            const auto m = random_rank_one_pvm(3, rng);
            for (double t : {0.25, 0.5, 1.0})
                CHECK(check_lemma_c2(rho, Pvm::trivial(3), m, t) >= -1e-8);
        }
    }

    SUBCASE("preconditions") {
        CHECK_THROWS_AS(
            check_lemma_c2(mixed(3), Pvm::trivial(3), random_rank_one_pvm(3, rng), 1.5),
            PreconditionError);
        CHECK_THROWS_AS(check_lemma_c2(plus_state(), Pvm::computational_basis(2),
                                       Pvm::computational_basis(2), 0.5),
                        CommutativityError);
    }
}
