#include "steinlab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace steinlab {

namespace {

constexpr const char* kModule = "gaussian";

struct Quadrature {
    RealVector nodes;
    RealVector weights;
};

// Golub-Welsch nodes and weights for the weight e^{-x^2}.
Quadrature gauss_hermite(int q) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(q, q);
    for (int i = 1; i < q; ++i) {
        const double off = std::sqrt(i / 2.0);
        j(i - 1, i) = off;
        j(i, i - 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    if (es.info() != Eigen::Success)
        throw Error(kModule, "gauss_hermite", "tridiagonal eigensolver failed");
    Quadrature out{es.eigenvalues(), RealVector(q)};
    for (int i = 0; i < q; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        out.weights(i) = std::sqrt(M_PI) * v0 * v0;
    }
    return out;
}

int full_matrix_nodes(int cutoff) { return std::max(64, std::min(cutoff, 192)); }
int diagonal_nodes(int cutoff) {
    return std::max(128, std::min(384, static_cast<int>(std::ceil(0.4 * cutoff))));
}

void check_cutoff(int cutoff, const char* op) {
    if (cutoff < 2) throw PreconditionError(kModule, op, "cutoff must be >= 2");
    if (cutoff > dimension_cap())
        throw DimensionError(kModule, op, "cutoff exceeds the dimension cap");
}

void check_deficit(double total, double nbar, double amp2, const char* op) {
    if (total < 1.0 - 1e-8)
        throw CutoffError(kModule, op,
                          "trace deficit " + std::to_string(1.0 - total) +
                              " exceeds 1e-8; increase the cutoff",
                          recommended_cutoff(nbar, amp2));
}

}  // namespace

int recommended_cutoff(double nbar, double amp2) {
    return std::max(40, static_cast<int>(std::ceil(8.0 * (nbar + amp2))));
}

Vector coherent_vector(Complex alpha, int cutoff) {
    check_cutoff(cutoff, "coherent_vector");
    Vector c(cutoff);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int k = 1; k < cutoff; ++k) c(k) = c(k - 1) * alpha / std::sqrt(static_cast<double>(k));
    return c;
}

DensityOperator gaussian_state(const GaussianParams& gp) {
    check_cutoff(gp.cutoff, "gaussian_state");
    if (gp.nbar <= 0)
        throw PreconditionError(kModule, "gaussian_state", "nbar must be > 0");
    const int q = full_matrix_nodes(gp.cutoff);
    const Quadrature gh = gauss_hermite(q);
    const double s = std::sqrt(gp.nbar);

    // rho = V V^dagger with one weighted coherent column per 2-D node.
    Matrix v(gp.cutoff, q * q);
    int col = 0;
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            const Complex alpha = gp.theta + s * Complex(gh.nodes(a), gh.nodes(b));
            v.col(col++) = std::sqrt(gh.weights(a) * gh.weights(b) / M_PI) *
                           coherent_vector(alpha, gp.cutoff);
        }
    }
    Matrix rho = v * v.adjoint();
    const double tr = rho.trace().real();
    check_deficit(tr, gp.nbar, std::norm(gp.theta), "gaussian_state");
    rho /= tr;
    return DensityOperator(HermitianOperator(std::move(rho), Validate::trusted),
                           Validate::trusted);
}

DensityOperator gaussian_state_displaced(const GaussianParams& gp) {
    check_cutoff(gp.cutoff, "gaussian_state_displaced");
    if (gp.nbar <= 0)
        throw PreconditionError(kModule, "gaussian_state_displaced", "nbar must be > 0");
    const int d = gp.cutoff;

    // K = theta a^dagger - conj(theta) a is anti-Hermitian; D = exp(K) via the
    // eigensystem of iK. The truncated D is exactly unitary.
    Matrix ik = Matrix::Zero(d, d);
    for (int k = 1; k < d; ++k) {
        const double root = std::sqrt(static_cast<double>(k));
        ik(k, k - 1) = Complex(0, 1) * gp.theta * root;       // i theta a^dagger
        ik(k - 1, k) = -Complex(0, 1) * std::conj(gp.theta) * root;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(ik);
    if (es.info() != Eigen::Success)
        throw Error(kModule, "gaussian_state_displaced", "eigensolver failed");
    Vector phases(d);
    for (int i = 0; i < d; ++i)
        phases(i) = std::exp(Complex(0, -es.eigenvalues()(i)));
    const Matrix disp = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

    RealVector thermal(d);
    for (int k = 0; k < d; ++k)
        thermal(k) = std::pow(gp.nbar, k) / std::pow(1.0 + gp.nbar, k + 1);
    const double tr = thermal.sum();
    check_deficit(tr, gp.nbar, std::norm(gp.theta), "gaussian_state_displaced");

    Matrix rho = disp * (thermal / tr).asDiagonal() * disp.adjoint();
    return DensityOperator(HermitianOperator(std::move(rho), Validate::trusted),
                           Validate::trusted);
}

double NumberDistribution::total() const {
    double s = 0;
    for (double p : probs) s += p;
    return s;
}

double NumberDistribution::mean() const {
    double s = 0;
    for (size_t k = 0; k < probs.size(); ++k) s += k * probs[k];
    return s;
}

NumberDistribution number_distribution(const GaussianParams& gp) {
    check_cutoff(gp.cutoff, "number_distribution");
    if (gp.nbar <= 0)
        throw PreconditionError(kModule, "number_distribution", "nbar must be > 0");
    const int q = diagonal_nodes(gp.cutoff);
    const Quadrature gh = gauss_hermite(q);
    const double s = std::sqrt(gp.nbar);

    NumberDistribution out;
    out.probs.assign(gp.cutoff, 0.0);
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            const Complex alpha = gp.theta + s * Complex(gh.nodes(a), gh.nodes(b));
            const Vector c = coherent_vector(alpha, gp.cutoff);
            const double w = gh.weights(a) * gh.weights(b) / M_PI;
            for (int k = 0; k < gp.cutoff; ++k) out.probs[k] += w * std::norm(c(k));
        }
    }
    check_deficit(out.total(), gp.nbar, std::norm(gp.theta), "number_distribution");
    return out;
}

NumberDistribution reduced_number_distribution(Complex theta0, Complex theta1, double nbar,
                                               int n, int cutoff) {
    if (n < 1)
        throw PreconditionError(kModule, "reduced_number_distribution", "n must be >= 1");
    const Complex amp = std::sqrt(static_cast<double>(n)) * (theta0 - theta1);
    if (std::abs(amp) < 1e-12) {
        // Undisplaced: the statistics are the thermal law itself. The closed
        // evaluation keeps deep tails (beta at 2^-n scales) relatively exact,
        // where a fixed quadrature rule only reaches absolute accuracy.
        check_cutoff(cutoff, "reduced_number_distribution");
        if (nbar <= 0)
            throw PreconditionError(kModule, "reduced_number_distribution", "nbar must be > 0");
        NumberDistribution out;
        out.probs.resize(cutoff);
        for (int k = 0; k < cutoff; ++k)
            out.probs[k] = std::pow(nbar, k) / std::pow(1.0 + nbar, k + 1);
        check_deficit(out.total(), nbar, 0.0, "reduced_number_distribution");
        return out;
    }
    return number_distribution(GaussianParams{amp, nbar, cutoff});
}

std::pair<double, double> gaussian_test_errors(Complex theta0, Complex theta1, double nbar,
                                               int n, double eps_region, int cutoff) {
    if (!(eps_region > 0))
        throw PreconditionError(kModule, "gaussian_test_errors", "eps_region must be > 0");
    const double dtheta = std::abs(theta0 - theta1);
    const NumberDistribution null_stats =
        reduced_number_distribution(theta0, theta1, nbar, n, cutoff);
    const NumberDistribution alt_stats =
        reduced_number_distribution(theta1, theta1, nbar, n, cutoff);

    // Acceptance region |sqrt(k/n) - dtheta| <= eps; mass truncated past the
    // cutoff counts as rejected (the region is bounded above).
    double accepted = 0;
    for (int k = 0; k < cutoff; ++k) {
        const double stat = std::sqrt(static_cast<double>(k) / n);
        if (std::abs(stat - dtheta) <= eps_region) accepted += null_stats.probs[k];
    }
    const double alpha = 1.0 - accepted;

    // Second error over { sqrt(k/n) >= dtheta } under the thermal statistics;
    // the truncated thermal tail lies inside the region and is added back.
    double beta = alt_stats.deficit();
    for (int k = 0; k < cutoff; ++k) {
        const double stat = std::sqrt(static_cast<double>(k) / n);
        if (stat >= dtheta) beta += alt_stats.probs[k];
    }
    return {alpha, beta};
}

double gaussian_relative_entropy(Complex theta0, Complex theta1, double nbar) {
    if (nbar <= 0)
        throw PreconditionError(kModule, "gaussian_relative_entropy", "nbar must be > 0");
    return std::norm(theta0 - theta1) * std::log1p(1.0 / nbar);
}

}  // namespace steinlab
