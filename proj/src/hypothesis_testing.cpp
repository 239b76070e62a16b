#include "steinlab/hypothesis_testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "steinlab/info_spectrum.hpp"
#include "steinlab/operator_algebra.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

namespace {

constexpr const char* kModule = "hypothesis_testing";
constexpr double kInf = std::numeric_limits<double>::infinity();

struct WeightedOutcome {
    double p;
    double q;
    Vector vec;
};

// Joint eigendecomposition of a commuting pair: refine each sigma eigenspace
// by the restricted rho.
std::vector<WeightedOutcome> joint_eigensystem(const DensityOperator& rho_n,
                                               const DensityOperator& sigma_n) {
    const SpectralDecomposition ss = spectral_relative_gaps(sigma_n.op());
    std::vector<WeightedOutcome> out;
    out.reserve(rho_n.dim());
    for (int b = 0; b < ss.eigenprojectors.size(); ++b) {
        const Matrix& v = ss.eigenprojectors.element(b).isometry;
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(v.adjoint() * rho_n.matrix() * v));
        const Matrix vecs = v * es.eigenvectors();
        for (Eigen::Index c = 0; c < vecs.cols(); ++c)
            out.push_back({std::max(0.0, es.eigenvalues()(c)), ss.eigenvalues[b], vecs.col(c)});
    }
    return out;
}

// NP test for a commuting pair assembled from the joint eigensystem: accept
// above the threshold ratio, randomize uniformly on the tied group.
NpTest commuting_np_test(const DensityOperator& rho_n, const DensityOperator& sigma_n,
                         double epsilon) {
    auto outcomes = joint_eigensystem(rho_n, sigma_n);
    const int d = rho_n.dim();
    auto ratio_of = [](const WeightedOutcome& w) {
        if (w.p <= 0) return -kInf;
        if (w.q <= 0) return kInf;
        return std::log(w.p / w.q);
    };
    std::stable_sort(outcomes.begin(), outcomes.end(),
                     [&](const auto& a, const auto& b) { return ratio_of(a) > ratio_of(b); });

    const double target = 1.0 - epsilon;
    double acc = 0;
    size_t boundary_begin = outcomes.size();
    for (size_t i = 0; i < outcomes.size(); ++i) {
        if (acc + outcomes[i].p >= target - 1e-15) {
            boundary_begin = i;
            break;
        }
        acc += outcomes[i].p;
    }
    // Extend to the whole tied group so the randomized part is a projector.
    size_t boundary_end = boundary_begin;
    if (boundary_begin < outcomes.size()) {
        const double r0 = ratio_of(outcomes[boundary_begin]);
        while (boundary_begin > 0 &&
               std::abs(ratio_of(outcomes[boundary_begin - 1]) - r0) <=
                   1e-12 * std::max(1.0, std::abs(r0))) {
            --boundary_begin;
            acc -= outcomes[boundary_begin].p;
        }
        boundary_end = boundary_begin;
        while (boundary_end < outcomes.size() &&
               std::abs(ratio_of(outcomes[boundary_end]) - r0) <=
                   1e-12 * std::max(1.0, std::abs(r0)))
            ++boundary_end;
    }

    Matrix proj = Matrix::Zero(d, d);
    Matrix kern = Matrix::Zero(d, d);
    double p_above = 0, q_above = 0, p_group = 0, q_group = 0;
    for (size_t i = 0; i < boundary_begin; ++i) {
        proj += outcomes[i].vec * outcomes[i].vec.adjoint();
        p_above += outcomes[i].p;
        q_above += outcomes[i].q;
    }
    for (size_t i = boundary_begin; i < boundary_end; ++i) {
        kern += outcomes[i].vec * outcomes[i].vec.adjoint();
        p_group += outcomes[i].p;
        q_group += outcomes[i].q;
    }
    const double gamma =
        p_group > 1e-300 ? std::clamp((target - p_above) / p_group, 0.0, 1.0) : 0.0;
    const double threshold =
        boundary_begin < outcomes.size() ? ratio_of(outcomes[boundary_begin]) : -kInf;

    NpTest t{TestOperator(HermitianOperator(std::move(proj), Validate::trusted),
                          Validate::trusted),
             HermitianOperator(std::move(kern), Validate::trusted), gamma, threshold, 0, 0};
    t.alpha = 1.0 - (p_above + gamma * p_group);
    t.beta = q_above + gamma * q_group;
    return t;
}

struct PositivePart {
    Matrix proj;     // strictly positive eigenspace projector
    Matrix kernel;   // |eigenvalue| <= ktol
    double trace_rho_proj;
    double trace_rho_kernel;
};

PositivePart positive_part(const Matrix& pencil, const Matrix& rho, double ktol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(pencil);
    const int d = static_cast<int>(pencil.rows());
    Matrix proj = Matrix::Zero(d, d);
    Matrix kern = Matrix::Zero(d, d);
    double tp = 0, tk = 0;
    for (int i = 0; i < d; ++i) {
        const double lambda = es.eigenvalues()(i);
        const auto v = es.eigenvectors().col(i);
        if (lambda > ktol) {
            proj += v * v.adjoint();
            tp += (v.adjoint() * rho * v)(0, 0).real();
        } else if (lambda >= -ktol) {
            kern += v * v.adjoint();
            tk += (v.adjoint() * rho * v)(0, 0).real();
        }
    }
    return {std::move(proj), std::move(kern), tp, tk};
}

double acceptance_mass(const Matrix& rho, const Matrix& sigma, double c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(rho - c * sigma));
    double acc = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0)
            acc += (es.eigenvectors().col(i).adjoint() * rho * es.eigenvectors().col(i))(0, 0)
                       .real();
    return acc;
}

}  // namespace

TestOperator NpTest::full_operator() const {
    Matrix a = projector_part.matrix() + boundary_weight * kernel_part.matrix();
    return TestOperator(HermitianOperator(std::move(a), Validate::trusted), Validate::trusted);
}

NpTest quantum_np_test(const DensityOperator& rho_n, const DensityOperator& sigma_n,
                       double epsilon, int n) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw PreconditionError(kModule, "quantum_np_test", "epsilon must lie in (0, 1)");
    if (n < 1) throw PreconditionError(kModule, "quantum_np_test", "n must be >= 1");
    if (rho_n.dim() != sigma_n.dim())
        throw DimensionError(kModule, "quantum_np_test", "dimension mismatch");
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_n.matrix(), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= tol::support)
            throw SingularStateError(kModule, "quantum_np_test",
                                     "sigma^n must be strictly positive");
    }

    // Commuting pairs reduce exactly to classical NP on the joint eigenvalues;
    // this path also avoids per-bisection eigensolves. Cross-validated against
    // the general path in the test suite.
    const double scale = std::max(operator_norm(rho_n.matrix()), 1.0);
    if (commutator_norm(rho_n.matrix(), sigma_n.matrix()) <= 1e-12 * scale) {
        NpTest t = commuting_np_test(rho_n, sigma_n, epsilon);
        t.threshold /= n;  // per-copy nats
        return t;
    }

    const double target = 1.0 - epsilon;
    // Upper end of the generalized spectrum.
    const double c_hi = [&] {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_n.matrix());
        Matrix inv_sqrt = es.eigenvectors() *
                          es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint();
        Eigen::SelfAdjointEigenSolver<Matrix> ew(
            Matrix(inv_sqrt * rho_n.matrix() * inv_sqrt), Eigen::EigenvaluesOnly);
        return ew.eigenvalues().maxCoeff() + 1.0;
    }();

    double lo = 0.0, hi = c_hi;
    for (int iter = 0; iter < 120 && (hi - lo) > 1e-16 * std::max(1.0, hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (acceptance_mass(rho_n.matrix(), sigma_n.matrix(), mid) >= target)
            lo = mid;
        else
            hi = mid;
    }
    const double c = 0.5 * (lo + hi);
    const Matrix pencil = rho_n.matrix() - c * sigma_n.matrix();
    const double ktol = 1e-9 * std::max(operator_norm(pencil), 1e-30);
    PositivePart pp = positive_part(pencil, rho_n.matrix(), ktol);

    const double gamma = pp.trace_rho_kernel > 1e-15
                             ? std::clamp((target - pp.trace_rho_proj) / pp.trace_rho_kernel,
                                          0.0, 1.0)
                             : 0.0;
    NpTest t{TestOperator(HermitianOperator(std::move(pp.proj), Validate::trusted),
                          Validate::trusted),
             HermitianOperator(std::move(pp.kernel), Validate::trusted),
             gamma,
             c > 0 ? std::log(c) / n : -kInf,
             0,
             0};
    const Matrix a = t.full_operator().matrix();
    t.alpha = 1.0 - real_trace_product(rho_n.matrix(), a);
    t.beta = real_trace_product(sigma_n.matrix(), a);
    return t;
}

double beta_star(const DensityOperator& rho, const DensityOperator& sigma, int n,
                 double epsilon) {
    const DensityOperator rho_n = tensor_power(rho, n);
    const DensityOperator sigma_n = tensor_power(sigma, n);
    return quantum_np_test(rho_n, sigma_n, epsilon, n).beta;
}

double measured_beta(const DensityOperator& rho, const DensityOperator& sigma, int n,
                     double epsilon, const DesignedMeasurement& dm) {
    const DensityOperator rho_n = tensor_power(rho, n);
    const DensityOperator sigma_n = tensor_power(sigma, n);
    if (dm.m.dim() != rho_n.dim())
        throw DimensionError(kModule, "measured_beta", "measurement dimension mismatch");
    const OutcomeDistribution p = measure(rho_n, dm.m);
    const OutcomeDistribution q = measure(sigma_n, dm.m);
    DistributionPair dp{p.probabilities, q.probabilities, n};
    // Renormalize rounding residue so classical_np's validation passes.
    double sp = 0, sq = 0;
    for (double x : dp.p) sp += x;
    for (double x : dp.q) sq += x;
    for (double& x : dp.p) x /= sp;
    for (double& x : dp.q) x /= sq;
    return classical_np(dp, epsilon).beta_star;
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::quantum_np: return "quantum_np";
        case Strategy::designed_measurement: return "designed_measurement";
        case Strategy::naive_product_basis: return "naive_product_basis";
    }
    return "unknown";
}

namespace {

// Least-squares exponent estimates over the largest-60% window.
void fit_slopes(const std::vector<int>& ns, const std::vector<double>& minus_log_beta,
                ExponentCurve& out) {
    const int len = static_cast<int>(ns.size());
    const int w = std::max(2, static_cast<int>(std::ceil(0.6 * len)));
    const int start = std::max(0, len - w);
    const int m = len - start;
    Eigen::MatrixXd a1(m, 2);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        a1(i, 0) = ns[start + i];
        a1(i, 1) = 1.0;
        y(i) = minus_log_beta[start + i];
    }
    Eigen::VectorXd sol = a1.colPivHouseholderQr().solve(y);
    out.slope_estimate = sol(0);
    out.residual_norm = (a1 * sol - y).norm();
    if (m >= 3) {
        Eigen::MatrixXd a2(m, 3);
        for (int i = 0; i < m; ++i) {
            a2(i, 0) = ns[start + i];
            a2(i, 1) = std::sqrt(static_cast<double>(ns[start + i]));
            a2(i, 2) = 1.0;
        }
        Eigen::VectorXd sol2 = a2.colPivHouseholderQr().solve(y);
        out.slope_estimate_corrected = sol2(0);
    } else {
        out.slope_estimate_corrected = out.slope_estimate;
    }
}

}  // namespace

ExponentCurve exponent_curve(const DensityOperator& rho, const DensityOperator& sigma,
                             double epsilon, std::span<const int> n_range, Strategy strategy,
                             std::uint64_t seed) {
    if (n_range.empty())
        throw PreconditionError(kModule, "exponent_curve", "empty n range");
    if (!std::is_sorted(n_range.begin(), n_range.end()))
        throw PreconditionError(kModule, "exponent_curve", "n range must be ascending");

    ExponentCurve curve;
    std::vector<double> minus_log_beta;
    for (int n : n_range) {
        double beta = 0, alpha = epsilon;
        switch (strategy) {
            case Strategy::quantum_np: {
                const DensityOperator rho_n = tensor_power(rho, n);
                const DensityOperator sigma_n = tensor_power(sigma, n);
                const NpTest t = quantum_np_test(rho_n, sigma_n, epsilon, n);
                beta = t.beta;
                alpha = t.alpha;
                break;
            }
            case Strategy::designed_measurement: {
                const auto decomp =
                    irreducible_decomposition(n, rho.dim(), seed + static_cast<std::uint64_t>(n));
                const auto dm = design_measurement(rho, sigma, decomp);
                beta = measured_beta(rho, sigma, n, epsilon, dm);
                break;
            }
            case Strategy::naive_product_basis: {
                // i.i.d. measurement of each copy in sigma's eigenbasis.
                const SpectralDecomposition ss = spectral(sigma.op(), 1e-12);
                std::vector<double> p1, q1;
                for (int b = 0; b < ss.eigenprojectors.size(); ++b) {
                    const Matrix& v = ss.eigenprojectors.element(b).isometry;
                    for (Eigen::Index c = 0; c < v.cols(); ++c) {
                        p1.push_back(std::max(
                            0.0, (v.col(c).adjoint() * rho.matrix() * v.col(c))(0, 0).real()));
                        q1.push_back(ss.eigenvalues[b]);
                    }
                }
                std::vector<double> p{1.0}, q{1.0};
                for (int copy = 0; copy < n; ++copy) {
                    std::vector<double> np_, nq_;
                    np_.reserve(p.size() * p1.size());
                    nq_.reserve(q.size() * q1.size());
                    for (size_t a = 0; a < p.size(); ++a)
                        for (size_t b = 0; b < p1.size(); ++b) {
                            np_.push_back(p[a] * p1[b]);
                            nq_.push_back(q[a] * q1[b]);
                        }
                    p = std::move(np_);
                    q = std::move(nq_);
                }
                double sp = std::accumulate(p.begin(), p.end(), 0.0);
                double sq = std::accumulate(q.begin(), q.end(), 0.0);
                for (auto& x : p) x /= sp;
                for (auto& x : q) x /= sq;
                beta = classical_np(DistributionPair{std::move(p), std::move(q), n}, epsilon)
                           .beta_star;
                break;
            }
        }
        curve.n_values.push_back(n);
        curve.beta_values.push_back(beta);
        curve.alpha_values.push_back(alpha);
        minus_log_beta.push_back(-std::log(std::max(beta, 1e-300)));
    }
    fit_slopes(curve.n_values, minus_log_beta, curve);
    return curve;
}

}  // namespace steinlab
