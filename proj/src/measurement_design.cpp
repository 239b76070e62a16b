#include "steinlab/measurement_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "steinlab/operator_algebra.hpp"

namespace steinlab {

namespace {

constexpr const char* kModule = "measurement_design";
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DesignedMeasurement design_measurement(const DensityOperator& rho, const DensityOperator& sigma,
                                       const IrreducibleDecomposition& decomp) {
    if (rho.dim() != decomp.k || sigma.dim() != decomp.k)
        throw DimensionError(kModule, "design_measurement",
                             "state dimension does not match the decomposition's local dim");
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.matrix(), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= tol::support)
            throw SingularStateError(kModule, "design_measurement",
                                     "sigma must be strictly positive");
    }
    const int n = decomp.n;
    const DensityOperator rho_n = tensor_power(rho, n);

    // Spectral PVM of sigma^{tensor n} assembled from the single-copy
    // eigensystem: exact eigenvectors, and exact product eigenvalues even
    // where they are absolutely tiny (a dense eigensolve cannot resolve
    // those, and <v|sigma^n|v> would drown them in matvec rounding).
    const SpectralDecomposition sig_spec = tensor_power_spectral(sigma, n);

    // Joint blocks E_b ^ (sigma eigenspace j); sigma^{tensor n} is scalar on
    // each. The loop keeps provenance so every outcome gets the exact
    // eigenvalue as its sigma mass.
    std::vector<Pvm::Element> elems;
    std::vector<double> loglik;
    std::vector<double> rho_probs;
    for (int b = 0; b < decomp.blocks.size(); ++b) {
        const Matrix& vb = decomp.blocks.element(b).isometry;
        for (int j = 0; j < sig_spec.eigenprojectors.size(); ++j) {
            const Matrix& wj = sig_spec.eigenprojectors.element(j).isometry;
            const double comm = projector_pair_commutator_norm(vb, wj);
            if (comm > 1e-8)
                throw DegeneracyError(
                    kModule, "design_measurement",
                    "decomposition block " + std::to_string(b) +
                        " fails to commute with a sigma^n eigenspace (norm " + sci(comm) + ")");
            // Intersection basis: eigenvalue-1 eigenvectors of G^dagger G keep
            // the result exactly inside the sigma eigenspace.
            const Matrix g = vb.adjoint() * wj;
            Eigen::SelfAdjointEigenSolver<Matrix> gs(Matrix(g.adjoint() * g));
            int rank = 0;
            for (Eigen::Index c = 0; c < gs.eigenvalues().size(); ++c)
                if (gs.eigenvalues()(c) > 0.5) ++rank;
            if (rank == 0) continue;
            Matrix y(wj.cols(), rank);
            int c0 = 0;
            for (Eigen::Index c = 0; c < gs.eigenvalues().size(); ++c)
                if (gs.eigenvalues()(c) > 0.5) y.col(c0++) = gs.eigenvectors().col(c);
            const Matrix joint_iso = wj * y;

            // Rank-one refinement in the eigenbasis of the block-restricted
            // rho^{tensor n}.
            Eigen::SelfAdjointEigenSolver<Matrix> es(
                Matrix(joint_iso.adjoint() * rho_n.matrix() * joint_iso));
            if (es.info() != Eigen::Success)
                throw Error(kModule, "design_measurement", "block eigensolver failed");
            const Matrix vecs = joint_iso * es.eigenvectors();
            const double q = sig_spec.eigenvalues[j];
            for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
                elems.push_back({vecs.col(c), std::to_string(b) + "*" + std::to_string(j) +
                                                  "#" + std::to_string(c)});
                loglik.push_back(q > 0 ? -std::log(q) / n : kInf);
                rho_probs.push_back(std::max(0.0, es.eigenvalues()(c)));
            }
        }
    }
    DesignedMeasurement dm{n, Pvm(rho_n.dim(), std::move(elems), Validate::trusted),
                           std::move(loglik), std::move(rho_probs)};

    // Invariants: rank one by construction; refinement and commutation with
    // sigma^{tensor n} are structural, but cheap enough to re-check here for
    // small dimensions.
    if (dm.m.width() != 1)
        throw Error(kModule, "design_measurement", "refinement left a rank > 1 element");
    return dm;
}

SpectrumSample sigma_spectrum_under_rho(const DesignedMeasurement& dm,
                                        const DensityOperator& rho_n,
                                        const DensityOperator& sigma_n, int n) {
    if (rho_n.dim() != dm.m.dim() || sigma_n.dim() != dm.m.dim())
        throw DimensionError(kModule, "sigma_spectrum_under_rho", "dimension mismatch");
    const OutcomeDistribution p = measure(rho_n, dm.m);
    const OutcomeDistribution q = measure(sigma_n, dm.m);

    SpectrumSample s;
    double inf_p = 0, inf_q = 0;
    bool has_inf = false;
    for (size_t i = 0; i < p.probabilities.size(); ++i) {
        const double qi = q.probabilities[i];
        if (qi < 1e-300) {
            has_inf = true;
            inf_p += p.probabilities[i];
            inf_q += qi;
            continue;
        }
        s.values.push_back(-std::log(qi) / n);
        s.p_mass.push_back(p.probabilities[i]);
        s.q_mass.push_back(qi);
    }
    if (has_inf) {
        s.values.push_back(kInf);
        s.p_mass.push_back(inf_p);
        s.q_mass.push_back(inf_q);
    }
    return s;
}

double variance_identity_gap(const DesignedMeasurement& dm, const DensityOperator& rho,
                             const DensityOperator& sigma, int n) {
    if (dm.n != n)
        throw PreconditionError(kModule, "variance_identity_gap",
                                "n does not match the measurement");
    if (dm.m.width() != 1)
        throw PreconditionError(kModule, "variance_identity_gap",
                                "identity requires a rank-one measurement");
    const DensityOperator rho_n = tensor_power(rho, n);
    const DensityOperator sigma_n = tensor_power(sigma, n);
    {
        // The identity needs [M_i, sigma^n] = 0; spot-check the largest offender.
        double max_comm = 0;
        for (int i = 0; i < dm.m.size(); ++i)
            max_comm = std::max(max_comm, projector_commutator_norm(dm.m.element(i).isometry,
                                                                    sigma_n.matrix()));
        if (max_comm > 1e-8)
            throw PreconditionError(kModule, "variance_identity_gap",
                                    "measurement does not commute with sigma^n (norm " +
                                        sci(max_comm) + ")");
    }
    const double tr_rho_log_sigma =
        real_trace_product(rho.matrix(), matrix_log(sigma).matrix());
    // LHS: sum_i P_rho(i) ((1/n) log P_sigma(i) - Tr rho log sigma)^2 with
    // log P_sigma(i) read from the stored sigma outcome masses.
    const OutcomeDistribution p = measure(rho_n, dm.m);
    double lhs = 0;
    for (size_t i = 0; i < p.probabilities.size(); ++i) {
        const double dev = -dm.sigma_loglik[i] - tr_rho_log_sigma;
        lhs += p.probabilities[i] * dev * dev;
    }
    const double rhs = relative_log_variance(rho, sigma) / n;
    return std::abs(lhs - rhs);
}

double chernoff_markov_bound(const DesignedMeasurement& dm, const DensityOperator& rho_n, int n,
                             double a) {
    if (rho_n.dim() != dm.m.dim())
        throw DimensionError(kModule, "chernoff_markov_bound", "dimension mismatch");
    const OutcomeDistribution p = measure(rho_n, dm.m);

    // Outcomes with p > 0 but q = 0 force the optimum to t = 0 (the moment
    // integral diverges for t > 0), giving a trivial bound of 0.
    for (size_t i = 0; i < p.probabilities.size(); ++i)
        if (p.probabilities[i] > 0 && !std::isfinite(dm.sigma_loglik[i])) return 0.0;

    // g(t) = a t - (1/n) log sum_i p_i exp(t n loglik_i), concave in t.
    // The sum is evaluated in the log domain.
    auto g = [&](double t) {
        double max_exp = -kInf;
        for (size_t i = 0; i < p.probabilities.size(); ++i) {
            if (p.probabilities[i] <= 0) continue;
            max_exp = std::max(max_exp,
                               std::log(p.probabilities[i]) + t * n * dm.sigma_loglik[i]);
        }
        double acc = 0;
        for (size_t i = 0; i < p.probabilities.size(); ++i) {
            if (p.probabilities[i] <= 0) continue;
            acc += std::exp(std::log(p.probabilities[i]) + t * n * dm.sigma_loglik[i] - max_exp);
        }
        return a * t - (max_exp + std::log(acc)) / n;
    };

    // Golden-section maximization on [0, 1].
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = g(x1);
        }
    }
    // Include the endpoints; g(0) = -(1/n) log sum p_i >= 0 up to rounding.
    return std::max({g(0.0), g(1.0), g(0.5 * (lo + hi)), 0.0});
}

double tr_rho_sigma_negpower(const DensityOperator& rho, const DensityOperator& sigma,
                             double t) {
    if (t < 0.0 || t > 1.0)
        throw PreconditionError(kModule, "tr_rho_sigma_negpower", "t must lie in [0, 1]");
    if (rho.dim() != sigma.dim())
        throw DimensionError(kModule, "tr_rho_sigma_negpower", "dimension mismatch");
    if (t == 0.0) return 1.0;
    const HermitianOperator s_neg = matrix_neg_power(sigma, t);
    return real_trace_product(rho.matrix(), s_neg.matrix());
}

}  // namespace steinlab
