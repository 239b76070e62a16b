#include "steinlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steinlab/operator_algebra.hpp"

namespace steinlab {

namespace {

constexpr const char* kModule = "inequalities";

double xlog2x(double x) {
    if (x <= 0) return 0;  // x (ln x)^2 -> 0
    const double l = std::log(x);
    return x * l * l;
}

// Maximize f over [lo, hi] by golden section.
template <typename F>
double golden_max(F f, double lo, double hi, double tolerance) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tolerance) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

double min_eigenvalue(const Matrix& x, const char* op) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(kModule, op, "eigensolver failed");
    return es.eigenvalues().minCoeff();
}

double max_elementwise_commutator(const DensityOperator& rho, const Pvm& e) {
    double worst = 0;
    for (int i = 0; i < e.size(); ++i)
        worst = std::max(worst,
                         projector_commutator_norm(e.element(i).isometry, rho.matrix()));
    return worst;
}

}  // namespace

double plog2_max(int k) {
    if (k < 2) throw PreconditionError(kModule, "plog2_max", "k must be >= 2");
    if (k >= 3) {
        const double l = std::log(static_cast<double>(k));
        return l * l;
    }
    const double s = std::sqrt(1.0 - 4.0 / (M_E * M_E));
    return xlog2x((1.0 - s) / 2.0) + xlog2x((1.0 + s) / 2.0);
}

double plog2_max_oracle(int k, int grid) {
    if (k < 2 || k > 4)
        throw PreconditionError(kModule, "plog2_max_oracle", "oracle supports k in {2,3,4}");
    if (grid < 1000)
        throw PreconditionError(kModule, "plog2_max_oracle", "grid must be >= 1000");

    double best = 0;
    // Every interior critical point is two-level (r entries at x, m - r at y);
    // boundary optima reduce to a smaller support size m.
    for (int m = 1; m <= k; ++m) {
        best = std::max(best, xlog2x(1.0 / m) * m);  // uniform on m entries
        for (int r = 1; r < m; ++r) {
            auto f = [&](double x) {
                const double y = (1.0 - r * x) / (m - r);
                if (y <= 0) return -1.0;
                return r * xlog2x(x) + (m - r) * xlog2x(y);
            };
            const double hi = 1.0 / r;
            double coarse_best = 0, coarse_arg = hi / 2;
            for (int g = 1; g < grid; ++g) {
                const double x = hi * g / grid;
                const double v = f(x);
                if (v > coarse_best) {
                    coarse_best = v;
                    coarse_arg = x;
                }
            }
            const double step = hi / grid;
            best = std::max(best, golden_max(f, std::max(0.0, coarse_arg - 2 * step),
                                             std::min(hi, coarse_arg + 2 * step), 1e-12));
        }
    }
    return best;
}

Lemma2Result check_lemma2(const DensityOperator& rho, const Pvm& e, const Pvm& m) {
    if (!refines(m, e))
        throw PreconditionError(kModule, "check_lemma2", "M must refine E");
    const double comm = max_elementwise_commutator(rho, e);
    if (comm > 1e-9)
        throw CommutativityError(kModule, "check_lemma2",
                                 "rho does not commute with E (norm " + sci(comm) +
                                     ")",
                                 comm);
    const int w = e.width();
    if (w < 3)
        throw PreconditionError(kModule, "check_lemma2",
                                "w(E) must be >= 3 (the k = 2 constant lives in plog2_max)");

    const HermitianOperator log_rho = matrix_log(rho, SupportMode::restricted);
    const DensityOperator pinched(pinch(m, rho.op()), Validate::trusted);
    const HermitianOperator log_pinched = matrix_log(pinched, SupportMode::restricted);
    const Matrix diff = log_rho.matrix() - log_pinched.matrix();
    const double lhs = real_trace_product(rho.matrix(), Matrix(diff * diff));
    const double rhs = 4.0 * std::log(static_cast<double>(w)) * std::log(static_cast<double>(w));
    return {lhs, rhs, lhs <= rhs + 1e-9};
}

double check_lemma_c1(const DensityOperator& rho, const Pvm& m) {
    if (rho.dim() != m.dim())
        throw DimensionError(kModule, "check_lemma_c1", "dimension mismatch");
    const double k = static_cast<double>(rho.dim());
    const Matrix gap = k * pinch(m, rho.op()).matrix() - rho.matrix();
    return min_eigenvalue(gap, "check_lemma_c1");
}

double check_lemma_c2(const DensityOperator& rho, const Pvm& e, const Pvm& m, double t) {
    if (!(t > 0.0) || t > 1.0)
        throw PreconditionError(kModule, "check_lemma_c2", "t must lie in (0, 1]");
    if (!refines(m, e))
        throw PreconditionError(kModule, "check_lemma_c2", "M must refine E");
    const double comm = max_elementwise_commutator(rho, e);
    if (comm > 1e-9)
        throw CommutativityError(kModule, "check_lemma_c2",
                                 "rho does not commute with E (norm " + sci(comm) +
                                     ")",
                                 comm);
    const double wt = std::pow(static_cast<double>(e.width()), t);
    const HermitianOperator rho_neg = matrix_neg_power(rho, t);
    const DensityOperator pinched(pinch(m, rho.op()), Validate::trusted);
    const HermitianOperator pinched_neg = matrix_neg_power(pinched, t);
    const Matrix gap = wt * rho_neg.matrix() - pinched_neg.matrix();
    return min_eigenvalue(gap, "check_lemma_c2");
}

}  // namespace steinlab
