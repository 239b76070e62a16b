#include "steinlab/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace steinlab {

namespace {

constexpr const char* kModule = "operator_algebra";

struct EigenSystem {
    RealVector values;  // ascending (Eigen order)
    Matrix vectors;
};

EigenSystem eig(const Matrix& x, const char* op) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    if (es.info() != Eigen::Success)
        throw Error(kModule, op, "eigendecomposition failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

// Tr r f(s) evaluated in s's eigenbasis over the kept indices.
double trace_in_basis(const Matrix& r, const EigenSystem& s,
                      const std::vector<int>& kept, const std::vector<double>& f_of_eig) {
    double acc = 0;
    for (size_t idx = 0; idx < kept.size(); ++idx) {
        const auto& v = s.vectors.col(kept[idx]);
        acc += f_of_eig[idx] * (v.adjoint() * r * v)(0, 0).real();
    }
    return acc;
}

}  // namespace

DensityOperator tensor_power(const DensityOperator& s, int n) {
    if (n < 1) throw PreconditionError(kModule, "tensor_power", "n must be >= 1");
    const double log_dim = n * std::log2(static_cast<double>(s.dim()));
    const int cap = dimension_cap();
    if (log_dim > std::log2(static_cast<double>(cap)) + 1e-9)
        throw DimensionError(kModule, "tensor_power",
                             "dim^" + std::to_string(n) + " exceeds the dimension cap " +
                                 std::to_string(cap) +
                                 " (override with STEINLAB_DIM_CAP or config)");
    Matrix out = s.matrix();
    for (int i = 1; i < n; ++i) out = kronecker(out, s.matrix());
    return DensityOperator(HermitianOperator(std::move(out), Validate::trusted),
                           Validate::trusted);
}

namespace {

// Numerically diagonal matrices (tensor powers of diagonal states are the
// common case) skip the dense eigensolver: eigenvalues are the diagonal,
// eigenvectors are basis vectors.
bool is_numerically_diagonal(const Matrix& m) {
    const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > 1e-14 * scale) return false;
    return true;
}

EigenSystem diagonal_eigensystem(const Matrix& m) {
    const int d = static_cast<int>(m.rows());
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return m(a, a).real() < m(b, b).real(); });
    EigenSystem out{RealVector(d), Matrix::Zero(d, d)};
    for (int i = 0; i < d; ++i) {
        out.values(i) = m(order[i], order[i]).real();
        out.vectors(order[i], i) = 1.0;
    }
    return out;
}

}  // namespace

namespace {

// Group ascending eigenvalues by a split predicate and emit projector groups
// in descending eigenvalue order.
SpectralDecomposition cluster_eigensystem(const EigenSystem& es, int d,
                                          const std::function<bool(double, double)>& split) {
    std::vector<Pvm::Element> elems;
    std::vector<double> values;
    int start = 0;
    for (int i = 1; i <= d; ++i) {
        if (i == d || split(es.values(i - 1), es.values(i))) {
            elems.push_back({es.vectors.middleCols(start, i - start), ""});
            values.push_back(es.values.segment(start, i - start).mean());
            start = i;
        }
    }
    std::reverse(elems.begin(), elems.end());
    std::reverse(values.begin(), values.end());
    for (size_t i = 0; i < elems.size(); ++i) elems[i].label = std::to_string(i);
    return SpectralDecomposition{std::move(values),
                                 Pvm(d, std::move(elems), Validate::trusted)};
}

EigenSystem eigensystem_of(const HermitianOperator& x, const char* op) {
    return is_numerically_diagonal(x.matrix()) ? diagonal_eigensystem(x.matrix())
                                               : eig(x.matrix(), op);
}

}  // namespace

SpectralDecomposition spectral(const HermitianOperator& x, double degeneracy_tol) {
    if (degeneracy_tol <= 0)
        throw PreconditionError(kModule, "spectral", "degeneracy_tol must be > 0");
    const auto es = eigensystem_of(x, "spectral");
    const int d = x.dim();
    const double lo = es.values(0), hi = es.values(d - 1);
    const double scale = std::max({hi - lo, std::abs(lo), std::abs(hi), 1e-300});
    const double gap = degeneracy_tol * scale;
    return cluster_eigensystem(es, d, [gap](double a, double b) { return b - a > gap; });
}

SpectralDecomposition spectral_relative_gaps(const HermitianOperator& x, double rel_tol) {
    if (rel_tol <= 0)
        throw PreconditionError(kModule, "spectral_relative_gaps", "rel_tol must be > 0");
    const auto es = eigensystem_of(x, "spectral_relative_gaps");
    const int d = x.dim();
    const double abs_floor =
        1e-14 * std::max({std::abs(es.values(0)), std::abs(es.values(d - 1)), 1e-300});
    return cluster_eigensystem(es, d, [rel_tol, abs_floor](double a, double b) {
        return b - a > std::max(abs_floor, rel_tol * std::max(std::abs(a), std::abs(b)));
    });
}

SpectralDecomposition tensor_power_spectral(const DensityOperator& s, int n, double rel_tol) {
    if (rel_tol <= 0)
        throw PreconditionError(kModule, "tensor_power_spectral", "rel_tol must be > 0");
    if (n < 1) throw PreconditionError(kModule, "tensor_power_spectral", "n must be >= 1");
    const int k = s.dim();
    const int cap = dimension_cap();
    long long d = 1;
    for (int i = 0; i < n; ++i) {
        d *= k;
        if (d > cap)
            throw DimensionError(kModule, "tensor_power_spectral",
                                 "k^n exceeds the dimension cap " + std::to_string(cap));
    }
    const auto es = eigensystem_of(s.op(), "tensor_power_spectral");

    // Eigenvalue of a multi-index is the product over its digits; sort the
    // multi-indices by that product and cluster by relative gaps.
    std::vector<double> product(d);
    for (long long m = 0; m < d; ++m) {
        double p = 1;
        long long t = m;
        for (int i = 0; i < n; ++i) {
            p *= es.values(static_cast<int>(t % k));
            t /= k;
        }
        product[m] = p;
    }
    std::vector<long long> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](long long a, long long b) { return product[a] < product[b]; });

    auto column_for = [&](long long m) {
        Vector v = Vector::Ones(1);
        // Digit i of m addresses tensor factor n-1-i (little-endian digits);
        // assemble so factor 0 is the Kronecker-major slot.
        std::vector<int> digits(n);
        long long t = m;
        for (int i = 0; i < n; ++i) {
            digits[n - 1 - i] = static_cast<int>(t % k);
            t /= k;
        }
        for (int f = 0; f < n; ++f) {
            Vector next(v.size() * k);
            for (Eigen::Index a = 0; a < v.size(); ++a)
                next.segment(a * k, k) = v(a) * es.vectors.col(digits[f]);
            v = std::move(next);
        }
        return v;
    };

    const double abs_floor = 1e-14 * std::max(std::abs(product[order.back()]), 1e-300);
    std::vector<Pvm::Element> elems;
    std::vector<double> values;
    long long start = 0;
    for (long long i = 1; i <= d; ++i) {
        const bool split =
            i == d || (product[order[i]] - product[order[i - 1]] >
                       std::max(abs_floor, rel_tol * std::max(std::abs(product[order[i]]),
                                                              std::abs(product[order[i - 1]]))));
        if (!split) continue;
        Matrix iso(d, i - start);
        double mean = 0;
        for (long long c = start; c < i; ++c) {
            iso.col(c - start) = column_for(order[c]);
            mean += product[order[c]];
        }
        elems.push_back({std::move(iso), ""});
        values.push_back(mean / (i - start));
        start = i;
    }
    std::reverse(elems.begin(), elems.end());
    std::reverse(values.begin(), values.end());
    for (size_t i = 0; i < elems.size(); ++i) elems[i].label = std::to_string(i);
    return SpectralDecomposition{std::move(values),
                                 Pvm(static_cast<int>(d), std::move(elems), Validate::trusted)};
}

namespace {

// Functional calculus helper: f applied to eigenvalues above the support
// cutoff; behaviour below the cutoff per mode.
HermitianOperator functional_calculus(const DensityOperator& s, SupportMode mode,
                                      const char* op, double (*f)(double)) {
    const auto es = eig(s.matrix(), op);
    const int d = s.dim();
    RealVector fv(d);
    for (int i = 0; i < d; ++i) {
        const double lambda = es.values(i);
        if (lambda > tol::support) {
            fv(i) = f(lambda);
        } else if (mode == SupportMode::restricted) {
            fv(i) = 0.0;  // support-restricted: vanish on the kernel
        } else {
            throw SingularStateError(kModule, op,
                                     "eigenvalue " + std::to_string(lambda) +
                                         " below support cutoff; pass SupportMode::restricted "
                                         "to project onto the support");
        }
    }
    Matrix out = es.vectors * fv.asDiagonal() * es.vectors.adjoint();
    return HermitianOperator(std::move(out), Validate::trusted);
}

}  // namespace

HermitianOperator matrix_log(const DensityOperator& s, SupportMode mode) {
    return functional_calculus(s, mode, "matrix_log", +[](double x) { return std::log(x); });
}

HermitianOperator matrix_neg_power(const DensityOperator& s, double t) {
    if (!(t > 0.0) || t > 1.0)
        throw PreconditionError(kModule, "matrix_neg_power", "t must lie in (0, 1]");
    const auto es = eig(s.matrix(), "matrix_neg_power");
    const int d = s.dim();
    RealVector fv(d);
    for (int i = 0; i < d; ++i) {
        const double lambda = es.values(i);
        if (lambda <= tol::support)
            throw SingularStateError(kModule, "matrix_neg_power",
                                     "state is singular (eigenvalue " + std::to_string(lambda) +
                                         ")");
        fv(i) = std::pow(lambda, -t);
    }
    Matrix out = es.vectors * fv.asDiagonal() * es.vectors.adjoint();
    return HermitianOperator(std::move(out), Validate::trusted);
}

HermitianOperator pinch(const Pvm& e, const HermitianOperator& x) {
    if (e.dim() != x.dim())
        throw DimensionError(kModule, "pinch",
                             "PVM dim " + std::to_string(e.dim()) + " vs operator dim " +
                                 std::to_string(x.dim()));
    Matrix out = Matrix::Zero(x.dim(), x.dim());
    for (int i = 0; i < e.size(); ++i) {
        const Matrix& v = e.element(i).isometry;
        out += v * (v.adjoint() * x.matrix() * v) * v.adjoint();
    }
    return HermitianOperator(hermitize(out), Validate::trusted);
}

namespace {

// Shared support handling for the relative-entropy family. Returns
// (kept sigma indices, sigma eigensystem); throws or flags leak per mode.
struct SigmaSupport {
    EigenSystem es;
    std::vector<int> kept;
    bool leaked = false;
};

SigmaSupport sigma_support(const DensityOperator& r, const DensityOperator& s,
                           SupportMode mode, const char* op) {
    SigmaSupport out{eig(s.matrix(), op), {}, false};
    const int d = s.dim();
    double min_eig = out.es.values(0);
    if (mode == SupportMode::strict && min_eig <= tol::support)
        throw SingularStateError(kModule, op,
                                 "second argument has eigenvalue " + std::to_string(min_eig) +
                                     "; pass SupportMode::restricted for singular states");
    double kept_mass = 0;
    for (int i = 0; i < d; ++i) {
        if (out.es.values(i) > tol::support) {
            out.kept.push_back(i);
            const auto& v = out.es.vectors.col(i);
            kept_mass += (v.adjoint() * r.matrix() * v)(0, 0).real();
        }
    }
    const double leak = 1.0 - kept_mass;
    if (leak > 1e-9) out.leaked = true;  // support violation: infinite divergence
    return out;
}

}  // namespace

double relative_entropy(const DensityOperator& r, const DensityOperator& s, SupportMode mode) {
    const auto sup = sigma_support(r, s, mode, "relative_entropy");
    if (sup.leaked) return std::numeric_limits<double>::infinity();

    const auto er = eig(r.matrix(), "relative_entropy");
    double tr_r_log_r = 0;
    for (int i = 0; i < r.dim(); ++i)
        if (er.values(i) > tol::support) tr_r_log_r += er.values(i) * std::log(er.values(i));

    std::vector<double> logs(sup.kept.size());
    for (size_t i = 0; i < sup.kept.size(); ++i) logs[i] = std::log(sup.es.values(sup.kept[i]));
    const double tr_r_log_s = trace_in_basis(r.matrix(), sup.es, sup.kept, logs);
    return tr_r_log_r - tr_r_log_s;
}

double relative_log_variance(const DensityOperator& r, const DensityOperator& s,
                             SupportMode mode) {
    const auto sup = sigma_support(r, s, mode, "relative_log_variance");
    if (sup.leaked) return std::numeric_limits<double>::infinity();

    std::vector<double> logs(sup.kept.size());
    for (size_t i = 0; i < sup.kept.size(); ++i) logs[i] = std::log(sup.es.values(sup.kept[i]));
    const double mean = trace_in_basis(r.matrix(), sup.es, sup.kept, logs);
    std::vector<double> centered_sq(logs.size());
    for (size_t i = 0; i < logs.size(); ++i)
        centered_sq[i] = (logs[i] - mean) * (logs[i] - mean);
    return trace_in_basis(r.matrix(), sup.es, sup.kept, centered_sq);
}

bool refines(const Pvm& m, const Pvm& e, double tolerance) {
    if (m.dim() != e.dim())
        throw DimensionError(kModule, "refines", "PVM dimensions differ");
    std::vector<int> claimed_rank(e.size(), 0);
    for (int j = 0; j < m.size(); ++j) {
        const Matrix& vj = m.element(j).isometry;
        int owner = -1;
        for (int i = 0; i < e.size(); ++i) {
            const Matrix g = e.element(i).isometry.adjoint() * vj;  // r_i x r_j
            const double norm = g.norm();                           // Frobenius
            if (norm <= tolerance) continue;                        // E_i M_j = 0
            const double full_dev =
                (Matrix(g.adjoint() * g) - Matrix::Identity(vj.cols(), vj.cols())).norm();
            if (full_dev <= tolerance) {
                if (owner >= 0) return false;  // claimed twice: overlap inconsistency
                owner = i;
            } else {
                return false;  // E_i M_j strictly between 0 and M_j
            }
        }
        if (owner < 0) return false;
        claimed_rank[owner] += static_cast<int>(vj.cols());
    }
    for (int i = 0; i < e.size(); ++i)
        if (claimed_rank[i] != e.rank(i)) return false;
    return true;
}

Pvm pvm_product(const Pvm& f, const Pvm& e, double commute_tol) {
    if (f.dim() != e.dim())
        throw DimensionError(kModule, "pvm_product", "PVM dimensions differ");
    double max_comm = 0;
    for (int j = 0; j < f.size(); ++j)
        for (int i = 0; i < e.size(); ++i)
            max_comm = std::max(max_comm,
                                projector_pair_commutator_norm(f.element(j).isometry,
                                                               e.element(i).isometry));
    if (max_comm > commute_tol)
        throw CommutativityError(kModule, "pvm_product",
                                 "PVMs do not commute (max commutator norm " +
                                     sci(max_comm) + ")",
                                 max_comm);

    std::vector<Pvm::Element> elems;
    for (int j = 0; j < f.size(); ++j) {
        for (int i = 0; i < e.size(); ++i) {
            const Matrix& ve = e.element(i).isometry;
            const Matrix g = f.element(j).isometry.adjoint() * ve;
            // F_j E_i = V_e (G^dagger G) V_e^dagger for commuting projectors;
            // its range is spanned by the eigenvalue-1 eigenvectors of G^dagger G.
            Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(g.adjoint() * g));
            int rank = 0;
            for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c)
                if (es.eigenvalues()(c) > 0.5) ++rank;
            if (rank == 0) continue;  // zero product dropped
            Matrix y(ve.cols(), rank);
            int c0 = 0;
            for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c)
                if (es.eigenvalues()(c) > 0.5) y.col(c0++) = es.eigenvectors().col(c);
            elems.push_back({ve * y, f.label(j) + "*" + e.label(i)});
        }
    }
    return Pvm(f.dim(), std::move(elems), Validate::trusted);
}

OutcomeDistribution measure(const DensityOperator& s, const Pvm& m) {
    if (s.dim() != m.dim())
        throw DimensionError(kModule, "measure",
                             "state dim " + std::to_string(s.dim()) + " vs PVM dim " +
                                 std::to_string(m.dim()));
    OutcomeDistribution out;
    out.probabilities.reserve(m.size());
    out.labels.reserve(m.size());
    for (int i = 0; i < m.size(); ++i) {
        const Matrix& v = m.element(i).isometry;
        double p = (v.adjoint() * s.matrix() * v).trace().real();
        if (p < -tol::prob_clip)
            throw Error(kModule, "measure",
                        "outcome probability " + std::to_string(p) +
                            " below the clip window; state or PVM is invalid");
        out.probabilities.push_back(std::max(0.0, p));
        out.labels.push_back(m.label(i));
    }
    return out;
}

std::pair<double, double> test_errors(const TestOperator& a, const DensityOperator& r,
                                      const DensityOperator& s) {
    if (a.dim() != r.dim() || a.dim() != s.dim())
        throw DimensionError(kModule, "test_errors", "operand dimensions differ");
    const double accept_r = real_trace_product(r.matrix(), a.matrix());
    const double beta = real_trace_product(s.matrix(), a.matrix());
    return {1.0 - accept_r, beta};
}

}  // namespace steinlab
