#include "steinlab/types.hpp"

#include <algorithm>
#include <cstdio>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

namespace steinlab {

namespace {

std::atomic<int> g_dim_cap{0};  // 0 = uninitialized

int read_cap_from_env() {
    if (const char* env = std::getenv("STEINLAB_DIM_CAP")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<int>(v);
    }
    return 4096;
}

}  // namespace

int dimension_cap() {
    int cap = g_dim_cap.load(std::memory_order_relaxed);
    if (cap == 0) {
        cap = read_cap_from_env();
        g_dim_cap.store(cap, std::memory_order_relaxed);
    }
    return cap;
}

void set_dimension_cap(int cap) {
    if (cap < 1) throw PreconditionError("types", "set_dimension_cap", "cap must be >= 1");
    g_dim_cap.store(cap, std::memory_order_relaxed);
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

double operator_norm(const Matrix& x) {
    if (x.rows() == 0) return 0.0;
    const double herm_dev = (x - x.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev < 1e-13 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(x), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    // Singular values of x = sqrt of eigenvalues of x^dagger x.
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(x.adjoint() * x), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double commutator_norm(const Matrix& a, const Matrix& b) {
    return operator_norm(a * b - b * a);
}

double projector_commutator_norm(const Matrix& isometry, const Matrix& x) {
    const Matrix left = isometry * (isometry.adjoint() * x);
    return (left - left.adjoint()).norm();
}

double projector_pair_commutator_norm(const Matrix& vf, const Matrix& ve) {
    const Matrix g = vf.adjoint() * ve;
    const Matrix left = (vf * g) * ve.adjoint();
    return (left - left.adjoint()).norm();
}

double real_trace_product(const Matrix& a, const Matrix& b) {
    // Tr(ab) = sum_ij a_ij b_ji; for Hermitian b this is sum_ij a_ij conj(b_ij).
    return a.cwiseProduct(b.conjugate()).sum().real();
}

Matrix hermitize(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianOperator::HermitianOperator(Matrix entries, Validate v) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
        throw PreconditionError("operator_algebra", "HermitianOperator",
                                "matrix must be square with dim >= 1");
    if (v == Validate::checked) {
        const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
        if (dev > tol::hermiticity)
            throw PreconditionError("operator_algebra", "HermitianOperator",
                                    "not Hermitian: max |X - X^dagger| = " + std::to_string(dev));
    }
    entries_ = hermitize(entries_);
}

DensityOperator::DensityOperator(HermitianOperator op, Validate v) : op_(std::move(op)) {
    const double tr = op_.matrix().trace().real();
    if (std::abs(tr - 1.0) > tol::trace)
        throw PreconditionError("operator_algebra", "DensityOperator",
                                "trace = " + std::to_string(tr) + ", expected 1");
    if (v == Validate::checked) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        if (lmin < -tol::psd)
            throw PreconditionError("operator_algebra", "DensityOperator",
                                    "negative eigenvalue " + std::to_string(lmin));
    }
}

TestOperator::TestOperator(HermitianOperator op, Validate v) : op_(std::move(op)) {
    if (v == Validate::checked) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        if (lmin < -tol::test_range || lmax > 1.0 + tol::test_range)
            throw PreconditionError("operator_algebra", "TestOperator",
                                    "eigenvalues outside [0,1]: [" + std::to_string(lmin) +
                                        ", " + std::to_string(lmax) + "]");
    }
}

Pvm::Pvm(int dim, std::vector<Element> elements, Validate v)
    : dim_(dim), elements_(std::move(elements)) {
    if (dim_ < 1) throw PreconditionError("operator_algebra", "Pvm", "dim must be >= 1");
    if (elements_.empty()) throw PreconditionError("operator_algebra", "Pvm", "no elements");
    for (auto& e : elements_) {
        if (e.isometry.rows() != dim_ || e.isometry.cols() < 1)
            throw PreconditionError("operator_algebra", "Pvm", "element shape mismatch");
    }
    if (v == Validate::checked) verify();
}

Pvm Pvm::from_projectors(int dim, const std::vector<Matrix>& projectors,
                         std::vector<std::string> labels) {
    std::vector<Element> elems;
    elems.reserve(projectors.size());
    for (size_t i = 0; i < projectors.size(); ++i) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(projectors[i]));
        int rank = 0;
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
            if (es.eigenvalues()(j) > 0.5) ++rank;
        if (rank == 0)
            throw PreconditionError("operator_algebra", "Pvm", "zero projector supplied");
        Matrix iso(dim, rank);
        int c = 0;
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
            if (es.eigenvalues()(j) > 0.5) iso.col(c++) = es.eigenvectors().col(j);
        std::string label = i < labels.size() ? labels[i] : std::to_string(i);
        elems.push_back({std::move(iso), std::move(label)});
    }
    return Pvm(dim, std::move(elems));
}

Pvm Pvm::computational_basis(int dim) {
    std::vector<Element> elems;
    elems.reserve(dim);
    for (int i = 0; i < dim; ++i) {
        Matrix iso = Matrix::Zero(dim, 1);
        iso(i, 0) = 1.0;
        elems.push_back({std::move(iso), std::to_string(i)});
    }
    return Pvm(dim, std::move(elems), Validate::trusted);
}

Pvm Pvm::trivial(int dim) {
    std::vector<Element> elems;
    elems.push_back({Matrix::Identity(dim, dim), "I"});
    return Pvm(dim, std::move(elems), Validate::trusted);
}

Matrix Pvm::projector(int i) const {
    const Matrix& v = elements_.at(i).isometry;
    return v * v.adjoint();
}

int Pvm::width() const {
    int w = 0;
    for (const auto& e : elements_) w = std::max(w, static_cast<int>(e.isometry.cols()));
    return w;
}

void Pvm::verify(double tolerance) const {
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < size(); ++i) {
        const Matrix& vi = elements_[i].isometry;
        // Idempotency of V V^dagger is orthonormality of columns.
        const double ortho = (Matrix(vi.adjoint() * vi) -
                              Matrix::Identity(vi.cols(), vi.cols()))
                                 .cwiseAbs()
                                 .maxCoeff();
        if (ortho > tolerance)
            throw PreconditionError("operator_algebra", "Pvm",
                                    "element " + std::to_string(i) + " not idempotent (dev " +
                                        std::to_string(ortho) + ")");
        sum += vi * vi.adjoint();
        for (int j = 0; j < i; ++j) {
            const double cross = (elements_[j].isometry.adjoint() * vi).cwiseAbs().maxCoeff();
            if (cross > tolerance)
                throw PreconditionError("operator_algebra", "Pvm",
                                        "elements " + std::to_string(j) + "," +
                                            std::to_string(i) + " not orthogonal (dev " +
                                            std::to_string(cross) + ")");
        }
    }
    const double comp = (sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
    if (comp > tolerance)
        throw PreconditionError("operator_algebra", "Pvm",
                                "elements do not sum to identity (dev " + std::to_string(comp) +
                                    ")");
}

Matrix SpectralDecomposition::reconstruct() const {
    Matrix out = Matrix::Zero(eigenprojectors.dim(), eigenprojectors.dim());
    for (int i = 0; i < eigenprojectors.size(); ++i) {
        const Matrix& v = eigenprojectors.element(i).isometry;
        out += eigenvalues.at(i) * (v * v.adjoint());
    }
    return out;
}

double OutcomeDistribution::total() const {
    double s = 0;
    for (double p : probabilities) s += p;
    return s;
}

}  // namespace steinlab
