#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "steinlab/errors.hpp"

namespace steinlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances shared across the toolkit.
namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-10;           // eigenvalue floor for states
inline constexpr double test_range = 1e-10;    // eigenvalues of tests in [-tol, 1+tol]
inline constexpr double pvm = 1e-9;            // idempotency / orthogonality / completeness
inline constexpr double refine = 1e-8;
inline constexpr double prob_clip = 1e-12;     // clip window for small negative masses
inline constexpr double support = 1e-14;       // eigenvalues below this count as zero support
}  // namespace tol

// Default cap on Hilbert-space dimension for tensor powers; override with the
// STEINLAB_DIM_CAP environment variable or set_dimension_cap().
int dimension_cap();
void set_dimension_cap(int cap);

// Scientific-notation string for diagnostics (std::to_string flattens small
// numbers to 0.000000).
std::string sci(double x);

// Spectral (operator) norm. Uses a Hermitian eigensolve when the argument is
// Hermitian, an SVD otherwise.
double operator_norm(const Matrix& x);

// ||AB - BA|| in operator norm.
double commutator_norm(const Matrix& a, const Matrix& b);

// Frobenius norm of [V V^dagger, X] for an isometry V, computed from the
// explicit residual. Gram-based shortcuts lose accuracy to cancellation near
// the 1e-8 scale; the residual stays at machine precision.
double projector_commutator_norm(const Matrix& isometry, const Matrix& x);

// Frobenius norm of [Vf Vf^dagger, Ve Ve^dagger] for two isometries.
double projector_pair_commutator_norm(const Matrix& vf, const Matrix& ve);

// Re Tr(A B) for Hermitian A, B without forming the product.
double real_trace_product(const Matrix& a, const Matrix& b);

// (X + X^dagger)/2
Matrix hermitize(const Matrix& x);

Matrix kronecker(const Matrix& a, const Matrix& b);

// Construction policy: `checked` enforces the type invariants (costs an
// eigensolve for states/tests), `trusted` is for values produced internally
// by operations that guarantee them.
enum class Validate { checked, trusted };

class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries, Validate v = Validate::checked);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const noexcept { return entries_; }

private:
    Matrix entries_;
};

class DensityOperator {
public:
    explicit DensityOperator(HermitianOperator op, Validate v = Validate::checked);
    explicit DensityOperator(Matrix entries, Validate v = Validate::checked)
        : DensityOperator(HermitianOperator(std::move(entries), v), v) {}

    int dim() const noexcept { return op_.dim(); }
    const HermitianOperator& op() const noexcept { return op_; }
    const Matrix& matrix() const noexcept { return op_.matrix(); }

private:
    HermitianOperator op_;
};

// A test 0 <= A <= I.
class TestOperator {
public:
    explicit TestOperator(HermitianOperator op, Validate v = Validate::checked);
    explicit TestOperator(Matrix entries, Validate v = Validate::checked)
        : TestOperator(HermitianOperator(std::move(entries), v), v) {}

    int dim() const noexcept { return op_.dim(); }
    const HermitianOperator& op() const noexcept { return op_; }
    const Matrix& matrix() const noexcept { return op_.matrix(); }

private:
    HermitianOperator op_;
};

// Projection-valued measure. Elements are stored as isometries (orthonormal
// columns spanning each projector's range); the dense projector V V^dagger is
// materialized on demand. This keeps a rank-one PVM on dimension d at O(d^2)
// storage instead of O(d^3).
class Pvm {
public:
    struct Element {
        Matrix isometry;     // dim x rank, orthonormal columns
        std::string label;
    };

    Pvm(int dim, std::vector<Element> elements, Validate v = Validate::checked);

    // Convenience: PVM from dense projectors (ranges extracted by eigensolve).
    static Pvm from_projectors(int dim, const std::vector<Matrix>& projectors,
                               std::vector<std::string> labels = {});
    static Pvm computational_basis(int dim);
    static Pvm trivial(int dim);  // the single-element PVM {I}

    int dim() const noexcept { return dim_; }
    int size() const noexcept { return static_cast<int>(elements_.size()); }
    const Element& element(int i) const { return elements_.at(i); }
    const std::vector<Element>& elements() const noexcept { return elements_; }
    int rank(int i) const { return static_cast<int>(elements_.at(i).isometry.cols()); }
    Matrix projector(int i) const;
    const std::string& label(int i) const { return elements_.at(i).label; }

    // w(E) = max element rank.
    int width() const;

    // Full invariant check (idempotency, pairwise orthogonality,
    // completeness); O(size * dim^3)-ish, intended for tests and user input.
    void verify(double tolerance = tol::pvm) const;

private:
    int dim_;
    std::vector<Element> elements_;
};

// Eigenvalues (strictly descending across groups) with their eigenprojectors.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // one per projector group
    Pvm eigenprojectors;

    Matrix reconstruct() const;
};

struct OutcomeDistribution {
    std::vector<double> probabilities;
    std::vector<std::string> labels;

    double total() const;
};

}  // namespace steinlab
