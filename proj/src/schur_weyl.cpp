#include "steinlab/schur_weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "steinlab/operator_algebra.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

namespace {

constexpr const char* kModule = "schur_weyl";

long long checked_power_dim(int n, int k, const char* op) {
    if (n < 1 || k < 1) throw PreconditionError(kModule, op, "need n >= 1, k >= 1");
    const int cap = dimension_cap();
    long long d = 1;
    for (int i = 0; i < n; ++i) {
        d *= k;
        if (d > cap)
            throw DimensionError(kModule, op,
                                 "k^n = " + std::to_string(k) + "^" + std::to_string(n) +
                                     " exceeds the dimension cap " + std::to_string(cap));
    }
    return d;
}

// Index of the basis vector obtained by transposing digits i and j of idx
// (base k, factor 0 most significant, matching the Kronecker convention).
int transposed_index(int idx, int n, int k, int i, int j) {
    int digits[32];
    int t = idx;
    for (int f = n - 1; f >= 0; --f) {
        digits[f] = t % k;
        t /= k;
    }
    std::swap(digits[i], digits[j]);
    int out = 0;
    for (int f = 0; f < n; ++f) out = out * k + digits[f];
    return out;
}

// ||P G P - G P||_F for P = V V^dagger: equals ||V (V^dagger G V) - G V||_F.
double invariance_defect(const Matrix& v, const Matrix& g) {
    const Matrix gv = g * v;
    const Matrix c = v.adjoint() * gv;
    return (v * c - gv).norm();
}

Matrix tensor_power_matrix(const Matrix& g, int n) {
    Matrix out = g;
    for (int i = 1; i < n; ++i) out = kronecker(out, g);
    return out;
}

}  // namespace

HermitianOperator swap_unitary(int n, int k, int i, int j) {
    const long long d = checked_power_dim(n, k, "swap_unitary");
    if (i < 0 || j <= i || j >= n)
        throw PreconditionError(kModule, "swap_unitary", "need 0 <= i < j < n");
    Matrix s = Matrix::Zero(d, d);
    for (int idx = 0; idx < d; ++idx) s(transposed_index(idx, n, k, i, j), idx) = 1.0;
    return HermitianOperator(std::move(s), Validate::trusted);
}

HermitianOperator commutant_generic_element(int n, int k,
                                            std::span<const double> coefficients) {
    const long long d = checked_power_dim(n, k, "commutant_generic_element");
    if (static_cast<int>(coefficients.size()) != n - 1)
        throw PreconditionError(kModule, "commutant_generic_element",
                                "need n-1 coefficients, got " +
                                    std::to_string(coefficients.size()));
    for (size_t a = 0; a < coefficients.size(); ++a) {
        if (coefficients[a] == 0.0)
            throw DegeneracyError(kModule, "commutant_generic_element",
                                  "coefficient " + std::to_string(a) + " is zero");
        for (size_t b = 0; b < a; ++b)
            if (coefficients[a] == coefficients[b])
                throw DegeneracyError(kModule, "commutant_generic_element",
                                      "repeated coefficients risk spurious degeneracy");
    }
    Matrix a = Matrix::Zero(d, d);
    for (int m = 2; m <= n; ++m) {
        const double c = coefficients[m - 2];
        for (int i = 0; i < m - 1; ++i)
            for (int idx = 0; idx < d; ++idx)
                a(transposed_index(idx, n, k, i, m - 1), idx) += c;
    }
    return HermitianOperator(std::move(a), Validate::trusted);
}

long long repeated_combination(int k, int n) {
    if (k < 1 || n < 0)
        throw PreconditionError(kModule, "repeated_combination", "need k >= 1, n >= 0");
    // C(n+k-1, k-1) with small k: multiply/divide incrementally.
    long long result = 1;
    for (int i = 1; i <= k - 1; ++i) {
        result = result * (n + i) / i;  // exact: product of i consecutive ints divisible by i!
    }
    return result;
}

IrreducibleDecomposition irreducible_decomposition(int n, int k, std::uint64_t seed) {
    const long long d = checked_power_dim(n, k, "irreducible_decomposition");

    if (n == 1) {
        IrreducibleDecomposition out{1, k, Pvm::trivial(k), {k}};
        return out;
    }

    auto rng = labeled_stream(seed, "schur_weyl.coefficients");
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    constexpr int kMaxAttempts = 5;
    std::string last_issue;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        // Generic coefficients: log-uniform in [1, 2].
        std::vector<double> coeffs(n - 1);
        for (auto& c : coeffs) c = std::exp2(uni(rng));

        const HermitianOperator a = commutant_generic_element(n, k, coeffs);
        Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
        if (es.info() != Eigen::Success)
            throw Error(kModule, "irreducible_decomposition", "eigensolver failed");
        const RealVector& w = es.eigenvalues();
        const double spread = std::max(w(d - 1) - w(0), 1e-300);
        const double threshold = 1e-6 * spread;

        // Gap-based clustering; gaps near the threshold are ambiguous.
        bool ambiguous = false;
        for (int i = 1; i < d; ++i) {
            const double gap = w(i) - w(i - 1);
            if (gap > 0.2 * threshold && gap < 5.0 * threshold) {
                ambiguous = true;
                break;
            }
        }
        if (ambiguous) {
            last_issue = "gap within tolerance of the clustering threshold";
            continue;
        }

        std::vector<Pvm::Element> elems;
        std::vector<int> dims;
        int start = 0;
        for (int i = 1; i <= d; ++i) {
            if (i == d || w(i) - w(i - 1) > threshold) {
                elems.push_back({es.eigenvectors().middleCols(start, i - start),
                                 std::to_string(elems.size())});
                dims.push_back(i - start);
                start = i;
            }
        }
        Pvm blocks(static_cast<int>(d), std::move(elems), Validate::trusted);

        // Postconditions.
        const long long total = std::accumulate(dims.begin(), dims.end(), 0LL);
        if (total != d)
            throw DegeneracyError(kModule, "irreducible_decomposition",
                                  "block dimensions do not sum to k^n");
        const long long width_bound = [&] {
            long long b = 1;
            for (int i = 0; i < k - 1; ++i) b *= (n + 1);
            return b;
        }();
        const int w_max = *std::max_element(dims.begin(), dims.end());
        if (w_max > width_bound)
            throw DegeneracyError(kModule, "irreducible_decomposition",
                                  "w(E^n) = " + std::to_string(w_max) + " exceeds (n+1)^(k-1) = " +
                                      std::to_string(width_bound) +
                                      "; clusters merged incorrectly");

        auto check_rng = labeled_stream(seed, "schur_weyl.postcondition");
        double max_comm = 0;
        for (int trial = 0; trial < 5; ++trial) {
            const Matrix rho_n = tensor_power_matrix(random_density(k, check_rng).matrix(), n);
            for (int b = 0; b < blocks.size(); ++b)
                max_comm =
                    std::max(max_comm, projector_commutator_norm(blocks.element(b).isometry, rho_n));
        }
        if (max_comm > 1e-8)
            throw DegeneracyError(kModule, "irreducible_decomposition",
                                  "a block fails to commute with a tensor-power state (norm " +
                                      sci(max_comm) + ")");

        bool invariant_ok = true;
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int trial = 0; trial < 3 && invariant_ok; ++trial) {
            Matrix g(k, k);
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) g(r, c) = Complex(gauss(check_rng), gauss(check_rng));
            g /= operator_norm(g);
            const Matrix gn = tensor_power_matrix(g, n);
            for (int b = 0; b < blocks.size() && invariant_ok; ++b)
                if (invariance_defect(blocks.element(b).isometry, gn) > 1e-7)
                    invariant_ok = false;
        }
        if (!invariant_ok) {
            last_issue = "block not invariant under a tensor-power group element";
            continue;
        }

        return IrreducibleDecomposition{n, k, std::move(blocks), std::move(dims)};
    }
    throw DegeneracyError(kModule, "irreducible_decomposition",
                          "no unambiguous clustering after " + std::to_string(kMaxAttempts) +
                              " attempts (" + last_issue + ")");
}

double verify_block_commutativity(const IrreducibleDecomposition& d, int trials,
                                  std::uint64_t seed) {
    if (trials < 1)
        throw PreconditionError(kModule, "verify_block_commutativity", "trials must be >= 1");
    auto rng = labeled_stream(seed, "schur_weyl.verify_block_commutativity");
    double max_comm = 0;
    for (int t = 0; t < trials; ++t) {
        // Every third trial uses a rank-deficient state (pure), matching the
        // limit argument that extends commutativity to singular states.
        const DensityOperator rho =
            (t % 3 == 2) ? random_pure(d.k, rng) : random_density(d.k, rng);
        const Matrix rho_n = tensor_power_matrix(rho.matrix(), d.n);
        for (int b = 0; b < d.blocks.size(); ++b)
            max_comm =
                std::max(max_comm, projector_commutator_norm(d.blocks.element(b).isometry, rho_n));
    }
    return max_comm;
}

}  // namespace steinlab
