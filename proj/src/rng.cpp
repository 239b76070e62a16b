#include "steinlab/rng.hpp"

#include <cmath>

namespace steinlab {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 labeled_stream(std::uint64_t master_seed, std::string_view label) {
    return std::mt19937_64(splitmix64(master_seed ^ fnv1a(label)));
}

Matrix haar_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        Complex d = r(j, j);
        q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
}

std::vector<double> random_distribution(int size, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> p(size);
    double total = 0;
    for (auto& x : p) {
        x = expo(rng);
        total += x;
    }
    for (auto& x : p) x /= total;
    return p;
}

DensityOperator random_density(int dim, std::mt19937_64& rng) {
    const Matrix u = haar_unitary(dim, rng);
    const auto spec = random_distribution(dim, rng);
    RealVector d(dim);
    for (int i = 0; i < dim; ++i) d(i) = spec[i];
    Matrix m = u * d.asDiagonal() * u.adjoint();
    return DensityOperator(HermitianOperator(std::move(m), Validate::trusted),
                           Validate::trusted);
}

DensityOperator random_pure(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v.normalize();
    Matrix m = v * v.adjoint();
    return DensityOperator(HermitianOperator(std::move(m), Validate::trusted),
                           Validate::trusted);
}

HermitianOperator random_hermitian(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    return HermitianOperator(hermitize(g), Validate::trusted);
}

TestOperator random_test(int dim, std::mt19937_64& rng) {
    const Matrix u = haar_unitary(dim, rng);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RealVector d(dim);
    for (int i = 0; i < dim; ++i) d(i) = uni(rng);
    Matrix m = u * d.asDiagonal() * u.adjoint();
    return TestOperator(HermitianOperator(std::move(m), Validate::trusted), Validate::trusted);
}

Pvm random_rank_one_pvm(int dim, std::mt19937_64& rng) {
    const Matrix u = haar_unitary(dim, rng);
    std::vector<Pvm::Element> elems;
    elems.reserve(dim);
    for (int i = 0; i < dim; ++i) elems.push_back({u.col(i), std::to_string(i)});
    return Pvm(dim, std::move(elems), Validate::trusted);
}

}  // namespace steinlab
