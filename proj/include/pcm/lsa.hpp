#pragma once

#include <cstdint>

#include "pcm/features.hpp"
#include "pcm/matrix.hpp"

namespace pcm {

struct LsaConfig {
    std::size_t iterations = 50;
    double tolerance = 1e-10;
    std::size_t oversample = 10;
    std::uint64_t seed = 0;
    bool center = true;
};

struct LsaModel {
    std::size_t k = 0;
    Vector singular_values;  // non-increasing
    Matrix basis;            // k x d, orthonormal rows
    Vector column_means;     // empty when not centered

    std::size_t input_dim() const noexcept { return basis.cols(); }
};

// Rank-k truncated SVD of the (column-centered) matrix by seeded block power
// iteration followed by a Rayleigh-Ritz rotation. Each basis vector has its
// largest-magnitude component positive.
LsaModel lsa_fit(const Matrix &x, std::size_t k, const LsaConfig &config = {});
inline LsaModel lsa_fit(const FeatureMatrix &x, std::size_t k, const LsaConfig &config = {}) {
    return lsa_fit(x.values, k, config);
}

Matrix lsa_transform(const LsaModel &model, const Matrix &x);
FeatureMatrix lsa_transform(const LsaModel &model, const FeatureMatrix &x);

// scores * basis + means
Matrix lsa_reconstruct(const LsaModel &model, const Matrix &scores);

// Symmetric eigen-decomposition by cyclic Jacobi rotations. Eigenvalues come
// back in descending order with eigenvectors as the columns of the matrix.
std::pair<Vector, Matrix> symmetric_eigen(const Matrix &a, double tolerance = 1e-15, std::size_t max_sweeps = 100);

}  // namespace pcm
