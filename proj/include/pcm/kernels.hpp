#pragma once

#include "pcm/matrix.hpp"

// Dense kernels shared by LSA, SMOTE, KNN and the RBF-SVM. Each kernel has a
// serial reference and an OpenMP version; both compute every output element
// with the same summation order, so results agree bit for bit. The unqualified
// entry points dispatch to the OpenMP version when it is compiled in.
namespace pcm::kernels {

namespace serial {
Matrix gemm(const Matrix &a, const Matrix &b);     // a * b
Matrix gemm_tn(const Matrix &a, const Matrix &b);  // a^T * b
Matrix sq_distances(const Matrix &a, const Matrix &b);
Matrix rbf_gram(const Matrix &a, const Matrix &b, double gamma);
}  // namespace serial

namespace omp {
Matrix gemm(const Matrix &a, const Matrix &b);
Matrix gemm_tn(const Matrix &a, const Matrix &b);
Matrix sq_distances(const Matrix &a, const Matrix &b);
Matrix rbf_gram(const Matrix &a, const Matrix &b, double gamma);
bool available() noexcept;
}  // namespace omp

Matrix gemm(const Matrix &a, const Matrix &b);
Matrix gemm_tn(const Matrix &a, const Matrix &b);
Matrix sq_distances(const Matrix &a, const Matrix &b);
Matrix rbf_gram(const Matrix &a, const Matrix &b, double gamma);

}  // namespace pcm::kernels
