#include "pcm/error.hpp"
#include "pcm/kernels.hpp"

#include <cmath>
#include <cstdint>

#ifdef PCM_HAVE_OPENMP
#include <omp.h>
#endif

namespace pcm::kernels {

namespace detail {
void check_inner(std::size_t lhs, std::size_t rhs, const char *name);
}

namespace omp {

bool available() noexcept {
#ifdef PCM_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

// Row-parallel: each thread owns whole output rows and accumulates them in
// the same order as the serial kernel.
Matrix gemm(const Matrix &a, const Matrix &b) {
    detail::check_inner(a.cols(), b.rows(), "gemm");
    Matrix out(a.rows(), b.cols());
    const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto dst = out.row(static_cast<std::size_t>(i));
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(static_cast<std::size_t>(i), k);
            const auto src = b.row(k);
            for (std::size_t j = 0; j < dst.size(); ++j) {
                dst[j] += aik * src[j];
            }
        }
    }
    return out;
}

Matrix gemm_tn(const Matrix &a, const Matrix &b) {
    detail::check_inner(a.rows(), b.rows(), "gemm_tn");
    Matrix out(a.cols(), b.cols());
    const auto rows = static_cast<std::int64_t>(a.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto dst = out.row(static_cast<std::size_t>(i));
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const double ari = a(r, static_cast<std::size_t>(i));
            const auto src = b.row(r);
            for (std::size_t j = 0; j < dst.size(); ++j) {
                dst[j] += ari * src[j];
            }
        }
    }
    return out;
}

Matrix sq_distances(const Matrix &a, const Matrix &b) {
    detail::check_inner(a.cols(), b.cols(), "sq_distances");
    Matrix out(a.rows(), b.rows());
    const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const auto src = a.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < b.rows(); ++j) {
            out(static_cast<std::size_t>(i), j) = squared_distance(src, b.row(j));
        }
    }
    return out;
}

Matrix rbf_gram(const Matrix &a, const Matrix &b, double gamma) {
    Matrix out = omp::sq_distances(a, b);
    auto &data = out.data();
    const auto n = static_cast<std::int64_t>(data.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        data[static_cast<std::size_t>(i)] = std::exp(-gamma * data[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace omp

#ifdef PCM_HAVE_OPENMP
Matrix gemm(const Matrix &a, const Matrix &b) { return omp::gemm(a, b); }
Matrix gemm_tn(const Matrix &a, const Matrix &b) { return omp::gemm_tn(a, b); }
Matrix sq_distances(const Matrix &a, const Matrix &b) { return omp::sq_distances(a, b); }
Matrix rbf_gram(const Matrix &a, const Matrix &b, double gamma) { return omp::rbf_gram(a, b, gamma); }
#else
Matrix gemm(const Matrix &a, const Matrix &b) { return serial::gemm(a, b); }
Matrix gemm_tn(const Matrix &a, const Matrix &b) { return serial::gemm_tn(a, b); }
Matrix sq_distances(const Matrix &a, const Matrix &b) { return serial::sq_distances(a, b); }
Matrix rbf_gram(const Matrix &a, const Matrix &b, double gamma) { return serial::rbf_gram(a, b, gamma); }
#endif

}  // namespace pcm::kernels
