#include "pcm/error.hpp"
#include "pcm/kernels.hpp"

#include <cmath>
#include <string>

namespace pcm::kernels {

namespace detail {

void check_inner(std::size_t lhs, std::size_t rhs, const char *name) {
    if (lhs != rhs) {
        fail(ErrorKind::Dimension,
             std::string(name) + ": inner dimensions differ (" + std::to_string(lhs) + " vs " + std::to_string(rhs) + ")");
    }
}

}  // namespace detail

namespace serial {

Matrix gemm(const Matrix &a, const Matrix &b) {
    detail::check_inner(a.cols(), b.rows(), "gemm");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
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
    for (std::size_t i = 0; i < a.cols(); ++i) {
        auto dst = out.row(i);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const double ari = a(r, i);
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
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            out(i, j) = squared_distance(a.row(i), b.row(j));
        }
    }
    return out;
}

Matrix rbf_gram(const Matrix &a, const Matrix &b, double gamma) {
    Matrix out = sq_distances(a, b);
    for (double &v : out.data()) {
        v = std::exp(-gamma * v);
    }
    return out;
}

}  // namespace serial

}  // namespace pcm::kernels
