#include "pcm/lsa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcm/error.hpp"
#include "pcm/kernels.hpp"
#include "pcm/rng.hpp"

namespace pcm {

namespace {

// Orthonormalizes the columns of q in place (two passes of modified
// Gram-Schmidt). Columns that collapse are replaced by fresh random
// directions so the block keeps full column rank.
void orthonormalize_columns(Matrix &q, Rng &rng) {
    const std::size_t d = q.rows();
    const std::size_t m = q.cols();
    for (std::size_t j = 0; j < m; ++j) {
        double original = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            original += q(r, j) * q(r, j);
        }
        original = std::sqrt(original);
        for (int attempt = 0;; ++attempt) {
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < j; ++i) {
                    double proj = 0.0;
                    for (std::size_t r = 0; r < d; ++r) {
                        proj += q(r, i) * q(r, j);
                    }
                    for (std::size_t r = 0; r < d; ++r) {
                        q(r, j) -= proj * q(r, i);
                    }
                }
            }
            double norm = 0.0;
            for (std::size_t r = 0; r < d; ++r) {
                norm += q(r, j) * q(r, j);
            }
            norm = std::sqrt(norm);
            if (norm > 1e-10 * std::max(original, 1.0) && norm > 1e-300) {
                for (std::size_t r = 0; r < d; ++r) {
                    q(r, j) /= norm;
                }
                break;
            }
            if (attempt > 8) {
                fail(ErrorKind::Numeric, "lsa: could not complete an orthonormal block");
            }
            for (std::size_t r = 0; r < d; ++r) {
                q(r, j) = rng.normal();
            }
            original = 0.0;
            for (std::size_t r = 0; r < d; ++r) {
                original += q(r, j) * q(r, j);
            }
            original = std::sqrt(original);
        }
    }
}

}  // namespace

std::pair<Vector, Matrix> symmetric_eigen(const Matrix &input, double tolerance, std::size_t max_sweeps) {
    const std::size_t n = input.rows();
    if (input.cols() != n) {
        fail(ErrorKind::Dimension, "symmetric_eigen: matrix is not square");
    }
    Matrix a = input;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        v(i, i) = 1.0;
    }
    double scale = 0.0;
    for (const double x : a.data()) {
        scale += x * x;
    }
    scale = std::sqrt(scale);
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a(p, q) * a(p, q);
            }
        }
        if (std::sqrt(off) <= tolerance * std::max(scale, 1e-300)) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    Vector values(n);
    Matrix vectors(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        values[j] = a(order[j], order[j]);
        for (std::size_t k = 0; k < n; ++k) {
            vectors(k, j) = v(k, order[j]);
        }
    }
    return {values, vectors};
}

LsaModel lsa_fit(const Matrix &x, std::size_t k, const LsaConfig &config) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (k < 1 || k > std::min(n, d)) {
        fail(ErrorKind::InvalidArgument, "lsa_fit: k=" + std::to_string(k) + " outside [1, " +
                                             std::to_string(std::min(n, d)) + "]");
    }
    for (const double v : x.data()) {
        if (!std::isfinite(v)) {
            fail(ErrorKind::Numeric, "lsa_fit: non-finite input");
        }
    }
    LsaModel model;
    model.k = k;
    Matrix xc = x;
    if (config.center) {
        model.column_means.assign(d, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                model.column_means[c] += x(r, c);
            }
        }
        for (auto &m : model.column_means) {
            m /= static_cast<double>(n);
        }
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                xc(r, c) -= model.column_means[c];
            }
        }
    }

    const std::size_t m = std::min(k + config.oversample, std::min(n, d));
    Rng rng(config.seed);
    Matrix q(d, m);
    for (auto &v : q.data()) {
        v = rng.normal();
    }
    orthonormalize_columns(q, rng);
    for (std::size_t it = 0; it < config.iterations; ++it) {
        Matrix z = kernels::gemm_tn(xc, kernels::gemm(xc, q));
        orthonormalize_columns(z, rng);
        // sum of squared sines between the old and new subspaces
        const Matrix overlap = kernels::gemm_tn(q, z);
        double captured = 0.0;
        for (const double v : overlap.data()) {
            captured += v * v;
        }
        q = std::move(z);
        if (std::sqrt(std::max(0.0, static_cast<double>(m) - captured)) < config.tolerance) {
            break;
        }
    }

    // Rayleigh-Ritz: rotate the block onto the singular directions.
    const Matrix b = kernels::gemm(xc, q);
    const auto [eigenvalues, rotation] = symmetric_eigen(kernels::gemm_tn(b, b));
    const Matrix v = kernels::gemm(q, rotation);
    model.singular_values.resize(k);
    model.basis = Matrix(k, d);
    for (std::size_t j = 0; j < k; ++j) {
        model.singular_values[j] = std::sqrt(std::max(0.0, eigenvalues[j]));
        std::size_t arg = 0;
        for (std::size_t r = 0; r < d; ++r) {
            if (std::abs(v(r, j)) > std::abs(v(arg, j))) {
                arg = r;
            }
        }
        const double sign = v(arg, j) < 0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < d; ++r) {
            model.basis(j, r) = sign * v(r, j);
        }
    }
    return model;
}

Matrix lsa_transform(const LsaModel &model, const Matrix &x) {
    if (x.cols() != model.input_dim()) {
        fail(ErrorKind::Dimension, "lsa_transform: input has " + std::to_string(x.cols()) + " columns, model expects " +
                                       std::to_string(model.input_dim()));
    }
    Matrix xc = x;
    if (!model.column_means.empty()) {
        for (std::size_t r = 0; r < xc.rows(); ++r) {
            for (std::size_t c = 0; c < xc.cols(); ++c) {
                xc(r, c) -= model.column_means[c];
            }
        }
    }
    return kernels::gemm(xc, model.basis.transposed());
}

FeatureMatrix lsa_transform(const LsaModel &model, const FeatureMatrix &x) {
    FeatureMatrix out{lsa_transform(model, x.values), {}};
    for (std::size_t j = 0; j < model.k; ++j) {
        out.col_labels.push_back("lsa:" + std::to_string(j));
    }
    return out;
}

Matrix lsa_reconstruct(const LsaModel &model, const Matrix &scores) {
    Matrix out = kernels::gemm(scores, model.basis);
    if (!model.column_means.empty()) {
        for (std::size_t r = 0; r < out.rows(); ++r) {
            for (std::size_t c = 0; c < out.cols(); ++c) {
                out(r, c) += model.column_means[c];
            }
        }
    }
    return out;
}

}  // namespace pcm
