#include <algorithm>
#include <cmath>
#include <limits>

#include "baselines_internal.hpp"
#include "pcm/baselines.hpp"
#include "pcm/error.hpp"
#include "pcm/kernels.hpp"
#include "pcm/rng.hpp"

namespace pcm {

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) {
        fail(ErrorKind::Dimension, "rbf_kernel: dimensions differ (" + std::to_string(x.size()) + " vs " +
                                       std::to_string(y.size()) + ")");
    }
    if (gamma < 0) {
        fail(ErrorKind::InvalidArgument, "rbf_kernel: gamma must be non-negative");
    }
    return std::exp(-gamma * squared_distance(x, y));
}

namespace {

struct BinaryMachine {
    Vector alpha;
    double bias = 0.0;
};

// Simplified SMO: the second multiplier is drawn at random instead of by
// the maximal-step heuristic. Decision values are cached and patched after
// every accepted step.
BinaryMachine smo(const Matrix &gram, std::span<const double> y, double c, double tol, std::size_t max_passes,
                  Rng &rng) {
    const std::size_t n = y.size();
    BinaryMachine m{Vector(n, 0.0), 0.0};
    Vector f(n, 0.0);  // sum_k alpha_k y_k K(k, i), without bias
    std::size_t passes = 0;
    std::size_t sweeps = 0;
    const std::size_t sweep_cap = std::max<std::size_t>(1000, 20 * max_passes);
    while (passes < max_passes && sweeps < sweep_cap) {
        ++sweeps;
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = f[i] + m.bias - y[i];
            const bool violates = (y[i] * ei < -tol && m.alpha[i] < c) || (y[i] * ei > tol && m.alpha[i] > 0);
            if (!violates || n < 2) {
                continue;
            }
            std::size_t j = rng.below(n - 1);
            if (j >= i) {
                ++j;
            }
            const double ej = f[j] + m.bias - y[j];
            const double ai = m.alpha[i];
            const double aj = m.alpha[j];
            double lo, hi;
            if (y[i] != y[j]) {
                lo = std::max(0.0, aj - ai);
                hi = std::min(c, c + aj - ai);
            } else {
                lo = std::max(0.0, ai + aj - c);
                hi = std::min(c, ai + aj);
            }
            if (lo >= hi) {
                continue;
            }
            const double eta = 2.0 * gram(i, j) - gram(i, i) - gram(j, j);
            if (eta >= 0) {
                continue;
            }
            double new_aj = std::clamp(aj - y[j] * (ei - ej) / eta, lo, hi);
            if (std::abs(new_aj - aj) < 1e-5) {
                continue;
            }
            const double new_ai = ai + y[i] * y[j] * (aj - new_aj);
            const double di = new_ai - ai;
            const double dj = new_aj - aj;
            const double b1 = m.bias - ei - y[i] * di * gram(i, i) - y[j] * dj * gram(i, j);
            const double b2 = m.bias - ej - y[i] * di * gram(i, j) - y[j] * dj * gram(j, j);
            if (new_ai > 0 && new_ai < c) {
                m.bias = b1;
            } else if (new_aj > 0 && new_aj < c) {
                m.bias = b2;
            } else {
                m.bias = (b1 + b2) / 2.0;
            }
            m.alpha[i] = new_ai;
            m.alpha[j] = new_aj;
            for (std::size_t k = 0; k < n; ++k) {
                f[k] += y[i] * di * gram(i, k) + y[j] * dj * gram(j, k);
            }
            ++changed;
        }
        passes = changed == 0 ? passes + 1 : 0;
    }
    return m;
}

}  // namespace

SvmState fit_svm(const Matrix &x, std::span<const int> y, double gamma, double c, double tolerance,
                 std::size_t max_passes, std::uint64_t seed) {
    detail::validate_training_set(x, y, "R-SVM");
    SvmState s;
    s.gamma = gamma;
    s.classes = detail::distinct_labels(y);
    if (s.classes.size() < 2) {
        fail(ErrorKind::InvalidArgument, "R-SVM: training labels contain a single class");
    }
    if (!(c > 0) || !(gamma >= 0)) {
        fail(ErrorKind::InvalidArgument, "R-SVM: C must be positive and gamma non-negative");
    }
    const Matrix gram = kernels::rbf_gram(x, x, gamma);
    for (std::size_t ci = 0; ci < s.classes.size(); ++ci) {
        Vector sign(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            sign[i] = y[i] == s.classes[ci] ? 1.0 : -1.0;
        }
        Rng rng(derive_seed(seed, ci));
        const BinaryMachine m = smo(gram, sign, c, tolerance, max_passes, rng);
        Matrix sv;
        Vector coef;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (m.alpha[i] > 1e-12) {
                sv.append_row(x.row(i));
                coef.push_back(m.alpha[i] * sign[i]);
            }
        }
        if (sv.rows() == 0) {
            sv = Matrix(0, x.cols());
        }
        s.support_vectors.push_back(std::move(sv));
        s.coefficients.push_back(std::move(coef));
        s.biases.push_back(m.bias);
    }
    return s;
}

int predict_svm(const SvmState &s, std::span<const double> x) {
    double best = -std::numeric_limits<double>::infinity();
    int label = s.classes.front();
    for (std::size_t c = 0; c < s.classes.size(); ++c) {
        double v = s.biases[c];
        const auto &sv = s.support_vectors[c];
        for (std::size_t i = 0; i < sv.rows(); ++i) {
            v += s.coefficients[c][i] * std::exp(-s.gamma * squared_distance(sv.row(i), x));
        }
        if (v > best) {
            best = v;
            label = s.classes[c];
        }
    }
    return label;
}

}  // namespace pcm
