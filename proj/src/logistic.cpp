#include <algorithm>
#include <cmath>
#include <limits>

#include "baselines_internal.hpp"
#include "pcm/baselines.hpp"
#include "pcm/error.hpp"

namespace pcm {

namespace {

void class_scores(const LogisticState &s, std::span<const double> x, Vector &out) {
    out.assign(s.classes.size(), 0.0);
    for (std::size_t c = 0; c < s.classes.size(); ++c) {
        double v = s.biases[c];
        for (std::size_t j = 0; j < x.size(); ++j) {
            v += s.weights(c, j) * (x[j] - s.mean[j]) / s.scale[j];
        }
        out[c] = v;
    }
}

}  // namespace

LogisticState fit_logistic(const Matrix &x, std::span<const int> y, std::size_t iters, double l2, double step) {
    detail::validate_training_set(x, y, "logistic regression");
    LogisticState s;
    s.classes = detail::distinct_labels(y);
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const std::size_t k = s.classes.size();
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            s.mean[j] += x(r, j);
        }
    }
    for (auto &m : s.mean) {
        m /= static_cast<double>(n);
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = x(r, j) - s.mean[j];
            s.scale[j] += dev * dev;
        }
    }
    for (auto &v : s.scale) {
        v = std::sqrt(v / static_cast<double>(n));
        if (v < 1e-12) {
            v = 1.0;
        }
    }
    Matrix z(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            z(r, j) = (x(r, j) - s.mean[j]) / s.scale[j];
        }
    }
    std::vector<std::size_t> target(n);
    for (std::size_t r = 0; r < n; ++r) {
        target[r] = static_cast<std::size_t>(std::lower_bound(s.classes.begin(), s.classes.end(), y[r]) -
                                             s.classes.begin());
    }
    s.weights = Matrix(k, d);
    s.biases.assign(k, 0.0);
    Matrix gw(k, d);
    Vector gb(k);
    Vector p(k);
    for (std::size_t it = 0; it < iters; ++it) {
        std::fill(gw.data().begin(), gw.data().end(), 0.0);
        std::fill(gb.begin(), gb.end(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                p[c] = s.biases[c] + dot(s.weights.row(c), z.row(r));
                top = std::max(top, p[c]);
            }
            double total = 0.0;
            for (auto &v : p) {
                v = std::exp(v - top);
                total += v;
            }
            for (std::size_t c = 0; c < k; ++c) {
                const double g = p[c] / total - (c == target[r] ? 1.0 : 0.0);
                gb[c] += g;
                auto row = gw.row(c);
                const auto zr = z.row(r);
                for (std::size_t j = 0; j < d; ++j) {
                    row[j] += g * zr[j];
                }
            }
        }
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t c = 0; c < k; ++c) {
            s.biases[c] -= step * gb[c] * inv;
            for (std::size_t j = 0; j < d; ++j) {
                s.weights(c, j) -= step * (gw(c, j) * inv + l2 * s.weights(c, j));
            }
        }
    }
    return s;
}

int predict_logistic(const LogisticState &s, std::span<const double> x) {
    Vector scores;
    class_scores(s, x, scores);
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) {
            best = c;
        }
    }
    return s.classes[best];
}

}  // namespace pcm
