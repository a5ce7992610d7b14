#include <cmath>
#include <limits>
#include <numbers>

#include "baselines_internal.hpp"
#include "pcm/baselines.hpp"

namespace pcm {

GaussianNbState fit_gaussian_nb(const Matrix &x, std::span<const int> y, double var_floor) {
    detail::validate_training_set(x, y, "naive Bayes");
    GaussianNbState s;
    s.classes = detail::distinct_labels(y);
    const std::size_t d = x.cols();
    s.means = Matrix(s.classes.size(), d);
    s.variances = Matrix(s.classes.size(), d);
    s.log_priors.assign(s.classes.size(), 0.0);
    for (std::size_t c = 0; c < s.classes.size(); ++c) {
        double n = 0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            if (y[r] != s.classes[c]) {
                continue;
            }
            n += 1;
            for (std::size_t j = 0; j < d; ++j) {
                s.means(c, j) += x(r, j);
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            s.means(c, j) /= n;
        }
        for (std::size_t r = 0; r < x.rows(); ++r) {
            if (y[r] != s.classes[c]) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                const double dev = x(r, j) - s.means(c, j);
                s.variances(c, j) += dev * dev;
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            s.variances(c, j) = std::max(s.variances(c, j) / n, var_floor);
        }
        s.log_priors[c] = std::log(n / static_cast<double>(x.rows()));
    }
    return s;
}

int predict_gaussian_nb(const GaussianNbState &s, std::span<const double> x) {
    double best = -std::numeric_limits<double>::infinity();
    int label = s.classes.front();
    for (std::size_t c = 0; c < s.classes.size(); ++c) {
        double lp = s.log_priors[c];
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double var = s.variances(c, j);
            const double dev = x[j] - s.means(c, j);
            lp -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + dev * dev / var);
        }
        // classes are ascending, so strict > keeps the lowest label on ties
        if (lp > best) {
            best = lp;
            label = s.classes[c];
        }
    }
    return label;
}

}  // namespace pcm
