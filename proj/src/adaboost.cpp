#include <algorithm>
#include <cmath>

#include "baselines_internal.hpp"
#include "pcm/baselines.hpp"
#include "pcm/error.hpp"

namespace pcm {

// SAMME: multi-class boosting where each round's vote weight carries the
// extra log(K - 1) term.
AdaBoostState fit_adaboost(const Matrix &x, std::span<const int> y, std::size_t rounds) {
    detail::validate_training_set(x, y, "AdaBoost");
    AdaBoostState s;
    s.classes = detail::distinct_labels(y);
    if (s.classes.size() < 2) {
        fail(ErrorKind::InvalidArgument, "AdaBoost: training labels contain a single class");
    }
    if (rounds < 1) {
        fail(ErrorKind::InvalidArgument, "AdaBoost: rounds must be at least 1");
    }
    const double k = static_cast<double>(s.classes.size());
    const std::size_t n = x.rows();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (std::size_t round = 0; round < rounds; ++round) {
        DecisionTree stump = fit_stump(x, y, w);
        double err = 0.0;
        std::vector<bool> miss(n);
        for (std::size_t i = 0; i < n; ++i) {
            miss[i] = stump.predict(x.row(i)) != y[i];
            if (miss[i]) {
                err += w[i];
            }
        }
        if (err >= 1.0 - 1.0 / k) {
            // no better than chance: keep a single weak vote so the ensemble still predicts
            if (s.stumps.empty()) {
                s.stumps.push_back(std::move(stump));
                s.alphas.push_back(1.0);
            }
            break;
        }
        const double clamped = std::max(err, 1e-10);
        const double alpha = std::log((1.0 - clamped) / clamped) + std::log(k - 1.0);
        s.stumps.push_back(std::move(stump));
        s.alphas.push_back(alpha);
        if (err <= 0.0) {
            break;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (miss[i]) {
                w[i] *= std::exp(alpha);
            }
            total += w[i];
        }
        for (auto &v : w) {
            v /= total;
        }
    }
    return s;
}

int predict_adaboost(const AdaBoostState &s, std::span<const double> x, std::size_t rounds) {
    detail::LabelTally votes{};
    const std::size_t upto = std::min(rounds, s.stumps.size());
    for (std::size_t r = 0; r < upto; ++r) {
        votes[static_cast<std::size_t>(s.stumps[r].predict(x))] += s.alphas[r];
    }
    const int label = detail::majority(votes);
    return label == 0 ? s.classes.front() : label;
}

std::vector<double> adaboost_training_curve(const AdaBoostState &s, const Matrix &x, std::span<const int> y) {
    std::vector<double> curve;
    // running vote totals, so the whole curve costs one pass per stump
    std::vector<detail::LabelTally> votes(x.rows(), detail::LabelTally{});
    for (std::size_t r = 0; r < s.stumps.size(); ++r) {
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            votes[i][static_cast<std::size_t>(s.stumps[r].predict(x.row(i)))] += s.alphas[r];
            if (detail::majority(votes[i]) != y[i]) {
                ++wrong;
            }
        }
        curve.push_back(static_cast<double>(wrong) / static_cast<double>(x.rows()));
    }
    return curve;
}

}  // namespace pcm
