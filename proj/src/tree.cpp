#include <algorithm>
#include <limits>
#include <numeric>

#include "baselines_internal.hpp"
#include "pcm/baselines.hpp"
#include "pcm/error.hpp"
#include "pcm/rng.hpp"

namespace pcm {

int DecisionTree::predict(std::span<const double> x) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const auto &n = nodes[at];
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[at].label;
}

std::size_t DecisionTree::depth() const {
    if (nodes.empty()) {
        return 0;
    }
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        const auto [at, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes[at].feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(nodes[at].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes[at].right), d + 1);
        }
    }
    return deepest;
}

namespace {

double gini(const detail::LabelTally &t, double total) {
    if (total <= 0) {
        return 0.0;
    }
    double g = 1.0;
    for (std::size_t c = 1; c < t.size(); ++c) {
        const double p = t[c] / total;
        g -= p * p;
    }
    return g;
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;
};

// Best split over the given features. A candidate must leave at least
// min_leaf rows (weight, for weighted splits) on each side. The ordering of
// features and thresholds decides exact ties: first feature, lowest threshold.
template <typename Score>
Split best_split(const Matrix &x, std::span<const int> y, std::span<const double> w,
                 const std::vector<std::size_t> &rows, std::span<const std::size_t> features, std::size_t min_leaf,
                 Score score) {
    Split best;
    best.score = std::numeric_limits<double>::infinity();
    detail::LabelTally total{};
    for (const auto r : rows) {
        total[static_cast<std::size_t>(y[r])] += w.empty() ? 1.0 : w[r];
    }
    std::vector<std::size_t> order = rows;
    for (const auto f : features) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
        detail::LabelTally left{};
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const std::size_t r = order[i];
            left[static_cast<std::size_t>(y[r])] += w.empty() ? 1.0 : w[r];
            const double v = x(r, f);
            const double next = x(order[i + 1], f);
            if (!(v < next)) {
                continue;
            }
            if (i + 1 < min_leaf || order.size() - i - 1 < min_leaf) {
                continue;
            }
            detail::LabelTally right{};
            for (std::size_t c = 0; c < right.size(); ++c) {
                right[c] = total[c] - left[c];
            }
            const double s = score(left, right);
            double threshold = v + (next - v) / 2.0;
            if (!(threshold < next)) {
                threshold = v;
            }
            if (s < best.score - 1e-12) {
                best = {static_cast<int>(f), threshold, s};
            }
        }
    }
    return best;
}

struct Builder {
    const Matrix &x;
    std::span<const int> y;
    std::size_t max_depth;
    std::size_t min_leaf;
    std::size_t features_per_split;
    Rng rng;
    DecisionTree tree;

    int grow(const std::vector<std::size_t> &rows, std::size_t depth) {
        detail::LabelTally tally{};
        for (const auto r : rows) {
            tally[static_cast<std::size_t>(y[r])] += 1.0;
        }
        const int node = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes.back().label = detail::majority(tally);
        const double n = static_cast<double>(rows.size());
        const double impurity = gini(tally, n);
        if (impurity <= 0.0 || (max_depth > 0 && depth >= max_depth) || rows.size() < 2 * min_leaf) {
            return node;
        }
        std::vector<std::size_t> features(x.cols());
        std::iota(features.begin(), features.end(), 0);
        if (features_per_split > 0 && features_per_split < x.cols()) {
            rng.shuffle(features);
            features.resize(features_per_split);
            std::sort(features.begin(), features.end());
        }
        const Split split = best_split(x, y, {}, rows, features, min_leaf,
                                       [&](const detail::LabelTally &l, const detail::LabelTally &r) {
                                           double nl = 0, nr = 0;
                                           for (std::size_t c = 1; c < l.size(); ++c) {
                                               nl += l[c];
                                               nr += r[c];
                                           }
                                           return (nl * gini(l, nl) + nr * gini(r, nr)) / n;
                                       });
        if (split.feature < 0 || !(split.score < impurity - 1e-12)) {
            return node;
        }
        std::vector<std::size_t> left, right;
        for (const auto r : rows) {
            (x(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
        }
        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        auto &nd = tree.nodes[static_cast<std::size_t>(node)];
        nd.feature = split.feature;
        nd.threshold = split.threshold;
        nd.left = l;
        nd.right = r;
        return node;
    }
};

}  // namespace

DecisionTree fit_tree(const Matrix &x, std::span<const int> y, std::span<const std::size_t> rows,
                      std::size_t max_depth, std::size_t min_leaf, std::size_t features_per_split,
                      std::uint64_t seed) {
    detail::validate_training_set(x, y, "decision tree");
    if (rows.empty()) {
        fail(ErrorKind::InvalidArgument, "decision tree: no training rows");
    }
    Builder b{x, y, max_depth, std::max<std::size_t>(min_leaf, 1), features_per_split, Rng(seed), {}};
    b.grow(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
    return std::move(b.tree);
}

DecisionTree fit_stump(const Matrix &x, std::span<const int> y, std::span<const double> weights) {
    detail::validate_training_set(x, y, "stump");
    if (weights.size() != y.size()) {
        fail(ErrorKind::Dimension, "stump: weight count does not match labels");
    }
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<std::size_t> features(x.cols());
    std::iota(features.begin(), features.end(), 0);
    detail::LabelTally total{};
    for (const auto r : rows) {
        total[static_cast<std::size_t>(y[r])] += weights[r];
    }
    DecisionTree tree;
    tree.nodes.push_back({});
    tree.nodes[0].label = detail::majority(total);
    // weighted misclassification when each side predicts its weighted majority
    const auto error = [](const detail::LabelTally &l, const detail::LabelTally &r) {
        double e = 0;
        for (const auto *t : {&l, &r}) {
            double sum = 0, top = 0;
            for (std::size_t c = 1; c < t->size(); ++c) {
                sum += (*t)[c];
                top = std::max(top, (*t)[c]);
            }
            e += sum - top;
        }
        return e;
    };
    const Split split = best_split(x, y, weights, rows, features, 1, error);
    double flat = 0;
    for (std::size_t c = 1; c < total.size(); ++c) {
        flat += total[c];
    }
    flat -= total[static_cast<std::size_t>(tree.nodes[0].label)];
    if (split.feature < 0 || !(split.score < flat - 1e-12)) {
        return tree;
    }
    detail::LabelTally left{}, right{};
    for (const auto r : rows) {
        auto &side = x(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right;
        side[static_cast<std::size_t>(y[r])] += weights[r];
    }
    tree.nodes[0].feature = split.feature;
    tree.nodes[0].threshold = split.threshold;
    tree.nodes[0].left = 1;
    tree.nodes[0].right = 2;
    for (const auto *side : {&left, &right}) {
        const int label = detail::majority(*side);
        tree.nodes.push_back({});
        tree.nodes.back().label = label == 0 ? tree.nodes[0].label : label;
    }
    return tree;
}

}  // namespace pcm
