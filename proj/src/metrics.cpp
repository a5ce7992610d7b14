#include <algorithm>
#include <map>

#include "pcm/error.hpp"
#include "pcm/eval.hpp"
#include "pcm/rng.hpp"

namespace pcm {

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

FoldPlan stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        fail(ErrorKind::InvalidArgument, "stratified_folds: k must be at least 2, got " + std::to_string(k));
    }
    if (y.empty()) {
        fail(ErrorKind::InvalidArgument, "stratified_folds: no labels");
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(y.size(), 0);
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
        members[y[i]].push_back(i);
    }
    Rng rng(seed);
    std::size_t next = 0;
    for (auto &[label, rows] : members) {
        rng.shuffle(rows);
        for (const auto r : rows) {
            plan.assignment[r] = next;
            next = (next + 1) % k;
        }
    }
    return plan;
}

void ConfusionMatrix::add(int gold, int predicted) {
    if (gold < 1 || gold > static_cast<int>(kClasses) || predicted < 1 || predicted > static_cast<int>(kClasses)) {
        fail(ErrorKind::InvalidArgument, "confusion: labels must lie in 1..5 (got " + std::to_string(gold) + ", " +
                                             std::to_string(predicted) + ")");
    }
    ++counts[static_cast<std::size_t>(gold - 1)][static_cast<std::size_t>(predicted - 1)];
}

std::size_t ConfusionMatrix::total() const noexcept {
    std::size_t t = 0;
    for (const auto &row : counts) {
        for (const auto v : row) {
            t += v;
        }
    }
    return t;
}

ConfusionMatrix &ConfusionMatrix::operator+=(const ConfusionMatrix &other) {
    for (std::size_t g = 0; g < kClasses; ++g) {
        for (std::size_t p = 0; p < kClasses; ++p) {
            counts[g][p] += other.counts[g][p];
        }
    }
    return *this;
}

ConfusionMatrix confusion(std::span<const int> golds, std::span<const int> preds) {
    if (golds.size() != preds.size()) {
        fail(ErrorKind::Dimension, "confusion: " + std::to_string(golds.size()) + " golds but " +
                                       std::to_string(preds.size()) + " predictions");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < golds.size(); ++i) {
        cm.add(golds[i], preds[i]);
    }
    return cm;
}

namespace {

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

double harmonic(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

Prf metrics(const ConfusionMatrix &cm, Averaging averaging) {
    const std::size_t total = cm.total();
    if (total == 0) {
        fail(ErrorKind::InvalidArgument, "metrics: empty confusion matrix");
    }
    std::array<double, kClasses> tp{}, fp{}, fn{}, support{};
    for (std::size_t g = 0; g < kClasses; ++g) {
        for (std::size_t p = 0; p < kClasses; ++p) {
            const auto v = static_cast<double>(cm.counts[g][p]);
            support[g] += v;
            if (g == p) {
                tp[g] += v;
            } else {
                fn[g] += v;
                fp[p] += v;
            }
        }
    }
    if (averaging == Averaging::Micro) {
        double stp = 0, sfp = 0, sfn = 0;
        for (std::size_t c = 0; c < kClasses; ++c) {
            stp += tp[c];
            sfp += fp[c];
            sfn += fn[c];
        }
        const double p = ratio(stp, stp + sfp);
        const double r = ratio(stp, stp + sfn);
        return {p, r, harmonic(p, r)};
    }
    Prf out;
    for (std::size_t c = 0; c < kClasses; ++c) {
        const double p = ratio(tp[c], tp[c] + fp[c]);
        const double r = ratio(tp[c], tp[c] + fn[c]);
        const double w = averaging == Averaging::Macro ? 1.0 / kClasses : support[c] / static_cast<double>(total);
        out.precision += w * p;
        out.recall += w * r;
        out.f1 += w * harmonic(p, r);
    }
    return out;
}

const Prf &MetricSet::get(Averaging a) const {
    switch (a) {
    case Averaging::Macro: return macro;
    case Averaging::Micro: return micro;
    case Averaging::Weighted: return weighted;
    }
    return micro;
}

MetricSet all_metrics(const ConfusionMatrix &cm) {
    return {metrics(cm, Averaging::Macro), metrics(cm, Averaging::Micro), metrics(cm, Averaging::Weighted)};
}

nlohmann::json to_json(const ConfusionMatrix &cm) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : cm.counts) {
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json to_json(const MetricSet &m) {
    const auto one = [](const Prf &p) {
        return nlohmann::json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
    };
    return {{"macro", one(m.macro)}, {"micro", one(m.micro)}, {"weighted", one(m.weighted)}};
}

}  // namespace pcm
