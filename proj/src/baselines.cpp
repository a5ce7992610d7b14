#include "pcm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "baselines_internal.hpp"
#include "pcm/error.hpp"
#include "pcm/rng.hpp"

namespace pcm {

namespace detail {

int majority(const LabelTally &tally) {
    int best = 0;
    for (std::size_t c = 1; c < tally.size(); ++c) {
        if (tally[c] > 0 && (best == 0 || tally[c] > tally[static_cast<std::size_t>(best)])) {
            best = static_cast<int>(c);
        }
    }
    return best;
}

void validate_training_set(const Matrix &x, std::span<const int> y, const char *who) {
    if (x.rows() == 0) {
        fail(ErrorKind::InvalidArgument, std::string(who) + ": empty training set");
    }
    if (x.rows() != y.size()) {
        fail(ErrorKind::Dimension, std::string(who) + ": " + std::to_string(x.rows()) + " rows but " +
                                       std::to_string(y.size()) + " labels");
    }
    for (const int label : y) {
        if (label < 1 || label > 5) {
            fail(ErrorKind::InvalidArgument, std::string(who) + ": label " + std::to_string(label) +
                                                 " outside 1..5");
        }
    }
    for (const double v : x.data()) {
        if (!std::isfinite(v)) {
            fail(ErrorKind::Numeric, std::string(who) + ": non-finite feature value");
        }
    }
}

std::vector<int> distinct_labels(std::span<const int> y) {
    std::vector<int> out(y.begin(), y.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

std::string to_string(BaselineKind kind) {
    switch (kind) {
    case BaselineKind::NB: return "nb";
    case BaselineKind::DT: return "dt";
    case BaselineKind::RF: return "rf";
    case BaselineKind::KNN: return "knn";
    case BaselineKind::RSVM: return "rsvm";
    case BaselineKind::AdaBoost: return "ada";
    case BaselineKind::LR: return "lr";
    }
    return "?";
}

std::string display_name(BaselineKind kind) {
    switch (kind) {
    case BaselineKind::NB: return "NB";
    case BaselineKind::DT: return "DT";
    case BaselineKind::RF: return "RF";
    case BaselineKind::KNN: return "K-NN";
    case BaselineKind::RSVM: return "R-SVM";
    case BaselineKind::AdaBoost: return "AdaBoost";
    case BaselineKind::LR: return "LR";
    }
    return "?";
}

BaselineKind baseline_kind_from_string(const std::string &s) {
    std::string lower;
    for (const char ch : s) {
        if (ch != '-' && ch != '_') {
            lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
    }
    for (const auto kind : all_baseline_kinds()) {
        if (lower == to_string(kind)) {
            return kind;
        }
    }
    if (lower == "adaboost") {
        return BaselineKind::AdaBoost;
    }
    if (lower == "svm") {
        return BaselineKind::RSVM;
    }
    fail(ErrorKind::InvalidArgument, "unknown baseline '" + s + "' (expected nb, dt, rf, knn, rsvm, ada or lr)");
}

const std::vector<BaselineKind> &all_baseline_kinds() {
    static const std::vector<BaselineKind> kinds{BaselineKind::NB,   BaselineKind::DT,       BaselineKind::RF,
                                                 BaselineKind::KNN,  BaselineKind::RSVM,     BaselineKind::AdaBoost,
                                                 BaselineKind::LR};
    return kinds;
}

nlohmann::json to_json(const BaselineHyper &h) {
    nlohmann::json j{{"knn_k", h.knn_k},
                     {"dt_max_depth", h.dt_max_depth},
                     {"dt_min_leaf", h.dt_min_leaf},
                     {"rf_trees", h.rf_trees},
                     {"rf_feature_frac", nullptr},
                     {"rf_bootstrap", h.rf_bootstrap},
                     {"ada_rounds", h.ada_rounds},
                     {"svm_gamma", nullptr},
                     {"svm_c", h.svm_c},
                     {"svm_tolerance", h.svm_tolerance},
                     {"svm_max_passes", h.svm_max_passes},
                     {"lr_iters", h.lr_iters},
                     {"lr_l2", h.lr_l2},
                     {"lr_step", h.lr_step},
                     {"nb_var_floor", h.nb_var_floor},
                     {"seed", h.seed}};
    if (h.rf_feature_frac) {
        j["rf_feature_frac"] = *h.rf_feature_frac;
    }
    if (h.svm_gamma) {
        j["svm_gamma"] = *h.svm_gamma;
    }
    return j;
}

BaselineHyper baseline_hyper_from_json(const nlohmann::json &j) {
    BaselineHyper h;
    if (!j.is_object()) {
        fail(ErrorKind::Parse, "baseline hyperparameters must be a JSON object");
    }
    try {
        h.knn_k = j.value("knn_k", h.knn_k);
        h.dt_max_depth = j.value("dt_max_depth", h.dt_max_depth);
        h.dt_min_leaf = j.value("dt_min_leaf", h.dt_min_leaf);
        h.rf_trees = j.value("rf_trees", h.rf_trees);
        if (j.contains("rf_feature_frac") && !j["rf_feature_frac"].is_null()) {
            h.rf_feature_frac = j["rf_feature_frac"].get<double>();
        }
        h.rf_bootstrap = j.value("rf_bootstrap", h.rf_bootstrap);
        h.ada_rounds = j.value("ada_rounds", h.ada_rounds);
        if (j.contains("svm_gamma") && !j["svm_gamma"].is_null()) {
            h.svm_gamma = j["svm_gamma"].get<double>();
        }
        h.svm_c = j.value("svm_c", h.svm_c);
        h.svm_tolerance = j.value("svm_tolerance", h.svm_tolerance);
        h.svm_max_passes = j.value("svm_max_passes", h.svm_max_passes);
        h.lr_iters = j.value("lr_iters", h.lr_iters);
        h.lr_l2 = j.value("lr_l2", h.lr_l2);
        h.lr_step = j.value("lr_step", h.lr_step);
        h.nb_var_floor = j.value("nb_var_floor", h.nb_var_floor);
        h.seed = j.value("seed", h.seed);
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Parse, std::string("baseline hyperparameters: ") + e.what());
    }
    const auto positive = [](std::size_t v, const char *name) {
        if (v == 0) {
            fail(ErrorKind::InvalidArgument, std::string(name) + " must be positive");
        }
    };
    positive(h.knn_k, "knn_k");
    positive(h.dt_min_leaf, "dt_min_leaf");
    positive(h.rf_trees, "rf_trees");
    positive(h.ada_rounds, "ada_rounds");
    positive(h.svm_max_passes, "svm_max_passes");
    if (h.rf_feature_frac && !(*h.rf_feature_frac > 0 && *h.rf_feature_frac <= 1)) {
        fail(ErrorKind::InvalidArgument, "rf_feature_frac must lie in (0, 1]");
    }
    if (!(h.svm_c > 0) || (h.svm_gamma && !(*h.svm_gamma >= 0)) || !(h.lr_step > 0) || !(h.lr_l2 >= 0)) {
        fail(ErrorKind::InvalidArgument, "svm_c and lr_step must be positive; svm_gamma and lr_l2 non-negative");
    }
    return h;
}

namespace {

ForestState fit_forest(const Matrix &x, std::span<const int> y, const BaselineHyper &h) {
    ForestState f;
    const std::size_t cols = x.cols();
    std::size_t per_split = h.rf_feature_frac
                                ? static_cast<std::size_t>(std::lround(*h.rf_feature_frac * static_cast<double>(cols)))
                                : static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(cols))));
    per_split = std::clamp<std::size_t>(per_split, 1, cols);
    for (std::size_t t = 0; t < h.rf_trees; ++t) {
        const std::uint64_t seed = derive_seed(h.seed, t);
        std::vector<std::size_t> rows(x.rows());
        if (h.rf_bootstrap) {
            Rng rng(derive_seed(seed, 1));
            for (auto &r : rows) {
                r = rng.below(x.rows());
            }
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        f.trees.push_back(fit_tree(x, y, rows, h.dt_max_depth, h.dt_min_leaf, per_split, derive_seed(seed, 2)));
    }
    return f;
}

int predict_state(const BaselineModel &m, std::span<const double> x) {
    return std::visit(
        [&](const auto &s) -> int {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, GaussianNbState>) {
                return predict_gaussian_nb(s, x);
            } else if constexpr (std::is_same_v<S, KnnState>) {
                return predict_knn(s, x);
            } else if constexpr (std::is_same_v<S, DecisionTree>) {
                return s.predict(x);
            } else if constexpr (std::is_same_v<S, ForestState>) {
                detail::LabelTally votes{};
                for (const auto &t : s.trees) {
                    votes[static_cast<std::size_t>(t.predict(x))] += 1.0;
                }
                return detail::majority(votes);
            } else if constexpr (std::is_same_v<S, AdaBoostState>) {
                return predict_adaboost(s, x, s.stumps.size());
            } else if constexpr (std::is_same_v<S, SvmState>) {
                return predict_svm(s, x);
            } else {
                return predict_logistic(s, x);
            }
        },
        m.state);
}

void check_dim(const BaselineModel &m, std::size_t got) {
    if (got != m.input_dim) {
        fail(ErrorKind::Dimension, display_name(m.kind) + ": input has " + std::to_string(got) +
                                       " features, model was trained on " + std::to_string(m.input_dim));
    }
}

}  // namespace

BaselineModel train_baseline(BaselineKind kind, const Matrix &x, std::span<const int> y, const BaselineHyper &h) {
    detail::validate_training_set(x, y, display_name(kind).c_str());
    BaselineModel m;
    m.kind = kind;
    m.hyper = h;
    m.input_dim = x.cols();
    std::vector<std::size_t> all(x.rows());
    std::iota(all.begin(), all.end(), 0);
    switch (kind) {
    case BaselineKind::NB: m.state = fit_gaussian_nb(x, y, h.nb_var_floor); break;
    case BaselineKind::KNN: m.state = KnnState{h.knn_k, x, std::vector<int>(y.begin(), y.end())}; break;
    case BaselineKind::DT: m.state = fit_tree(x, y, all, h.dt_max_depth, h.dt_min_leaf, 0, h.seed); break;
    case BaselineKind::RF: m.state = fit_forest(x, y, h); break;
    case BaselineKind::AdaBoost: m.state = fit_adaboost(x, y, h.ada_rounds); break;
    case BaselineKind::RSVM: {
        const double gamma = h.svm_gamma.value_or(1.0 / static_cast<double>(std::max<std::size_t>(x.cols(), 1)));
        m.state = fit_svm(x, y, gamma, h.svm_c, h.svm_tolerance, h.svm_max_passes, h.seed);
        break;
    }
    case BaselineKind::LR: m.state = fit_logistic(x, y, h.lr_iters, h.lr_l2, h.lr_step); break;
    }
    return m;
}

int predict_baseline(const BaselineModel &model, std::span<const double> x) {
    check_dim(model, x.size());
    return predict_state(model, x);
}

std::vector<int> predict_baseline(const BaselineModel &model, const Matrix &x) {
    check_dim(model, x.cols());
    if (const auto *knn = std::get_if<KnnState>(&model.state)) {
        return predict_knn_batch(*knn, x);
    }
    std::vector<int> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        out[r] = predict_state(model, x.row(r));
    }
    return out;
}

namespace {

Matrix tree_nodes(const DecisionTree &t) {
    Matrix m(t.nodes.size(), 5);
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto &n = t.nodes[i];
        m(i, 0) = n.feature;
        m(i, 1) = n.threshold;
        m(i, 2) = n.left;
        m(i, 3) = n.right;
        m(i, 4) = n.label;
    }
    return m;
}

DecisionTree tree_from(const Matrix &m) {
    if (m.cols() != 5) {
        fail(ErrorKind::Parse, "checkpoint tree tensor must have 5 columns");
    }
    DecisionTree t;
    const auto count = static_cast<int>(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        DecisionTree::Node n{static_cast<int>(m(i, 0)), m(i, 1), static_cast<int>(m(i, 2)), static_cast<int>(m(i, 3)),
                             static_cast<int>(m(i, 4))};
        if (n.feature >= 0 && (n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i) || n.left >= count ||
                               n.right >= count)) {
            fail(ErrorKind::Parse, "checkpoint tree has an invalid child index");
        }
        t.nodes.push_back(n);
    }
    if (t.nodes.empty()) {
        fail(ErrorKind::Parse, "checkpoint tree has no nodes");
    }
    return t;
}

Vector labels_to_vector(std::span<const int> labels) { return Vector(labels.begin(), labels.end()); }

std::vector<int> vector_to_labels(const Vector &v) {
    std::vector<int> out;
    for (const double d : v) {
        out.push_back(static_cast<int>(d));
    }
    return out;
}

}  // namespace

void add_to_checkpoint(const BaselineModel &model, Checkpoint &ckpt, const std::string &prefix) {
    nlohmann::json meta{{"kind", to_string(model.kind)}, {"hyper", to_json(model.hyper)}, {"input_dim", model.input_dim}};
    const std::string p = prefix + ".";
    std::visit(
        [&](const auto &s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, GaussianNbState>) {
                ckpt.add(p + "classes", labels_to_vector(s.classes));
                ckpt.add(p + "means", s.means);
                ckpt.add(p + "variances", s.variances);
                ckpt.add(p + "log_priors", s.log_priors);
            } else if constexpr (std::is_same_v<S, KnnState>) {
                meta["k"] = s.k;
                ckpt.add(p + "x", s.x);
                ckpt.add(p + "y", labels_to_vector(s.y));
            } else if constexpr (std::is_same_v<S, DecisionTree>) {
                ckpt.add(p + "nodes", tree_nodes(s));
            } else if constexpr (std::is_same_v<S, ForestState>) {
                meta["trees"] = s.trees.size();
                for (std::size_t t = 0; t < s.trees.size(); ++t) {
                    ckpt.add(p + "tree" + std::to_string(t), tree_nodes(s.trees[t]));
                }
            } else if constexpr (std::is_same_v<S, AdaBoostState>) {
                meta["stumps"] = s.stumps.size();
                ckpt.add(p + "classes", labels_to_vector(s.classes));
                ckpt.add(p + "alphas", s.alphas);
                for (std::size_t t = 0; t < s.stumps.size(); ++t) {
                    ckpt.add(p + "stump" + std::to_string(t), tree_nodes(s.stumps[t]));
                }
            } else if constexpr (std::is_same_v<S, SvmState>) {
                meta["gamma"] = s.gamma;
                ckpt.add(p + "classes", labels_to_vector(s.classes));
                ckpt.add(p + "biases", s.biases);
                for (std::size_t c = 0; c < s.classes.size(); ++c) {
                    ckpt.add(p + "sv" + std::to_string(c), s.support_vectors[c].rows(), model.input_dim,
                             s.support_vectors[c].data());
                    ckpt.add(p + "coef" + std::to_string(c), s.coefficients[c]);
                }
            } else {
                ckpt.add(p + "classes", labels_to_vector(s.classes));
                ckpt.add(p + "weights", s.weights);
                ckpt.add(p + "biases", s.biases);
                ckpt.add(p + "mean", s.mean);
                ckpt.add(p + "scale", s.scale);
            }
        },
        model.state);
    ckpt.meta[prefix] = meta;
}

BaselineModel baseline_from_checkpoint(const Checkpoint &ckpt, const std::string &prefix) {
    if (!ckpt.meta.contains(prefix)) {
        fail(ErrorKind::Parse, "checkpoint has no baseline '" + prefix + "'");
    }
    const auto &meta = ckpt.meta[prefix];
    const std::string p = prefix + ".";
    BaselineModel m;
    try {
        m.kind = baseline_kind_from_string(meta.at("kind").get<std::string>());
        m.hyper = baseline_hyper_from_json(meta.at("hyper"));
        m.input_dim = meta.at("input_dim").get<std::size_t>();
        switch (m.kind) {
        case BaselineKind::NB:
            m.state = GaussianNbState{vector_to_labels(ckpt.vector(p + "classes")), ckpt.matrix(p + "means"),
                                      ckpt.matrix(p + "variances"), ckpt.vector(p + "log_priors")};
            break;
        case BaselineKind::KNN:
            m.state = KnnState{meta.at("k").get<std::size_t>(), ckpt.matrix(p + "x"),
                               vector_to_labels(ckpt.vector(p + "y"))};
            break;
        case BaselineKind::DT: m.state = tree_from(ckpt.matrix(p + "nodes")); break;
        case BaselineKind::RF: {
            ForestState f;
            for (std::size_t t = 0; t < meta.at("trees").get<std::size_t>(); ++t) {
                f.trees.push_back(tree_from(ckpt.matrix(p + "tree" + std::to_string(t))));
            }
            m.state = std::move(f);
            break;
        }
        case BaselineKind::AdaBoost: {
            AdaBoostState a;
            a.classes = vector_to_labels(ckpt.vector(p + "classes"));
            a.alphas = ckpt.vector(p + "alphas");
            for (std::size_t t = 0; t < meta.at("stumps").get<std::size_t>(); ++t) {
                a.stumps.push_back(tree_from(ckpt.matrix(p + "stump" + std::to_string(t))));
            }
            m.state = std::move(a);
            break;
        }
        case BaselineKind::RSVM: {
            SvmState s;
            s.gamma = meta.at("gamma").get<double>();
            s.classes = vector_to_labels(ckpt.vector(p + "classes"));
            s.biases = ckpt.vector(p + "biases");
            for (std::size_t c = 0; c < s.classes.size(); ++c) {
                s.support_vectors.push_back(ckpt.matrix(p + "sv" + std::to_string(c)));
                s.coefficients.push_back(ckpt.vector(p + "coef" + std::to_string(c)));
            }
            m.state = std::move(s);
            break;
        }
        case BaselineKind::LR:
            m.state = LogisticState{vector_to_labels(ckpt.vector(p + "classes")), ckpt.matrix(p + "weights"),
                                    ckpt.vector(p + "biases"), ckpt.vector(p + "mean"), ckpt.vector(p + "scale")};
            break;
        }
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Parse, "checkpoint baseline '" + prefix + "': " + e.what());
    }
    return m;
}

}  // namespace pcm
