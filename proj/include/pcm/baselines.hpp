#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pcm/checkpoint.hpp"
#include "pcm/matrix.hpp"

namespace pcm {

enum class BaselineKind { NB, DT, RF, KNN, RSVM, AdaBoost, LR };

std::string to_string(BaselineKind kind);  // nb, dt, rf, knn, rsvm, ada, lr
BaselineKind baseline_kind_from_string(const std::string &s);
std::string display_name(BaselineKind kind);  // NB, DT, ..., K-NN, R-SVM, AdaBoost
const std::vector<BaselineKind> &all_baseline_kinds();

struct BaselineHyper {
    std::size_t knn_k = 5;
    std::size_t dt_max_depth = 12;  // 0 = unlimited
    std::size_t dt_min_leaf = 1;
    std::size_t rf_trees = 50;
    std::optional<double> rf_feature_frac;  // fraction of columns per split; unset = sqrt(cols)
    bool rf_bootstrap = true;
    std::size_t ada_rounds = 50;
    std::optional<double> svm_gamma;  // unset = 1 / cols
    double svm_c = 1.0;
    double svm_tolerance = 1e-3;
    std::size_t svm_max_passes = 200;
    std::size_t lr_iters = 500;
    double lr_l2 = 1e-3;
    double lr_step = 0.5;
    double nb_var_floor = 1e-9;
    std::uint64_t seed = 0;
};

nlohmann::json to_json(const BaselineHyper &h);
BaselineHyper baseline_hyper_from_json(const nlohmann::json &j);

// Gaussian naive Bayes with per-class diagonal variances.
struct GaussianNbState {
    std::vector<int> classes;
    Matrix means;      // classes x d
    Matrix variances;  // classes x d
    Vector log_priors;
};

struct KnnState {
    std::size_t k = 5;
    Matrix x;
    std::vector<int> y;
};

// CART tree; feature < 0 marks a leaf. Samples with x[feature] <= threshold
// descend left.
struct DecisionTree {
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 1;
    };
    std::vector<Node> nodes;

    int predict(std::span<const double> x) const;
    std::size_t depth() const;
};

struct ForestState {
    std::vector<DecisionTree> trees;
};

struct AdaBoostState {
    std::vector<DecisionTree> stumps;
    Vector alphas;
    std::vector<int> classes;
};

struct SvmState {
    double gamma = 1.0;
    std::vector<int> classes;
    // one-vs-rest machine per class: f(x) = sum coef_i K(sv_i, x) + bias
    std::vector<Matrix> support_vectors;
    std::vector<Vector> coefficients;
    Vector biases;
};

struct LogisticState {
    std::vector<int> classes;
    Matrix weights;  // classes x d, on standardized features
    Vector biases;
    Vector mean;
    Vector scale;
};

using BaselineState =
    std::variant<GaussianNbState, KnnState, DecisionTree, ForestState, AdaBoostState, SvmState, LogisticState>;

struct BaselineModel {
    BaselineKind kind = BaselineKind::NB;
    BaselineHyper hyper;
    std::size_t input_dim = 0;
    BaselineState state;
};

BaselineModel train_baseline(BaselineKind kind, const Matrix &x, std::span<const int> y, const BaselineHyper &hyper);

int predict_baseline(const BaselineModel &model, std::span<const double> x);
std::vector<int> predict_baseline(const BaselineModel &model, const Matrix &x);

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

// Individual learners, exposed for tests.
GaussianNbState fit_gaussian_nb(const Matrix &x, std::span<const int> y, double var_floor);
DecisionTree fit_tree(const Matrix &x, std::span<const int> y, std::span<const std::size_t> rows,
                      std::size_t max_depth, std::size_t min_leaf, std::size_t features_per_split,
                      std::uint64_t seed);
DecisionTree fit_stump(const Matrix &x, std::span<const int> y, std::span<const double> weights);
AdaBoostState fit_adaboost(const Matrix &x, std::span<const int> y, std::size_t rounds);
// Training error after each boosting round (for monotonicity checks).
std::vector<double> adaboost_training_curve(const AdaBoostState &state, const Matrix &x, std::span<const int> y);
int predict_adaboost(const AdaBoostState &state, std::span<const double> x, std::size_t rounds);
SvmState fit_svm(const Matrix &x, std::span<const int> y, double gamma, double c, double tolerance,
                 std::size_t max_passes, std::uint64_t seed);
LogisticState fit_logistic(const Matrix &x, std::span<const int> y, std::size_t iters, double l2, double step);

void add_to_checkpoint(const BaselineModel &model, Checkpoint &ckpt, const std::string &prefix);
BaselineModel baseline_from_checkpoint(const Checkpoint &ckpt, const std::string &prefix);

}  // namespace pcm
