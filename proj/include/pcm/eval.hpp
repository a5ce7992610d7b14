#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pcm/baselines.hpp"
#include "pcm/corpus.hpp"
#include "pcm/features.hpp"
#include "pcm/lsa.hpp"
#include "pcm/neural.hpp"

namespace pcm {

// ---- folds -----------------------------------------------------------------

struct FoldPlan {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    std::vector<std::size_t> assignment;  // row -> fold

    std::vector<std::size_t> test_rows(std::size_t fold) const;
    std::vector<std::size_t> train_rows(std::size_t fold) const;
};

// Each class is shuffled and dealt round-robin. The dealing position carries
// over from one class to the next, so total fold sizes also differ by <= 1.
FoldPlan stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed);

// ---- metrics ---------------------------------------------------------------

struct ConfusionMatrix {
    std::array<std::array<std::size_t, kClasses>, kClasses> counts{};  // [gold-1][pred-1]

    void add(int gold, int predicted);
    std::size_t total() const noexcept;
    ConfusionMatrix &operator+=(const ConfusionMatrix &other);
    bool operator==(const ConfusionMatrix &) const = default;
};

ConfusionMatrix confusion(std::span<const int> golds, std::span<const int> preds);

enum class Averaging { Macro, Micro, Weighted };

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Per-class ratios with 0/0 = 0; Macro averages over all five classes.
Prf metrics(const ConfusionMatrix &cm, Averaging averaging);

struct MetricSet {
    Prf macro;
    Prf micro;
    Prf weighted;

    const Prf &get(Averaging a) const;
};

MetricSet all_metrics(const ConfusionMatrix &cm);

nlohmann::json to_json(const ConfusionMatrix &cm);
nlohmann::json to_json(const MetricSet &m);

// ---- pipelines -------------------------------------------------------------

struct EvalExample {
    std::string article_id;
    std::size_t paragraph_index = 0;
    std::string comment_id;
    PreparedText paragraph;
    PreparedText comment;
    int label = 1;
};

std::vector<EvalExample> build_dataset(const Corpus &corpus, std::span<const GoldPair> gold);

struct NeuralPipeline {
    ModelShape shape;
    TrainConfig train;
    AverageOptions average;
};

struct BaselinePipeline {
    BaselineKind kind = BaselineKind::NB;
    BaselineHyper hyper;
    FeatureSpec features;
    VocabConfig vocab;
    std::size_t lsa_k = 100;  // 0 keeps raw features; clamped to the training matrix rank bound
    LsaConfig lsa;
    bool balance = true;  // SMOTE on the training fold
    std::size_t smote_k = 5;
};

// Predicts one label for everything (chance-level reference).
struct ConstantPipeline {
    int label = 1;
};

struct Pipeline {
    std::string name;
    std::variant<NeuralPipeline, BaselinePipeline, ConstantPipeline> spec;
};

nlohmann::json to_json(const Pipeline &p);

struct EvalResources {
    const EmbeddingTable *embeddings = nullptr;  // neural pipelines
    const Lexicon *lexicon = nullptr;            // f5; bundled lexicon when null
};

struct CvOptions {
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    bool parallel = true;
    bool keep_vocabs = false;  // retain fitted n-gram vocabularies per fold
};

struct FoldResult {
    std::size_t fold = 0;
    std::size_t train_rows = 0;  // after balancing
    std::size_t test_rows = 0;
    ConfusionMatrix cm;
    MetricSet metrics;
    std::vector<double> epoch_losses;
    std::optional<FeatureVocabs> vocabs;
};

struct EvalReport {
    std::string model;
    std::string dataset;
    nlohmann::json config;
    FoldPlan plan;
    std::vector<int> predictions;  // out-of-fold prediction per row
    ConfusionMatrix pooled;
    MetricSet metrics;  // from the pooled matrix
    std::vector<FoldResult> folds;
    MetricSet fold_mean;
    MetricSet fold_std;  // sample standard deviation over folds
};

// Per fold: vocabularies, LSA and SMOTE are fitted on the training rows only,
// then the model is trained and the held-out rows predicted. Seeds for fold f
// derive from (options.seed, f), so folds can run in any order.
EvalReport cross_validate(const Pipeline &pipeline, std::span<const EvalExample> data, const EvalResources &resources,
                          const CvOptions &options, const std::string &dataset = "corpus");

// ---- report ----------------------------------------------------------------

// ×100 with one decimal: 0.7531 -> "75.3".
std::string format_percent(double value);

// Rows are models in first-appearance order, column groups are datasets in
// first-appearance order; each group holds Precision then Recall, each as
// Macro, Micro, Weighted.
struct ReportGrid {
    std::vector<std::string> models;
    std::vector<std::string> datasets;
    std::vector<std::vector<std::optional<double>>> cells;  // models x 6*datasets
};

ReportGrid report_grid(std::span<const EvalReport> reports);
std::string render_report(std::span<const EvalReport> reports);
nlohmann::json report_to_json(std::span<const EvalReport> reports);

}  // namespace pcm
