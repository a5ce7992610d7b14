#include <cmath>
#include <exception>

#include "pcm/error.hpp"
#include "pcm/eval.hpp"
#include "pcm/rng.hpp"
#include "pcm/smote.hpp"

namespace pcm {

std::vector<EvalExample> build_dataset(const Corpus &corpus, std::span<const GoldPair> gold) {
    std::vector<EvalExample> out;
    out.reserve(gold.size());
    for (const auto &g : gold) {
        const Comment *comment = corpus.find_comment(g.comment_id);
        if (comment == nullptr) {
            fail(ErrorKind::DanglingReference, "gold pair references unknown comment '" + g.comment_id + "'");
        }
        const Article *article = corpus.find_article(comment->article_id);
        if (article == nullptr || g.paragraph_index >= article->paragraphs.size()) {
            fail(ErrorKind::DanglingReference, "gold pair for comment '" + g.comment_id + "' references paragraph " +
                                                   std::to_string(g.paragraph_index) + " outside its article");
        }
        out.push_back({article->id, g.paragraph_index, g.comment_id,
                       PreparedText::from(article->paragraphs[g.paragraph_index].text),
                       PreparedText::from(comment->text), g.label});
    }
    return out;
}

nlohmann::json to_json(const Pipeline &p) {
    nlohmann::json j{{"name", p.name}};
    std::visit(
        [&](const auto &s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, NeuralPipeline>) {
                j["type"] = "neural";
                j["shape"] = to_json(s.shape);
                j["train"] = to_json(s.train);
                j["skip_oov"] = s.average.skip_oov;
            } else if constexpr (std::is_same_v<S, BaselinePipeline>) {
                j["type"] = "baseline";
                j["kind"] = to_string(s.kind);
                j["hyper"] = to_json(s.hyper);
                j["features"] = to_json(s.features);
                j["vocab"] = {{"min_count", s.vocab.min_count}, {"max_size", s.vocab.max_size}};
                j["lsa_k"] = s.lsa_k;
                j["lsa"] = {{"iterations", s.lsa.iterations},
                            {"tolerance", s.lsa.tolerance},
                            {"oversample", s.lsa.oversample},
                            {"center", s.lsa.center}};
                j["smote"] = s.balance;
                j["smote_k"] = s.smote_k;
            } else {
                j["type"] = "constant";
                j["label"] = s.label;
            }
        },
        p.spec);
    return j;
}

namespace {

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) { return derive_seed(seed, fold + 1); }

struct FoldJob {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    FoldResult result;
    std::vector<int> predictions;  // aligned with test
};

class FoldRunner {
public:
    FoldRunner(const Pipeline &p, std::span<const EvalExample> data, const EvalResources &res, const CvOptions &opt)
        : pipeline_(p), data_(data), resources_(res), options_(opt) {
        if (const auto *n = std::get_if<NeuralPipeline>(&pipeline_.spec)) {
            prepare_neural(*n);
        }
        if (const auto *b = std::get_if<BaselinePipeline>(&pipeline_.spec); b && !b->features.any()) {
            fail(ErrorKind::InvalidArgument, "pipeline '" + pipeline_.name + "': no feature groups selected");
        }
    }

    void run(FoldJob &job) const {
        std::visit([&](const auto &s) { run(s, job); }, pipeline_.spec);
    }

private:
    void prepare_neural(const NeuralPipeline &n) {
        if (resources_.embeddings == nullptr) {
            fail(ErrorKind::InvalidArgument, "pipeline '" + pipeline_.name + "' needs an embedding table");
        }
        if (resources_.embeddings->dim() != n.shape.input_dim) {
            fail(ErrorKind::Dimension, "pipeline '" + pipeline_.name + "': model input_dim " +
                                           std::to_string(n.shape.input_dim) + " but embeddings have dimension " +
                                           std::to_string(resources_.embeddings->dim()));
        }
        // embeddings are fixed, so inputs can be prepared once for all folds
        neural_.reserve(data_.size());
        for (const auto &ex : data_) {
            neural_.push_back({prepare_input(ex.paragraph.tokens, *resources_.embeddings, n.shape.input_mode,
                                             n.shape.max_paragraph_tokens, n.average),
                               prepare_input(ex.comment.tokens, *resources_.embeddings, n.shape.input_mode,
                                             n.shape.max_comment_tokens, n.average),
                               ex.label});
        }
    }

    void run(const NeuralPipeline &n, FoldJob &job) const {
        TrainConfig config = n.train;
        config.seed = fold_seed(options_.seed, job.result.fold);
        std::vector<NeuralExample> train_set;
        train_set.reserve(job.train.size());
        for (const auto r : job.train) {
            train_set.push_back(neural_[r]);
        }
        auto trained = train(TwinEncoderModel::initialized(n.shape, config), train_set, config);
        job.result.train_rows = train_set.size();
        job.result.epoch_losses = std::move(trained.epoch_losses);
        for (const auto r : job.test) {
            job.predictions.push_back(predict(trained.model, neural_[r].paragraph, neural_[r].comment).label);
        }
    }

    void run(const BaselinePipeline &b, FoldJob &job) const {
        const std::uint64_t seed = fold_seed(options_.seed, job.result.fold);
        const auto pairs = [&](const std::vector<std::size_t> &rows) {
            std::vector<TextPair> out;
            for (const auto r : rows) {
                out.push_back({&data_[r].paragraph, &data_[r].comment});
            }
            return out;
        };
        const auto train_pairs = pairs(job.train);
        const auto test_pairs = pairs(job.test);
        const Lexicon &lexicon = resources_.lexicon != nullptr ? *resources_.lexicon : Lexicon::bundled();
        FeatureVocabs vocabs = fit_vocabs(train_pairs, b.features, b.vocab);
        Matrix x_train = assemble_matrix(train_pairs, b.features, vocabs, lexicon).values;
        Matrix x_test = assemble_matrix(test_pairs, b.features, vocabs, lexicon).values;
        if (options_.keep_vocabs) {
            job.result.vocabs = std::move(vocabs);
        }
        if (x_train.cols() == 0) {
            fail(ErrorKind::InvalidArgument, "pipeline '" + pipeline_.name + "': fold " +
                                                 std::to_string(job.result.fold) + " produced no feature columns");
        }
        if (b.lsa_k > 0) {
            LsaConfig lsa = b.lsa;
            lsa.seed = derive_seed(seed, 1);
            const std::size_t k = std::min({b.lsa_k, x_train.rows(), x_train.cols()});
            const LsaModel model = lsa_fit(x_train, k, lsa);
            x_train = lsa_transform(model, x_train);
            x_test = lsa_transform(model, x_test);
        }
        std::vector<int> y_train;
        for (const auto r : job.train) {
            y_train.push_back(data_[r].label);
        }
        if (b.balance) {
            auto balanced = smote(x_train, y_train, b.smote_k, derive_seed(seed, 2));
            x_train = std::move(balanced.x);
            y_train = std::move(balanced.y);
        }
        BaselineHyper hyper = b.hyper;
        hyper.seed = derive_seed(seed, 3);
        const BaselineModel model = train_baseline(b.kind, x_train, y_train, hyper);
        job.result.train_rows = x_train.rows();
        job.predictions = predict_baseline(model, x_test);
    }

    void run(const ConstantPipeline &c, FoldJob &job) const {
        job.result.train_rows = job.train.size();
        job.predictions.assign(job.test.size(), c.label);
    }

    const Pipeline &pipeline_;
    std::span<const EvalExample> data_;
    const EvalResources &resources_;
    const CvOptions &options_;
    std::vector<NeuralExample> neural_;
};

MetricSet mean_of(const std::vector<FoldResult> &folds, bool stddev, const MetricSet &mean) {
    MetricSet out;
    const auto fields = [](MetricSet &m) {
        return std::array<double *, 9>{&m.macro.precision,    &m.macro.recall,    &m.macro.f1,
                                       &m.micro.precision,    &m.micro.recall,    &m.micro.f1,
                                       &m.weighted.precision, &m.weighted.recall, &m.weighted.f1};
    };
    auto dst = fields(out);
    MetricSet mean_copy = mean;
    const auto centre = fields(mean_copy);
    std::size_t used = 0;
    for (const auto &f : folds) {
        if (f.test_rows == 0) {
            continue;
        }
        ++used;
        MetricSet m = f.metrics;
        const auto src = fields(m);
        for (std::size_t i = 0; i < dst.size(); ++i) {
            *dst[i] += stddev ? (*src[i] - *centre[i]) * (*src[i] - *centre[i]) : *src[i];
        }
    }
    const double denom = stddev ? static_cast<double>(used) - 1.0 : static_cast<double>(used);
    for (auto *d : dst) {
        *d = denom > 0 ? *d / denom : 0.0;
        if (stddev) {
            *d = std::sqrt(*d);
        }
    }
    return out;
}

}  // namespace

EvalReport cross_validate(const Pipeline &pipeline, std::span<const EvalExample> data, const EvalResources &resources,
                          const CvOptions &options, const std::string &dataset) {
    if (data.size() < options.folds) {
        fail(ErrorKind::InvalidArgument, "cross_validate: " + std::to_string(data.size()) + " examples for " +
                                             std::to_string(options.folds) + " folds");
    }
    std::vector<int> labels;
    for (const auto &ex : data) {
        labels.push_back(ex.label);
    }
    EvalReport report;
    report.model = pipeline.name;
    report.dataset = dataset;
    report.plan = stratified_folds(labels, options.folds, options.seed);
    report.config = {{"pipeline", to_json(pipeline)},
                     {"folds", options.folds},
                     {"seed", options.seed},
                     {"examples", data.size()}};

    const FoldRunner runner(pipeline, data, resources, options);
    std::vector<FoldJob> jobs(options.folds);
    for (std::size_t f = 0; f < options.folds; ++f) {
        jobs[f].train = report.plan.train_rows(f);
        jobs[f].test = report.plan.test_rows(f);
        jobs[f].result.fold = f;
        jobs[f].result.test_rows = jobs[f].test.size();
    }
    std::vector<std::exception_ptr> errors(options.folds);
    const auto count = static_cast<std::int64_t>(options.folds);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (std::int64_t f = 0; f < count; ++f) {
        try {
            runner.run(jobs[static_cast<std::size_t>(f)]);
        } catch (...) {
            errors[static_cast<std::size_t>(f)] = std::current_exception();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    report.predictions.assign(data.size(), 0);
    for (auto &job : jobs) {
        for (std::size_t i = 0; i < job.test.size(); ++i) {
            const std::size_t r = job.test[i];
            report.predictions[r] = job.predictions[i];
            job.result.cm.add(data[r].label, job.predictions[i]);
        }
        if (job.result.cm.total() > 0) {
            job.result.metrics = all_metrics(job.result.cm);
        }
        report.pooled += job.result.cm;
        report.folds.push_back(std::move(job.result));
    }
    report.metrics = all_metrics(report.pooled);
    report.fold_mean = mean_of(report.folds, false, {});
    report.fold_std = mean_of(report.folds, true, report.fold_mean);
    return report;
}

}  // namespace pcm
