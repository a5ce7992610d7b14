// pcm: command-line driver for corpus ingestion, statistics, training,
// cross-validated evaluation, comment scoring and the HTTP service.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "pcm/baselines.hpp"
#include "pcm/checkpoint.hpp"
#include "pcm/corpus.hpp"
#include "pcm/error.hpp"
#include "pcm/eval.hpp"
#include "pcm/features.hpp"
#include "pcm/http_service.hpp"
#include "pcm/lsa.hpp"
#include "pcm/neural.hpp"
#include "pcm/rng.hpp"
#include "pcm/service.hpp"
#include "pcm/smote.hpp"
#include "pcm/synth.hpp"

namespace {

using nlohmann::json;

struct NeuralFlags {
    std::size_t epochs = 5;
    double lr = 1e-3;
    std::size_t batch = 32;
    std::size_t hidden = 150;
    std::string input_mode = "averaged";
    std::string merge = "interaction";
    std::string optimizer = "adam";
    bool shared = false;
    bool skip_oov = false;
    double init_scale = 0.08;
};

struct BaselineFlags {
    std::string features = "f1,f2,f3,f4,f5";
    std::size_t lsa_k = 100;
    bool no_smote = false;
    std::size_t smote_k = 5;
    std::size_t min_count = 2;
    std::size_t max_vocab = 5000;
    std::string lexicon;
    pcm::BaselineHyper hyper;
    double svm_gamma = -1;       // < 0: 1 / cols
    double rf_feature_frac = -1;  // < 0: sqrt(cols)
};

void add_neural_flags(CLI::App &cmd, NeuralFlags &f) {
    cmd.add_option("--epochs", f.epochs, "training epochs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--lr", f.lr, "learning rate")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--batch", f.batch, "mini-batch size")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--hidden", f.hidden, "encoder hidden size")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--input-mode", f.input_mode, "averaged | sequence")
        ->capture_default_str()
        ->check(CLI::IsMember({"averaged", "sequence"}));
    cmd.add_option("--merge", f.merge, "interaction | concat")
        ->capture_default_str()
        ->check(CLI::IsMember({"interaction", "concat"}));
    cmd.add_option("--optimizer", f.optimizer, "adam | sgd")->capture_default_str()->check(CLI::IsMember({"adam", "sgd"}));
    cmd.add_option("--init-scale", f.init_scale, "uniform init half-width")->capture_default_str();
    cmd.add_flag("--shared-encoder", f.shared, "one encoder for paragraph and comment");
    cmd.add_flag("--skip-oov", f.skip_oov, "leave unknown tokens out of averages");
}

void add_baseline_flags(CLI::App &cmd, BaselineFlags &f) {
    cmd.add_option("--features", f.features, "feature groups, e.g. f1,f4")->capture_default_str();
    cmd.add_option("--lsa-k", f.lsa_k, "LSA dimensions (0 disables)")->capture_default_str();
    cmd.add_flag("--no-smote", f.no_smote, "skip SMOTE balancing of training data");
    cmd.add_option("--smote-k", f.smote_k, "SMOTE neighbours")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--min-count", f.min_count, "n-gram minimum count")->capture_default_str();
    cmd.add_option("--max-vocab", f.max_vocab, "n-gram vocabulary cap (0 = none)")->capture_default_str();
    cmd.add_option("--lexicon", f.lexicon, "lexicon file (default: bundled)");
    auto &h = f.hyper;
    cmd.add_option("--knn-k", h.knn_k)->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--dt-max-depth", h.dt_max_depth, "0 = unlimited")->capture_default_str();
    cmd.add_option("--dt-min-leaf", h.dt_min_leaf)->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--rf-trees", h.rf_trees)->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--rf-feature-frac", f.rf_feature_frac, "default sqrt(cols)/cols");
    cmd.add_option("--ada-rounds", h.ada_rounds)->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--svm-c", h.svm_c)->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--svm-gamma", f.svm_gamma, "default 1/cols");
    cmd.add_option("--lr-iters", h.lr_iters)->capture_default_str();
    cmd.add_option("--lr-l2", h.lr_l2)->capture_default_str();
}

pcm::NeuralPipeline neural_pipeline(const NeuralFlags &f, pcm::EncoderKind kind, std::size_t input_dim,
                                    std::uint64_t seed) {
    pcm::NeuralPipeline p;
    p.shape.kind = kind;
    p.shape.input_dim = input_dim;
    p.shape.hidden_dim = f.hidden;
    p.shape.input_mode = f.input_mode == "sequence" ? pcm::InputMode::TokenSequence : pcm::InputMode::Averaged;
    p.shape.merge = pcm::merge_mode_from_string(f.merge);
    p.shape.shared_encoder = f.shared;
    p.train.epochs = f.epochs;
    p.train.learning_rate = f.lr;
    p.train.batch_size = f.batch;
    p.train.optimizer = f.optimizer == "sgd" ? pcm::OptimizerKind::SGD : pcm::OptimizerKind::Adam;
    p.train.init_scale = f.init_scale;
    p.train.seed = seed;
    p.average.skip_oov = f.skip_oov;
    return p;
}

pcm::BaselinePipeline baseline_pipeline(const BaselineFlags &f, pcm::BaselineKind kind, std::uint64_t seed) {
    pcm::BaselinePipeline p;
    p.kind = kind;
    p.hyper = f.hyper;
    p.hyper.seed = seed;
    if (f.svm_gamma >= 0) {
        p.hyper.svm_gamma = f.svm_gamma;
    }
    if (f.rf_feature_frac > 0) {
        p.hyper.rf_feature_frac = f.rf_feature_frac;
    }
    p.hyper = pcm::baseline_hyper_from_json(pcm::to_json(p.hyper));  // range checks
    p.features = pcm::FeatureSpec::parse(f.features);
    p.vocab = {f.min_count, f.max_vocab};
    p.lsa_k = f.lsa_k;
    p.balance = !f.no_smote;
    p.smote_k = f.smote_k;
    return p;
}

bool is_neural(const std::string &model) { return model == "gru" || model == "lstm"; }

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) {
                out.push_back(cur);
            }
            cur.clear();
        } else if (c != ' ') {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out;
}

void validate_model_name(const std::string &m, bool allow_constant) {
    if (is_neural(m) || (allow_constant && m == "constant")) {
        return;
    }
    pcm::baseline_kind_from_string(m);
}

std::string display(const std::string &m) {
    if (m == "gru") {
        return "GRU";
    }
    if (m == "lstm") {
        return "LSTM";
    }
    if (m == "constant") {
        return "Constant";
    }
    return pcm::display_name(pcm::baseline_kind_from_string(m));
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        pcm::fail(pcm::ErrorKind::Io, "cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        pcm::fail(pcm::ErrorKind::Io, "failed writing '" + path + "'");
    }
}

std::vector<pcm::EvalExample> gold_dataset(const pcm::Corpus &corpus) {
    const auto gold = pcm::gold_pairs(corpus);
    return pcm::build_dataset(corpus, gold.gold);
}

// ---- train -------------------------------------------------------------------

struct TrainFlags {
    std::string corpus;
    std::string embeddings;
    std::string model = "gru";
    std::string out;
    std::uint64_t seed = 0;
    NeuralFlags neural;
    BaselineFlags baseline;
};

int run_train(const TrainFlags &f, const std::string &effective) {
    validate_model_name(f.model, false);
    const auto corpus = pcm::load_corpus(f.corpus);
    const auto data = gold_dataset(corpus);
    if (data.empty()) {
        pcm::fail(pcm::ErrorKind::InvalidArgument, "corpus has no gold pairs to train on");
    }
    if (is_neural(f.model)) {
        if (f.embeddings.empty()) {
            pcm::fail(pcm::ErrorKind::InvalidArgument, "--embeddings is required for " + f.model);
        }
        const auto table = pcm::load_embeddings(f.embeddings);
        const auto p = neural_pipeline(f.neural, pcm::encoder_kind_from_string(f.model), table.dim(), f.seed);
        std::vector<pcm::NeuralExample> examples;
        for (const auto &ex : data) {
            examples.push_back({pcm::prepare_input(ex.paragraph.tokens, table, p.shape.input_mode,
                                                   p.shape.max_paragraph_tokens, p.average),
                                pcm::prepare_input(ex.comment.tokens, table, p.shape.input_mode,
                                                   p.shape.max_comment_tokens, p.average),
                                ex.label});
        }
        auto result = pcm::train(pcm::TwinEncoderModel::initialized(p.shape, p.train), examples, p.train);
        pcm::save_model(result.model, f.out);
        json summary{{"model", f.model}, {"checkpoint", f.out}, {"examples", examples.size()},
                     {"epoch_losses", result.epoch_losses}, {"effective_config", effective}};
        std::cout << summary.dump(2) << "\n";
        return 0;
    }

    const auto kind = pcm::baseline_kind_from_string(f.model);
    const auto p = baseline_pipeline(f.baseline, kind, f.seed);
    std::optional<pcm::Lexicon> lexicon;
    if (!f.baseline.lexicon.empty()) {
        lexicon = pcm::Lexicon::load(f.baseline.lexicon);
    }
    std::vector<pcm::TextPair> pairs;
    std::vector<int> y;
    for (const auto &ex : data) {
        pairs.push_back({&ex.paragraph, &ex.comment});
        y.push_back(ex.label);
    }
    const auto vocabs = pcm::fit_vocabs(pairs, p.features, p.vocab);
    pcm::Matrix x = pcm::assemble_matrix(pairs, p.features, vocabs, lexicon ? *lexicon : pcm::Lexicon::bundled()).values;
    pcm::Checkpoint ckpt;
    if (p.lsa_k > 0) {
        pcm::LsaConfig lsa = p.lsa;
        lsa.seed = pcm::derive_seed(f.seed, 1);
        const auto model = pcm::lsa_fit(x, std::min({p.lsa_k, x.rows(), x.cols()}), lsa);
        x = pcm::lsa_transform(model, x);
        ckpt.add("lsa.basis", model.basis);
        ckpt.add("lsa.column_means", model.column_means);
        ckpt.add("lsa.singular_values", model.singular_values);
    }
    if (p.balance) {
        auto balanced = pcm::smote(x, y, p.smote_k, pcm::derive_seed(f.seed, 2));
        x = std::move(balanced.x);
        y = std::move(balanced.y);
    }
    const auto model = pcm::train_baseline(kind, x, y, p.hyper);
    pcm::add_to_checkpoint(model, ckpt, "baseline");
    json vocab_terms = json::object();
    for (std::size_t n = 0; n < 3; ++n) {
        if (vocabs.paragraph[n]) {
            vocab_terms[fmt::format("p{}", n + 1)] = vocabs.paragraph[n]->terms();
        }
        if (vocabs.comment[n]) {
            vocab_terms[fmt::format("c{}", n + 1)] = vocabs.comment[n]->terms();
        }
    }
    ckpt.meta["type"] = "baseline";
    ckpt.meta["pipeline"] = pcm::to_json(pcm::Pipeline{display(f.model), p});
    ckpt.meta["vocabularies"] = vocab_terms;
    pcm::write_checkpoint(ckpt, f.out);
    json summary{{"model", f.model},
                 {"checkpoint", f.out},
                 {"examples", data.size()},
                 {"training_rows", x.rows()},
                 {"feature_columns", model.input_dim},
                 {"effective_config", effective}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---- evaluate --------------------------------------------------------------------

struct EvaluateFlags {
    std::vector<std::string> corpora;
    std::vector<std::string> datasets;
    std::string embeddings;
    std::string models = "gru";
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    std::string out;
    std::string json_out;
    bool serial = false;
    NeuralFlags neural;
    BaselineFlags baseline;
};

int run_evaluate(const EvaluateFlags &f, const std::string &effective) {
    const auto models = split_list(f.models);
    if (models.empty()) {
        pcm::fail(pcm::ErrorKind::InvalidArgument, "--models is empty");
    }
    for (const auto &m : models) {
        validate_model_name(m, true);
    }
    if (!f.datasets.empty() && f.datasets.size() != f.corpora.size()) {
        pcm::fail(pcm::ErrorKind::InvalidArgument, "--dataset must be given once per --corpus");
    }
    std::optional<pcm::EmbeddingTable> table;
    const bool needs_embeddings = std::any_of(models.begin(), models.end(), is_neural);
    if (needs_embeddings) {
        if (f.embeddings.empty()) {
            pcm::fail(pcm::ErrorKind::InvalidArgument, "--embeddings is required for gru/lstm");
        }
        table = pcm::load_embeddings(f.embeddings);
    }
    std::optional<pcm::Lexicon> lexicon;
    if (!f.baseline.lexicon.empty()) {
        lexicon = pcm::Lexicon::load(f.baseline.lexicon);
    }
    const pcm::EvalResources resources{table ? &*table : nullptr, lexicon ? &*lexicon : nullptr};
    const pcm::CvOptions options{f.folds, f.seed, !f.serial, false};

    std::vector<pcm::EvalReport> reports;
    for (std::size_t c = 0; c < f.corpora.size(); ++c) {
        const std::string name =
            f.datasets.empty() ? std::filesystem::path(f.corpora[c]).stem().string() : f.datasets[c];
        const auto corpus = pcm::load_corpus(f.corpora[c]);
        const auto data = gold_dataset(corpus);
        for (const auto &m : models) {
            pcm::Pipeline pipeline{display(m), pcm::ConstantPipeline{}};
            if (is_neural(m)) {
                pipeline.spec = neural_pipeline(f.neural, pcm::encoder_kind_from_string(m), table->dim(), f.seed);
            } else if (m != "constant") {
                pipeline.spec = baseline_pipeline(f.baseline, pcm::baseline_kind_from_string(m), f.seed);
            }
            std::cerr << fmt::format("evaluating {} on {} ({} pairs, {} folds)\n", pipeline.name, name, data.size(),
                                     f.folds);
            reports.push_back(pcm::cross_validate(pipeline, data, resources, options, name));
        }
    }
    const std::string table_text = pcm::render_report(reports);
    json report = pcm::report_to_json(reports);
    report["effective_config"] = effective;
    if (f.out.empty()) {
        std::cout << table_text;
    } else {
        write_text(f.out, table_text);
    }
    if (!f.json_out.empty()) {
        write_text(f.json_out, report.dump(2) + "\n");
    }
    return 0;
}

// ---- score / serve -----------------------------------------------------------------

pcm::Scorer load_scorer(const std::string &checkpoint, const std::string &embeddings, bool skip_oov) {
    const auto header = pcm::read_checkpoint(checkpoint);
    if (header.meta.value("type", std::string{}) != "twin_encoder") {
        pcm::fail(pcm::ErrorKind::InvalidArgument,
                  "'" + checkpoint + "' is not a gru/lstm checkpoint; scoring needs a neural model");
    }
    auto model = pcm::load_model(checkpoint);
    return pcm::Scorer(std::move(model), pcm::load_embeddings(embeddings),
                       std::filesystem::path(checkpoint).stem().string(), {skip_oov});
}

struct ScoreFlags {
    std::string corpus;
    std::string model;
    std::string embeddings;
    std::string article;
    std::string text;
    std::string comment_id = "query";
    bool skip_oov = false;
};

int run_score(const ScoreFlags &f) {
    const auto corpus = pcm::load_corpus(f.corpus);
    const auto scorer = load_scorer(f.model, f.embeddings, f.skip_oov);
    const auto placement = pcm::score_comment(scorer, corpus, f.article, f.comment_id, f.text);
    std::cout << pcm::to_json(placement).dump(2) << "\n";
    return 0;
}

struct ServeFlags {
    std::string corpus;
    std::string model;
    std::string embeddings;
    std::string log;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors = "*";
    bool import_comments = false;
    bool skip_oov = false;
};

pcm::HttpService *g_service = nullptr;

void on_signal(int) {
    if (g_service != nullptr) {
        g_service->stop();
    }
}

int run_serve(const ServeFlags &f) {
    const auto scorer = load_scorer(f.model, f.embeddings, f.skip_oov);
    pcm::Store store(pcm::load_corpus(f.corpus), f.log);
    if (f.import_comments) {
        std::cerr << fmt::format("imported {} corpus comments\n", store.import_corpus_comments(scorer));
    }
    pcm::HttpService service(store, scorer, {f.host, f.port, f.cors, 3});
    const int port = service.bind();
    std::cerr << fmt::format("serving {} comments on http://{}:{}\n", store.size(), f.host, port);
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    service.run();
    g_service = nullptr;
    return 0;
}

// Input paths are checked up front so no work starts on a bad invocation.
void require_files(std::initializer_list<const std::string *> paths) {
    for (const auto *p : paths) {
        if (!p->empty() && !std::filesystem::is_regular_file(*p)) {
            pcm::fail(pcm::ErrorKind::Io, "no such file '" + *p + "'");
        }
    }
}

int exit_code_for(const pcm::Error &e) {
    switch (e.kind()) {
    case pcm::ErrorKind::Io:
    case pcm::ErrorKind::Numeric: return 2;
    default: return 1;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Paragraph-level comment relevance: corpus tools, models, evaluation and service"};
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");

    std::string ingest_corpus, ingest_out;
    auto *ingest = app.add_subcommand("ingest", "validate a corpus and write it back normalized");
    ingest->add_option("--corpus", ingest_corpus, "input JSONL corpus")->required();
    ingest->add_option("--out", ingest_out, "normalized JSONL output");

    std::string stats_corpus, stats_out;
    auto *stats = app.add_subcommand("stats", "corpus statistics as JSON");
    stats->add_option("--corpus", stats_corpus, "JSONL corpus")->required();
    stats->add_option("--out", stats_out, "write JSON here instead of stdout");

    TrainFlags tf;
    auto *train = app.add_subcommand("train", "train one model on all gold pairs and write a checkpoint");
    train->add_option("--corpus", tf.corpus)->required();
    train->add_option("--embeddings", tf.embeddings, "embedding text file (gru/lstm)");
    train->add_option("--model", tf.model, "gru|lstm|nb|dt|rf|knn|rsvm|ada|lr")->capture_default_str();
    train->add_option("--out", tf.out, "checkpoint path")->required();
    train->add_option("--seed", tf.seed)->capture_default_str();
    add_neural_flags(*train, tf.neural);
    add_baseline_flags(*train, tf.baseline);

    EvaluateFlags ef;
    auto *evaluate = app.add_subcommand("evaluate", "stratified k-fold cross-validation report");
    evaluate->add_option("--corpus", ef.corpora, "JSONL corpus (repeat for several datasets)")
        ->required()
        ;
    evaluate->add_option("--dataset", ef.datasets, "display name per --corpus (default: file stem)");
    evaluate->add_option("--embeddings", ef.embeddings);
    evaluate->add_option("--model,--models", ef.models, "comma list: gru,lstm,nb,dt,rf,knn,rsvm,ada,lr,constant")
        ->capture_default_str();
    evaluate->add_option("--folds", ef.folds)->capture_default_str()->check(CLI::Range(2, 1000));
    evaluate->add_option("--seed", ef.seed)->capture_default_str();
    evaluate->add_option("--out", ef.out, "text table path (default: stdout)");
    evaluate->add_option("--json", ef.json_out, "JSON report path");
    evaluate->add_flag("--serial", ef.serial, "run folds one after another");
    add_neural_flags(*evaluate, ef.neural);
    add_baseline_flags(*evaluate, ef.baseline);

    ScoreFlags sf;
    auto *score = app.add_subcommand("score", "place one comment against every paragraph of an article");
    score->add_option("--corpus", sf.corpus)->required();
    score->add_option("--model", sf.model, "gru/lstm checkpoint")->required();
    score->add_option("--embeddings", sf.embeddings)->required();
    score->add_option("--article", sf.article)->required();
    score->add_option("--text", sf.text)->required();
    score->add_option("--comment-id", sf.comment_id)->capture_default_str();
    score->add_flag("--skip-oov", sf.skip_oov);

    ServeFlags vf;
    auto *serve = app.add_subcommand("serve", "HTTP JSON API with ranked comment panes");
    serve->add_option("--corpus", vf.corpus)->required();
    serve->add_option("--model", vf.model, "gru/lstm checkpoint")->required();
    serve->add_option("--embeddings", vf.embeddings)->required();
    serve->add_option("--log", vf.log, "append-only comment log (JSONL)")->required();
    serve->add_option("--host", vf.host)->capture_default_str();
    serve->add_option("--port", vf.port)->capture_default_str()->check(CLI::Range(0, 65535));
    serve->add_option("--cors-origin", vf.cors)->capture_default_str();
    serve->add_flag("--import-comments", vf.import_comments, "score corpus comments missing from the log");
    serve->add_flag("--skip-oov", vf.skip_oov);

    std::string synth_corpus, synth_embeddings;
    pcm::synth::Config synth_config;
    std::uint64_t synth_embedding_seed = 11;
    auto *synth = app.add_subcommand("synth", "write the synthetic overlap-band corpus and fixture embeddings");
    synth->add_option("--corpus-out", synth_corpus)->required();
    synth->add_option("--embeddings-out", synth_embeddings)->required();
    synth->add_option("--articles", synth_config.articles)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_config.seed)->capture_default_str();
    synth->add_option("--embedding-seed", synth_embedding_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    const auto effective = [&](CLI::App *cmd) { return cmd->config_to_str(true, false); };
    try {
        require_files({&ingest_corpus, &stats_corpus, &tf.corpus, &tf.embeddings, &tf.baseline.lexicon, &ef.embeddings,
                       &ef.baseline.lexicon, &sf.corpus, &sf.model, &sf.embeddings, &vf.corpus, &vf.model,
                       &vf.embeddings});
        for (const auto &c : ef.corpora) {
            require_files({&c});
        }
        if (ingest->parsed()) {
            const auto corpus = pcm::load_corpus(ingest_corpus);
            const auto gold = pcm::gold_pairs(corpus);
            if (!ingest_out.empty()) {
                std::ofstream out(ingest_out, std::ios::binary);
                if (!out) {
                    pcm::fail(pcm::ErrorKind::Io, "cannot write '" + ingest_out + "'");
                }
                pcm::write_corpus(out, corpus);
            }
            json summary{{"articles", corpus.articles().size()},
                         {"paragraphs", corpus.paragraph_count()},
                         {"comments", corpus.comments().size()},
                         {"annotations", corpus.annotations().size()},
                         {"gold_pairs", gold.gold.size()},
                         {"dropped_disagreements", gold.dropped}};
            std::cout << summary.dump(2) << "\n";
            return 0;
        }
        if (stats->parsed()) {
            const auto corpus = pcm::load_corpus(stats_corpus);
            const auto gold = pcm::gold_pairs(corpus);
            json j = pcm::stats_to_json(pcm::corpus_stats(corpus, gold.gold));
            j["effective_config"] = effective(stats);
            if (stats_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                write_text(stats_out, j.dump(2) + "\n");
            }
            return 0;
        }
        if (train->parsed()) {
            return run_train(tf, effective(train));
        }
        if (evaluate->parsed()) {
            return run_evaluate(ef, effective(evaluate));
        }
        if (score->parsed()) {
            return run_score(sf);
        }
        if (serve->parsed()) {
            return run_serve(vf);
        }
        if (synth->parsed()) {
            const auto corpus = pcm::synth::corpus(synth_config);
            std::ofstream c(synth_corpus, std::ios::binary);
            std::ofstream e(synth_embeddings, std::ios::binary);
            if (!c || !e) {
                pcm::fail(pcm::ErrorKind::Io, "cannot write synthetic outputs");
            }
            pcm::write_corpus(c, corpus);
            pcm::synth::write_embeddings(e, pcm::synth::embeddings(synth_embedding_seed));
            return 0;
        }
    } catch (const pcm::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
