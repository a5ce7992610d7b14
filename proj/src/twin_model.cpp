#include <algorithm>
#include <cmath>

#include "pcm/error.hpp"
#include "pcm/neural.hpp"
#include "pcm/rng.hpp"
#include "recurrent_internal.hpp"

namespace pcm {

namespace {

EncoderParams zero_encoder(const ModelShape &s) {
    if (s.kind == EncoderKind::GRU) {
        return GruParams::zeros(s.input_dim, s.hidden_dim);
    }
    return LstmParams::zeros(s.input_dim, s.hidden_dim);
}

std::vector<TensorRef> encoder_tensors(EncoderParams &e, const std::string &prefix) {
    return std::visit([&](auto &p) { return p.tensors(prefix); }, e);
}

const EncoderParams &comment_side(const TwinEncoderModel &m) {
    return m.shape.shared_encoder ? m.paragraph_encoder : m.comment_encoder;
}

EncoderParams &comment_side(TwinEncoderModel &m) {
    return m.shape.shared_encoder ? m.paragraph_encoder : m.comment_encoder;
}

Vector merge(const ModelShape &shape, const Vector &hp, const Vector &hc) {
    Vector m;
    m.reserve(3 * hp.size());
    m.insert(m.end(), hp.begin(), hp.end());
    m.insert(m.end(), hc.begin(), hc.end());
    if (shape.merge == MergeMode::Interaction) {
        for (std::size_t k = 0; k < hp.size(); ++k) {
            m.push_back(hp[k] * hc[k]);
        }
    }
    return m;
}

Vector head_logits(const DenseParams &head, const Vector &merged) {
    if (head.w.cols() != merged.size()) {
        fail(ErrorKind::Dimension, "dense head expects " + std::to_string(head.w.cols()) + " inputs, got " +
                                       std::to_string(merged.size()));
    }
    Vector logits(head.b);
    for (std::size_t c = 0; c < logits.size(); ++c) {
        logits[c] += dot(head.w.row(c), merged);
    }
    return logits;
}

void check_input(const ModelShape &shape, const EncoderInput &in, const char *side) {
    if (in.empty()) {
        fail(ErrorKind::InvalidArgument, std::string(side) + " input is empty");
    }
    if (shape.input_mode == InputMode::Averaged && in.size() != 1) {
        fail(ErrorKind::InvalidArgument, std::string(side) + " input must be a single averaged vector");
    }
    for (const auto &v : in) {
        if (v.size() != shape.input_dim) {
            fail(ErrorKind::Dimension, std::string(side) + " input vector has " + std::to_string(v.size()) +
                                           " components, model expects " + std::to_string(shape.input_dim));
        }
    }
}

}  // namespace

std::size_t TwinEncoderModel::merged_width() const noexcept {
    return (shape.merge == MergeMode::Interaction ? 3 : 2) * shape.hidden_dim;
}

std::vector<TensorRef> TwinEncoderModel::tensors() {
    auto out = encoder_tensors(paragraph_encoder, "para.");
    if (!shape.shared_encoder) {
        auto comm = encoder_tensors(comment_encoder, "comm.");
        out.insert(out.end(), comm.begin(), comm.end());
    }
    out.push_back({"head.w", head.w.data().data(), head.w.rows(), head.w.cols()});
    out.push_back({"head.b", head.b.data(), head.b.size(), 1});
    return out;
}

std::size_t TwinEncoderModel::parameter_count() {
    std::size_t n = 0;
    for (const auto &t : tensors()) {
        n += t.size();
    }
    return n;
}

TwinEncoderModel TwinEncoderModel::zeros(const ModelShape &shape) {
    if (shape.input_dim == 0 || shape.hidden_dim == 0) {
        fail(ErrorKind::InvalidArgument, "model dimensions must be positive");
    }
    TwinEncoderModel m;
    m.shape = shape;
    m.paragraph_encoder = zero_encoder(shape);
    m.comment_encoder = shape.shared_encoder ? EncoderParams{GruParams{}} : zero_encoder(shape);
    m.head.w = Matrix(kClasses, m.merged_width());
    m.head.b.assign(kClasses, 0.0);
    return m;
}

TwinEncoderModel TwinEncoderModel::initialized(const ModelShape &shape, const TrainConfig &config) {
    TwinEncoderModel m = zeros(shape);
    m.config = config;
    Rng rng(derive_seed(config.seed, 0));
    for (auto &t : m.tensors()) {
        const bool bias = t.cols == 1 && t.name.find(".b") != std::string::npos;
        if (bias) {
            continue;
        }
        for (double &v : t.values()) {
            v = rng.uniform(-config.init_scale, config.init_scale);
        }
    }
    return m;
}

Probabilities softmax(std::span<const double> logits) {
    Probabilities p{};
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t c = 0; c < kClasses; ++c) {
        p[c] = std::exp(logits[c] - top);
        total += p[c];
    }
    for (auto &v : p) {
        v /= total;
    }
    return p;
}

Probabilities forward(const TwinEncoderModel &model, const EncoderInput &para, const EncoderInput &comm) {
    check_input(model.shape, para, "paragraph");
    check_input(model.shape, comm, "comment");
    const Vector hp = encode(model.paragraph_encoder, para);
    const Vector hc = encode(comment_side(model), comm);
    return softmax(head_logits(model.head, merge(model.shape, hp, hc)));
}

double loss(const Probabilities &probs, int gold) {
    return -std::log(std::max(probs.at(static_cast<std::size_t>(gold - 1)), 1e-12));
}

int argmax_label(const Probabilities &probs) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kClasses; ++c) {
        if (probs[c] > probs[best]) {
            best = c;
        }
    }
    return static_cast<int>(best) + 1;
}

Prediction predict(const TwinEncoderModel &model, const EncoderInput &para, const EncoderInput &comm) {
    Prediction p;
    p.probs = forward(model, para, comm);
    p.label = argmax_label(p.probs);
    return p;
}

double accumulate_gradient(const TwinEncoderModel &model, const NeuralExample &example, TwinEncoderModel &grad) {
    if (example.label < 1 || example.label > static_cast<int>(kClasses)) {
        fail(ErrorKind::InvalidArgument, "training label " + std::to_string(example.label) + " outside 1..5");
    }
    check_input(model.shape, example.paragraph, "paragraph");
    check_input(model.shape, example.comment, "comment");
    const std::size_t hidden = model.shape.hidden_dim;

    std::vector<detail::GruStepCache> gru_p, gru_c;
    std::vector<detail::LstmStepCache> lstm_p, lstm_c;
    Vector hp, hc;
    const EncoderParams &comm_params = comment_side(model);
    if (model.shape.kind == EncoderKind::GRU) {
        hp = detail::gru_forward(std::get<GruParams>(model.paragraph_encoder), example.paragraph, gru_p);
        hc = detail::gru_forward(std::get<GruParams>(comm_params), example.comment, gru_c);
    } else {
        hp = detail::lstm_forward(std::get<LstmParams>(model.paragraph_encoder), example.paragraph, lstm_p);
        hc = detail::lstm_forward(std::get<LstmParams>(comm_params), example.comment, lstm_c);
    }
    const Vector merged = merge(model.shape, hp, hc);
    const Probabilities probs = softmax(head_logits(model.head, merged));
    const auto gold = static_cast<std::size_t>(example.label - 1);
    const double value = loss(probs, example.label);

    Vector d_logits(kClasses);
    if (probs[gold] >= 1e-12) {
        for (std::size_t c = 0; c < kClasses; ++c) {
            d_logits[c] = probs[c] - (c == gold ? 1.0 : 0.0);
        }
    }  // below the clamp the loss is constant in the parameters

    Vector d_merged(merged.size(), 0.0);
    for (std::size_t c = 0; c < kClasses; ++c) {
        grad.head.b[c] += d_logits[c];
        auto gw = grad.head.w.row(c);
        const auto w = model.head.w.row(c);
        for (std::size_t j = 0; j < merged.size(); ++j) {
            gw[j] += d_logits[c] * merged[j];
            d_merged[j] += d_logits[c] * w[j];
        }
    }
    Vector dhp(d_merged.begin(), d_merged.begin() + static_cast<std::ptrdiff_t>(hidden));
    Vector dhc(d_merged.begin() + static_cast<std::ptrdiff_t>(hidden),
               d_merged.begin() + static_cast<std::ptrdiff_t>(2 * hidden));
    if (model.shape.merge == MergeMode::Interaction) {
        for (std::size_t k = 0; k < hidden; ++k) {
            dhp[k] += d_merged[2 * hidden + k] * hc[k];
            dhc[k] += d_merged[2 * hidden + k] * hp[k];
        }
    }
    EncoderParams &grad_comm = comment_side(grad);
    if (model.shape.kind == EncoderKind::GRU) {
        detail::gru_backward(std::get<GruParams>(model.paragraph_encoder), gru_p, std::move(dhp),
                             std::get<GruParams>(grad.paragraph_encoder));
        detail::gru_backward(std::get<GruParams>(comm_params), gru_c, std::move(dhc), std::get<GruParams>(grad_comm));
    } else {
        detail::lstm_backward(std::get<LstmParams>(model.paragraph_encoder), lstm_p, std::move(dhp),
                              std::get<LstmParams>(grad.paragraph_encoder));
        detail::lstm_backward(std::get<LstmParams>(comm_params), lstm_c, std::move(dhc),
                              std::get<LstmParams>(grad_comm));
    }
    return value;
}

EncoderInput prepare_input(const TokenSeq &tokens, const EmbeddingTable &table, InputMode mode,
                           std::size_t max_tokens, AverageOptions options) {
    if (mode == InputMode::Averaged) {
        return {embed_average(tokens, table, options)};
    }
    auto seq = embed_sequence(tokens, table);
    if (max_tokens > 0 && seq.size() > max_tokens) {
        seq.resize(max_tokens);
    }
    if (seq.empty()) {
        seq.emplace_back(table.dim(), 0.0);  // the encoder needs at least one step
    }
    return seq;
}

std::string to_string(EncoderKind kind) { return kind == EncoderKind::GRU ? "gru" : "lstm"; }
std::string to_string(InputMode mode) { return mode == InputMode::Averaged ? "averaged" : "sequence"; }
std::string to_string(MergeMode mode) { return mode == MergeMode::Concat ? "concat" : "interaction"; }

EncoderKind encoder_kind_from_string(const std::string &s) {
    if (s == "gru") {
        return EncoderKind::GRU;
    }
    if (s == "lstm") {
        return EncoderKind::LSTM;
    }
    fail(ErrorKind::InvalidArgument, "unknown encoder kind '" + s + "'");
}

InputMode input_mode_from_string(const std::string &s) {
    if (s == "averaged") {
        return InputMode::Averaged;
    }
    if (s == "sequence") {
        return InputMode::TokenSequence;
    }
    fail(ErrorKind::InvalidArgument, "unknown input mode '" + s + "'");
}

MergeMode merge_mode_from_string(const std::string &s) {
    if (s == "concat") {
        return MergeMode::Concat;
    }
    if (s == "interaction") {
        return MergeMode::Interaction;
    }
    fail(ErrorKind::InvalidArgument, "unknown merge mode '" + s + "'");
}

nlohmann::json to_json(const TrainConfig &c) {
    return {{"epochs", c.epochs},
            {"learning_rate", c.learning_rate},
            {"optimizer", c.optimizer == OptimizerKind::Adam ? "adam" : "sgd"},
            {"beta1", c.beta1},
            {"beta2", c.beta2},
            {"epsilon", c.epsilon},
            {"batch_size", c.batch_size},
            {"seed", c.seed},
            {"init_scale", c.init_scale}};
}

TrainConfig train_config_from_json(const nlohmann::json &j) {
    TrainConfig c;
    c.epochs = j.at("epochs").get<std::size_t>();
    c.learning_rate = j.at("learning_rate").get<double>();
    const auto opt = j.at("optimizer").get<std::string>();
    if (opt != "adam" && opt != "sgd") {
        fail(ErrorKind::Parse, "unknown optimizer '" + opt + "'");
    }
    c.optimizer = opt == "adam" ? OptimizerKind::Adam : OptimizerKind::SGD;
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.init_scale = j.at("init_scale").get<double>();
    return c;
}

}  // namespace pcm
