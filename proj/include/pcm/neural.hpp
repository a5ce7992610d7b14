#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pcm/embed.hpp"
#include "pcm/matrix.hpp"

namespace pcm {

inline constexpr std::size_t kClasses = 5;
using Probabilities = std::array<double, kClasses>;

enum class EncoderKind { GRU, LSTM };
enum class InputMode { Averaged, TokenSequence };
// Concat feeds [h_p; h_c] to the head. Interaction appends the elementwise
// product h_p * h_c, which lets the linear head score paragraph/comment
// agreement instead of each side independently.
enum class MergeMode { Concat, Interaction };

// Mutable view of one parameter tensor, used by the optimizer, gradient
// checks and checkpoints.
struct TensorRef {
    std::string name;
    double *data;
    std::size_t rows;
    std::size_t cols;

    std::size_t size() const noexcept { return rows * cols; }
    std::span<double> values() const noexcept { return {data, size()}; }
};

struct GruParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Matrix w_z, w_r, w_h;  // hidden x input
    Matrix u_z, u_r, u_h;  // hidden x hidden
    Vector b_z, b_r, b_h;

    static GruParams zeros(std::size_t input_dim, std::size_t hidden_dim);
    std::vector<TensorRef> tensors(const std::string &prefix);
};

struct LstmParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    // input, forget, output gates and the candidate
    Matrix w_i, w_f, w_o, w_g;
    Matrix u_i, u_f, u_o, u_g;
    Vector b_i, b_f, b_o, b_g;

    static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);
    std::vector<TensorRef> tensors(const std::string &prefix);
};

struct LstmState {
    Vector h;
    Vector c;
};

using EncoderParams = std::variant<GruParams, LstmParams>;

struct DenseParams {
    Matrix w;  // classes x merged width
    Vector b;
};

enum class OptimizerKind { Adam, SGD };

struct TrainConfig {
    std::size_t epochs = 5;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    double init_scale = 0.08;
};

nlohmann::json to_json(const TrainConfig &config);
TrainConfig train_config_from_json(const nlohmann::json &j);

struct ModelShape {
    EncoderKind kind = EncoderKind::GRU;
    std::size_t input_dim = 300;
    std::size_t hidden_dim = 150;
    InputMode input_mode = InputMode::Averaged;
    MergeMode merge = MergeMode::Interaction;
    bool shared_encoder = false;
    std::size_t max_paragraph_tokens = 200;
    std::size_t max_comment_tokens = 100;
};

nlohmann::json to_json(const ModelShape &shape);
ModelShape model_shape_from_json(const nlohmann::json &j);

struct TwinEncoderModel {
    ModelShape shape;
    EncoderParams paragraph_encoder;
    EncoderParams comment_encoder;  // unused when shape.shared_encoder
    DenseParams head;
    TrainConfig config;

    std::size_t merged_width() const noexcept;
    std::vector<TensorRef> tensors();
    std::size_t parameter_count();

    // All parameters zero.
    static TwinEncoderModel zeros(const ModelShape &shape);
    // Uniform in [-init_scale, init_scale] for weights, zero biases.
    static TwinEncoderModel initialized(const ModelShape &shape, const TrainConfig &config);
};

// Sequence fed to one encoder. Averaged mode always holds exactly one vector.
using EncoderInput = std::vector<Vector>;

Vector gru_step(const GruParams &p, std::span<const double> x, std::span<const double> h);
LstmState lstm_step(const LstmParams &p, std::span<const double> x, const LstmState &state);

// Final hidden state after stepping through inputs from the zero state.
Vector encode(const EncoderParams &params, std::span<const Vector> inputs);

Probabilities forward(const TwinEncoderModel &model, const EncoderInput &para, const EncoderInput &comm);
Probabilities softmax(std::span<const double> logits);

double loss(const Probabilities &probs, int gold);

struct Prediction {
    int label = 1;
    Probabilities probs{};
};

// Label is 1 + argmax; the lowest class wins exact ties.
int argmax_label(const Probabilities &probs);
Prediction predict(const TwinEncoderModel &model, const EncoderInput &para, const EncoderInput &comm);

struct NeuralExample {
    EncoderInput paragraph;
    EncoderInput comment;
    int label = 1;
};

// Cross-entropy of one example; gradients are added into grad, which must
// have the model's shape (for instance TwinEncoderModel::zeros).
double accumulate_gradient(const TwinEncoderModel &model, const NeuralExample &example, TwinEncoderModel &grad);

struct TrainResult {
    TwinEncoderModel model;
    std::vector<double> epoch_losses;
};

TrainResult train(TwinEncoderModel model, std::span<const NeuralExample> data, const TrainConfig &config);

EncoderInput prepare_input(const TokenSeq &tokens, const EmbeddingTable &table, InputMode mode,
                           std::size_t max_tokens, AverageOptions options = {});

void save_model(const TwinEncoderModel &model, const std::string &path);
TwinEncoderModel load_model(const std::string &path);

std::string to_string(EncoderKind kind);
std::string to_string(InputMode mode);
std::string to_string(MergeMode mode);
EncoderKind encoder_kind_from_string(const std::string &s);
InputMode input_mode_from_string(const std::string &s);
MergeMode merge_mode_from_string(const std::string &s);

}  // namespace pcm
