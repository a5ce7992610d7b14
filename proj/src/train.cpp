#include <cmath>
#include <numeric>

#include "pcm/error.hpp"
#include "pcm/neural.hpp"
#include "pcm/rng.hpp"

namespace pcm {

namespace {

void scale_all(std::vector<TensorRef> &tensors, double factor) {
    for (auto &t : tensors) {
        for (double &v : t.values()) {
            v *= factor;
        }
    }
}

void zero_all(std::vector<TensorRef> &tensors) {
    for (auto &t : tensors) {
        std::fill(t.values().begin(), t.values().end(), 0.0);
    }
}

}  // namespace

TrainResult train(TwinEncoderModel model, std::span<const NeuralExample> data, const TrainConfig &config) {
    if (data.empty()) {
        fail(ErrorKind::InvalidArgument, "train: empty dataset");
    }
    if (config.epochs < 1 || config.batch_size < 1 || config.learning_rate < 0.0) {
        fail(ErrorKind::InvalidArgument, "train: epochs and batch_size must be >= 1 and learning_rate >= 0");
    }
    model.config = config;
    TwinEncoderModel grad = TwinEncoderModel::zeros(model.shape);
    auto params = model.tensors();
    auto grads = grad.tensors();

    // Adam moments, one flat buffer per tensor
    std::vector<Vector> first, second;
    for (const auto &t : params) {
        first.emplace_back(t.size(), 0.0);
        second.emplace_back(t.size(), 0.0);
    }

    TrainResult result;
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t step = 0;
    std::size_t batch_index = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng(derive_seed(config.seed, epoch + 1));
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            zero_all(grads);
            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                batch_loss += accumulate_gradient(model, data[order[i]], grad);
            }
            if (!std::isfinite(batch_loss)) {
                fail(ErrorKind::Numeric, "train: non-finite loss in batch " + std::to_string(batch_index));
            }
            epoch_loss += batch_loss;
            scale_all(grads, 1.0 / static_cast<double>(end - start));
            ++step;
            const double lr = config.learning_rate;
            if (config.optimizer == OptimizerKind::SGD) {
                for (std::size_t t = 0; t < params.size(); ++t) {
                    auto p = params[t].values();
                    const auto g = grads[t].values();
                    for (std::size_t k = 0; k < p.size(); ++k) {
                        p[k] -= lr * g[k];
                    }
                }
                continue;
            }
            const double correction1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double correction2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            for (std::size_t t = 0; t < params.size(); ++t) {
                auto p = params[t].values();
                const auto g = grads[t].values();
                auto &m = first[t];
                auto &v = second[t];
                for (std::size_t k = 0; k < p.size(); ++k) {
                    m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * g[k];
                    v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * g[k] * g[k];
                    const double m_hat = m[k] / correction1;
                    const double v_hat = v[k] / correction2;
                    p[k] -= lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
                }
            }
        }
        result.epoch_losses.push_back(epoch_loss / static_cast<double>(data.size()));
    }
    result.model = std::move(model);
    return result;
}

}  // namespace pcm
