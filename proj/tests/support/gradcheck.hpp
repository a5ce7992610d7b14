#pragma once

// Central finite-difference check of accumulate_gradient, shared by the unit
// tests and the acceptance gate.

#include <algorithm>
#include <cmath>
#include <string>

#include "pcm/neural.hpp"
#include "pcm/rng.hpp"

namespace pcm::testing {

struct GradCheckResult {
    double worst = 0.0;  // largest per-tensor relative error
    std::string worst_tensor;
    std::size_t tensors = 0;
};

inline EncoderInput random_input(Rng &rng, std::size_t dim, std::size_t steps) {
    EncoderInput in(steps, Vector(dim));
    for (auto &v : in) {
        for (auto &x : v) {
            x = rng.normal();
        }
    }
    return in;
}

// Relative error per tensor: ||analytic - numeric|| / max(||analytic||, ||numeric||),
// or the absolute difference when both norms are below 1e-9.
inline GradCheckResult gradient_check(const ModelShape &shape, std::uint64_t seed, double step = 1e-5) {
    Rng rng(seed);
    TrainConfig config;
    config.seed = seed;
    config.init_scale = 0.5;
    auto model = TwinEncoderModel::initialized(shape, config);
    for (auto &t : model.tensors()) {
        if (t.cols == 1) {
            for (auto &b : t.values()) {
                b = rng.uniform(-0.3, 0.3);
            }
        }
    }
    const bool seq = shape.input_mode == InputMode::TokenSequence;
    NeuralExample ex;
    ex.paragraph = random_input(rng, shape.input_dim, seq ? 2 + rng.below(3) : 1);
    ex.comment = random_input(rng, shape.input_dim, seq ? 1 + rng.below(3) : 1);
    ex.label = 1 + static_cast<int>(rng.below(kClasses));

    auto grad = TwinEncoderModel::zeros(shape);
    accumulate_gradient(model, ex, grad);

    GradCheckResult out;
    auto params = model.tensors();
    auto grads = grad.tensors();
    for (std::size_t t = 0; t < params.size(); ++t) {
        double diff = 0, na = 0, nn = 0;
        auto p = params[t].values();
        const auto g = grads[t].values();
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double saved = p[k];
            p[k] = saved + step;
            const double up = loss(forward(model, ex.paragraph, ex.comment), ex.label);
            p[k] = saved - step;
            const double down = loss(forward(model, ex.paragraph, ex.comment), ex.label);
            p[k] = saved;
            const double numeric = (up - down) / (2 * step);
            diff += (g[k] - numeric) * (g[k] - numeric);
            na += g[k] * g[k];
            nn += numeric * numeric;
        }
        const double scale = std::sqrt(std::max(na, nn));
        const double err = scale < 1e-9 ? std::sqrt(diff) : std::sqrt(diff) / scale;
        if (err > out.worst || out.tensors == 0) {
            out.worst = std::max(out.worst, err);
            out.worst_tensor = params[t].name;
        }
        ++out.tensors;
    }
    return out;
}

}  // namespace pcm::testing
