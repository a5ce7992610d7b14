#pragma once

#include <vector>

#include "pcm/neural.hpp"

namespace pcm::detail {

struct GruStepCache {
    Vector x, h_prev, z, r, rh, candidate, h;
};

struct LstmStepCache {
    Vector x, h_prev, c_prev, i, f, o, g, c, tanh_c, h;
};

// Forward pass that keeps every intermediate needed by the backward pass.
Vector gru_forward(const GruParams &p, std::span<const Vector> inputs, std::vector<GruStepCache> &trace);
Vector lstm_forward(const LstmParams &p, std::span<const Vector> inputs, std::vector<LstmStepCache> &trace);

// Back-propagation through time from dL/dh_final; gradients are added to grad.
void gru_backward(const GruParams &p, const std::vector<GruStepCache> &trace, Vector dh, GruParams &grad);
void lstm_backward(const LstmParams &p, const std::vector<LstmStepCache> &trace, Vector dh, LstmParams &grad);

}  // namespace pcm::detail
