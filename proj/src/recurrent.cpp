#include <algorithm>
#include <cmath>

#include "pcm/error.hpp"
#include "recurrent_internal.hpp"

namespace pcm {

namespace {

double sigmoid(double a) {
    if (a >= 0) {
        return 1.0 / (1.0 + std::exp(-a));
    }
    const double e = std::exp(a);
    return e / (1.0 + e);
}

bool all_zero(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// out = m x + b
Vector affine(const Matrix &m, std::span<const double> x, const Vector &b) {
    Vector out(b);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out[r] += dot(m.row(r), x);
    }
    return out;
}

// out += m x, skipped for an all-zero x (the initial recurrent state).
void add_matvec(Vector &out, const Matrix &m, std::span<const double> x) {
    if (all_zero(x)) {
        return;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out[r] += dot(m.row(r), x);
    }
}

// out += m^T v
void add_matvec_t(Vector &out, const Matrix &m, std::span<const double> v) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (v[r] == 0.0) {
            continue;
        }
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            out[c] += v[r] * row[c];
        }
    }
}

// g += a b^T
void add_outer(Matrix &g, std::span<const double> a, std::span<const double> b) {
    if (all_zero(b)) {
        return;
    }
    for (std::size_t r = 0; r < g.rows(); ++r) {
        if (a[r] == 0.0) {
            continue;
        }
        auto row = g.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            row[c] += a[r] * b[c];
        }
    }
}

void add_into(Vector &g, std::span<const double> a) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] += a[i];
    }
}

void check_dims(std::size_t input_dim, std::size_t hidden_dim, std::size_t x, std::size_t h, const char *what) {
    if (x != input_dim || h != hidden_dim) {
        fail(ErrorKind::Dimension, std::string(what) + ": expected input " + std::to_string(input_dim) + " / hidden " +
                                       std::to_string(hidden_dim) + ", got " + std::to_string(x) + " / " +
                                       std::to_string(h));
    }
}

TensorRef matrix_ref(const std::string &name, Matrix &m) { return {name, m.data().data(), m.rows(), m.cols()}; }
TensorRef vector_ref(const std::string &name, Vector &v) { return {name, v.data(), v.size(), 1}; }

}  // namespace

GruParams GruParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
    GruParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    for (auto *w : {&p.w_z, &p.w_r, &p.w_h}) {
        *w = Matrix(hidden_dim, input_dim);
    }
    for (auto *u : {&p.u_z, &p.u_r, &p.u_h}) {
        *u = Matrix(hidden_dim, hidden_dim);
    }
    for (auto *b : {&p.b_z, &p.b_r, &p.b_h}) {
        b->assign(hidden_dim, 0.0);
    }
    return p;
}

std::vector<TensorRef> GruParams::tensors(const std::string &prefix) {
    return {matrix_ref(prefix + "w_z", w_z), matrix_ref(prefix + "w_r", w_r), matrix_ref(prefix + "w_h", w_h),
            matrix_ref(prefix + "u_z", u_z), matrix_ref(prefix + "u_r", u_r), matrix_ref(prefix + "u_h", u_h),
            vector_ref(prefix + "b_z", b_z), vector_ref(prefix + "b_r", b_r), vector_ref(prefix + "b_h", b_h)};
}

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    for (auto *w : {&p.w_i, &p.w_f, &p.w_o, &p.w_g}) {
        *w = Matrix(hidden_dim, input_dim);
    }
    for (auto *u : {&p.u_i, &p.u_f, &p.u_o, &p.u_g}) {
        *u = Matrix(hidden_dim, hidden_dim);
    }
    for (auto *b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) {
        b->assign(hidden_dim, 0.0);
    }
    return p;
}

std::vector<TensorRef> LstmParams::tensors(const std::string &prefix) {
    return {matrix_ref(prefix + "w_i", w_i), matrix_ref(prefix + "w_f", w_f), matrix_ref(prefix + "w_o", w_o),
            matrix_ref(prefix + "w_g", w_g), matrix_ref(prefix + "u_i", u_i), matrix_ref(prefix + "u_f", u_f),
            matrix_ref(prefix + "u_o", u_o), matrix_ref(prefix + "u_g", u_g), vector_ref(prefix + "b_i", b_i),
            vector_ref(prefix + "b_f", b_f), vector_ref(prefix + "b_o", b_o), vector_ref(prefix + "b_g", b_g)};
}

namespace detail {

namespace {

void gru_step_cached(const GruParams &p, std::span<const double> x, std::span<const double> h, GruStepCache &s) {
    const std::size_t n = p.hidden_dim;
    s.x.assign(x.begin(), x.end());
    s.h_prev.assign(h.begin(), h.end());
    s.z = affine(p.w_z, x, p.b_z);
    add_matvec(s.z, p.u_z, h);
    s.r = affine(p.w_r, x, p.b_r);
    add_matvec(s.r, p.u_r, h);
    for (std::size_t k = 0; k < n; ++k) {
        s.z[k] = sigmoid(s.z[k]);
        s.r[k] = sigmoid(s.r[k]);
    }
    s.rh.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.rh[k] = s.r[k] * h[k];
    }
    s.candidate = affine(p.w_h, x, p.b_h);
    add_matvec(s.candidate, p.u_h, s.rh);
    s.h.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.candidate[k] = std::tanh(s.candidate[k]);
        s.h[k] = (1.0 - s.z[k]) * h[k] + s.z[k] * s.candidate[k];
    }
}

void lstm_step_cached(const LstmParams &p, std::span<const double> x, std::span<const double> h,
                      std::span<const double> c, LstmStepCache &s) {
    const std::size_t n = p.hidden_dim;
    s.x.assign(x.begin(), x.end());
    s.h_prev.assign(h.begin(), h.end());
    s.c_prev.assign(c.begin(), c.end());
    s.i = affine(p.w_i, x, p.b_i);
    add_matvec(s.i, p.u_i, h);
    s.f = affine(p.w_f, x, p.b_f);
    add_matvec(s.f, p.u_f, h);
    s.o = affine(p.w_o, x, p.b_o);
    add_matvec(s.o, p.u_o, h);
    s.g = affine(p.w_g, x, p.b_g);
    add_matvec(s.g, p.u_g, h);
    s.c.resize(n);
    s.tanh_c.resize(n);
    s.h.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.i[k] = sigmoid(s.i[k]);
        s.f[k] = sigmoid(s.f[k]);
        s.o[k] = sigmoid(s.o[k]);
        s.g[k] = std::tanh(s.g[k]);
        s.c[k] = s.f[k] * c[k] + s.i[k] * s.g[k];
        s.tanh_c[k] = std::tanh(s.c[k]);
        s.h[k] = s.o[k] * s.tanh_c[k];
    }
}

}  // namespace

Vector gru_forward(const GruParams &p, std::span<const Vector> inputs, std::vector<GruStepCache> &trace) {
    if (inputs.empty()) {
        fail(ErrorKind::InvalidArgument, "encode: empty input sequence");
    }
    trace.resize(inputs.size());
    Vector h(p.hidden_dim, 0.0);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        check_dims(p.input_dim, p.hidden_dim, inputs[t].size(), h.size(), "gru");
        gru_step_cached(p, inputs[t], h, trace[t]);
        h = trace[t].h;
    }
    return h;
}

Vector lstm_forward(const LstmParams &p, std::span<const Vector> inputs, std::vector<LstmStepCache> &trace) {
    if (inputs.empty()) {
        fail(ErrorKind::InvalidArgument, "encode: empty input sequence");
    }
    trace.resize(inputs.size());
    Vector h(p.hidden_dim, 0.0);
    Vector c(p.hidden_dim, 0.0);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        check_dims(p.input_dim, p.hidden_dim, inputs[t].size(), h.size(), "lstm");
        lstm_step_cached(p, inputs[t], h, c, trace[t]);
        h = trace[t].h;
        c = trace[t].c;
    }
    return h;
}

void gru_backward(const GruParams &p, const std::vector<GruStepCache> &trace, Vector dh, GruParams &grad) {
    const std::size_t n = p.hidden_dim;
    Vector da_z(n), da_r(n), da_h(n), d_rh(n), dh_prev(n);
    for (std::size_t t = trace.size(); t-- > 0;) {
        const auto &s = trace[t];
        for (std::size_t k = 0; k < n; ++k) {
            const double d_candidate = dh[k] * s.z[k];
            const double dz = dh[k] * (s.candidate[k] - s.h_prev[k]);
            dh_prev[k] = dh[k] * (1.0 - s.z[k]);
            da_h[k] = d_candidate * (1.0 - s.candidate[k] * s.candidate[k]);
            da_z[k] = dz * s.z[k] * (1.0 - s.z[k]);
        }
        std::fill(d_rh.begin(), d_rh.end(), 0.0);
        add_matvec_t(d_rh, p.u_h, da_h);
        for (std::size_t k = 0; k < n; ++k) {
            const double dr = d_rh[k] * s.h_prev[k];
            dh_prev[k] += d_rh[k] * s.r[k];
            da_r[k] = dr * s.r[k] * (1.0 - s.r[k]);
        }
        add_outer(grad.w_z, da_z, s.x);
        add_outer(grad.w_r, da_r, s.x);
        add_outer(grad.w_h, da_h, s.x);
        add_outer(grad.u_z, da_z, s.h_prev);
        add_outer(grad.u_r, da_r, s.h_prev);
        add_outer(grad.u_h, da_h, s.rh);
        add_into(grad.b_z, da_z);
        add_into(grad.b_r, da_r);
        add_into(grad.b_h, da_h);
        if (t == 0) {
            break;
        }
        add_matvec_t(dh_prev, p.u_z, da_z);
        add_matvec_t(dh_prev, p.u_r, da_r);
        dh = dh_prev;
    }
}

void lstm_backward(const LstmParams &p, const std::vector<LstmStepCache> &trace, Vector dh, LstmParams &grad) {
    const std::size_t n = p.hidden_dim;
    Vector dc(n, 0.0), da_i(n), da_f(n), da_o(n), da_g(n), dh_prev(n);
    for (std::size_t t = trace.size(); t-- > 0;) {
        const auto &s = trace[t];
        for (std::size_t k = 0; k < n; ++k) {
            const double d_o = dh[k] * s.tanh_c[k];
            dc[k] += dh[k] * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
            const double d_i = dc[k] * s.g[k];
            const double d_g = dc[k] * s.i[k];
            const double d_f = dc[k] * s.c_prev[k];
            da_i[k] = d_i * s.i[k] * (1.0 - s.i[k]);
            da_f[k] = d_f * s.f[k] * (1.0 - s.f[k]);
            da_o[k] = d_o * s.o[k] * (1.0 - s.o[k]);
            da_g[k] = d_g * (1.0 - s.g[k] * s.g[k]);
            dc[k] *= s.f[k];
        }
        add_outer(grad.w_i, da_i, s.x);
        add_outer(grad.w_f, da_f, s.x);
        add_outer(grad.w_o, da_o, s.x);
        add_outer(grad.w_g, da_g, s.x);
        add_outer(grad.u_i, da_i, s.h_prev);
        add_outer(grad.u_f, da_f, s.h_prev);
        add_outer(grad.u_o, da_o, s.h_prev);
        add_outer(grad.u_g, da_g, s.h_prev);
        add_into(grad.b_i, da_i);
        add_into(grad.b_f, da_f);
        add_into(grad.b_o, da_o);
        add_into(grad.b_g, da_g);
        if (t == 0) {
            break;
        }
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        add_matvec_t(dh_prev, p.u_i, da_i);
        add_matvec_t(dh_prev, p.u_f, da_f);
        add_matvec_t(dh_prev, p.u_o, da_o);
        add_matvec_t(dh_prev, p.u_g, da_g);
        dh = dh_prev;
    }
}

}  // namespace detail

Vector gru_step(const GruParams &p, std::span<const double> x, std::span<const double> h) {
    check_dims(p.input_dim, p.hidden_dim, x.size(), h.size(), "gru_step");
    detail::GruStepCache s;
    detail::gru_step_cached(p, x, h, s);
    return s.h;
}

LstmState lstm_step(const LstmParams &p, std::span<const double> x, const LstmState &state) {
    check_dims(p.input_dim, p.hidden_dim, x.size(), state.h.size(), "lstm_step");
    if (state.c.size() != p.hidden_dim) {
        fail(ErrorKind::Dimension, "lstm_step: cell state has " + std::to_string(state.c.size()) + " components");
    }
    detail::LstmStepCache s;
    detail::lstm_step_cached(p, x, state.h, state.c, s);
    return {s.h, s.c};
}

Vector encode(const EncoderParams &params, std::span<const Vector> inputs) {
    if (const auto *gru = std::get_if<GruParams>(&params)) {
        std::vector<detail::GruStepCache> trace;
        return detail::gru_forward(*gru, inputs, trace);
    }
    std::vector<detail::LstmStepCache> trace;
    return detail::lstm_forward(std::get<LstmParams>(params), inputs, trace);
}

}  // namespace pcm
