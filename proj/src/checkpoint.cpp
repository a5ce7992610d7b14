#include "pcm/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pcm/error.hpp"
#include "pcm/neural.hpp"

namespace pcm {

namespace {

void put_u64(std::string &out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string_view take(std::uint64_t n) {
        need(n);
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::uint64_t n) const {
        if (n > bytes_.size() - pos_) {
            fail(ErrorKind::Parse, "checkpoint truncated at byte " + std::to_string(pos_));
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void Checkpoint::add(std::string name, std::size_t rows, std::size_t cols, std::span<const double> values) {
    if (values.size() != rows * cols) {
        fail(ErrorKind::Dimension, "checkpoint tensor '" + name + "' size mismatch");
    }
    tensors.push_back({std::move(name), rows, cols, {values.begin(), values.end()}});
}

const NamedTensor &Checkpoint::tensor(const std::string &name) const {
    for (const auto &t : tensors) {
        if (t.name == name) {
            return t;
        }
    }
    fail(ErrorKind::Parse, "checkpoint has no tensor '" + name + "'");
}

Matrix Checkpoint::matrix(const std::string &name) const {
    const auto &t = tensor(name);
    Matrix m(t.rows, t.cols);
    m.data() = t.values;
    return m;
}

Vector Checkpoint::vector(const std::string &name) const { return tensor(name).values; }

std::string serialize_checkpoint(const Checkpoint &ckpt) {
    std::string out(kCheckpointMagic);
    const std::string meta = ckpt.meta.dump();
    put_u64(out, meta.size());
    out += meta;
    put_u64(out, ckpt.tensors.size());
    for (const auto &t : ckpt.tensors) {
        put_u64(out, t.name.size());
        out += t.name;
        put_u64(out, t.rows);
        put_u64(out, t.cols);
        for (const double v : t.values) {
            put_u64(out, std::bit_cast<std::uint64_t>(v));
        }
    }
    return out;
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
    if (bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic) {
        fail(ErrorKind::Parse, "not a PCMT1 checkpoint (bad magic header)");
    }
    Reader in(bytes.substr(kCheckpointMagic.size()));
    Checkpoint ckpt;
    const auto meta_len = in.u64();
    try {
        ckpt.meta = nlohmann::json::parse(in.take(meta_len));
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Parse, std::string("checkpoint metadata: ") + e.what());
    }
    const auto count = in.u64();
    for (std::uint64_t i = 0; i < count; ++i) {
        NamedTensor t;
        t.name = std::string(in.take(in.u64()));
        t.rows = in.u64();
        t.cols = in.u64();
        if (t.cols != 0 && t.rows > (UINT64_MAX / 8) / t.cols) {
            fail(ErrorKind::Parse, "checkpoint tensor '" + t.name + "' has an impossible shape");
        }
        t.values.resize(t.rows * t.cols);
        for (auto &v : t.values) {
            v = in.f64();
        }
        ckpt.tensors.push_back(std::move(t));
    }
    if (!in.done()) {
        fail(ErrorKind::Parse, "checkpoint has trailing bytes");
    }
    return ckpt;
}

void write_checkpoint(const Checkpoint &ckpt, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorKind::Io, "cannot write checkpoint '" + path + "'");
    }
    const auto bytes = serialize_checkpoint(ckpt);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        fail(ErrorKind::Io, "failed writing checkpoint '" + path + "'");
    }
}

Checkpoint read_checkpoint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::Io, "cannot open checkpoint '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return deserialize_checkpoint(buffer.str());
}

// ---- twin encoder ------------------------------------------------------------

nlohmann::json to_json(const ModelShape &s) {
    return {{"encoder", to_string(s.kind)},
            {"input_dim", s.input_dim},
            {"hidden_dim", s.hidden_dim},
            {"input_mode", to_string(s.input_mode)},
            {"merge", to_string(s.merge)},
            {"shared_encoder", s.shared_encoder},
            {"max_paragraph_tokens", s.max_paragraph_tokens},
            {"max_comment_tokens", s.max_comment_tokens}};
}

ModelShape model_shape_from_json(const nlohmann::json &j) {
    ModelShape s;
    s.kind = encoder_kind_from_string(j.at("encoder").get<std::string>());
    s.input_dim = j.at("input_dim").get<std::size_t>();
    s.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    s.input_mode = input_mode_from_string(j.at("input_mode").get<std::string>());
    s.merge = merge_mode_from_string(j.at("merge").get<std::string>());
    s.shared_encoder = j.at("shared_encoder").get<bool>();
    s.max_paragraph_tokens = j.at("max_paragraph_tokens").get<std::size_t>();
    s.max_comment_tokens = j.at("max_comment_tokens").get<std::size_t>();
    return s;
}

void save_model(const TwinEncoderModel &model, const std::string &path) {
    Checkpoint ckpt;
    ckpt.meta = {{"type", "twin_encoder"}, {"shape", to_json(model.shape)},
                 {"train_config", to_json(model.config)}};
    auto copy = model;
    for (const auto &t : copy.tensors()) {
        ckpt.add(t.name, t.rows, t.cols, t.values());
    }
    write_checkpoint(ckpt, path);
}

TwinEncoderModel load_model(const std::string &path) {
    const auto ckpt = read_checkpoint(path);
    if (ckpt.meta.value("type", std::string{}) != "twin_encoder") {
        fail(ErrorKind::Parse, "checkpoint '" + path + "' does not hold a twin-encoder model");
    }
    try {
        auto model = TwinEncoderModel::zeros(model_shape_from_json(ckpt.meta.at("shape")));
        model.config = train_config_from_json(ckpt.meta.at("train_config"));
        for (auto &t : model.tensors()) {
            const auto &stored = ckpt.tensor(t.name);
            if (stored.rows != t.rows || stored.cols != t.cols) {
                fail(ErrorKind::Parse, "checkpoint tensor '" + t.name + "' has the wrong shape");
            }
            std::copy(stored.values.begin(), stored.values.end(), t.data);
        }
        return model;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::Parse, std::string("checkpoint metadata: ") + e.what());
    }
}

}  // namespace pcm
