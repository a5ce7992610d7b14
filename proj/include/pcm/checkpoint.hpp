#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pcm/matrix.hpp"

namespace pcm {

inline constexpr std::string_view kCheckpointMagic = "PCMT1";

struct NamedTensor {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
};

// Container layout, all integers little-endian u64:
//   "PCMT1" | meta length | meta JSON (UTF-8) | tensor count |
//   per tensor: name length | name | rows | cols | rows*cols f64 LE
struct Checkpoint {
    nlohmann::json meta;
    std::vector<NamedTensor> tensors;

    void add(std::string name, std::size_t rows, std::size_t cols, std::span<const double> values);
    void add(std::string name, const Matrix &m) { add(std::move(name), m.rows(), m.cols(), m.data()); }
    void add(std::string name, const Vector &v) { add(std::move(name), v.size(), 1, v); }

    const NamedTensor &tensor(const std::string &name) const;
    Matrix matrix(const std::string &name) const;
    Vector vector(const std::string &name) const;
};

std::string serialize_checkpoint(const Checkpoint &ckpt);
Checkpoint deserialize_checkpoint(std::string_view bytes);

void write_checkpoint(const Checkpoint &ckpt, const std::string &path);
Checkpoint read_checkpoint(const std::string &path);

}  // namespace pcm
