#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcm/matrix.hpp"

namespace pcm {

struct Balanced {
    Matrix x;
    std::vector<int> y;
};

// Oversamples every class up to the majority count. Original rows come first
// in input order; synthetic rows follow, class by class in ascending label
// order. Base rows are visited round-robin; each synthetic row is
// base + u * (neighbor - base) with the neighbor drawn among the base's
// k nearest same-class rows.
Balanced smote(const Matrix &x, std::span<const int> y, std::size_t k_neighbors, std::uint64_t seed);

}  // namespace pcm
