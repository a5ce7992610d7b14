#include <algorithm>
#include <numeric>

#include "baselines_internal.hpp"
#include "pcm/baselines.hpp"
#include "pcm/kernels.hpp"

namespace pcm {

namespace {

int vote_nearest(const KnnState &s, std::span<const double> distances) {
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t k = std::min(s.k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return distances[a] != distances[b] ? distances[a] < distances[b] : a < b;
                      });
    detail::LabelTally tally{};
    for (std::size_t i = 0; i < k; ++i) {
        tally[static_cast<std::size_t>(s.y[order[i]])] += 1.0;
    }
    return detail::majority(tally);
}

}  // namespace

int predict_knn(const KnnState &s, std::span<const double> x) {
    std::vector<double> distances(s.x.rows());
    for (std::size_t r = 0; r < s.x.rows(); ++r) {
        distances[r] = squared_distance(s.x.row(r), x);
    }
    return vote_nearest(s, distances);
}

std::vector<int> predict_knn_batch(const KnnState &s, const Matrix &queries) {
    const Matrix distances = kernels::sq_distances(queries, s.x);
    std::vector<int> out(queries.rows());
    for (std::size_t q = 0; q < queries.rows(); ++q) {
        out[q] = vote_nearest(s, distances.row(q));
    }
    return out;
}

}  // namespace pcm
