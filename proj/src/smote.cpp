#include "pcm/smote.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "pcm/error.hpp"
#include "pcm/kernels.hpp"
#include "pcm/rng.hpp"

namespace pcm {

Balanced smote(const Matrix &x, std::span<const int> y, std::size_t k_neighbors, std::uint64_t seed) {
    if (x.rows() == 0 || y.empty()) {
        fail(ErrorKind::InvalidArgument, "smote: empty input");
    }
    if (x.rows() != y.size()) {
        fail(ErrorKind::Dimension, "smote: " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
                                       " labels");
    }
    if (k_neighbors < 1) {
        fail(ErrorKind::InvalidArgument, "smote: k_neighbors must be at least 1");
    }
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
        members[y[i]].push_back(i);
    }
    std::size_t majority = 0;
    for (const auto &[label, rows] : members) {
        majority = std::max(majority, rows.size());
    }

    Balanced out{x, std::vector<int>(y.begin(), y.end())};
    Rng rng(seed);
    for (const auto &[label, rows] : members) {
        const std::size_t needed = majority - rows.size();
        if (needed == 0) {
            continue;
        }
        Matrix cls(rows.size(), x.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::copy(x.row(rows[i]).begin(), x.row(rows[i]).end(), cls.row(i).begin());
        }
        const std::size_t k = std::min(k_neighbors, rows.size() - 1);
        // nearest same-class rows per base row, by distance then row order
        std::vector<std::vector<std::size_t>> neighbors(rows.size());
        if (k > 0) {
            const Matrix dist = kernels::sq_distances(cls, cls);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                std::vector<std::size_t> order;
                for (std::size_t j = 0; j < rows.size(); ++j) {
                    if (j != i) {
                        order.push_back(j);
                    }
                }
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) { return dist(i, a) < dist(i, b); });
                order.resize(k);
                neighbors[i] = std::move(order);
            }
        }
        Vector synthetic(x.cols());
        for (std::size_t s = 0; s < needed; ++s) {
            const std::size_t base = s % rows.size();
            const auto xb = cls.row(base);
            if (k == 0) {
                out.x.append_row(xb);
            } else {
                const auto xn = cls.row(neighbors[base][rng.below(k)]);
                const double u = rng.uniform();
                for (std::size_t c = 0; c < synthetic.size(); ++c) {
                    synthetic[c] = xb[c] + u * (xn[c] - xb[c]);
                }
                out.x.append_row(synthetic);
            }
            out.y.push_back(label);
        }
    }
    return out;
}

}  // namespace pcm
