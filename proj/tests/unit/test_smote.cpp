#include <algorithm>
#include <map>

#include "doctest.h"
#include "pcm/error.hpp"
#include "pcm/rng.hpp"
#include "pcm/smote.hpp"

using namespace pcm;

namespace {

Matrix rows_of(std::initializer_list<std::pair<double, double>> pts) {
    Matrix m;
    for (const auto &[a, b] : pts) {
        m.append_row(std::array<double, 2>{a, b});
    }
    return m;
}

std::map<int, std::size_t> counts(const std::vector<int> &y) {
    std::map<int, std::size_t> c;
    for (int v : y) {
        ++c[v];
    }
    return c;
}

using Pt = std::array<double, 2>;

double cross(const Pt &o, const Pt &a, const Pt &b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counter-clockwise.
std::vector<Pt> hull(std::vector<Pt> p) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) {
        return p;
    }
    std::vector<Pt> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) {
            --k;
        }
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) {
            --k;
        }
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

bool inside(const std::vector<Pt> &h, const Pt &q) {
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (cross(h[i], h[(i + 1) % h.size()], q) < -1e-12) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("balanced input is unchanged") {
    const auto x = rows_of({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    const std::vector<int> y{1, 2, 1, 2};
    const auto out = smote(x, y, 5, 1);
    CHECK(out.x == x);
    CHECK(out.y == y);
}

TEST_CASE("two-point minority interpolates on the segment") {
    const auto x = rows_of({{0, 0}, {1, 1}, {5, 5}, {6, 5}, {5, 6}, {6, 6}, {7, 7}});
    const std::vector<int> y{2, 2, 1, 1, 1, 1, 1};
    const auto out = smote(x, y, 1, 3);
    CHECK(counts(out.y) == std::map<int, std::size_t>{{1, 5}, {2, 5}});
    for (std::size_t r = 7; r < out.x.rows(); ++r) {
        CHECK(out.y[r] == 2);
        CHECK(out.x(r, 0) == out.x(r, 1));
        CHECK(out.x(r, 0) >= 0.0);
        CHECK(out.x(r, 0) < 1.0);
    }
}

TEST_CASE("class sizes are brought up to the majority") {
    Rng rng(1);
    Matrix x;
    std::vector<int> y;
    for (const auto &[label, n] : {std::pair{1, 10}, {2, 4}, {3, 2}}) {
        for (int i = 0; i < n; ++i) {
            x.append_row(std::array<double, 2>{rng.normal() + label, rng.normal()});
            y.push_back(label);
        }
    }
    const auto out = smote(x, y, 5, 2);
    CHECK(counts(out.y) == std::map<int, std::size_t>{{1, 10}, {2, 10}, {3, 10}});
    // originals first, in order
    for (std::size_t r = 0; r < x.rows(); ++r) {
        CHECK(std::equal(x.row(r).begin(), x.row(r).end(), out.x.row(r).begin()));
        CHECK(out.y[r] == y[r]);
    }
}

TEST_CASE("singleton class is duplicated") {
    const auto x = rows_of({{0.5, -2}, {1, 1}, {2, 2}, {3, 3}});
    const std::vector<int> y{4, 1, 1, 1};
    const auto out = smote(x, y, 3, 0);
    REQUIRE(out.x.rows() == 6);
    for (std::size_t r = 4; r < 6; ++r) {
        CHECK(out.y[r] == 4);
        CHECK(out.x(r, 0) == 0.5);
        CHECK(out.x(r, 1) == -2);
    }
}

TEST_CASE("synthetic rows stay in the class hull and reruns are identical") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix x;
        std::vector<int> y;
        for (int label = 1; label <= 5; ++label) {
            const std::size_t n = 1 + rng.below(12);
            for (std::size_t i = 0; i < n; ++i) {
                x.append_row(std::array<double, 2>{rng.uniform(-1, 1) + 3 * label, rng.uniform(-1, 1)});
                y.push_back(label);
            }
        }
        const auto out = smote(x, y, 1 + rng.below(6), static_cast<std::uint64_t>(trial));
        const auto c = counts(out.y);
        std::size_t top = 0;
        for (const auto &[label, n] : counts(y)) {
            top = std::max(top, n);
        }
        for (const auto &[label, n] : c) {
            CHECK(n == top);
        }
        std::map<int, std::vector<Pt>> hulls;
        for (int label = 1; label <= 5; ++label) {
            std::vector<Pt> pts;
            for (std::size_t r = 0; r < x.rows(); ++r) {
                if (y[r] == label) {
                    pts.push_back({x(r, 0), x(r, 1)});
                }
            }
            hulls[label] = hull(pts);
        }
        for (std::size_t r = x.rows(); r < out.x.rows(); ++r) {
            const Pt q{out.x(r, 0), out.x(r, 1)};
            const auto &h = hulls[out.y[r]];
            if (h.size() >= 3) {
                CHECK(inside(h, q));
            } else if (h.size() == 2) {
                CHECK(std::abs(cross(h[0], h[1], q)) <= 1e-12);
            } else {
                CHECK((q == h[0]));
            }
        }
    }
}

TEST_CASE("same seed gives bit-identical output") {
    Rng rng(23);
    Matrix x;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
        x.append_row(std::array<double, 3>{rng.normal(), rng.normal(), rng.normal()});
        y.push_back(i < 20 ? 1 : (i < 26 ? 2 : 3));
    }
    const auto a = smote(x, y, 3, 99);
    const auto b = smote(x, y, 3, 99);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    const auto c = smote(x, y, 3, 100);
    CHECK_FALSE(c.x == a.x);
}

TEST_CASE("invalid input") {
    CHECK_THROWS_AS(smote(Matrix(), std::vector<int>{}, 1, 0), Error);
    CHECK_THROWS_AS(smote(Matrix(2, 2), std::vector<int>{1}, 1, 0), Error);
    CHECK_THROWS_AS(smote(Matrix(2, 2), std::vector<int>{1, 2}, 0, 0), Error);
}
