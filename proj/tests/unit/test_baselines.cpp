#include <cmath>
#include <set>

#include "doctest.h"
#include "pcm/baselines.hpp"
#include "pcm/error.hpp"
#include "pcm/rng.hpp"

using namespace pcm;

namespace {

struct Blobs {
    Matrix x;
    std::vector<int> y;
};

// Five well separated 2-d Gaussian blobs, sigma 0.1, centers 3+ apart along
// the diagonal. Boosted stumps cannot fit a grid layout of five classes.
Blobs blobs(std::uint64_t seed, std::size_t per_class = 40) {
    const double centers[5][2] = {{0, 0}, {3, 3}, {6, 6}, {9, 9}, {12, 12}};
    Rng rng(seed);
    Blobs b;
    for (std::size_t i = 0; i < per_class; ++i) {
        for (int c = 0; c < 5; ++c) {
            b.x.append_row(std::array<double, 2>{centers[c][0] + 0.1 * rng.normal(), centers[c][1] + 0.1 * rng.normal()});
            b.y.push_back(c + 1);
        }
    }
    return b;
}

double accuracy(const BaselineModel &m, const Blobs &b) {
    const auto p = predict_baseline(m, b.x);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        hit += p[i] == b.y[i];
    }
    return static_cast<double>(hit) / static_cast<double>(p.size());
}

Matrix column(std::initializer_list<double> v) {
    Matrix m;
    for (double x : v) {
        m.append_row(std::array<double, 1>{x});
    }
    return m;
}

}  // namespace

TEST_CASE("every baseline fits separated blobs") {
    const auto data = blobs(1);
    for (const auto kind : all_baseline_kinds()) {
        CAPTURE(display_name(kind));
        const auto m = train_baseline(kind, data.x, data.y, {});
        CHECK(accuracy(m, data) >= 0.95);
        for (int p : predict_baseline(m, data.x)) {
            CHECK(p >= 1);
            CHECK(p <= 5);
        }
    }
}

TEST_CASE("retraining with the same seed is identical") {
    const auto data = blobs(2);
    Rng rng(3);
    Matrix probe(50, 2);
    for (auto &v : probe.data()) {
        v = rng.uniform(-1, 13);
    }
    BaselineHyper h;
    h.seed = 44;
    for (const auto kind : all_baseline_kinds()) {
        CAPTURE(display_name(kind));
        const auto a = train_baseline(kind, data.x, data.y, h);
        const auto b = train_baseline(kind, data.x, data.y, h);
        CHECK(predict_baseline(a, probe) == predict_baseline(b, probe));
        Checkpoint ca, cb;
        add_to_checkpoint(a, ca, "m");
        add_to_checkpoint(b, cb, "m");
        CHECK(serialize_checkpoint(ca) == serialize_checkpoint(cb));
    }
}

TEST_CASE("checkpoint round trip keeps predictions") {
    const auto data = blobs(4, 12);
    Rng rng(5);
    Matrix probe(40, 2);
    for (auto &v : probe.data()) {
        v = rng.uniform(-1, 13);
    }
    for (const auto kind : all_baseline_kinds()) {
        CAPTURE(display_name(kind));
        const auto m = train_baseline(kind, data.x, data.y, {});
        Checkpoint c;
        add_to_checkpoint(m, c, "base");
        const auto back = baseline_from_checkpoint(deserialize_checkpoint(serialize_checkpoint(c)), "base");
        CHECK(back.kind == kind);
        CHECK(back.input_dim == 2);
        CHECK(predict_baseline(back, probe) == predict_baseline(m, probe));
    }
}

TEST_CASE("k-nearest neighbours") {
    const auto data = blobs(6, 10);
    BaselineHyper h;
    h.knn_k = 1;
    const auto m = train_baseline(BaselineKind::KNN, data.x, data.y, h);
    const auto &state = std::get<KnnState>(m.state);
    CHECK(state.x == data.x);
    CHECK(state.y == data.y);
    CHECK(accuracy(m, data) == 1.0);
    for (std::size_t r = 0; r < data.x.rows(); ++r) {
        CHECK(predict_baseline(m, data.x.row(r)) == data.y[r]);
    }
}

TEST_CASE("decision tree memorizes training rows when unlimited") {
    Rng rng(7);
    Matrix x(60, 3);
    std::vector<int> y;
    for (std::size_t r = 0; r < 60; ++r) {
        for (auto &v : x.row(r)) {
            v = rng.uniform();
        }
        y.push_back(1 + static_cast<int>(rng.below(5)));
    }
    BaselineHyper h;
    h.dt_max_depth = 0;
    const auto m = train_baseline(BaselineKind::DT, x, y, h);
    for (std::size_t r = 0; r < 60; ++r) {
        CHECK(predict_baseline(m, x.row(r)) == y[r]);
    }
}

TEST_CASE("single-tree forest without bootstrap equals the tree") {
    const auto data = blobs(8, 15);
    BaselineHyper h;
    h.rf_trees = 1;
    h.rf_feature_frac = 1.0;
    h.rf_bootstrap = false;
    h.seed = 5;
    const auto rf = train_baseline(BaselineKind::RF, data.x, data.y, h);
    const auto dt = train_baseline(BaselineKind::DT, data.x, data.y, h);
    Rng rng(9);
    Matrix probe(200, 2);
    for (auto &v : probe.data()) {
        v = rng.uniform(-1, 13);
    }
    CHECK(predict_baseline(rf, probe) == predict_baseline(dt, probe));
}

TEST_CASE("gaussian naive bayes closed form") {
    const auto x = column({-2, -1, 1, 2});
    const std::vector<int> y{1, 1, 2, 2};
    const auto nb = fit_gaussian_nb(x, y, 1e-9);
    CHECK(nb.means(0, 0) == doctest::Approx(-1.5));
    CHECK(nb.means(1, 0) == doctest::Approx(1.5));
    CHECK(nb.variances(0, 0) == doctest::Approx(0.25));
    const auto m = train_baseline(BaselineKind::NB, x, y, {});
    // equal priors and variances: the midpoint ties and the lower label wins
    CHECK(predict_baseline(m, std::array<double, 1>{0.0}) == 1);
    CHECK(predict_baseline(m, std::array<double, 1>{0.1}) == 2);
    CHECK(predict_baseline(m, std::array<double, 1>{-0.1}) == 1);
}

TEST_CASE("logistic regression separates two points") {
    const auto x = column({-1, 1});
    const std::vector<int> y{3, 5};
    const auto m = train_baseline(BaselineKind::LR, x, y, {});
    CHECK(predict_baseline(m, std::array<double, 1>{-1.0}) == 3);
    CHECK(predict_baseline(m, std::array<double, 1>{1.0}) == 5);
}

TEST_CASE("adaboost training error is non-increasing") {
    for (std::uint64_t seed = 10; seed < 13; ++seed) {
        const auto data = blobs(seed);
        const auto state = fit_adaboost(data.x, data.y, 50);
        const auto curve = adaboost_training_curve(state, data.x, data.y);
        REQUIRE(!curve.empty());
        for (std::size_t i = 1; i < curve.size(); ++i) {
            CHECK(curve[i] <= curve[i - 1] + 1e-12);
        }
    }
}

TEST_CASE("rbf kernel") {
    const std::array<double, 2> e1{1, 0}, e2{0, 1};
    CHECK(rbf_kernel(e1, e1, 3.0) == 1.0);
    CHECK(rbf_kernel(e1, e2, 0.0) == 1.0);
    CHECK(rbf_kernel(e1, e2, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(rbf_kernel(e1, e2, 1.0) == doctest::Approx(0.13534).epsilon(1e-4));
    CHECK_THROWS_AS(rbf_kernel(e1, std::array<double, 3>{0, 0, 0}, 1.0), Error);
    CHECK_THROWS_AS(rbf_kernel(e1, e2, -1.0), Error);
}

TEST_CASE("invalid training input") {
    const auto x = column({1, 2, 3});
    const std::vector<int> one_class{2, 2, 2};
    CHECK_THROWS_AS(train_baseline(BaselineKind::RSVM, x, one_class, {}), Error);
    CHECK_THROWS_AS(train_baseline(BaselineKind::AdaBoost, x, one_class, {}), Error);
    CHECK(predict_baseline(train_baseline(BaselineKind::NB, x, one_class, {}), std::array<double, 1>{9.0}) == 2);

    auto nan = x;
    nan(1, 0) = std::nan("");
    for (const auto kind : all_baseline_kinds()) {
        CAPTURE(display_name(kind));
        CHECK_THROWS_AS(train_baseline(kind, nan, std::vector<int>{1, 2, 3}, {}), Error);
        CHECK_THROWS_AS(train_baseline(kind, x, std::vector<int>{1, 2}, {}), Error);
        CHECK_THROWS_AS(train_baseline(kind, x, std::vector<int>{1, 2, 7}, {}), Error);
        const auto m = train_baseline(kind, x, std::vector<int>{1, 2, 3}, {});
        CHECK_THROWS_AS(predict_baseline(m, std::array<double, 2>{0, 0}), Error);
    }
}

TEST_CASE("kind names") {
    std::set<std::string> names;
    for (const auto kind : all_baseline_kinds()) {
        CHECK(baseline_kind_from_string(to_string(kind)) == kind);
        names.insert(display_name(kind));
    }
    CHECK(names == std::set<std::string>{"NB", "DT", "RF", "K-NN", "R-SVM", "AdaBoost", "LR"});
    CHECK(baseline_kind_from_string("R-SVM") == BaselineKind::RSVM);
    CHECK_THROWS_AS(baseline_kind_from_string("gbm"), Error);
}
