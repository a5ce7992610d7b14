#include <Eigen/SVD>
#include <cmath>

#include "doctest.h"
#include "pcm/error.hpp"
#include "pcm/lsa.hpp"
#include "pcm/rng.hpp"

using namespace pcm;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng &rng) {
    Matrix m(r, c);
    for (auto &x : m.data()) {
        x = rng.normal();
    }
    return m;
}

Eigen::MatrixXd centered(const Matrix &x) {
    Eigen::MatrixXd e(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            e(r, c) = x(r, c);
        }
    }
    return e.rowwise() - e.colwise().mean();
}

double frob_error(const Matrix &a, const Matrix &b) {
    double s = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double reconstruction_error(const Matrix &x, const LsaModel &model) {
    return frob_error(x, lsa_reconstruct(model, lsa_transform(model, x)));
}

}  // namespace

TEST_CASE("rank one input is recovered exactly") {
    Matrix x(6, 4);
    const Vector u{1, -2, 0.5, 3, 0, 1}, v{2, 1, -1, 0.25};
    for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            x(r, c) = u[r] * v[c];
        }
    }
    LsaConfig config;
    config.center = false;
    const auto model = lsa_fit(x, 1, config);
    CHECK(reconstruction_error(x, model) <= 1e-9);
}

TEST_CASE("full rank reconstructs and basis is orthonormal") {
    Rng rng(4);
    const auto x = random_matrix(8, 5, rng);
    const auto model = lsa_fit(x, 5);
    CHECK(reconstruction_error(x, model) <= 1e-8);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            const double d = dot(model.basis.row(i), model.basis.row(j));
            CHECK(std::abs(d - (i == j ? 1.0 : 0.0)) <= 1e-8);
        }
    }
    for (std::size_t j = 1; j < 5; ++j) {
        CHECK(model.singular_values[j] <= model.singular_values[j - 1]);
    }
}

TEST_CASE("truncation matches an independent full SVD") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_matrix(10, 15, rng);
        const std::size_t k = 1 + trial % 5;
        const auto model = lsa_fit(x, k);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered(x));
        const auto &sv = svd.singularValues();
        double top = 0, rest = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            (static_cast<std::size_t>(i) < k ? top : rest) += sv[i] * sv[i];
        }
        const auto scores = lsa_transform(model, x);
        double captured = 0;
        for (const double s : scores.data()) {
            captured += s * s;
        }
        CHECK(captured == doctest::Approx(top).epsilon(1e-8));
        CHECK(std::abs(reconstruction_error(x, model) - std::sqrt(rest)) <= 1e-6);
        for (std::size_t j = 0; j < k; ++j) {
            CHECK(std::abs(model.singular_values[j] - sv[static_cast<Eigen::Index>(j)]) <= 1e-6);
        }
    }
}

TEST_CASE("transform") {
    Rng rng(2);
    const auto x = random_matrix(7, 6, rng);
    auto model = lsa_fit(x, 3);
    const auto a = lsa_transform(model, x);
    const auto b = lsa_transform(model, x);
    CHECK(a == b);

    // the column means map to the origin
    Matrix mean_row(1, 6);
    std::copy(model.column_means.begin(), model.column_means.end(), mean_row.row(0).begin());
    const auto origin = lsa_transform(model, mean_row);
    for (const double s : origin.data()) {
        CHECK(std::abs(s) <= 1e-12);
    }

    LsaModel e1;
    e1.k = 1;
    e1.basis = Matrix(1, 4);
    e1.basis(0, 0) = 1;
    e1.singular_values = {1};
    Matrix row(1, 4);
    row(0, 0) = 3;
    CHECK(lsa_transform(e1, row)(0, 0) == 3.0);

    CHECK_THROWS_AS(lsa_transform(model, Matrix(2, 5)), Error);
}

TEST_CASE("fit is deterministic and validates input") {
    Rng rng(8);
    const auto x = random_matrix(9, 12, rng);
    LsaConfig config;
    config.seed = 3;
    CHECK(lsa_fit(x, 4, config).basis == lsa_fit(x, 4, config).basis);
    CHECK_THROWS_AS(lsa_fit(x, 0), Error);
    CHECK_THROWS_AS(lsa_fit(x, 10), Error);
    auto bad = x;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(lsa_fit(bad, 2), Error);
}

TEST_CASE("sign convention puts the largest component positive") {
    Rng rng(6);
    const auto model = lsa_fit(random_matrix(10, 6, rng), 4);
    for (std::size_t j = 0; j < 4; ++j) {
        double best = 0;
        for (const double v : model.basis.row(j)) {
            if (std::abs(v) > std::abs(best)) {
                best = v;
            }
        }
        CHECK(best > 0);
    }
}

TEST_CASE("symmetric eigen solver") {
    Matrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = a(1, 0) = 1;
    a(1, 1) = 2;
    const auto [values, vectors] = symmetric_eigen(a);
    CHECK(values[0] == doctest::Approx(3));
    CHECK(values[1] == doctest::Approx(1));
    CHECK(std::abs(vectors(0, 0)) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(symmetric_eigen(Matrix(2, 3)), Error);
}
