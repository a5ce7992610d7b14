#pragma once

#include <array>
#include <span>
#include <vector>

#include "pcm/matrix.hpp"

namespace pcm::detail {

// Tallies indexed by label 1..5 (slot 0 unused).
using LabelTally = std::array<double, 6>;

// Highest tally; the lowest label wins ties. Returns 0 if every tally is 0.
int majority(const LabelTally &tally);

void validate_training_set(const Matrix &x, std::span<const int> y, const char *who);

std::vector<int> distinct_labels(std::span<const int> y);

}  // namespace pcm::detail

namespace pcm {

struct GaussianNbState;
struct KnnState;

int predict_gaussian_nb(const GaussianNbState &s, std::span<const double> x);
int predict_knn(const KnnState &s, std::span<const double> x);
std::vector<int> predict_knn_batch(const KnnState &s, const Matrix &queries);

}  // namespace pcm

namespace pcm {

struct SvmState;
struct LogisticState;

int predict_svm(const SvmState &s, std::span<const double> x);
int predict_logistic(const LogisticState &s, std::span<const double> x);

}  // namespace pcm
