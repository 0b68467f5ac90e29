#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "specgraph/matrix.hpp"
#include "specgraph/metrics.hpp"

namespace specgraph {

/// P(i, j) = P(actual class i | classifier predicted j). Columns of a
/// calibrated matrix sum to 1.
struct ProbMatrix {
    SquareMatrix values;

    [[nodiscard]] std::size_t classes() const noexcept { return values.order(); }
    double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
};

/// Column-normalizes the counts after adding one to every cell, so a class
/// that was never predicted still yields a proper distribution.
[[nodiscard]] ProbMatrix prob_matrix(const ConfusionMatrix& c);

/// One calibrated matrix per base classifier, all over the same classes.
struct FusionModel {
    std::vector<int> classes;
    std::vector<std::string> tags;
    std::vector<ProbMatrix> matrices;

    void validate() const;
};

struct FusionResult {
    std::vector<double> belief;
    std::size_t class_index = 0;
    /// True when every product vanished and the decision fell back to a vote.
    bool fallback = false;
};

/// b(i) = prod_l P_l(i, j_l) / sum_i prod_l P_l(i, j_l); the decision is the
/// first argmax. predictions[l] is the class index chosen by classifier l.
[[nodiscard]] FusionResult fuse(const FusionModel& model, std::span<const std::size_t> predictions);

}  // namespace specgraph
