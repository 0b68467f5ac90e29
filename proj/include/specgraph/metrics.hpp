#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace specgraph {

/// counts(i, j): samples of actual class i predicted as class j (0-based).
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t classes) : n_(classes), counts_(classes * classes, 0) {}

    [[nodiscard]] std::size_t classes() const noexcept { return n_; }
    [[nodiscard]] std::int64_t operator()(std::size_t actual, std::size_t predicted) const {
        return counts_[actual * n_ + predicted];
    }
    void add(std::size_t actual, std::size_t predicted, std::int64_t times = 1);
    [[nodiscard]] std::int64_t total() const noexcept;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> counts_;
};

/// Tallies (actual, predicted) pairs. Labels must lie in [0, classes).
[[nodiscard]] ConfusionMatrix confusion_matrix(std::span<const std::size_t> actual,
                                               std::span<const std::size_t> predicted, std::size_t classes);

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

struct PrfReport {
    std::vector<ClassScores> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f = 0.0;
};

/// Per-class precision, recall and F-measure from the confusion matrix,
/// with 0 wherever a denominator vanishes; macro values are plain means.
[[nodiscard]] PrfReport precision_recall_f(const ConfusionMatrix& c);

/// Mean and sample standard deviation (n - 1); std is 0 for fewer than two values.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
[[nodiscard]] MeanStd mean_std(std::span<const double> values);

}  // namespace specgraph
