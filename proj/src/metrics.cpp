#include "specgraph/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "specgraph/error.hpp"

namespace specgraph {

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::int64_t times) {
    if (actual >= n_ || predicted >= n_)
        throw ContractError("confusion matrix: label out of range (" + std::to_string(actual) + ", " +
                            std::to_string(predicted) + ") for " + std::to_string(n_) + " classes");
    counts_[actual * n_ + predicted] += times;
}

std::int64_t ConfusionMatrix::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> actual, std::span<const std::size_t> predicted,
                                 std::size_t classes) {
    if (actual.size() != predicted.size()) throw ContractError("confusion_matrix: sequences differ in length");
    ConfusionMatrix c(classes);
    for (std::size_t i = 0; i < actual.size(); ++i) c.add(actual[i], predicted[i]);
    return c;
}

PrfReport precision_recall_f(const ConfusionMatrix& c) {
    const std::size_t n = c.classes();
    PrfReport r;
    r.per_class.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::int64_t predicted_k = 0, actual_k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            predicted_k += c(i, k);
            actual_k += c(k, i);
        }
        const auto hit = static_cast<double>(c(k, k));
        auto& s = r.per_class[k];
        s.precision = predicted_k > 0 ? hit / static_cast<double>(predicted_k) : 0.0;
        s.recall = actual_k > 0 ? hit / static_cast<double>(actual_k) : 0.0;
        const double denom = s.precision + s.recall;
        s.f_measure = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
    }
    if (n > 0) {
        for (const auto& s : r.per_class) {
            r.macro_precision += s.precision;
            r.macro_recall += s.recall;
            r.macro_f += s.f_measure;
        }
        r.macro_precision /= static_cast<double>(n);
        r.macro_recall /= static_cast<double>(n);
        r.macro_f /= static_cast<double>(n);
    }
    return r;
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd out;
    if (values.empty()) return out;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return out;
}

}  // namespace specgraph
