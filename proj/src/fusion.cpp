#include "specgraph/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "specgraph/error.hpp"

namespace specgraph {

ProbMatrix prob_matrix(const ConfusionMatrix& c) {
    const std::size_t n = c.classes();
    ProbMatrix p{SquareMatrix(n)};
    for (std::size_t j = 0; j < n; ++j) {
        double column = 0.0;
        for (std::size_t i = 0; i < n; ++i) column += static_cast<double>(c(i, j)) + 1.0;
        for (std::size_t i = 0; i < n; ++i) p.values(i, j) = (static_cast<double>(c(i, j)) + 1.0) / column;
    }
    return p;
}

void FusionModel::validate() const {
    if (matrices.empty()) throw ContractError("fusion model: no classifiers");
    if (!tags.empty() && tags.size() != matrices.size()) throw ContractError("fusion model: tag count mismatch");
    for (const auto& m : matrices) {
        if (m.classes() != classes.size()) throw ContractError("fusion model: matrix size does not match class list");
        for (double v : m.values.data())
            if (!(v >= 0.0) || !std::isfinite(v)) throw ContractError("fusion model: probabilities must be >= 0");
    }
}

FusionResult fuse(const FusionModel& model, std::span<const std::size_t> predictions) {
    model.validate();
    if (predictions.size() != model.matrices.size())
        throw ContractError("fuse: expected one prediction per classifier");
    const std::size_t n = model.classes.size();
    for (auto j : predictions)
        if (j >= n) throw ContractError("fuse: predicted class index out of range");

    FusionResult r;
    r.belief.assign(n, 1.0);
    for (std::size_t l = 0; l < predictions.size(); ++l)
        for (std::size_t i = 0; i < n; ++i) r.belief[i] *= model.matrices[l](i, predictions[l]);

    double total = 0.0;
    for (double b : r.belief) total += b;
    if (total > 0.0 && std::isfinite(total)) {
        for (auto& b : r.belief) b /= total;
        r.class_index = static_cast<std::size_t>(std::max_element(r.belief.begin(), r.belief.end()) - r.belief.begin());
        return r;
    }

    // Plain majority vote over the base decisions, lowest index on ties.
    r.fallback = true;
    std::vector<std::size_t> votes(n, 0);
    for (auto j : predictions) ++votes[j];
    r.class_index = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    for (std::size_t i = 0; i < n; ++i) r.belief[i] = static_cast<double>(votes[i]) / predictions.size();
    return r;
}

}  // namespace specgraph
