#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "specgraph/matrix.hpp"
#include "specgraph/spectra.hpp"

namespace specgraph {

using FeatureVector = std::vector<double>;

struct KernelParams {
    double C = 1.0;      // soft-margin cost
    double gamma = 1.0;  // RBF width
    bool operator==(const KernelParams&) const = default;
};

void validate(const KernelParams& p);

/// Fixed (C, gamma) per feature type, used when the grid search is skipped.
[[nodiscard]] KernelParams default_params(FeatureType ft);

/// exp(-gamma * |x - y|^2).
[[nodiscard]] double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

[[nodiscard]] SquareMatrix kernel_matrix(std::span<const FeatureVector> xs, double gamma);

struct SmoOptions {
    double tol = 1e-3;
    /// Iteration cap, in units of the sample count.
    std::size_t max_passes = 10000;
};

struct SmoSolution {
    std::vector<double> alpha;
    double bias = 0.0;
    /// Dual objective sum(alpha) - 1/2 alpha' Q alpha (to be maximized).
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Soft-margin dual by SMO with maximal-violating-pair selection, on a
/// precomputed kernel. Labels must be +1/-1. A non-empty `initial_alpha`
/// warm-starts the solver; it must be feasible for C (0 <= a <= C and
/// sum a_i y_i = 0).
[[nodiscard]] SmoSolution solve_smo(const SquareMatrix& kernel, std::span<const int> y, double C,
                                    const SmoOptions& options = {}, std::span<const double> initial_alpha = {});

[[nodiscard]] double dual_objective(const SquareMatrix& kernel, std::span<const int> y, std::span<const double> alpha);

/// Largest KKT violation measured on y_i f(x_i) against the margin.
[[nodiscard]] double max_kkt_violation(const SquareMatrix& kernel, std::span<const int> y,
                                       std::span<const double> alpha, double bias, double C);

/// f(x) = sum coefficients[i] * K(sv_i, x) + bias, coefficients = alpha_i y_i.
struct BinarySvmModel {
    std::vector<FeatureVector> support_vectors;
    std::vector<double> coefficients;
    double bias = 0.0;
    KernelParams params;

    [[nodiscard]] double decision(std::span<const double> x) const;
};

/// Throws TrainingError on empty or single-class input.
[[nodiscard]] BinarySvmModel train_binary(std::span<const FeatureVector> xs, std::span<const int> ys,
                                          const KernelParams& params, const SmoOptions& options = {});

/// Z-score scaling fitted on a training split. Zero-variance columns keep scale 1.
struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> scale;

    [[nodiscard]] static FeatureScaler fit(std::span<const FeatureVector> xs);
    [[nodiscard]] FeatureVector apply(std::span<const double> x) const;
};

struct OvoOptions {
    SmoOptions smo;
    bool scale_features = false;
    FeatureType feature_type = FeatureType::FT1;
};

/// Pairwise decomposition: one binary machine per unordered class pair.
/// For the pair (a, b) with a < b (class indices), class a is the +1 side.
struct OvoModel {
    std::vector<int> classes;
    std::vector<BinarySvmModel> binaries;
    FeatureType feature_type = FeatureType::FT1;
    std::size_t dimension = 0;
    KernelParams params;
    std::optional<FeatureScaler> scaler;

    [[nodiscard]] std::size_t pair_index(std::size_t a, std::size_t b) const;
    [[nodiscard]] std::optional<std::size_t> class_index(int label) const;
};

[[nodiscard]] OvoModel train_ovo(std::span<const FeatureVector> xs, std::span<const int> ys,
                                 const KernelParams& params, const OvoOptions& options = {});

struct OvoPrediction {
    int label = 0;
    std::size_t class_index = 0;
    std::vector<int> votes;
};

[[nodiscard]] OvoPrediction predict(const OvoModel& model, std::span<const double> x);

/// Majority vote. Ties go to the largest summed |decision| over the tied
/// classes' won comparisons, then to the lowest index.
[[nodiscard]] std::size_t resolve_votes(std::span<const int> votes, std::span<const double> winning_margin);

struct LabeledSet {
    std::vector<FeatureVector> x;
    std::vector<int> y;
};

/// Logarithmic grid from 1e-3 to 1e4: base 10 uses three points per
/// decade, base 2 uses integer powers 2^-10 .. 2^13.
[[nodiscard]] std::vector<double> default_grid(int base);

struct GridSearchOptions {
    OvoOptions ovo;
    unsigned threads = 1;
};

struct GridSearchResult {
    KernelParams params;
    double score = 0.0;  // validation macro F-measure
};

/// Trains on `train` for every (C, gamma) and keeps the best validation
/// macro F-measure. Ties prefer smaller C, then smaller gamma.
[[nodiscard]] GridSearchResult grid_search(const LabeledSet& train, const LabeledSet& val,
                                           std::span<const double> c_grid, std::span<const double> gamma_grid,
                                           const GridSearchOptions& options = {});

}  // namespace specgraph
