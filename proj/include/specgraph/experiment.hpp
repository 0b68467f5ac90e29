#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specgraph/dataset.hpp"
#include "specgraph/fusion.hpp"
#include "specgraph/metrics.hpp"
#include "specgraph/pipeline.hpp"
#include "specgraph/svm.hpp"

namespace specgraph {

/// Every knob of a training or evaluation run.
struct ExperimentConfig {
    FeatureParams features;
    std::array<int, 3> ratios{60, 20, 20};
    std::uint64_t seed = 0;
    std::size_t trials = 50;
    /// Skip the grid search and use `params` for each feature type.
    bool fixed_params = false;
    std::array<KernelParams, 3> params{default_params(FeatureType::FT1), default_params(FeatureType::FT2),
                                       default_params(FeatureType::FT3)};
    /// Empty grids fall back to default_grid(grid_base).
    std::vector<double> c_grid;
    std::vector<double> gamma_grid;
    int grid_base = 10;
    bool scale_features = false;
    /// 0 uses every hardware thread. Results do not depend on this.
    unsigned threads = 1;
    SmoOptions smo;

    /// Throws ConfigError.
    void validate() const;
    [[nodiscard]] std::vector<double> resolved_c_grid() const;
    [[nodiscard]] std::vector<double> resolved_gamma_grid() const;
};

/// Features of every manifest sample, computed once and shared by all trials.
struct FeatureTable {
    std::vector<std::string> paths;
    std::vector<int> labels;
    std::vector<int> classes;
    std::size_t n = 0;
    std::array<std::vector<FeatureVector>, 3> features;  // indexed by FeatureType

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] LabeledSet subset(FeatureType ft, const std::vector<std::size_t>& rows) const;
};

/// Reads and processes every image. A failing image raises DataError naming
/// its path.
[[nodiscard]] FeatureTable compute_features(const DatasetManifest& m, const FeatureParams& params,
                                            unsigned threads = 1);

/// Three per-feature-type classifiers plus their fusion model.
struct ModelBundle {
    FeatureParams features;
    std::uint64_t seed = 0;
    std::array<OvoModel, 3> models;
    /// Validation macro F-measure of each classifier when its params were chosen.
    std::array<double, 3> validation_scores{};
    FusionModel fusion;
};

/// Trains on split.train (grid search scored on split.val unless params are
/// fixed) and calibrates the fusion model on split.val.
[[nodiscard]] ModelBundle train_bundle(const FeatureTable& table, const SplitIndices& split,
                                       const ExperimentConfig& config, unsigned threads = 1);

struct BundlePrediction {
    std::array<OvoPrediction, 3> individual;
    FusionResult fused;
    int label = 0;
};

/// Throws ContractError when a feature vector does not match the bundle's n.
[[nodiscard]] BundlePrediction predict_bundle(const ModelBundle& bundle, const std::array<FeatureVector, 3>& features);

inline constexpr std::size_t kSeriesCount = 4;
/// FT1, FT2, FT3, fused.
[[nodiscard]] std::string series_name(std::size_t series);

struct SeriesResult {
    ConfusionMatrix confusion;
    PrfReport scores;
};

struct TrialReport {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::array<KernelParams, 3> params;
    std::array<double, 3> validation_scores{};
    std::array<SeriesResult, kSeriesCount> series;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<int> classes;
    std::size_t samples = 0;
    std::vector<TrialReport> trials;
    /// Macro F-measure over trials, per series.
    std::array<MeanStd, kSeriesCount> macro_f;
};

/// Trial t splits with seed config.seed + t, trains a bundle and scores every
/// series on the test split.
[[nodiscard]] ExperimentReport run_trials(const FeatureTable& table, const ExperimentConfig& config);
[[nodiscard]] ExperimentReport run_trials(const DatasetManifest& m, const ExperimentConfig& config);

}  // namespace specgraph
