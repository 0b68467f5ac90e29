#pragma once

#include <array>
#include <cstddef>

#include "specgraph/graph.hpp"
#include "specgraph/image.hpp"
#include "specgraph/spectra.hpp"
#include "specgraph/svm.hpp"

namespace specgraph {

struct PreprocessParams {
    double sigma1 = 1.0;
    double sigma2 = 1.6;
    int target = 64;

    void validate() const;
};

struct FeatureParams {
    PreprocessParams preprocess;
    double rdp_epsilon = kDefaultRdpEpsilon;
    std::size_t n = 3;

    void validate() const;
};

/// Every raster stage, kept for debugging output.
struct PreprocessStages {
    GrayImage filtered;
    GrayImage normalized;
    BinaryImage binary;
    SkeletonImage skeleton;
};

/// DoG filter, size normalization, Otsu binarization, thinning.
[[nodiscard]] PreprocessStages preprocess(const GrayImage& img, const PreprocessParams& params);

struct GlyphFeatures {
    NumeralGraph graph;
    std::array<FeatureVector, 3> features;  // indexed by FeatureType
};

[[nodiscard]] GlyphFeatures features_from_graph(const NumeralGraph& g, std::size_t n);
[[nodiscard]] GlyphFeatures extract_features(const GrayImage& img, const FeatureParams& params);

[[nodiscard]] constexpr std::size_t index(FeatureType ft) noexcept { return static_cast<std::size_t>(ft); }

}  // namespace specgraph
