#include "specgraph/pipeline.hpp"

#include "specgraph/error.hpp"
#include "specgraph/imageproc.hpp"

namespace specgraph {

void PreprocessParams::validate() const {
    if (!(sigma1 > 0.0) || !(sigma2 > sigma1)) throw ConfigError("preprocess: require sigma2 > sigma1 > 0");
    if (target < 8) throw ConfigError("preprocess: target size must be at least 8");
}

void FeatureParams::validate() const {
    preprocess.validate();
    if (!(rdp_epsilon >= 0.0)) throw ConfigError("features: RDP epsilon must be non-negative");
    if (n == 0) throw ConfigError("features: n must be at least 1");
}

PreprocessStages preprocess(const GrayImage& img, const PreprocessParams& params) {
    PreprocessStages s;
    s.filtered = dog_filter(img, params.sigma1, params.sigma2);
    s.normalized = normalize_size(s.filtered, params.target);
    s.binary = binarize_otsu(s.normalized);
    s.skeleton = thin(s.binary);
    return s;
}

GlyphFeatures features_from_graph(const NumeralGraph& g, std::size_t n) {
    GlyphFeatures out;
    out.graph = g;
    for (auto ft : kAllFeatureTypes) out.features[index(ft)] = graph_feature(g, ft, n).values;
    return out;
}

GlyphFeatures extract_features(const GrayImage& img, const FeatureParams& params) {
    const auto stages = preprocess(img, params.preprocess);
    return features_from_graph(extract_graph(stages.skeleton, params.rdp_epsilon), params.n);
}

}  // namespace specgraph
