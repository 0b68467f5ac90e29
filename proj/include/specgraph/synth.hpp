#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "specgraph/dataset.hpp"
#include "specgraph/image.hpp"

namespace specgraph {

inline constexpr int kSynthClassCount = 10;

/// Template names by class index: line, cross, loop, loop-with-tail, T, Y,
/// Z, S, H, spiral.
[[nodiscard]] std::string_view synth_class_name(int cls);

struct SynthOptions {
    int canvas = 96;
    double stroke_width = 2.6;
    double noise = 0.02;
};

struct SynthSample {
    int label = 0;
    std::string name;
    GrayImage image;
};

/// Renders one randomly perturbed glyph of the given class.
[[nodiscard]] GrayImage render_glyph(int cls, Rng& rng, const SynthOptions& options = {});

/// classes in [2, 10], per_class >= 10. Sample i of class c draws from an
/// RNG seeded by (seed, c, i), so the output is independent of ordering.
[[nodiscard]] std::vector<SynthSample> synth_dataset(int classes, int per_class, std::uint64_t seed,
                                                     const SynthOptions& options = {});

/// Writes images/<name>.pgm and manifest.csv under `dir`. The returned
/// manifest carries paths joined with `dir`.
DatasetManifest write_synth_dataset(const std::filesystem::path& dir, int classes, int per_class,
                                    std::uint64_t seed, const SynthOptions& options = {});

}  // namespace specgraph
