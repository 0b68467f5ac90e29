#pragma once

#include "specgraph/image.hpp"

namespace specgraph {

/// Kernel half-width used by gaussian_blur: ceil(4 * sigma).
[[nodiscard]] int gaussian_radius(double sigma);

/// Separable Gaussian blur with a normalized, truncated kernel and
/// replicated borders. Values are not clamped.
[[nodiscard]] GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// blur(sigma1) - blur(sigma2), min-max rescaled to [0,1]. A constant
/// difference rescales to all zeros.
[[nodiscard]] GrayImage dog_filter(const GrayImage& img, double sigma1, double sigma2);

/// Min-max rescale to [0,1]; constant input maps to all zeros.
void rescale_unit(GrayImage& img);

inline constexpr int kNormalizeMargin = 2;

/// Crops the glyph bounding box (pixels darker than the middle of the value
/// range), resamples it bilinearly to fit target - 2*margin with aspect ratio
/// kept, and centers it on a target x target canvas filled with the image's
/// median (the background level).
[[nodiscard]] GrayImage normalize_size(const GrayImage& img, int target);

/// Otsu level k in [0, 256] over a 256-bin histogram: a pixel is foreground
/// iff its bin index is below k, i.e. intensity < k / 256. Returns 0 when no
/// threshold separates two non-empty classes.
[[nodiscard]] int otsu_level(const GrayImage& img);

/// Dark pixels (below the Otsu threshold) become foreground.
[[nodiscard]] BinaryImage binarize_otsu(const GrayImage& img);

/// Guo-Hall two-subiteration parallel thinning, iterated to a fixpoint.
[[nodiscard]] SkeletonImage thin(const BinaryImage& bin);

}  // namespace specgraph
