#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace specgraph {

/// Row-major raster. Pixel (x, y) lives at data[y * width + x].
template <typename T>
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Raster() = default;
    Raster(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    [[nodiscard]] bool empty() const noexcept { return data.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return data.size(); }
    [[nodiscard]] bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width && y < height;
    }

    T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const Raster&) const = default;
};

/// Intensities in [0,1], 0 = black ink, 1 = white background.
using GrayImage = Raster<double>;

/// Non-zero = foreground (ink).
struct BinaryImage : Raster<std::uint8_t> {
    using Raster<std::uint8_t>::Raster;

    [[nodiscard]] bool fg(int x, int y) const noexcept { return contains(x, y) && at(x, y) != 0; }
    [[nodiscard]] std::size_t count() const noexcept;
};

/// Output of thinning: a one-pixel-wide binary image.
struct SkeletonImage : BinaryImage {
    SkeletonImage() = default;
    explicit SkeletonImage(BinaryImage b) : BinaryImage(std::move(b)) {}
};

/// Number of 8-connected foreground components.
[[nodiscard]] int count_components8(const BinaryImage& img);

}  // namespace specgraph
