#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specgraph {

struct Pixel {
    int x = 0;
    int y = 0;
    bool operator==(const Pixel&) const = default;
};

/// Raster order: top row first, then left to right.
[[nodiscard]] constexpr bool row_major_less(const Pixel& a, const Pixel& b) noexcept {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

/// Ramer-Douglas-Peucker simplification. Returns the indices of the kept
/// vertices in order, always including the first and last. When the path is
/// closed (first == last) deviations are measured from that shared point.
/// Ties on the maximum deviation go to the lowest index.
[[nodiscard]] std::vector<std::size_t> rdp_keep(std::span<const Pixel> path, double epsilon);

}  // namespace specgraph
