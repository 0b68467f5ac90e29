#include "specgraph/image.hpp"

#include <algorithm>

namespace specgraph {

std::size_t BinaryImage::count() const noexcept {
    return static_cast<std::size_t>(std::count_if(data.begin(), data.end(), [](auto v) { return v != 0; }));
}

int count_components8(const BinaryImage& img) {
    std::vector<std::uint8_t> seen(img.size(), 0);
    std::vector<std::pair<int, int>> stack;
    int components = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const auto idx = static_cast<std::size_t>(y) * img.width + x;
            if (!img.data[idx] || seen[idx]) continue;
            ++components;
            seen[idx] = 1;
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (!img.fg(nx, ny)) continue;
                        const auto n = static_cast<std::size_t>(ny) * img.width + nx;
                        if (seen[n]) continue;
                        seen[n] = 1;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
        }
    }
    return components;
}

}  // namespace specgraph
