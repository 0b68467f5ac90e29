#include "specgraph/polyline.hpp"

#include <cmath>

namespace specgraph {

namespace {

// Deviation of p from the chord a-b. Differences are integral, so the result
// depends only on relative positions.
double deviation(const Pixel& a, const Pixel& b, const Pixel& p) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double px = p.x - a.x;
    const double py = p.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return std::sqrt(px * px + py * py);
    return std::abs(dx * py - dy * px) / std::sqrt(len2);
}

void simplify(std::span<const Pixel> path, std::size_t first, std::size_t last, double epsilon,
              std::vector<std::size_t>& keep) {
    if (last <= first + 1) return;
    double worst = -1.0;
    std::size_t worst_at = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        const double d = deviation(path[first], path[last], path[i]);
        if (d > worst) {
            worst = d;
            worst_at = i;
        }
    }
    if (worst <= epsilon) return;
    simplify(path, first, worst_at, epsilon, keep);
    keep.push_back(worst_at);
    simplify(path, worst_at, last, epsilon, keep);
}

}  // namespace

std::vector<std::size_t> rdp_keep(std::span<const Pixel> path, double epsilon) {
    if (path.empty()) return {};
    if (path.size() == 1) return {0};
    std::vector<std::size_t> keep{0};
    simplify(path, 0, path.size() - 1, epsilon, keep);
    keep.push_back(path.size() - 1);
    return keep;
}

}  // namespace specgraph
