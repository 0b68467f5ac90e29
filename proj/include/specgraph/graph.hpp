#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "specgraph/image.hpp"
#include "specgraph/polyline.hpp"

namespace specgraph {

enum class PointKind { Endpoint, Junction, Corner };

[[nodiscard]] std::string_view to_string(PointKind kind);
[[nodiscard]] PointKind point_kind_from_string(std::string_view s);

struct InterestPoint {
    int x = 0;
    int y = 0;
    PointKind kind = PointKind::Endpoint;

    [[nodiscard]] Pixel pixel() const noexcept { return {x, y}; }
    bool operator==(const InterestPoint&) const = default;
};

struct GraphEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 0.0;

    bool operator==(const GraphEdge&) const = default;
};

/// G = (V, E, mu, nu): nodes carry pixel coordinates, edges carry weights.
/// Simple and undirected; edges are stored with u < v, sorted.
struct NumeralGraph {
    std::vector<InterestPoint> nodes;
    std::vector<GraphEdge> edges;

    [[nodiscard]] std::size_t order() const noexcept { return nodes.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return edges.size(); }
    [[nodiscard]] std::vector<std::size_t> degrees() const;
    /// Component id per node, numbered by first appearance.
    [[nodiscard]] std::vector<std::size_t> component_ids() const;
    [[nodiscard]] std::size_t component_count() const;
};

inline constexpr double kDefaultRdpEpsilon = 2.0;

/// Skeleton pixel classification used by the tracer.
///
/// Adjacency is "m-adjacency": 4-neighbors always, diagonal neighbors only
/// when both pixels 4-adjacent to the pair are background. This keeps
/// staircase strokes from short-circuiting around a pixel.
[[nodiscard]] std::vector<Pixel> m_neighbors(const BinaryImage& skel, Pixel p);
/// Number of 0->1 transitions around the 8-neighborhood.
[[nodiscard]] int crossing_number(const BinaryImage& skel, Pixel p);

/// Endpoints (one m-neighbor, or isolated pixels), junctions (crossing
/// number >= 3 or three or more m-neighbors; touching junction pixels merge
/// to the one nearest their centroid) and corners (Ramer-Douglas-Peucker
/// breakpoints of each traced stroke). Closed loops without endpoints or
/// junctions are seeded at their topmost-then-leftmost pixel. Output is in
/// raster order.
[[nodiscard]] std::vector<InterestPoint> detect_interest_points(const SkeletonImage& skel,
                                                                double rdp_epsilon = kDefaultRdpEpsilon);

/// Joins two points iff a skeleton path links them without crossing another
/// point. A junction point also owns the touching junction pixels of its
/// cluster. Edge weights are left at zero; see weight_edges.
[[nodiscard]] NumeralGraph build_graph(const SkeletonImage& skel, std::span<const InterestPoint> points);

/// Sets each edge weight to the Euclidean distance between its endpoints.
[[nodiscard]] NumeralGraph weight_edges(NumeralGraph g);

/// detect + build + weight.
[[nodiscard]] NumeralGraph extract_graph(const SkeletonImage& skel, double rdp_epsilon = kDefaultRdpEpsilon);

}  // namespace specgraph
