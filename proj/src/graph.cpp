#include "specgraph/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "specgraph/error.hpp"

namespace specgraph {

namespace {

// Clockwise from north.
constexpr std::array<std::pair<int, int>, 8> kRing{{{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

constexpr int kNone = -1;

std::size_t index_of(const BinaryImage& img, Pixel p) {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(p.x);
}

bool is_junction_pixel(const BinaryImage& skel, Pixel p) {
    return crossing_number(skel, p) >= 3 || m_neighbors(skel, p).size() >= 3;
}

// 8-connected cluster of junction pixels containing `seed`.
std::vector<Pixel> junction_cluster(const BinaryImage& skel, Pixel seed, std::vector<std::uint8_t>& seen) {
    std::vector<Pixel> cluster{seed};
    seen[index_of(skel, seed)] = 1;
    for (std::size_t head = 0; head < cluster.size(); ++head) {
        const Pixel c = cluster[head];
        for (auto [dx, dy] : kRing) {
            const Pixel q{c.x + dx, c.y + dy};
            if (!skel.fg(q.x, q.y) || seen[index_of(skel, q)]) continue;
            if (!is_junction_pixel(skel, q)) continue;
            seen[index_of(skel, q)] = 1;
            cluster.push_back(q);
        }
    }
    std::sort(cluster.begin(), cluster.end(), row_major_less);
    return cluster;
}

Pixel cluster_representative(const std::vector<Pixel>& cluster) {
    double cx = 0.0, cy = 0.0;
    for (const auto& p : cluster) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(cluster.size());
    cy /= static_cast<double>(cluster.size());
    // cluster is in raster order, so the first minimum wins ties
    Pixel best = cluster.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& p : cluster) {
        const double d = (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

struct NodeLayout {
    std::vector<InterestPoint> nodes;
    std::vector<std::vector<Pixel>> owned;  // pixels each node occupies
    std::vector<int> owner;                 // per image pixel, node index or kNone
};

}  // namespace

std::string_view to_string(PointKind kind) {
    switch (kind) {
        case PointKind::Endpoint: return "endpoint";
        case PointKind::Junction: return "junction";
        case PointKind::Corner: return "corner";
    }
    return "endpoint";
}

PointKind point_kind_from_string(std::string_view s) {
    if (s == "endpoint") return PointKind::Endpoint;
    if (s == "junction") return PointKind::Junction;
    if (s == "corner") return PointKind::Corner;
    throw ParameterError("unknown interest point kind '" + std::string(s) + "'");
}

std::vector<std::size_t> NumeralGraph::degrees() const {
    std::vector<std::size_t> deg(nodes.size(), 0);
    for (const auto& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::vector<std::size_t> NumeralGraph::component_ids() const {
    std::vector<std::size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const auto& e : edges) {
        const auto a = find(e.u), b = find(e.v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> ids(nodes.size());
    std::vector<std::size_t> remap(nodes.size(), std::numeric_limits<std::size_t>::max());
    std::size_t next = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto root = find(i);
        if (remap[root] == std::numeric_limits<std::size_t>::max()) remap[root] = next++;
        ids[i] = remap[root];
    }
    return ids;
}

std::size_t NumeralGraph::component_count() const {
    const auto ids = component_ids();
    return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
}

std::vector<Pixel> m_neighbors(const BinaryImage& skel, Pixel p) {
    std::vector<Pixel> out;
    out.reserve(4);
    for (auto [dx, dy] : kRing) {
        if (!skel.fg(p.x + dx, p.y + dy)) continue;
        const bool diagonal = dx != 0 && dy != 0;
        if (diagonal && (skel.fg(p.x + dx, p.y) || skel.fg(p.x, p.y + dy))) continue;
        out.push_back({p.x + dx, p.y + dy});
    }
    return out;
}

int crossing_number(const BinaryImage& skel, Pixel p) {
    int transitions = 0;
    for (std::size_t i = 0; i < kRing.size(); ++i) {
        const auto [ax, ay] = kRing[i];
        const auto [bx, by] = kRing[(i + 1) % kRing.size()];
        if (!skel.fg(p.x + ax, p.y + ay) && skel.fg(p.x + bx, p.y + by)) ++transitions;
    }
    return transitions;
}

namespace {

// Endpoints and merged junctions, with pixel ownership.
NodeLayout anchor_nodes(const SkeletonImage& skel) {
    NodeLayout layout;
    layout.owner.assign(skel.size(), kNone);
    std::vector<std::uint8_t> seen(skel.size(), 0);
    for (int y = 0; y < skel.height; ++y) {
        for (int x = 0; x < skel.width; ++x) {
            const Pixel p{x, y};
            if (!skel.fg(x, y) || seen[index_of(skel, p)]) continue;
            if (m_neighbors(skel, p).size() <= 1) {
                seen[index_of(skel, p)] = 1;
                layout.owner[index_of(skel, p)] = static_cast<int>(layout.nodes.size());
                layout.nodes.push_back({x, y, PointKind::Endpoint});
                layout.owned.push_back({p});
            } else if (is_junction_pixel(skel, p)) {
                auto cluster = junction_cluster(skel, p, seen);
                const Pixel rep = cluster_representative(cluster);
                for (const auto& c : cluster) layout.owner[index_of(skel, c)] = static_cast<int>(layout.nodes.size());
                layout.nodes.push_back({rep.x, rep.y, PointKind::Junction});
                layout.owned.push_back(std::move(cluster));
            }
        }
    }
    return layout;
}

void add_corners(std::span<const Pixel> path, double epsilon, bool closed, std::vector<InterestPoint>& out) {
    const auto keep = rdp_keep(path, epsilon);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const bool interior = keep[k] != 0 && keep[k] != path.size() - 1;
        if (interior || (closed && keep[k] == 0)) {
            const Pixel p = path[keep[k]];
            out.push_back({p.x, p.y, PointKind::Corner});
        }
    }
}

}  // namespace

std::vector<InterestPoint> detect_interest_points(const SkeletonImage& skel, double rdp_epsilon) {
    if (!(rdp_epsilon >= 0.0)) throw ParameterError("detect_interest_points: epsilon must be non-negative");
    if (skel.count() == 0) throw ContentError("detect_interest_points: empty skeleton");

    NodeLayout layout = anchor_nodes(skel);
    std::vector<InterestPoint> points = layout.nodes;
    std::vector<std::uint8_t> visited(skel.size(), 0);
    auto owner_of = [&](Pixel p) { return layout.owner[index_of(skel, p)]; };

    // Strokes leaving each anchor node.
    for (std::size_t n = 0; n < layout.nodes.size(); ++n) {
        const Pixel rep = layout.nodes[n].pixel();
        for (const Pixel start : layout.owned[n]) {
            for (const Pixel first : m_neighbors(skel, start)) {
                if (owner_of(first) != kNone || visited[index_of(skel, first)]) continue;
                std::vector<Pixel> path{rep, first};
                visited[index_of(skel, first)] = 1;
                Pixel prev = start, cur = first;
                for (;;) {
                    const auto next_candidates = m_neighbors(skel, cur);
                    const Pixel* next = nullptr;
                    for (const auto& q : next_candidates)
                        if (!(q == prev)) {
                            next = &q;
                            break;
                        }
                    if (next == nullptr) break;
                    if (const int o = owner_of(*next); o != kNone) {
                        path.push_back(layout.nodes[static_cast<std::size_t>(o)].pixel());
                        break;
                    }
                    if (visited[index_of(skel, *next)]) break;
                    visited[index_of(skel, *next)] = 1;
                    path.push_back(*next);
                    prev = cur;
                    cur = *next;
                }
                add_corners(path, rdp_epsilon, false, points);
            }
        }
    }

    // Loops with no anchor at all.
    for (int y = 0; y < skel.height; ++y) {
        for (int x = 0; x < skel.width; ++x) {
            const Pixel seed{x, y};
            if (!skel.fg(x, y) || owner_of(seed) != kNone || visited[index_of(skel, seed)]) continue;
            visited[index_of(skel, seed)] = 1;
            std::vector<Pixel> path{seed};
            Pixel prev = seed, cur = seed;
            for (;;) {
                const Pixel* next = nullptr;
                const auto candidates = m_neighbors(skel, cur);
                for (const auto& q : candidates)
                    if (!(q == prev) || cur == seed) {
                        next = &q;
                        break;
                    }
                if (next == nullptr) break;
                if (*next == seed) {
                    path.push_back(seed);
                    break;
                }
                if (visited[index_of(skel, *next)]) break;
                visited[index_of(skel, *next)] = 1;
                path.push_back(*next);
                prev = cur;
                cur = *next;
            }
            if (path.back() == seed && path.size() > 1) {
                add_corners(path, rdp_epsilon, true, points);
            } else {
                points.push_back({seed.x, seed.y, PointKind::Corner});
            }
        }
    }

    std::sort(points.begin(), points.end(),
              [](const InterestPoint& a, const InterestPoint& b) { return row_major_less(a.pixel(), b.pixel()); });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const InterestPoint& a, const InterestPoint& b) { return a.pixel() == b.pixel(); }),
                 points.end());
    return points;
}

NumeralGraph build_graph(const SkeletonImage& skel, std::span<const InterestPoint> points) {
    NumeralGraph g;
    g.nodes.assign(points.begin(), points.end());
    std::vector<int> owner(skel.size(), kNone);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!skel.fg(p.x, p.y))
            throw ConsistencyError("build_graph: point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                                   ") is not on the skeleton");
        auto& slot = owner[index_of(skel, p.pixel())];
        if (slot != kNone)
            throw ConsistencyError("build_graph: duplicate point (" + std::to_string(p.x) + "," +
                                   std::to_string(p.y) + ")");
        slot = static_cast<int>(i);
    }

    // A junction point absorbs the touching junction pixels of its cluster,
    // unless the cluster holds several points.
    std::vector<std::vector<Pixel>> owned(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) owned[i] = {points[i].pixel()};
    std::vector<std::uint8_t> seen(skel.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].kind != PointKind::Junction || seen[index_of(skel, points[i].pixel())]) continue;
        if (!is_junction_pixel(skel, points[i].pixel())) continue;
        auto cluster = junction_cluster(skel, points[i].pixel(), seen);
        const auto holders = std::count_if(cluster.begin(), cluster.end(),
                                           [&](const Pixel& c) { return owner[index_of(skel, c)] != kNone; });
        if (holders != 1) continue;
        for (const auto& c : cluster) owner[index_of(skel, c)] = static_cast<int>(i);
        owned[i] = std::move(cluster);
    }

    std::set<std::pair<std::size_t, std::size_t>> adjacent;
    std::vector<std::uint32_t> stamp(skel.size(), 0);
    std::uint32_t round = 0;
    std::vector<Pixel> frontier;
    for (std::size_t i = 0; i < points.size(); ++i) {
        ++round;
        frontier = owned[i];
        for (const auto& p : frontier) stamp[index_of(skel, p)] = round;
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            const Pixel cur = frontier[head];
            for (const Pixel q : m_neighbors(skel, cur)) {
                const auto qi = index_of(skel, q);
                if (stamp[qi] == round) continue;
                stamp[qi] = round;
                const int o = owner[qi];
                if (o == kNone) {
                    frontier.push_back(q);
                } else if (static_cast<std::size_t>(o) != i) {
                    const auto j = static_cast<std::size_t>(o);
                    adjacent.emplace(std::min(i, j), std::max(i, j));
                }
            }
        }
    }
    for (const auto& [u, v] : adjacent) g.edges.push_back({u, v, 0.0});
    return g;
}

NumeralGraph weight_edges(NumeralGraph g) {
    for (auto& e : g.edges) {
        const auto& a = g.nodes.at(e.u);
        const auto& b = g.nodes.at(e.v);
        if (a.x == b.x && a.y == b.y)
            throw DegeneracyError("weight_edges: edge endpoints coincide at (" + std::to_string(a.x) + "," +
                                  std::to_string(a.y) + ")");
        const double dx = a.x - b.x;
        const double dy = a.y - b.y;
        e.weight = std::sqrt(dx * dx + dy * dy);
    }
    return g;
}

NumeralGraph extract_graph(const SkeletonImage& skel, double rdp_epsilon) {
    const auto points = detect_interest_points(skel, rdp_epsilon);
    return weight_edges(build_graph(skel, points));
}

}  // namespace specgraph
