#include "specgraph/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specgraph/error.hpp"

namespace specgraph {

MatrixKind matrix_kind(FeatureType ft) noexcept {
    switch (ft) {
        case FeatureType::FT1: return MatrixKind::WA;
        case FeatureType::FT2: return MatrixKind::WL;
        case FeatureType::FT3: return MatrixKind::DIST;
    }
    return MatrixKind::WA;
}

std::string_view to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::WA: return "WA";
        case MatrixKind::WL: return "WL";
        case MatrixKind::DIST: return "DIST";
    }
    return "WA";
}

std::string_view to_string(FeatureType ft) {
    switch (ft) {
        case FeatureType::FT1: return "FT1";
        case FeatureType::FT2: return "FT2";
        case FeatureType::FT3: return "FT3";
    }
    return "FT1";
}

FeatureType feature_type_from_string(std::string_view s) {
    if (s == "FT1") return FeatureType::FT1;
    if (s == "FT2") return FeatureType::FT2;
    if (s == "FT3") return FeatureType::FT3;
    throw ParameterError("unknown feature type '" + std::string(s) + "'");
}

GraphMatrix adjacency_matrix(const NumeralGraph& g) {
    GraphMatrix m{MatrixKind::WA, SquareMatrix(g.order())};
    for (const auto& e : g.edges) {
        m.entries(e.u, e.v) = e.weight;
        m.entries(e.v, e.u) = e.weight;
    }
    return m;
}

GraphMatrix laplacian_matrix(const NumeralGraph& g) {
    GraphMatrix m{MatrixKind::WL, SquareMatrix(g.order())};
    const auto deg = g.degrees();
    for (std::size_t i = 0; i < g.order(); ++i) m.entries(i, i) = static_cast<double>(deg[i]);
    for (const auto& e : g.edges) {
        m.entries(e.u, e.v) = -e.weight;
        m.entries(e.v, e.u) = -e.weight;
    }
    return m;
}

GraphMatrix distance_matrix(const NumeralGraph& g) {
    GraphMatrix m{MatrixKind::DIST, SquareMatrix(g.order())};
    for (std::size_t i = 0; i < g.order(); ++i) {
        for (std::size_t j = i + 1; j < g.order(); ++j) {
            const double dx = g.nodes[i].x - g.nodes[j].x;
            const double dy = g.nodes[i].y - g.nodes[j].y;
            if (dx == 0.0 && dy == 0.0)
                throw DegeneracyError("distance_matrix: nodes " + std::to_string(i) + " and " + std::to_string(j) +
                                      " share coordinates");
            m.entries(i, j) = m.entries(j, i) = std::sqrt(dx * dx + dy * dy);
        }
    }
    return m;
}

GraphMatrix graph_matrix(const NumeralGraph& g, MatrixKind kind) {
    switch (kind) {
        case MatrixKind::WA: return adjacency_matrix(g);
        case MatrixKind::WL: return laplacian_matrix(g);
        case MatrixKind::DIST: return distance_matrix(g);
    }
    return adjacency_matrix(g);
}

EigenDecomposition eigen_decompose(const SquareMatrix& m) {
    const std::size_t n = m.order();
    for (double v : m.data())
        if (!std::isfinite(v)) throw ContractError("eig_sym: non-finite matrix entry");
    const double scale = m.max_abs();
    if (!m.is_symmetric(1e-12 * std::max(1.0, scale))) throw ContractError("eig_sym: matrix is not symmetric");

    SquareMatrix a = m;
    SquareMatrix v = SquareMatrix::identity(n);
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    const double target = 1e-12 * scale;
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = a(p, k) = c * akp - s * akq;
                    a(k, q) = a(q, k) = s * akp + c * akq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
    EigenDecomposition out{std::vector<double>(n), SquareMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

Spectrum eig_sym(const SquareMatrix& m) { return Spectrum{eigen_decompose(m).values}; }

SpectralFeature spectral_feature(const Spectrum& s, std::size_t n, FeatureType type) {
    if (n == 0) throw ParameterError("spectral_feature: n must be at least 1");
    SpectralFeature f{type, std::vector<double>(n, 0.0)};
    // Spectrum is already descending; sort a copy anyway so hand-built inputs behave.
    std::vector<double> sorted = s.eigenvalues;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::copy_n(sorted.begin(), std::min(n, sorted.size()), f.values.begin());
    return f;
}

SpectralFeature graph_feature(const NumeralGraph& g, FeatureType type, std::size_t n) {
    return spectral_feature(eig_sym(graph_matrix(g, matrix_kind(type))), n, type);
}

}  // namespace specgraph
