#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "specgraph/graph.hpp"
#include "specgraph/matrix.hpp"

namespace specgraph {

enum class MatrixKind { WA, WL, DIST };

/// FT1, FT2 and FT3 are the spectra of WA, WL and DIST respectively.
enum class FeatureType { FT1, FT2, FT3 };

inline constexpr FeatureType kAllFeatureTypes[] = {FeatureType::FT1, FeatureType::FT2, FeatureType::FT3};

[[nodiscard]] MatrixKind matrix_kind(FeatureType ft) noexcept;
[[nodiscard]] std::string_view to_string(MatrixKind kind);
[[nodiscard]] std::string_view to_string(FeatureType ft);
[[nodiscard]] FeatureType feature_type_from_string(std::string_view s);

struct GraphMatrix {
    MatrixKind kind = MatrixKind::WA;
    SquareMatrix entries;
};

/// Eigenvalues with multiplicity, sorted descending.
struct Spectrum {
    std::vector<double> eigenvalues;
};

/// values sorted descending; column k of `vectors` belongs to values[k].
struct EigenDecomposition {
    std::vector<double> values;
    SquareMatrix vectors;
};

/// Top-n eigenvalues, zero padded when the graph has fewer than n nodes.
struct SpectralFeature {
    FeatureType type = FeatureType::FT1;
    std::vector<double> values;
};

/// Weighted adjacency: w(i,j) on edges, zero elsewhere.
[[nodiscard]] GraphMatrix adjacency_matrix(const NumeralGraph& g);
/// D - WA where D holds unweighted vertex degrees (neighbor counts).
[[nodiscard]] GraphMatrix laplacian_matrix(const NumeralGraph& g);
/// All-pairs Euclidean distance between node coordinates, edges ignored.
/// Throws DegeneracyError when two nodes share coordinates.
[[nodiscard]] GraphMatrix distance_matrix(const NumeralGraph& g);
[[nodiscard]] GraphMatrix graph_matrix(const NumeralGraph& g, MatrixKind kind);

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// 1e-12 * maxabs. Throws ContractError on asymmetric or non-finite input.
[[nodiscard]] EigenDecomposition eigen_decompose(const SquareMatrix& m);
[[nodiscard]] Spectrum eig_sym(const SquareMatrix& m);
[[nodiscard]] inline Spectrum eig_sym(const GraphMatrix& m) { return eig_sym(m.entries); }

[[nodiscard]] SpectralFeature spectral_feature(const Spectrum& s, std::size_t n, FeatureType type = FeatureType::FT1);

/// Graph -> matrix of the feature type -> spectrum -> top-n feature.
[[nodiscard]] SpectralFeature graph_feature(const NumeralGraph& g, FeatureType type, std::size_t n);

}  // namespace specgraph
