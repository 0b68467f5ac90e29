#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace specgraph {

struct ManifestEntry {
    std::string path;
    int label = 0;
    bool operator==(const ManifestEntry&) const = default;
};

/// Labelled image list. `classes` is sorted and covers every label.
struct DatasetManifest {
    std::vector<ManifestEntry> samples;
    std::vector<int> classes;

    /// Rebuilds `classes` from the samples.
    void refresh_classes();
    /// Throws DataError on duplicate paths or labels outside `classes`.
    void validate() const;
    [[nodiscard]] std::vector<int> labels() const;
};

/// CSV with header `path,label`. Relative paths are resolved against the
/// manifest's directory.
[[nodiscard]] DatasetManifest read_manifest(const std::filesystem::path& csv);
[[nodiscard]] DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                                             const std::string& name = "<manifest>");
[[nodiscard]] std::string format_manifest(const DatasetManifest& m);

struct SplitSpec {
    std::array<int, 3> ratios{60, 20, 20};  // train:val:test percent
    std::uint64_t seed = 0;

    void validate() const;
};

/// Parses "a:b:c".
[[nodiscard]] std::array<int, 3> parse_ratios(const std::string& text);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Stratified per class: each class is shuffled, then floor(n * train%) go to
/// train, floor(n * val%) to validation and the remainder to test. Every
/// class needs at least three samples.
[[nodiscard]] SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec);

struct DatasetSplit {
    DatasetManifest train;
    DatasetManifest val;
    DatasetManifest test;
};

[[nodiscard]] DatasetSplit split(const DatasetManifest& m, const SplitSpec& spec);

/// Deterministic helpers over mt19937_64 whose output does not depend on the
/// standard library's distribution implementations.
using Rng = std::mt19937_64;
[[nodiscard]] double uniform01(Rng& rng);
[[nodiscard]] double uniform(Rng& rng, double lo, double hi);
[[nodiscard]] std::size_t uniform_index(Rng& rng, std::size_t n);
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace specgraph
