#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "specgraph/experiment.hpp"
#include "specgraph/graph.hpp"

namespace specgraph {

using Json = nlohmann::ordered_json;

/// Readers name the source in every ParseError; `name` is usually the path.
[[nodiscard]] Json parse_json(const std::string& text, const std::string& name);
[[nodiscard]] Json read_json(const std::filesystem::path& path);
/// Two-space indented, newline terminated, written atomically.
void write_json(const std::filesystem::path& path, const Json& j);

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] Json to_json(const NumeralGraph& g);
[[nodiscard]] NumeralGraph graph_from_json(const Json& j, const std::string& name);

[[nodiscard]] Json to_json(const KernelParams& p);
[[nodiscard]] Json to_json(const OvoModel& m);
[[nodiscard]] OvoModel ovo_model_from_json(const Json& j, const std::string& name);

[[nodiscard]] Json to_json(const FusionModel& m);
[[nodiscard]] FusionModel fusion_model_from_json(const Json& j, const std::string& name);

[[nodiscard]] Json to_json(const FeatureParams& p);

/// Writes bundle.json, model_FT1.json, model_FT2.json, model_FT3.json and
/// fusion.json into `dir`.
void write_bundle(const std::filesystem::path& dir, const ModelBundle& bundle);
[[nodiscard]] ModelBundle read_bundle(const std::filesystem::path& dir);

/// Everything that affects results. The thread count is left out since it
/// does not.
[[nodiscard]] Json to_json(const ExperimentConfig& c);
/// Overrides the fields present in `j`. Unknown keys raise ConfigError.
void apply_config(const Json& j, ExperimentConfig& c, const std::string& name);

[[nodiscard]] Json to_json(const ExperimentReport& r);

/// Rows: label,feature_type,v1..vn.
[[nodiscard]] std::string features_csv(const FeatureTable& t);
/// Per series and class: trial means of precision, recall and F-measure.
[[nodiscard]] std::string per_class_csv(const ExperimentReport& r);
/// Actual classes down, predicted across.
[[nodiscard]] std::string confusion_csv(const ConfusionMatrix& c, const std::vector<int>& classes);

/// report.json, per_class.csv and confusion_<series>.csv (summed over
/// trials) in `dir`.
void write_report(const std::filesystem::path& dir, const ExperimentReport& r);

}  // namespace specgraph
