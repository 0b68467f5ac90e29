#include "specgraph/experiment.hpp"

#include <cmath>
#include <string>

#include "specgraph/error.hpp"
#include "specgraph/image_io.hpp"
#include "specgraph/parallel.hpp"

namespace specgraph {

namespace {

void check_grid(const std::vector<double>& grid, const char* name) {
    for (double v : grid)
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("config: ") + name + " entries must be positive");
}

std::vector<std::size_t> class_indices(const OvoModel& model, const FeatureTable& table,
                                       const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> out;
    out.reserve(rows.size());
    for (auto r : rows) {
        const auto c = model.class_index(table.labels[r]);
        if (!c) throw DataError("class " + std::to_string(table.labels[r]) + " has no training samples");
        out.push_back(*c);
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    try {
        features.validate();
        SplitSpec{ratios, seed}.validate();
        for (const auto& p : params) specgraph::validate(p);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (trials == 0) throw ConfigError("config: trials must be at least 1");
    if (grid_base != 2 && grid_base != 10) throw ConfigError("config: grid base must be 2 or 10");
    check_grid(c_grid, "C grid");
    check_grid(gamma_grid, "gamma grid");
    if (!(smo.tol > 0.0)) throw ConfigError("config: SMO tolerance must be positive");
    if (smo.max_passes == 0) throw ConfigError("config: SMO pass limit must be positive");
}

std::vector<double> ExperimentConfig::resolved_c_grid() const {
    return c_grid.empty() ? default_grid(grid_base) : c_grid;
}

std::vector<double> ExperimentConfig::resolved_gamma_grid() const {
    return gamma_grid.empty() ? default_grid(grid_base) : gamma_grid;
}

LabeledSet FeatureTable::subset(FeatureType ft, const std::vector<std::size_t>& rows) const {
    LabeledSet s;
    s.x.reserve(rows.size());
    s.y.reserve(rows.size());
    for (auto r : rows) {
        s.x.push_back(features[index(ft)][r]);
        s.y.push_back(labels[r]);
    }
    return s;
}

FeatureTable compute_features(const DatasetManifest& m, const FeatureParams& params, unsigned threads) {
    params.validate();
    m.validate();
    FeatureTable t;
    t.n = params.n;
    t.classes = m.classes;
    t.labels = m.labels();
    for (const auto& s : m.samples) t.paths.push_back(s.path);
    for (auto& f : t.features) f.resize(m.samples.size());

    parallel_for(m.samples.size(), threads, [&](std::size_t i) {
        const auto& path = m.samples[i].path;
        try {
            const auto g = extract_features(read_image(path), params);
            for (std::size_t k = 0; k < 3; ++k) t.features[k][i] = g.features[k];
        } catch (const Error& e) {
            throw DataError(path + ": " + e.what());
        }
    });
    return t;
}

ModelBundle train_bundle(const FeatureTable& table, const SplitIndices& split, const ExperimentConfig& config,
                         unsigned threads) {
    if (split.train.empty()) throw DataError("training split is empty");
    ModelBundle b;
    b.features = config.features;
    b.features.n = table.n;
    b.seed = config.seed;

    OvoOptions ovo;
    ovo.smo = config.smo;
    ovo.scale_features = config.scale_features;
    const auto c_grid = config.resolved_c_grid();
    const auto gamma_grid = config.resolved_gamma_grid();

    for (auto ft : kAllFeatureTypes) {
        const std::size_t k = index(ft);
        ovo.feature_type = ft;
        const auto train = table.subset(ft, split.train);
        KernelParams params = config.params[k];
        if (!config.fixed_params) {
            if (split.val.empty()) throw DataError("validation split is empty; grid search needs it");
            const auto gs = grid_search(train, table.subset(ft, split.val), c_grid, gamma_grid, {ovo, threads});
            params = gs.params;
        }
        b.models[k] = train_ovo(train.x, train.y, params, ovo);

        const auto actual = class_indices(b.models[k], table, split.val);
        std::vector<std::size_t> predicted;
        predicted.reserve(split.val.size());
        for (auto r : split.val) predicted.push_back(predict(b.models[k], table.features[k][r]).class_index);
        const auto confusion = confusion_matrix(actual, predicted, b.models[k].classes.size());
        b.validation_scores[k] = precision_recall_f(confusion).macro_f;
        b.fusion.matrices.push_back(prob_matrix(confusion));
        b.fusion.tags.emplace_back(to_string(ft));
    }
    b.fusion.classes = b.models[0].classes;
    b.fusion.validate();
    return b;
}

BundlePrediction predict_bundle(const ModelBundle& bundle, const std::array<FeatureVector, 3>& features) {
    BundlePrediction out;
    std::array<std::size_t, 3> picks{};
    for (std::size_t k = 0; k < 3; ++k) {
        if (features[k].size() != bundle.models[k].dimension)
            throw ContractError("feature length " + std::to_string(features[k].size()) +
                                " does not match the bundle's n = " + std::to_string(bundle.models[k].dimension));
        out.individual[k] = predict(bundle.models[k], features[k]);
        picks[k] = out.individual[k].class_index;
    }
    out.fused = fuse(bundle.fusion, picks);
    out.label = bundle.fusion.classes[out.fused.class_index];
    return out;
}

std::string series_name(std::size_t series) {
    static const char* names[kSeriesCount] = {"FT1", "FT2", "FT3", "fused"};
    if (series >= kSeriesCount) throw ContractError("series index out of range");
    return names[series];
}

ExperimentReport run_trials(const FeatureTable& table, const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    report.config = config;
    report.config.features.n = table.n;
    report.classes = table.classes;
    report.samples = table.size();
    report.trials.resize(config.trials);

    parallel_for(config.trials, config.threads, [&](std::size_t t) {
        TrialReport& tr = report.trials[t];
        tr.index = t;
        tr.seed = config.seed + t;
        const auto idx = split_indices(table.labels, {config.ratios, tr.seed});
        const auto bundle = train_bundle(table, idx, config, 1);

        const std::size_t classes = bundle.fusion.classes.size();
        std::array<std::vector<std::size_t>, kSeriesCount> predicted;
        for (auto r : idx.test) {
            const auto p = predict_bundle(bundle, {table.features[0][r], table.features[1][r], table.features[2][r]});
            for (std::size_t k = 0; k < 3; ++k) predicted[k].push_back(p.individual[k].class_index);
            predicted[3].push_back(p.fused.class_index);
        }
        const auto actual = class_indices(bundle.models[0], table, idx.test);
        for (std::size_t s = 0; s < kSeriesCount; ++s) {
            tr.series[s].confusion = confusion_matrix(actual, predicted[s], classes);
            tr.series[s].scores = precision_recall_f(tr.series[s].confusion);
        }
        for (std::size_t k = 0; k < 3; ++k) tr.params[k] = bundle.models[k].params;
        tr.validation_scores = bundle.validation_scores;
    });

    for (std::size_t s = 0; s < kSeriesCount; ++s) {
        std::vector<double> f;
        for (const auto& tr : report.trials) f.push_back(tr.series[s].scores.macro_f);
        report.macro_f[s] = mean_std(f);
    }
    return report;
}

ExperimentReport run_trials(const DatasetManifest& m, const ExperimentConfig& config) {
    config.validate();
    return run_trials(compute_features(m, config.features, config.threads), config);
}

}  // namespace specgraph
