#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "specgraph/error.hpp"
#include "specgraph/experiment.hpp"
#include "specgraph/fileio.hpp"
#include "specgraph/image_io.hpp"
#include "specgraph/serialize.hpp"
#include "specgraph/synth.hpp"

namespace specgraph::cli {

namespace fs = std::filesystem;

namespace {

// Flags shared by the commands that take a pipeline configuration. Each one
// only overrides the config file when given.
struct ConfigFlags {
    std::string config;
    std::uint64_t seed = 0;
    std::size_t n = 3;
    std::string ratios;
    std::size_t trials = 50;
    bool fixed_params = false;
    int grid_base = 10;
    bool scale_features = false;
    unsigned threads = 1;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* ratios_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* grid_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    void add_features(CLI::App* app) {
        app->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
        n_opt = app->add_option("--n", n, "Feature length (number of leading eigenvalues)");
        threads_opt = app->add_option("--threads", threads, "Worker threads, 0 for all cores");
    }

    void add_training(CLI::App* app, bool with_trials) {
        add_features(app);
        seed_opt = app->add_option("--seed", seed, "Base random seed");
        ratios_opt = app->add_option("--ratios", ratios, "Train:validation:test percentages, e.g. 60:20:20");
        if (with_trials) trials_opt = app->add_option("--trials", trials, "Number of random trials");
        app->add_flag("--fixed-params", fixed_params, "Use the configured (C, gamma) instead of a grid search");
        grid_opt = app->add_option("--grid-base", grid_base, "Default grid spacing")->check(CLI::IsMember({2, 10}));
        app->add_flag("--scale-features", scale_features, "Z-score features using training statistics");
    }

    [[nodiscard]] ExperimentConfig resolve() const {
        ExperimentConfig c;
        if (!config.empty()) apply_config(read_json(config), c, config);
        if (seed_opt && seed_opt->count()) c.seed = seed;
        if (n_opt && n_opt->count()) c.features.n = n;
        if (ratios_opt && ratios_opt->count()) c.ratios = parse_ratios(ratios);
        if (trials_opt && trials_opt->count()) c.trials = trials;
        if (fixed_params) c.fixed_params = true;
        if (grid_opt && grid_opt->count()) c.grid_base = grid_base;
        if (scale_features) c.scale_features = true;
        if (threads_opt && threads_opt->count()) c.threads = threads;
        c.validate();
        return c;
    }
};

bool is_image(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return ext == ".png" || ext == ".pgm";
}

std::vector<fs::path> collect_images(const fs::path& input) {
    if (!fs::is_directory(input)) return {input};
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(input))
        if (e.is_regular_file() && is_image(e.path())) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::array<FeatureVector, 3> features_of(const GlyphFeatures& g) { return {g.features[0], g.features[1], g.features[2]}; }

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

int cmd_synth(const fs::path& out_dir, int classes, int per_class, std::uint64_t seed, std::ostream& out) {
    const auto m = write_synth_dataset(out_dir, classes, per_class, seed);
    Json names = Json::array();
    for (int c = 0; c < classes; ++c) names.push_back({{"label", c}, {"name", std::string(synth_class_name(c))}});
    write_json(out_dir / "synth.json",
               Json{{"classes", classes}, {"per_class", per_class}, {"seed", seed}, {"templates", names}});
    out << "wrote " << m.samples.size() << " images and " << (out_dir / "manifest.csv").string() << "\n";
    return kOk;
}

int cmd_graph(const fs::path& input, const fs::path& out_dir, const ExperimentConfig& cfg, bool debug,
              std::ostream& out, std::ostream& err) {
    if (!fs::exists(input)) {
        err << "error: " << input.string() << " does not exist\n";
        return kFailed;
    }
    const auto files = collect_images(input);
    if (files.empty()) {
        err << "error: no PNG or PGM images in " << input.string() << "\n";
        return kFailed;
    }
    std::size_t failures = 0;
    for (const auto& f : files) {
        try {
            const auto stages = preprocess(read_image(f), cfg.features.preprocess);
            const auto g = extract_graph(stages.skeleton, cfg.features.rdp_epsilon);
            const auto stem = f.stem().string();
            Json j{{"image", f.filename().string()}};
            j.update(to_json(g));
            write_json(out_dir / (stem + ".graph.json"), j);
            if (debug) {
                write_pgm(out_dir / (stem + ".1_filtered.pgm"), stages.filtered);
                write_pgm(out_dir / (stem + ".2_normalized.pgm"), stages.normalized);
                write_pgm(out_dir / (stem + ".3_binary.pgm"), stages.binary);
                write_pgm(out_dir / (stem + ".4_skeleton.pgm"), stages.skeleton);
            }
            out << f.filename().string() << ": " << g.order() << " nodes, " << g.size() << " edges\n";
        } catch (const Error& e) {
            ++failures;
            err << "error: " << f.string() << ": " << e.what() << "\n";
        }
    }
    if (failures == 0) return kOk;
    return failures == files.size() ? kFailed : kPartial;
}

int cmd_features(const fs::path& manifest, const fs::path& out_file, const ExperimentConfig& cfg, std::ostream& out) {
    const auto m = read_manifest(manifest);
    const auto table = compute_features(m, cfg.features, cfg.threads);
    write_file_atomic(out_file, features_csv(table));
    out << "wrote " << table.size() * 3 << " feature rows to " << out_file.string() << "\n";
    return kOk;
}

int cmd_train(const fs::path& manifest, const fs::path& out_dir, const ExperimentConfig& cfg, std::ostream& out) {
    const auto m = read_manifest(manifest);
    const auto table = compute_features(m, cfg.features, cfg.threads);
    const auto idx = split_indices(table.labels, {cfg.ratios, cfg.seed});
    const auto bundle = train_bundle(table, idx, cfg, cfg.threads);
    write_bundle(out_dir, bundle);
    for (auto ft : kAllFeatureTypes) {
        const auto& model = bundle.models[index(ft)];
        out << to_string(ft) << ": C=" << format_double(model.params.C) << " gamma=" << format_double(model.params.gamma)
            << " validation macro F=" << fixed(bundle.validation_scores[index(ft)], 4) << " (" << model.binaries.size()
            << " pair models)\n";
    }
    out << "bundle written to " << out_dir.string() << "\n";
    return kOk;
}

int cmd_predict(const fs::path& bundle_dir, const fs::path& image, std::ostream& out) {
    const auto bundle = read_bundle(bundle_dir);
    const auto g = extract_features(read_image(image), bundle.features);
    const auto p = predict_bundle(bundle, features_of(g));
    out << "graph: " << g.graph.order() << " nodes, " << g.graph.size() << " edges\n";
    for (auto ft : kAllFeatureTypes) {
        const auto& ind = p.individual[index(ft)];
        out << to_string(ft) << ": class " << ind.label << " (" << ind.votes[ind.class_index] << " votes)\n";
    }
    out << "belief:";
    for (std::size_t c = 0; c < p.fused.belief.size(); ++c)
        out << ' ' << bundle.fusion.classes[c] << '=' << fixed(p.fused.belief[c], 4);
    out << "\nfused: class " << p.label << (p.fused.fallback ? " (majority vote fallback)" : "") << "\n";
    return kOk;
}

int cmd_evaluate(const fs::path& manifest, const fs::path& out_dir, const ExperimentConfig& cfg, std::ostream& out) {
    const auto m = read_manifest(manifest);
    const auto report = run_trials(m, cfg);
    write_report(out_dir, report);
    out << "trials: " << cfg.trials << "  ratios: " << cfg.ratios[0] << ':' << cfg.ratios[1] << ':' << cfg.ratios[2]
        << "  seed: " << cfg.seed << "  n: " << cfg.features.n << "\n";
    out << std::left << std::setw(8) << "series" << "macro F (%)\n";
    for (std::size_t s = 0; s < kSeriesCount; ++s) {
        out << std::setw(8) << series_name(s) << fixed(100.0 * report.macro_f[s].mean, 2) << " +- "
            << fixed(100.0 * report.macro_f[s].std, 2) << "\n";
    }
    out << "report written to " << out_dir.string() << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral graph features for handwritten numeral recognition"};
    app.require_subcommand(1);

    std::string out_path = ".";
    std::string input, bundle_dir;
    bool debug = false;
    int classes = kSynthClassCount, per_class = 100;
    std::uint64_t synth_seed = 0;

    auto* synth = app.add_subcommand("synth", "Render a synthetic numeral dataset");
    synth->add_option("--out", out_path, "Output directory")->required();
    synth->add_option("--classes", classes, "Number of glyph classes (2-10)");
    synth->add_option("--per-class", per_class, "Samples per class (>= 10)");
    synth->add_option("--seed", synth_seed, "Random seed");

    ConfigFlags graph_flags;
    auto* graph = app.add_subcommand("graph", "Extract the numeral graph of an image or a directory of images");
    graph->add_option("input", input, "Image file or directory")->required();
    graph->add_option("--out", out_path, "Output directory");
    graph->add_flag("--debug", debug, "Also write every preprocessing stage as PGM");
    graph_flags.add_features(graph);

    ConfigFlags feature_flags;
    auto* features = app.add_subcommand("features", "Write spectral features of a manifest as CSV");
    features->add_option("manifest", input, "CSV manifest with header path,label")->required();
    features->add_option("--out", out_path, "Output CSV file")->required();
    feature_flags.add_features(features);

    ConfigFlags train_flags;
    auto* train = app.add_subcommand("train", "Train the three classifiers and the fusion model");
    train->add_option("manifest", input, "CSV manifest with header path,label")->required();
    train->add_option("--out", out_path, "Bundle directory")->required();
    train_flags.add_training(train, false);

    auto* predict = app.add_subcommand("predict", "Classify one image with a trained bundle");
    predict->add_option("bundle", bundle_dir, "Bundle directory")->required();
    predict->add_option("image", input, "Image file")->required();

    ConfigFlags eval_flags;
    auto* evaluate = app.add_subcommand("evaluate", "Run repeated random trials and report macro F-measures");
    evaluate->add_option("manifest", input, "CSV manifest with header path,label")->required();
    evaluate->add_option("--out", out_path, "Report directory")->required();
    eval_flags.add_training(evaluate, true);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (synth->parsed()) return cmd_synth(out_path, classes, per_class, synth_seed, out);
        if (graph->parsed()) return cmd_graph(input, out_path, graph_flags.resolve(), debug, out, err);
        if (features->parsed()) return cmd_features(input, out_path, feature_flags.resolve(), out);
        if (train->parsed()) return cmd_train(input, out_path, train_flags.resolve(), out);
        if (predict->parsed()) return cmd_predict(bundle_dir, input, out);
        if (evaluate->parsed()) return cmd_evaluate(input, out_path, eval_flags.resolve(), out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}

}  // namespace specgraph::cli
