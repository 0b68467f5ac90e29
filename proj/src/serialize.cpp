#include "specgraph/serialize.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "specgraph/error.hpp"
#include "specgraph/fileio.hpp"

namespace specgraph {

namespace fs = std::filesystem;

namespace {

// Runs a decoder, turning library and structural errors into ParseError
// naming the source.
template <typename Fn>
auto decode(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const Json::exception& e) {
        throw ParseError(name + ": " + e.what());
    } catch (const Error& e) {
        throw ParseError(name + ": " + e.what());
    }
}

[[noreturn]] void malformed(const std::string& what) { throw ContractError(what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) malformed(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) malformed(std::string("missing field '") + key + "'");
    return *it;
}

std::vector<double> doubles(const Json& j) { return j.get<std::vector<double>>(); }

Json matrix_json(const SquareMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.order(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.order(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

SquareMatrix matrix_from_json(const Json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) malformed("matrix is not square");
        for (std::size_t k = 0; k < rows.size(); ++k) m(i, k) = rows[i][k];
    }
    return m;
}

Json confusion_json(const ConfusionMatrix& c) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < c.classes(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < c.classes(); ++j) row.push_back(c(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

KernelParams params_from_json(const Json& j) {
    KernelParams p{field(j, "C").get<double>(), field(j, "gamma").get<double>()};
    validate(p);
    return p;
}

const char* model_file(FeatureType ft) {
    switch (ft) {
        case FeatureType::FT1: return "model_FT1.json";
        case FeatureType::FT2: return "model_FT2.json";
        case FeatureType::FT3: return "model_FT3.json";
    }
    return "";
}

}  // namespace

Json parse_json(const std::string& text, const std::string& name) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(name + ": " + e.what());
    }
}

Json read_json(const fs::path& path) { return parse_json(read_file(path), path.string()); }

void write_json(const fs::path& path, const Json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

Json to_json(const NumeralGraph& g) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& p = g.nodes[i];
        nodes.push_back({{"id", i}, {"x", p.x}, {"y", p.y}, {"kind", std::string(to_string(p.kind))}});
    }
    Json edges = Json::array();
    for (const auto& e : g.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.weight}});
    return {{"order", g.order()}, {"size", g.size()}, {"nodes", nodes}, {"edges", edges}};
}

NumeralGraph graph_from_json(const Json& j, const std::string& name) {
    return decode(name, [&] {
        NumeralGraph g;
        for (const auto& n : field(j, "nodes")) {
            if (field(n, "id").get<std::size_t>() != g.nodes.size()) malformed("node ids must be 0, 1, 2, ...");
            g.nodes.push_back({field(n, "x").get<int>(), field(n, "y").get<int>(),
                               point_kind_from_string(field(n, "kind").get<std::string>())});
        }
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& e : field(j, "edges")) {
            GraphEdge edge{field(e, "u").get<std::size_t>(), field(e, "v").get<std::size_t>(),
                           field(e, "w").get<double>()};
            if (edge.u >= edge.v || edge.v >= g.nodes.size()) malformed("edge endpoints must satisfy u < v < order");
            if (!seen.insert({edge.u, edge.v}).second) malformed("duplicate edge");
            g.edges.push_back(edge);
        }
        return g;
    });
}

Json to_json(const KernelParams& p) { return {{"C", p.C}, {"gamma", p.gamma}}; }

Json to_json(const OvoModel& m) {
    Json j;
    j["feature_type"] = std::string(to_string(m.feature_type));
    j["n"] = m.dimension;
    j["classes"] = m.classes;
    j["params"] = to_json(m.params);
    if (m.scaler) j["scaler"] = {{"mean", m.scaler->mean}, {"scale", m.scaler->scale}};
    else j["scaler"] = nullptr;
    Json binaries = Json::array();
    std::size_t p = 0;
    for (std::size_t a = 0; a < m.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < m.classes.size(); ++b, ++p) {
            const auto& bin = m.binaries.at(p);
            binaries.push_back({{"positive", m.classes[a]},
                                {"negative", m.classes[b]},
                                {"bias", bin.bias},
                                {"coefficients", bin.coefficients},
                                {"support_vectors", bin.support_vectors}});
        }
    }
    j["binaries"] = std::move(binaries);
    return j;
}

OvoModel ovo_model_from_json(const Json& j, const std::string& name) {
    return decode(name, [&] {
        OvoModel m;
        m.feature_type = feature_type_from_string(field(j, "feature_type").get<std::string>());
        m.dimension = field(j, "n").get<std::size_t>();
        m.classes = field(j, "classes").get<std::vector<int>>();
        for (std::size_t i = 1; i < m.classes.size(); ++i)
            if (m.classes[i - 1] >= m.classes[i]) malformed("classes must be strictly increasing");
        if (m.classes.size() < 2) malformed("a model needs at least two classes");
        m.params = params_from_json(field(j, "params"));
        const auto& scaler = field(j, "scaler");
        if (!scaler.is_null()) {
            m.scaler = FeatureScaler{doubles(field(scaler, "mean")), doubles(field(scaler, "scale"))};
            if (m.scaler->mean.size() != m.dimension || m.scaler->scale.size() != m.dimension)
                malformed("scaler length does not match n");
        }
        const auto& bins = field(j, "binaries");
        const std::size_t k = m.classes.size();
        if (!bins.is_array() || bins.size() != k * (k - 1) / 2) malformed("expected one binary model per class pair");
        std::size_t p = 0;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b, ++p) {
                const auto& bj = bins[p];
                if (field(bj, "positive").get<int>() != m.classes[a] || field(bj, "negative").get<int>() != m.classes[b])
                    malformed("binary models are not in class-pair order");
                BinarySvmModel bin;
                bin.params = m.params;
                bin.bias = field(bj, "bias").get<double>();
                bin.coefficients = doubles(field(bj, "coefficients"));
                bin.support_vectors = field(bj, "support_vectors").get<std::vector<FeatureVector>>();
                if (bin.coefficients.size() != bin.support_vectors.size())
                    malformed("coefficient and support vector counts differ");
                for (const auto& sv : bin.support_vectors)
                    if (sv.size() != m.dimension) malformed("support vector length does not match n");
                m.binaries.push_back(std::move(bin));
            }
        }
        return m;
    });
}

Json to_json(const FusionModel& m) {
    Json classifiers = Json::array();
    for (std::size_t l = 0; l < m.matrices.size(); ++l) {
        classifiers.push_back({{"tag", l < m.tags.size() ? m.tags[l] : std::to_string(l)},
                               {"matrix", matrix_json(m.matrices[l].values)}});
    }
    return {{"classes", m.classes}, {"classifiers", classifiers}};
}

FusionModel fusion_model_from_json(const Json& j, const std::string& name) {
    return decode(name, [&] {
        FusionModel m;
        m.classes = field(j, "classes").get<std::vector<int>>();
        for (const auto& c : field(j, "classifiers")) {
            m.tags.push_back(field(c, "tag").get<std::string>());
            m.matrices.push_back({matrix_from_json(field(c, "matrix"))});
        }
        m.validate();
        return m;
    });
}

Json to_json(const FeatureParams& p) {
    return {{"sigma1", p.preprocess.sigma1},
            {"sigma2", p.preprocess.sigma2},
            {"target", p.preprocess.target},
            {"rdp_epsilon", p.rdp_epsilon},
            {"n", p.n}};
}

namespace {

FeatureParams feature_params_from_json(const Json& j) {
    FeatureParams p;
    p.preprocess.sigma1 = field(j, "sigma1").get<double>();
    p.preprocess.sigma2 = field(j, "sigma2").get<double>();
    p.preprocess.target = field(j, "target").get<int>();
    p.rdp_epsilon = field(j, "rdp_epsilon").get<double>();
    p.n = field(j, "n").get<std::size_t>();
    p.validate();
    return p;
}

}  // namespace

void write_bundle(const fs::path& dir, const ModelBundle& bundle) {
    Json models, params;
    for (auto ft : kAllFeatureTypes) {
        const auto k = index(ft);
        const std::string tag(to_string(ft));
        write_json(dir / model_file(ft), to_json(bundle.models[k]));
        models[tag] = model_file(ft);
        Json pj = to_json(bundle.models[k].params);
        pj["validation_macro_f"] = bundle.validation_scores[k];
        params[tag] = std::move(pj);
    }
    write_json(dir / "fusion.json", to_json(bundle.fusion));
    write_json(dir / "bundle.json", Json{{"seed", bundle.seed},
                                         {"features", to_json(bundle.features)},
                                         {"params", params},
                                         {"models", models},
                                         {"fusion", "fusion.json"}});
}

ModelBundle read_bundle(const fs::path& dir) {
    const auto meta_path = (dir / "bundle.json").string();
    const auto meta = read_json(meta_path);
    ModelBundle b;
    decode(meta_path, [&] {
        b.seed = field(meta, "seed").get<std::uint64_t>();
        b.features = feature_params_from_json(field(meta, "features"));
        for (auto ft : kAllFeatureTypes) {
            const auto& pj = field(field(meta, "params"), std::string(to_string(ft)).c_str());
            b.validation_scores[index(ft)] = field(pj, "validation_macro_f").get<double>();
        }
        return 0;
    });
    for (auto ft : kAllFeatureTypes) {
        const auto path = (dir / model_file(ft)).string();
        auto m = ovo_model_from_json(read_json(path), path);
        if (m.feature_type != ft) throw ParseError(path + ": holds a " + std::string(to_string(m.feature_type)) + " model");
        if (m.dimension != b.features.n)
            throw ParseError(path + ": feature length " + std::to_string(m.dimension) + " differs from bundle n = " +
                             std::to_string(b.features.n));
        b.models[index(ft)] = std::move(m);
    }
    const auto fusion_path = (dir / "fusion.json").string();
    b.fusion = fusion_model_from_json(read_json(fusion_path), fusion_path);
    if (b.fusion.matrices.size() != 3) throw ParseError(fusion_path + ": expected three classifiers");
    for (const auto& m : b.models)
        if (m.classes != b.fusion.classes) throw ParseError(fusion_path + ": class list differs from the models");
    return b;
}

Json to_json(const ExperimentConfig& c) {
    Json params;
    for (auto ft : kAllFeatureTypes) params[std::string(to_string(ft))] = to_json(c.params[index(ft)]);
    return {{"features", to_json(c.features)},
            {"ratios", c.ratios},
            {"seed", c.seed},
            {"trials", c.trials},
            {"fixed_params", c.fixed_params},
            {"params", params},
            {"grid_base", c.grid_base},
            {"c_grid", c.resolved_c_grid()},
            {"gamma_grid", c.resolved_gamma_grid()},
            {"scale_features", c.scale_features},
            {"smo", {{"tol", c.smo.tol}, {"max_passes", c.smo.max_passes}}}};
}

void apply_config(const Json& j, ExperimentConfig& c, const std::string& name) {
    auto fail = [&](const std::string& what) { throw ConfigError(name + ": " + what); };
    if (!j.is_object()) fail("expected a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "features") {
                for (const auto& [fk, fv] : v.items()) {
                    if (fk == "sigma1") c.features.preprocess.sigma1 = fv.get<double>();
                    else if (fk == "sigma2") c.features.preprocess.sigma2 = fv.get<double>();
                    else if (fk == "target") c.features.preprocess.target = fv.get<int>();
                    else if (fk == "rdp_epsilon") c.features.rdp_epsilon = fv.get<double>();
                    else if (fk == "n") c.features.n = fv.get<std::size_t>();
                    else fail("unknown key features." + fk);
                }
            } else if (key == "ratios") {
                if (v.is_string()) c.ratios = parse_ratios(v.get<std::string>());
                else c.ratios = v.get<std::array<int, 3>>();
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else if (key == "trials") {
                c.trials = v.get<std::size_t>();
            } else if (key == "fixed_params") {
                c.fixed_params = v.get<bool>();
            } else if (key == "params") {
                for (const auto& [fk, fv] : v.items()) c.params[index(feature_type_from_string(fk))] = params_from_json(fv);
            } else if (key == "grid_base") {
                c.grid_base = v.get<int>();
            } else if (key == "c_grid") {
                c.c_grid = doubles(v);
            } else if (key == "gamma_grid") {
                c.gamma_grid = doubles(v);
            } else if (key == "scale_features") {
                c.scale_features = v.get<bool>();
            } else if (key == "threads") {
                c.threads = v.get<unsigned>();
            } else if (key == "smo") {
                for (const auto& [sk, sv] : v.items()) {
                    if (sk == "tol") c.smo.tol = sv.get<double>();
                    else if (sk == "max_passes") c.smo.max_passes = sv.get<std::size_t>();
                    else fail("unknown key smo." + sk);
                }
            } else {
                fail("unknown key " + key);
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Json::exception& e) {
        fail(e.what());
    } catch (const Error& e) {
        fail(e.what());
    }
}

Json to_json(const ExperimentReport& r) {
    Json summary = Json::array();
    for (std::size_t s = 0; s < kSeriesCount; ++s) {
        const auto& ms = r.macro_f[s];
        summary.push_back({{"series", series_name(s)},
                           {"macro_f_mean", ms.mean},
                           {"macro_f_std", ms.std},
                           {"macro_f_mean_percent", 100.0 * ms.mean},
                           {"macro_f_std_percent", 100.0 * ms.std}});
    }
    Json trials = Json::array();
    for (const auto& t : r.trials) {
        Json params;
        for (auto ft : kAllFeatureTypes) {
            Json pj = to_json(t.params[index(ft)]);
            pj["validation_macro_f"] = t.validation_scores[index(ft)];
            params[std::string(to_string(ft))] = std::move(pj);
        }
        Json series;
        for (std::size_t s = 0; s < kSeriesCount; ++s) {
            const auto& sr = t.series[s];
            Json per_class = Json::array();
            for (std::size_t c = 0; c < sr.scores.per_class.size(); ++c) {
                const auto& cs = sr.scores.per_class[c];
                per_class.push_back({{"class", r.classes.at(c)},
                                     {"precision", cs.precision},
                                     {"recall", cs.recall},
                                     {"f_measure", cs.f_measure}});
            }
            series[series_name(s)] = {{"macro_precision", sr.scores.macro_precision},
                                      {"macro_recall", sr.scores.macro_recall},
                                      {"macro_f", sr.scores.macro_f},
                                      {"per_class", per_class},
                                      {"confusion", confusion_json(sr.confusion)}};
        }
        trials.push_back({{"index", t.index}, {"seed", t.seed}, {"params", params}, {"series", series}});
    }
    return {{"protocol",
             {{"trials", r.config.trials},
              {"ratios", r.config.ratios},
              {"base_seed", r.config.seed},
              {"trial_seed", "base_seed + trial index"},
              {"split", "stratified per class"},
              {"calibration", "validation split"},
              {"metric", "macro F-measure"}}},
            {"config", to_json(r.config)},
            {"classes", r.classes},
            {"samples", r.samples},
            {"summary", summary},
            {"trials", trials}};
}

std::string features_csv(const FeatureTable& t) {
    std::ostringstream out;
    out << "label,feature_type";
    for (std::size_t i = 1; i <= t.n; ++i) out << ",v" << i;
    out << '\n';
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (auto ft : kAllFeatureTypes) {
            out << t.labels[r] << ',' << to_string(ft);
            for (double v : t.features[index(ft)][r]) out << ',' << format_double(v);
            out << '\n';
        }
    }
    return out.str();
}

std::string per_class_csv(const ExperimentReport& r) {
    std::ostringstream out;
    out << "series,class,precision,recall,f_measure,f_measure_std\n";
    for (std::size_t s = 0; s < kSeriesCount; ++s) {
        for (std::size_t c = 0; c < r.classes.size(); ++c) {
            double p = 0.0, rc = 0.0;
            std::vector<double> f;
            for (const auto& t : r.trials) {
                const auto& cs = t.series[s].scores.per_class.at(c);
                p += cs.precision;
                rc += cs.recall;
                f.push_back(cs.f_measure);
            }
            const double n = static_cast<double>(std::max<std::size_t>(1, r.trials.size()));
            const auto ms = mean_std(f);
            out << series_name(s) << ',' << r.classes[c] << ',' << format_double(p / n) << ','
                << format_double(rc / n) << ',' << format_double(ms.mean) << ',' << format_double(ms.std) << '\n';
        }
    }
    return out.str();
}

std::string confusion_csv(const ConfusionMatrix& c, const std::vector<int>& classes) {
    if (classes.size() != c.classes()) throw ContractError("confusion_csv: class list does not match the matrix");
    std::ostringstream out;
    out << "actual\\predicted";
    for (int label : classes) out << ',' << label;
    out << '\n';
    for (std::size_t i = 0; i < c.classes(); ++i) {
        out << classes[i];
        for (std::size_t j = 0; j < c.classes(); ++j) out << ',' << c(i, j);
        out << '\n';
    }
    return out.str();
}

void write_report(const fs::path& dir, const ExperimentReport& r) {
    write_json(dir / "report.json", to_json(r));
    write_file_atomic(dir / "per_class.csv", per_class_csv(r));
    for (std::size_t s = 0; s < kSeriesCount; ++s) {
        ConfusionMatrix total(r.classes.size());
        for (const auto& t : r.trials)
            for (std::size_t i = 0; i < total.classes(); ++i)
                for (std::size_t j = 0; j < total.classes(); ++j) total.add(i, j, t.series[s].confusion(i, j));
        write_file_atomic(dir / ("confusion_" + series_name(s) + ".csv"), confusion_csv(total, r.classes));
    }
}

}  // namespace specgraph
