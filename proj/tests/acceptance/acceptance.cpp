// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "specgraph/experiment.hpp"
#include "specgraph/fileio.hpp"
#include "specgraph/imageproc.hpp"
#include "specgraph/spectra.hpp"
#include "specgraph/svm.hpp"
#include "specgraph/synth.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace specgraph;

namespace {

// Keeps the first failure and a one-line summary of what was measured.
struct Outcome {
    bool ok = true;
    std::string failure;
    std::string summary;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            failure = what;
        }
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1e", v);
    return buf;
}

double residual(const SquareMatrix& m, const EigenDecomposition& d) {
    double worst = 0.0;
    const auto n = m.order();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            double mv = 0.0;
            for (std::size_t j = 0; j < n; ++j) mv += m(i, j) * d.vectors(j, k);
            worst = std::max(worst, std::abs(mv - d.values[k] * d.vectors(i, k)));
        }
    return worst;
}

NumeralGraph disjoint_union(const NumeralGraph& a, const NumeralGraph& b) {
    NumeralGraph g = a;
    for (auto p : b.nodes) {
        p.x += 1000;
        g.nodes.push_back(p);
    }
    for (auto e : b.edges) {
        e.u += a.order();
        e.v += a.order();
        g.edges.push_back(e);
    }
    return g;
}

NumeralGraph relabeled(const NumeralGraph& g, const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) inverse[perm[k]] = k;
    NumeralGraph h;
    for (auto k : perm) h.nodes.push_back(g.nodes[k]);
    for (const auto& e : g.edges) {
        auto u = inverse[e.u], v = inverse[e.v];
        if (u > v) std::swap(u, v);
        h.edges.push_back({u, v, e.weight});
    }
    return h;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Outcome worked_example() {
    Outcome o;
    const double expected[] = {12.6880, 1.9669, 0.2570, -6.0595, -8.8523};
    const auto got = eig_sym(adjacency_matrix(oracle::worked_example_graph())).eigenvalues;
    o.expect(got.size() == 5, "expected 5 eigenvalues");
    double worst = 0.0;
    for (std::size_t i = 0; i < 5 && i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - expected[i]));
    o.expect(worst <= 1e-3, "eigenvalue deviation " + sci(worst));
    std::ostringstream s;
    s << "lambda =";
    for (double l : got) s << ' ' << fmt(l);
    s << ", max deviation " << sci(worst);
    o.summary = s.str();
    return o;
}

Outcome spectral_invariants() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> order(1, 12);
    std::uniform_real_distribution<double> density(0.1, 0.8);
    double worst_perm = 0.0, worst_union = 0.0, worst_res = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = oracle::random_graph(rng, order(rng), density(rng));
        const auto n = g.order();
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto h = relabeled(g, perm);
        for (auto kind : {MatrixKind::WA, MatrixKind::WL, MatrixKind::DIST}) {
            const auto m = graph_matrix(g, kind).entries;
            const auto d = eigen_decompose(m);
            const double scale = std::max(1.0, m.max_abs());
            const double res = residual(m, d) / (static_cast<double>(n) * scale);
            worst_res = std::max(worst_res, res);
            o.expect(res <= 1e-8, "eigen residual " + sci(res));
            o.expect(std::abs(sum(d.values) - m.trace()) <= 1e-8 * static_cast<double>(n) * scale, "trace identity");
            const auto other = eig_sym(graph_matrix(h, kind)).eigenvalues;
            for (std::size_t i = 0; i < n; ++i) {
                const double dev = std::abs(other[i] - d.values[i]) / scale;
                worst_perm = std::max(worst_perm, dev);
                o.expect(dev <= 1e-9, "permutation invariance " + sci(dev));
            }
        }
        const auto wa = eig_sym(adjacency_matrix(g)).eigenvalues;
        double sq = 0.0, w2 = 0.0;
        for (double l : wa) sq += l * l;
        for (const auto& e : g.edges) w2 += e.weight * e.weight;
        o.expect(std::abs(sq - 2.0 * w2) <= 1e-9 * std::max(1.0, sq), "sum of squared eigenvalues");
        double deg = 0.0;
        for (auto k : g.degrees()) deg += static_cast<double>(k);
        o.expect(std::abs(sum(eig_sym(laplacian_matrix(g)).eigenvalues) - deg) <= 1e-9 * std::max(1.0, deg),
                 "Laplacian trace");

        const auto b = oracle::random_graph(rng, 1 + trial % 6, 0.5);
        const auto u = disjoint_union(g, b);
        for (auto kind : {MatrixKind::WA, MatrixKind::WL}) {
            auto merged = eig_sym(graph_matrix(g, kind)).eigenvalues;
            const auto sb = eig_sym(graph_matrix(b, kind)).eigenvalues;
            merged.insert(merged.end(), sb.begin(), sb.end());
            std::sort(merged.begin(), merged.end(), std::greater<>());
            const auto whole = eig_sym(graph_matrix(u, kind)).eigenvalues;
            const double scale = std::max(1.0, graph_matrix(u, kind).entries.max_abs());
            for (std::size_t i = 0; i < whole.size(); ++i) {
                const double dev = std::abs(whole[i] - merged[i]) / scale;
                worst_union = std::max(worst_union, dev);
                o.expect(dev <= 1e-9, "disjoint union " + sci(dev));
            }
        }
    }
    o.summary = "100 graphs, permutation " + sci(worst_perm) + ", union " + sci(worst_union) + ", residual " +
                sci(worst_res);
    return o;
}

Outcome eigensolver_oracle() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> order(1, 4);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = oracle::random_symmetric(rng, order(rng), 10.0);
        const auto expected = oracle::charpoly_eigenvalues(m);
        const auto got = eig_sym(m).eigenvalues;
        o.expect(got.size() == expected.size(), "eigenvalue count");
        for (std::size_t i = 0; i < got.size() && i < expected.size(); ++i)
            worst = std::max(worst, std::abs(got[i] - expected[i]));
    }
    o.expect(worst < 1e-6, "deviation " + sci(worst));
    o.summary = "100 matrices, max deviation " + sci(worst);
    return o;
}

bool has_full_3x3(const BinaryImage& img) {
    for (int y = 1; y + 1 < img.height; ++y)
        for (int x = 1; x + 1 < img.width; ++x) {
            bool full = true;
            for (int dy = -1; dy <= 1 && full; ++dy)
                for (int dx = -1; dx <= 1 && full; ++dx) full = img.fg(x + dx, y + dy);
            if (full) return true;
        }
    return false;
}

Outcome thinning() {
    Outcome o;
    auto check = [&](const BinaryImage& img, const std::string& name) {
        const auto once = thin(img);
        const auto twice = thin(once);
        o.expect(twice == once, name + ": not idempotent");
        o.expect(count_components8(once) == count_components8(img), name + ": component count changed");
        o.expect(!has_full_3x3(once), name + ": 3x3 foreground block remains");
    };
    const auto line = oracle::line_image(20, 9, 2, 4, 17, 4);
    o.expect(thin(line) == line, "line changed");
    check(line, "line");
    check(oracle::filled_rect(20, 9, 3, 3, 15, 3), "rectangle");
    const auto plus = oracle::plus_image(21);
    o.expect(thin(plus) == plus, "plus changed");
    check(plus, "plus");
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 20; ++i) check(oracle::random_blob(rng, 48, 48), "blob " + std::to_string(i));
    o.summary = "3 fixtures and 20 random blobs";
    return o;
}

Outcome smo_oracle() {
    Outcome o;
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::size_t> size(2, 8);
    std::uniform_real_distribution<double> u(-2.0, 2.0), logc(-2.0, 2.0), logg(-1.5, 1.0);
    double worst_gap = 0.0, worst_kkt = 0.0, worst_sum = 0.0;
    auto invariants = [&](const SquareMatrix& k, std::span<const int> y, const SmoSolution& s, double C) {
        double signed_sum = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            signed_sum += s.alpha[i] * y[i];
            o.expect(s.alpha[i] >= 0.0 && s.alpha[i] <= C, "alpha outside [0, C]");
        }
        worst_sum = std::max(worst_sum, std::abs(signed_sum));
        o.expect(std::abs(signed_sum) < 1e-8, "sum alpha y = " + sci(signed_sum));
        const double kkt = max_kkt_violation(k, y, s.alpha, s.bias, C);
        worst_kkt = std::max(worst_kkt, kkt);
        o.expect(kkt <= 1e-3, "KKT violation " + sci(kkt));
    };
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t l = size(rng);
        std::vector<FeatureVector> xs(l, FeatureVector(2));
        std::vector<int> y(l);
        for (std::size_t i = 0; i < l; ++i) {
            xs[i] = {u(rng), u(rng)};
            y[i] = i % 2 == 0 ? 1 : -1;
        }
        std::shuffle(y.begin(), y.end(), rng);
        const double C = std::pow(10.0, logc(rng));
        const auto k = kernel_matrix(xs, std::pow(10.0, logg(rng)));
        const auto s = solve_smo(k, y, C);
        const auto best = oracle::brute_force_svm_dual(k, y, C);
        const double gap = std::abs(s.objective - best.objective);
        worst_gap = std::max(worst_gap, gap);
        o.expect(gap <= 1e-4, "objective gap " + sci(gap));
        invariants(k, y, s, C);
    }
    // every pair machine of a three-class problem
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::vector<FeatureVector>> by_class(3);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 15; ++i) by_class[c].push_back({4.0 * c + noise(rng), noise(rng)});
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            std::vector<FeatureVector> xs = by_class[a];
            xs.insert(xs.end(), by_class[b].begin(), by_class[b].end());
            std::vector<int> y(xs.size(), -1);
            std::fill(y.begin(), y.begin() + 15, 1);
            const auto k = kernel_matrix(xs, 0.5);
            invariants(k, y, solve_smo(k, y, 10.0), 10.0);
        }
    o.summary = "100 instances, objective gap " + sci(worst_gap) + ", KKT " + sci(worst_kkt) + ", |sum alpha y| " +
                sci(worst_sum);
    return o;
}

Outcome ovo_sanity() {
    Outcome o;
    const double sigma = 1.0, centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
    std::mt19937_64 rng(606);
    std::normal_distribution<double> noise(0.0, sigma);
    auto draw = [&](int per_class, std::vector<FeatureVector>& xs, std::vector<int>& ys) {
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < per_class; ++i) {
                xs.push_back({centers[c][0] + noise(rng), centers[c][1] + noise(rng)});
                ys.push_back(c + 1);
            }
    };
    std::vector<FeatureVector> train, test;
    std::vector<int> train_y, test_y;
    draw(10, train, train_y);
    draw(10, test, test_y);
    const auto model = train_ovo(train, train_y, {10.0, 0.1});
    o.expect(model.binaries.size() == 3, "expected 3 binary models");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i) correct += predict(model, test[i]).label == test_y[i];
    o.expect(correct == test.size(), "test accuracy below 100%");
    o.summary = std::to_string(model.binaries.size()) + " binary models, test accuracy " +
                std::to_string(correct) + "/" + std::to_string(test.size());
    return o;
}

ProbMatrix random_prob(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    SquareMatrix m(n);
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += (m(i, j) = u(rng));
        for (std::size_t i = 0; i < n; ++i) m(i, j) /= col;
    }
    return {m};
}

FusionModel model_of(std::vector<ProbMatrix> ms) {
    FusionModel f;
    f.classes.resize(ms.front().classes());
    std::iota(f.classes.begin(), f.classes.end(), 0);
    f.matrices = std::move(ms);
    return f;
}

Outcome fusion_correctness() {
    Outcome o;
    const auto example = fuse(model_of({ProbMatrix{SquareMatrix{{0.9, 0.2}, {0.1, 0.8}}},
                                         ProbMatrix{SquareMatrix{{0.6, 0.3}, {0.4, 0.7}}}}),
                              std::vector<std::size_t>{0, 1});
    o.expect(std::abs(example.belief[0] - 0.794) <= 1e-3 && std::abs(example.belief[1] - 0.206) <= 1e-3,
             "worked fusion example");

    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> classes(2, 6), count(1, 4);
    double worst_sum = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = classes(rng), l = count(rng);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<ProbMatrix> ms;
        std::vector<std::size_t> picks;
        for (std::size_t k = 0; k < l; ++k) {
            ms.push_back(random_prob(rng, n));
            picks.push_back(pick(rng));
        }
        const auto r = fuse(model_of(ms), picks);
        worst_sum = std::max(worst_sum, std::abs(sum(r.belief) - 1.0));

        // every ordering of the classifiers gives the same belief
        std::vector<std::size_t> order(l);
        std::iota(order.begin(), order.end(), 0);
        while (std::next_permutation(order.begin(), order.end())) {
            std::vector<ProbMatrix> ms2;
            std::vector<std::size_t> picks2;
            for (auto k : order) {
                ms2.push_back(ms[k]);
                picks2.push_back(picks[k]);
            }
            const auto r2 = fuse(model_of(ms2), picks2);
            for (std::size_t i = 0; i < n; ++i)
                o.expect(std::abs(r2.belief[i] - r.belief[i]) <= 1e-12, "order dependence");
        }
    }
    o.expect(worst_sum <= 1e-9, "belief sum deviation " + sci(worst_sum));

    // one classifier: the belief is the calibrated column for every prediction
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
        const auto m = random_prob(rng, n);
        const auto f = model_of({m});
        for (std::size_t j = 0; j < n; ++j) {
            const auto r = fuse(f, std::vector<std::size_t>{j});
            for (std::size_t i = 0; i < n; ++i) o.expect(std::abs(r.belief[i] - m(i, j)) <= 1e-12, "L = 1 reduction");
        }
    }
    o.summary = "b = (" + fmt(example.belief[0], 3) + ", " + fmt(example.belief[1], 3) + "), max |sum b - 1| " +
                sci(worst_sum);
    return o;
}

Outcome end_to_end() {
    Outcome o;
    test_support::TempDir dir;
    const auto manifest = write_synth_dataset(dir.path(), 10, 100, 7);
    ExperimentConfig cfg;
    cfg.trials = 10;
    cfg.seed = 1;
    cfg.ratios = {60, 20, 20};
    cfg.features.n = 3;
    cfg.threads = 0;
    const auto r = run_trials(manifest, cfg);
    double best = 0.0;
    std::ostringstream s;
    for (std::size_t k = 0; k < 3; ++k) {
        best = std::max(best, r.macro_f[k].mean);
        o.expect(r.macro_f[k].mean >= 0.60, series_name(k) + " mean macro F below 0.60");
        s << series_name(k) << ' ' << fmt(r.macro_f[k].mean) << ", ";
    }
    o.expect(r.macro_f[3].mean >= best - 0.02, "fused mean below best individual minus 0.02");
    s << "fused " << fmt(r.macro_f[3].mean) << " (needs >= " << fmt(best - 0.02) << ")";
    o.summary = s.str();
    return o;
}

Outcome padding_and_n() {
    Outcome o;
    NumeralGraph single;
    single.nodes.push_back({});
    const auto g = features_from_graph(single, 3);
    for (auto ft : kAllFeatureTypes) {
        const auto& v = g.features[index(ft)];
        const auto spectrum = eig_sym(graph_matrix(single, matrix_kind(ft))).eigenvalues;
        o.expect(v.size() == 3, "one-node feature length");
        o.expect(v.size() == 3 && v[0] == spectrum[0] && v[1] == 0.0 && v[2] == 0.0, "one-node feature padding");
    }

    test_support::TempDir dir;
    const auto manifest = write_synth_dataset(dir.path(), 3, 10, 11);
    for (std::size_t n : {3u, 5u}) {
        ExperimentConfig cfg;
        cfg.features.n = n;
        cfg.trials = 1;
        cfg.scale_features = true;
        const auto table = compute_features(manifest, cfg.features);
        for (const auto& rows : table.features)
            for (const auto& v : rows) o.expect(v.size() == n, "feature length differs from n");
        const auto r = run_trials(table, cfg);
        o.expect(r.trials.size() == 1, "pipeline did not run with n = " + std::to_string(n));
    }
    o.summary = "one-node features (lambda1, 0, 0); n = 3 and n = 5 pipelines ran";
    return o;
}

Outcome determinism() {
    Outcome o;
    test_support::TempDir dir;
    const auto data = dir.path() / "data";
    std::ostringstream out, err;
    o.expect(cli::run({"specgraph", "synth", "--out", data.string(), "--classes", "3", "--per-class", "10", "--seed",
                       "8"},
                      out, err) == cli::kOk,
             "synth failed");
    const auto manifest = (data / "manifest.csv").string();
    for (const char* run : {"r1", "r2"}) {
        const int code = cli::run({"specgraph", "evaluate", manifest, "--out", (dir.path() / run).string(),
                                   "--trials", "3", "--seed", "5"},
                                  out, err);
        o.expect(code == cli::kOk, std::string("evaluate failed: ") + err.str());
    }
    std::size_t compared = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path() / "r1")) {
        const auto other = dir.path() / "r2" / e.path().filename();
        o.expect(std::filesystem::exists(other) && read_file(e.path()) == read_file(other),
                 e.path().filename().string() + " differs");
        ++compared;
    }
    o.expect(compared > 0, "no report files");
    o.summary = std::to_string(compared) + " report files byte-identical";
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 = no limit
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "worked example spectrum", 1.0, worked_example},
        {2, "spectral invariants", 10.0, spectral_invariants},
        {3, "eigensolver oracle", 5.0, eigensolver_oracle},
        {4, "thinning", 5.0, thinning},
        {5, "SMO oracle", 30.0, smo_oracle},
        {6, "one-vs-one sanity", 5.0, ovo_sanity},
        {7, "fusion correctness", 5.0, fusion_correctness},
        {8, "end-to-end fusion on synthetic data", 600.0, end_to_end},
        {9, "zero padding and n selection", 0.0, padding_and_n},
        {10, "determinism", 0.0, determinism},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_seconds > 0.0) o.expect(secs < c.limit_seconds, "over the " + fmt(c.limit_seconds, 0) + " s limit");
        std::printf("%s criterion %d %s: %s%s [%.2f s]\n", o.ok ? "PASS" : "FAIL", c.id, c.name,
                    o.ok ? "" : (o.failure + "; ").c_str(), o.summary.c_str(), secs);
        std::fflush(stdout);
        failures += !o.ok;
    }
    return failures == 0 ? 0 : 1;
}
