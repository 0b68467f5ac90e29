#include "specgraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specgraph/error.hpp"
#include "specgraph/fileio.hpp"
#include "specgraph/image_io.hpp"

namespace specgraph {

namespace {

struct Vec2 {
    double x;
    double y;
};

using Stroke = std::vector<Vec2>;

Stroke arc(Vec2 c, double r, double from, double to, int steps) {
    Stroke s;
    for (int i = 0; i <= steps; ++i) {
        const double t = from + (to - from) * i / steps;
        s.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    return s;
}

// Unit-box templates, y pointing down.
std::vector<Stroke> glyph_template(int cls) {
    constexpr double pi = std::numbers::pi;
    switch (cls) {
        case 0: return {{{0.0, -0.85}, {0.0, 0.85}}};
        case 1: return {{{-0.8, 0.0}, {0.8, 0.0}}, {{0.0, -0.8}, {0.0, 0.8}}};
        case 2: return {arc({0.0, 0.0}, 0.75, 0.0, 2.0 * pi, 48)};
        case 3: return {arc({0.0, -0.35}, 0.45, 0.0, 2.0 * pi, 40), {{0.0, 0.1}, {0.0, 0.9}}};
        case 4: return {{{-0.8, -0.8}, {0.8, -0.8}}, {{0.0, -0.8}, {0.0, 0.85}}};
        case 5: return {{{-0.7, -0.8}, {0.0, 0.0}}, {{0.7, -0.8}, {0.0, 0.0}}, {{0.0, 0.0}, {0.0, 0.85}}};
        case 6: return {{{-0.7, -0.8}, {0.7, -0.8}, {-0.7, 0.8}, {0.7, 0.8}}};
        case 7: {
            Stroke s;
            for (int i = 0; i <= 40; ++i) {
                const double t = i / 40.0;
                s.push_back({-0.6 * std::sin(2.0 * pi * t), -0.85 + 1.7 * t});
            }
            return {s};
        }
        case 8: return {{{-0.6, -0.8}, {-0.6, 0.8}}, {{0.6, -0.8}, {0.6, 0.8}}, {{-0.6, 0.0}, {0.6, 0.0}}};
        case 9: {
            Stroke s;
            const double turns = 3.0 * pi;
            for (int i = 0; i <= 90; ++i) {
                const double th = turns * i / 90.0;
                const double r = 0.12 + 0.7 * th / turns;
                s.push_back({r * std::cos(th), r * std::sin(th)});
            }
            return {s};
        }
        default: throw ParameterError("synth: class index out of range");
    }
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = a.x + t * dx - p.x, cy = a.y + t * dy - p.y;
    return std::sqrt(cx * cx + cy * cy);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over a simple combination
    std::uint64_t z = seed ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b * 0xC2B2AE3D27D4EB4FULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::string_view synth_class_name(int cls) {
    static constexpr std::string_view names[kSynthClassCount] = {"line", "cross", "loop", "loop-with-tail", "T",
                                                                 "Y",    "Z",     "S",    "H",              "spiral"};
    if (cls < 0 || cls >= kSynthClassCount) throw ParameterError("synth: class index out of range");
    return names[cls];
}

GrayImage render_glyph(int cls, Rng& rng, const SynthOptions& options) {
    auto strokes = glyph_template(cls);

    const double angle = uniform(rng, -15.0, 15.0) * std::numbers::pi / 180.0;
    const double scale = uniform(rng, 0.8, 1.2);
    const double unit = options.canvas * 0.36;
    const double tx = uniform(rng, -0.06, 0.06) * options.canvas;
    const double ty = uniform(rng, -0.06, 0.06) * options.canvas;
    // smooth wobble applied to every stroke point
    const double ax = uniform(rng, 0.0, 0.06), ay = uniform(rng, 0.0, 0.06);
    const double fx = uniform(rng, 1.5, 3.0), fy = uniform(rng, 1.5, 3.0);
    const double phx = uniform(rng, 0.0, 2.0 * std::numbers::pi), phy = uniform(rng, 0.0, 2.0 * std::numbers::pi);

    const double ca = std::cos(angle), sa = std::sin(angle);
    const double cx = options.canvas / 2.0 + tx, cy = options.canvas / 2.0 + ty;
    for (auto& stroke : strokes) {
        for (auto& p : stroke) {
            const double jx = p.x + ax * std::sin(fx * p.y + phx);
            const double jy = p.y + ay * std::sin(fy * p.x + phy);
            p = {cx + unit * scale * (ca * jx - sa * jy), cy + unit * scale * (sa * jx + ca * jy)};
        }
    }

    GrayImage ink(options.canvas, options.canvas, 0.0);
    const double half = options.stroke_width / 2.0;
    for (const auto& stroke : strokes) {
        for (std::size_t s = 0; s + 1 < stroke.size(); ++s) {
            const Vec2 a = stroke[s], b = stroke[s + 1];
            const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - half - 1)));
            const int x1 = std::min(options.canvas - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + half + 1)));
            const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - half - 1)));
            const int y1 = std::min(options.canvas - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + half + 1)));
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const double d = segment_distance({x + 0.0, y + 0.0}, a, b);
                    ink.at(x, y) = std::max(ink.at(x, y), std::clamp(half + 0.5 - d, 0.0, 1.0));
                }
            }
        }
    }
    GrayImage out(options.canvas, options.canvas);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data[i] = std::clamp(1.0 - ink.data[i] + uniform(rng, -options.noise, options.noise), 0.0, 1.0);
    return out;
}

std::vector<SynthSample> synth_dataset(int classes, int per_class, std::uint64_t seed, const SynthOptions& options) {
    if (classes < 2 || classes > kSynthClassCount) throw ParameterError("synth: classes must be in [2, 10]");
    if (per_class < 10) throw ParameterError("synth: per_class must be at least 10");
    std::vector<SynthSample> out;
    out.reserve(static_cast<std::size_t>(classes) * static_cast<std::size_t>(per_class));
    for (int c = 0; c < classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            Rng rng(mix(seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(i)));
            char name[32];
            std::snprintf(name, sizeof name, "c%d_%04d", c, i);
            out.push_back({c, name, render_glyph(c, rng, options)});
        }
    }
    return out;
}

DatasetManifest write_synth_dataset(const std::filesystem::path& dir, int classes, int per_class,
                                    std::uint64_t seed, const SynthOptions& options) {
    const auto samples = synth_dataset(classes, per_class, seed, options);
    DatasetManifest m;
    for (const auto& s : samples) {
        const auto rel = std::filesystem::path("images") / (s.name + ".pgm");
        write_pgm(dir / rel, s.image);
        m.samples.push_back({rel.generic_string(), s.label});
    }
    m.refresh_classes();
    write_file_atomic(dir / "manifest.csv", format_manifest(m));
    for (auto& e : m.samples) e.path = (dir / e.path).generic_string();
    return m;
}

}  // namespace specgraph
