#include "specgraph/imageproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "specgraph/error.hpp"

namespace specgraph {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int r = gaussian_radius(sigma);
    std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + r)] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    return k;
}

double sample_bilinear(const GrayImage& img, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
    const double bottom = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

int histogram_bin(double v) { return std::clamp(static_cast<int>(std::floor(v * 256.0)), 0, 255); }

}  // namespace

int gaussian_radius(double sigma) { return static_cast<int>(std::ceil(4.0 * sigma)); }

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("gaussian_blur: sigma must be positive");
    if (img.empty()) return img;
    const auto kernel = gaussian_kernel(sigma);
    const int r = gaussian_radius(sigma);

    GrayImage horizontal(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int k = -r; k <= r; ++k)
                acc += kernel[static_cast<std::size_t>(k + r)] * img.at(std::clamp(x + k, 0, img.width - 1), y);
            horizontal.at(x, y) = acc;
        }
    }
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int k = -r; k <= r; ++k)
                acc += kernel[static_cast<std::size_t>(k + r)] *
                       horizontal.at(x, std::clamp(y + k, 0, img.height - 1));
            out.at(x, y) = acc;
        }
    }
    return out;
}

void rescale_unit(GrayImage& img) {
    if (img.empty()) return;
    const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (range <= 1e-12) {
        std::fill(img.data.begin(), img.data.end(), 0.0);
        return;
    }
    for (auto& v : img.data) v = std::clamp((v - lo) / range, 0.0, 1.0);
}

GrayImage dog_filter(const GrayImage& img, double sigma1, double sigma2) {
    if (!(sigma1 > 0.0) || !(sigma2 > sigma1))
        throw ParameterError("dog_filter: require sigma2 > sigma1 > 0");
    GrayImage narrow = gaussian_blur(img, sigma1);
    const GrayImage wide = gaussian_blur(img, sigma2);
    for (std::size_t i = 0; i < narrow.size(); ++i) narrow.data[i] -= wide.data[i];
    rescale_unit(narrow);
    return narrow;
}

GrayImage normalize_size(const GrayImage& img, int target) {
    if (target < 8) throw ParameterError("normalize_size: target must be at least 8");
    if (img.empty()) throw ContentError("normalize_size: empty image");

    const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi - lo <= 1e-12) throw ContentError("normalize_size: blank image (no glyph)");
    const double mid = lo + 0.5 * (hi - lo);

    int x0 = img.width, y0 = img.height, x1 = -1, y1 = -1;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (img.at(x, y) < mid) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        }
    }
    if (x1 < 0) throw ContentError("normalize_size: blank image (no glyph)");

    std::vector<double> sorted = img.data;
    auto median_it = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), median_it, sorted.end());
    const double background = *median_it;

    const int box_w = x1 - x0 + 1;
    const int box_h = y1 - y0 + 1;
    const int inner = target - 2 * kNormalizeMargin;
    const double scale = static_cast<double>(inner) / std::max(box_w, box_h);
    const int out_w = std::clamp(static_cast<int>(std::lround(box_w * scale)), 1, inner);
    const int out_h = std::clamp(static_cast<int>(std::lround(box_h * scale)), 1, inner);
    const int off_x = (target - out_w) / 2;
    const int off_y = (target - out_h) / 2;

    GrayImage out(target, target, background);
    for (int v = 0; v < out_h; ++v) {
        for (int u = 0; u < out_w; ++u) {
            const double sx = x0 + (u + 0.5) / scale - 0.5;
            const double sy = y0 + (v + 0.5) / scale - 0.5;
            out.at(off_x + u, off_y + v) = sample_bilinear(img, sx, sy);
        }
    }
    return out;
}

int otsu_level(const GrayImage& img) {
    std::array<double, 256> hist{};
    for (double v : img.data) hist[static_cast<std::size_t>(histogram_bin(v))] += 1.0;
    const double total = static_cast<double>(img.size());
    if (total == 0.0) return 0;

    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += i * hist[static_cast<std::size_t>(i)];

    // variance[k] for the split {bins < k} | {bins >= k}
    std::array<double, 257> variance{};
    double w0 = 0.0, sum0 = 0.0, best = 0.0;
    for (int k = 1; k < 256; ++k) {
        w0 += hist[static_cast<std::size_t>(k - 1)];
        sum0 += (k - 1) * hist[static_cast<std::size_t>(k - 1)];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double p0 = w0 / total;
        const double p1 = w1 / total;
        variance[static_cast<std::size_t>(k)] = p0 * p1 * (mu0 - mu1) * (mu0 - mu1);
        best = std::max(best, variance[static_cast<std::size_t>(k)]);
    }
    if (best <= 0.0) return 0;
    for (int k = 1; k < 256; ++k)
        if (variance[static_cast<std::size_t>(k)] >= best * (1.0 - 1e-12)) return k;
    return 0;
}

BinaryImage binarize_otsu(const GrayImage& img) {
    const int level = otsu_level(img);
    BinaryImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = histogram_bin(img.data[i]) < level ? 1 : 0;
    return out;
}

SkeletonImage thin(const BinaryImage& bin) {
    BinaryImage img = bin;
    for (auto& v : img.data) v = v ? 1 : 0;
    std::vector<std::size_t> marked;

    auto subiteration = [&](int pass) {
        marked.clear();
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (!img.at(x, y)) continue;
                // Neighbors clockwise from north.
                const int p2 = img.fg(x, y - 1), p3 = img.fg(x + 1, y - 1), p4 = img.fg(x + 1, y);
                const int p5 = img.fg(x + 1, y + 1), p6 = img.fg(x, y + 1), p7 = img.fg(x - 1, y + 1);
                const int p8 = img.fg(x - 1, y), p9 = img.fg(x - 1, y - 1);

                const int c = ((!p2) & (p3 | p4)) + ((!p4) & (p5 | p6)) + ((!p6) & (p7 | p8)) + ((!p8) & (p9 | p2));
                const int n1 = (p9 | p2) + (p3 | p4) + (p5 | p6) + (p7 | p8);
                const int n2 = (p2 | p3) + (p4 | p5) + (p6 | p7) + (p8 | p9);
                const int n = std::min(n1, n2);
                const int m = pass == 0 ? ((p6 | p7 | !p9) & p8) : ((p2 | p3 | !p5) & p4);
                if (c == 1 && n >= 2 && n <= 3 && m == 0)
                    marked.push_back(static_cast<std::size_t>(y) * img.width + x);
            }
        }
        for (auto idx : marked) img.data[idx] = 0;
        return !marked.empty();
    };

    for (;;) {
        const bool first = subiteration(0);
        const bool second = subiteration(1);
        if (!first && !second) break;
    }
    return SkeletonImage(std::move(img));
}

}  // namespace specgraph
