#include <doctest.h>

#include <cmath>
#include <random>

#include "specgraph/error.hpp"
#include "specgraph/image_io.hpp"
#include "specgraph/imageproc.hpp"
#include "support/oracles.hpp"

using namespace specgraph;

namespace {

GrayImage impulse(int size) {
    GrayImage img(size, size, 0.0);
    img.at(size / 2, size / 2) = 1.0;
    return img;
}

bool has_full_3x3(const BinaryImage& b) {
    for (int y = 1; y + 1 < b.height; ++y)
        for (int x = 1; x + 1 < b.width; ++x) {
            bool all = true;
            for (int dy = -1; dy <= 1 && all; ++dy)
                for (int dx = -1; dx <= 1 && all; ++dx) all = b.fg(x + dx, y + dy);
            if (all) return true;
        }
    return false;
}

}  // namespace

TEST_CASE("gaussian blur matches dense 2D convolution") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GrayImage img(23, 17);
    for (auto& v : img.data) v = u(rng);
    for (double sigma : {0.7, 1.0, 1.6, 2.3}) {
        const auto fast = gaussian_blur(img, sigma);
        const auto dense = oracle::dense_gaussian_blur(img, sigma, gaussian_radius(sigma));
        for (std::size_t i = 0; i < img.size(); ++i) CHECK(fast.data[i] == doctest::Approx(dense.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("DoG of a centered impulse") {
    const auto img = impulse(31);
    const auto b1 = gaussian_blur(img, 1.0);
    const auto b2 = gaussian_blur(img, 1.6);
    const double center = b1.at(15, 15) - b2.at(15, 15);
    const double expected = oracle::gaussian_window_center(1.0, gaussian_radius(1.0)) -
                            oracle::gaussian_window_center(1.6, gaussian_radius(1.6));
    CHECK(center == doctest::Approx(expected).epsilon(1e-12));

    // dog_filter is the same difference, min-max rescaled
    const auto dog = dog_filter(img, 1.0, 1.6);
    REQUIRE(dog.width == 31);
    REQUIRE(dog.height == 31);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < img.size(); ++i) {
        lo = std::min(lo, b1.data[i] - b2.data[i]);
        hi = std::max(hi, b1.data[i] - b2.data[i]);
    }
    CHECK(dog.at(15, 15) == doctest::Approx((center - lo) / (hi - lo)));
    CHECK(dog.at(15, 15) == doctest::Approx(1.0));
}

TEST_CASE("DoG edge cases") {
    const GrayImage flat(12, 9, 0.5);
    const auto out = dog_filter(flat, 1.0, 1.6);
    CHECK(out.width == 12);
    CHECK(out.height == 9);
    for (double v : out.data) CHECK(v == 0.0);
    CHECK_THROWS_AS((void)dog_filter(flat, 2.0, 2.0), ParameterError);
    CHECK_THROWS_AS((void)dog_filter(flat, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS((void)dog_filter(flat, -1.0, 1.0), ParameterError);
}

TEST_CASE("normalize_size") {
    SUBCASE("output is target x target") {
        GrayImage img(40, 30, 1.0);
        for (int y = 5; y < 25; ++y) img.at(20, y) = 0.0;
        const auto out = normalize_size(img, 64);
        CHECK(out.width == 64);
        CHECK(out.height == 64);
    }
    SUBCASE("identity scale keeps the glyph") {
        GrayImage img(64, 64, 1.0);
        for (int y = 2; y < 62; ++y)
            for (int x = 2; x < 62; ++x) img.at(x, y) = ((x / 6 + y / 6) % 2) ? 0.0 : 1.0;
        img.at(2, 2) = 0.0;
        img.at(61, 61) = 0.0;
        const auto out = normalize_size(img, 64);
        double diff = 0.0;
        for (std::size_t i = 0; i < img.size(); ++i) diff = std::max(diff, std::abs(out.data[i] - img.data[i]));
        CHECK(diff < 1e-9);
    }
    SUBCASE("wide frame scales by the limiting dimension and is centered") {
        // 128 x 64 dark outline, 6 px thick, on a white canvas
        GrayImage frame(140, 80, 1.0);
        for (int y = 8; y < 72; ++y)
            for (int x = 6; x < 134; ++x)
                if (y < 14 || y >= 66 || x < 12 || x >= 128) frame.at(x, y) = 0.0;
        const auto n = normalize_size(frame, 64);
        // inner box 60 wide; scale 60/128 gives a 60 x 30 glyph at rows 17..46
        int top = -1, bottom = -1, left = 64, right = -1;
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                if (n.at(x, y) < 0.5) {
                    if (top < 0) top = y;
                    bottom = y;
                    left = std::min(left, x);
                    right = std::max(right, x);
                }
        CHECK(left == 2);
        CHECK(right == 61);
        CHECK(bottom - top + 1 == doctest::Approx(30).epsilon(0.07));
        CHECK(top + bottom == doctest::Approx(63).epsilon(0.05));
    }
    SUBCASE("blank image is rejected") {
        CHECK_THROWS_AS((void)normalize_size(GrayImage(20, 20, 0.7), 64), ContentError);
    }
}

TEST_CASE("Otsu two-level image") {
    GrayImage img(10, 10, 0.8);
    for (int i = 0; i < 50; ++i) img.data[static_cast<std::size_t>(i)] = 0.2;
    const int k = otsu_level(img);
    CHECK(k == oracle::exhaustive_otsu_level(img));
    CHECK(k / 256.0 > 0.2);
    CHECK(k / 256.0 <= 0.8);
    const auto b = binarize_otsu(img);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK((b.data[i] != 0) == (img.data[i] == 0.2));
}

TEST_CASE("Otsu degenerate inputs") {
    const auto uniform = binarize_otsu(GrayImage(8, 8, 0.4));
    CHECK(uniform.count() == 0);
    GrayImage bin(6, 6, 1.0);
    bin.at(1, 1) = bin.at(2, 3) = 0.0;
    const auto b = binarize_otsu(bin);
    CHECK(b.count() == 2);
    CHECK(b.fg(1, 1));
    CHECK(b.fg(2, 3));
}

TEST_CASE("Otsu agrees with the exhaustive oracle on random images") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        GrayImage img(9 + trial % 7, 7 + trial % 5);
        const int mode = trial % 3;
        for (auto& v : img.data) {
            if (mode == 0) v = u(rng);
            else if (mode == 1) v = u(rng) < 0.3 ? 0.1 + 0.2 * u(rng) : 0.6 + 0.3 * u(rng);
            else v = std::floor(u(rng) * 4.0) / 4.0;
        }
        const int k = otsu_level(img);
        CHECK(k == oracle::exhaustive_otsu_level(img));
        const auto b = binarize_otsu(img);
        for (std::size_t i = 0; i < img.size(); ++i) {
            const int bin = std::min(255, static_cast<int>(std::floor(img.data[i] * 256.0)));
            CHECK((b.data[i] != 0) == (bin < k));
        }
    }
}

TEST_CASE("thinning fixtures") {
    SUBCASE("1-px line is unchanged") {
        const auto line = oracle::line_image(20, 7, 2, 3, 17, 3);
        CHECK(static_cast<const BinaryImage&>(thin(line)) == line);
    }
    SUBCASE("3 x 15 rectangle thins to a horizontal line") {
        const auto rect = oracle::filled_rect(21, 9, 3, 3, 15, 3);
        const auto s = thin(rect);
        int min_y = 100, max_y = -1;
        for (int y = 0; y < s.height; ++y)
            for (int x = 0; x < s.width; ++x)
                if (s.fg(x, y)) {
                    min_y = std::min(min_y, y);
                    max_y = std::max(max_y, y);
                }
        CHECK(min_y == max_y);
        CHECK(s.count() >= 13);
        CHECK(s.count() <= 15);
    }
    SUBCASE("empty stays empty") { CHECK(thin(BinaryImage(10, 10)).count() == 0); }
    SUBCASE("plus keeps its arms") {
        const auto plus = oracle::plus_image(21);
        CHECK(static_cast<const BinaryImage&>(thin(plus)) == plus);
    }
}

TEST_CASE("thinning properties on random blobs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const auto blob = oracle::random_blob(rng, 48, 40);
        const auto s = thin(blob);
        CHECK(static_cast<const BinaryImage&>(thin(s)) == static_cast<const BinaryImage&>(s));
        CHECK(count_components8(s) == count_components8(blob));
        CHECK_FALSE(has_full_3x3(s));
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.data[i]) CHECK(blob.data[i]);
    }
}

TEST_CASE("PGM round trip") {
    GrayImage img(5, 3);
    for (std::size_t i = 0; i < img.size(); ++i) img.data[i] = static_cast<double>(i * 17 % 256) / 255.0;
    const auto back = decode_pgm(encode_pgm(img));
    REQUIRE(back.width == 5);
    REQUIRE(back.height == 3);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(back.data[i] == doctest::Approx(img.data[i]).epsilon(1e-9));
    CHECK(decode_pgm("P2\n# comment\n2 1\n255\n0 255\n").data == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS((void)decode_pgm("P5\n2 2\n255\nx", "bad.pgm"), ParseError);
}
