#include "specgraph/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>

#include "specgraph/error.hpp"
#include "specgraph/fileio.hpp"

namespace specgraph {

namespace {

class PgmReader {
public:
    PgmReader(const std::string& bytes, const std::string& name) : bytes_(bytes), name_(name) {}

    long next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_])))
            throw ParseError(name_ + ": malformed PGM header");
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000L) throw ParseError(name_ + ": PGM value out of range");
            ++pos_;
        }
        return v;
    }

    // Exactly one whitespace byte separates the header from binary samples.
    void skip_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw ParseError(name_ + ": malformed PGM header");
        ++pos_;
    }

    std::size_t pos() const { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& bytes_;
    const std::string& name_;
    std::size_t pos_ = 2;
};

GrayImage read_png(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str()))
        throw ParseError(path.string() + ": " + image.message);
    image.format = PNG_FORMAT_RGBA;
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw ParseError(path.string() + ": " + msg);
    }
    GrayImage out(static_cast<int>(image.width), static_cast<int>(image.height));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = buffer[4 * i] / 255.0;
        const double g = buffer[4 * i + 1] / 255.0;
        const double b = buffer[4 * i + 2] / 255.0;
        const double a = buffer[4 * i + 3] / 255.0;
        const double luma = 0.299 * r + 0.587 * g + 0.114 * b;
        out.data[i] = std::clamp(a * luma + (1.0 - a), 0.0, 1.0);
    }
    return out;
}

std::string encode_pgm_bytes(int width, int height, const std::vector<unsigned char>& pixels) {
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    return out;
}

}  // namespace

GrayImage decode_pgm(const std::string& bytes, const std::string& name) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
        throw ParseError(name + ": not a PGM file");
    const bool binary = bytes[1] == '5';
    PgmReader reader(bytes, name);
    const long width = reader.next_int();
    const long height = reader.next_int();
    const long maxval = reader.next_int();
    if (width <= 0 || height <= 0 || width * height > (1L << 28))
        throw ParseError(name + ": bad PGM dimensions");
    if (maxval <= 0 || maxval > 65535) throw ParseError(name + ": bad PGM maxval");

    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    if (binary) {
        reader.skip_single_space();
        const std::size_t bytes_per = maxval > 255 ? 2 : 1;
        const std::size_t need = img.size() * bytes_per;
        if (bytes.size() - reader.pos() < need) throw ParseError(name + ": truncated PGM data");
        const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + reader.pos());
        for (std::size_t i = 0; i < img.size(); ++i) {
            const long v = bytes_per == 2 ? (p[2 * i] << 8) | p[2 * i + 1] : p[i];
            img.data[i] = std::min(1.0, static_cast<double>(v) / static_cast<double>(maxval));
        }
    } else {
        for (auto& px : img.data) px = std::min(1.0, static_cast<double>(reader.next_int()) / maxval);
    }
    return img;
}

GrayImage read_image(const std::filesystem::path& path) {
    std::string bytes = read_file(path);
    static constexpr unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_sig, 8) == 0) return read_png(path);
    return decode_pgm(bytes, path.string());
}

std::string encode_pgm(const GrayImage& img) {
    std::vector<unsigned char> px(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        px[i] = static_cast<unsigned char>(std::lround(std::clamp(img.data[i], 0.0, 1.0) * 255.0));
    return encode_pgm_bytes(img.width, img.height, px);
}

std::string encode_pgm(const BinaryImage& img) {
    std::vector<unsigned char> px(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) px[i] = img.data[i] ? 0 : 255;
    return encode_pgm_bytes(img.width, img.height, px);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) { write_file_atomic(path, encode_pgm(img)); }

void write_pgm(const std::filesystem::path& path, const BinaryImage& img) { write_file_atomic(path, encode_pgm(img)); }

}  // namespace specgraph
