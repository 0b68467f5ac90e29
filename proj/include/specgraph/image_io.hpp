#pragma once

#include <filesystem>
#include <string>

#include "specgraph/image.hpp"

namespace specgraph {

/// Loads a PNG or PGM (P2/P5) file as grayscale in [0,1]. Color sources are
/// reduced by Rec. 601 luma; alpha is composited over white.
[[nodiscard]] GrayImage read_image(const std::filesystem::path& path);

/// Decodes PGM bytes. `name` only appears in error messages.
[[nodiscard]] GrayImage decode_pgm(const std::string& bytes, const std::string& name = "<memory>");

/// 8-bit binary PGM (P5).
[[nodiscard]] std::string encode_pgm(const GrayImage& img);
/// Foreground is written black.
[[nodiscard]] std::string encode_pgm(const BinaryImage& img);

void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const BinaryImage& img);

}  // namespace specgraph
