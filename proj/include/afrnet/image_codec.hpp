#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afrnet/types.hpp"

namespace afrnet {

// Lossless 8-bit grayscale PNG. Throws EncodeFailure / DecodeFailure.
std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(const std::vector<std::uint8_t>& bytes);

// Uncompressed BMP, 8-bit palette or 24/32-bit, converted to grayscale.
Image decode_bmp(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_bmp_gray8(const Image& img);

// File helpers; dispatch on extension (.png / .bmp, case-insensitive).
Image load_image(const std::string& path);
void save_png(const Image& img, const std::string& path);

}  // namespace afrnet
