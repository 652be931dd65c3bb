#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nice/image.hpp"
#include "nice/mask.hpp"

namespace niceaug {

// All on-disk images are lossless PNG. Masks are single-channel PNG with
// 0 = background, 255 = mask.

Image load_image_png(const std::filesystem::path& path);
void save_image_png(const Image& image, const std::filesystem::path& path);

BinaryMask load_mask_png(const std::filesystem::path& path);
void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(const std::vector<std::uint8_t>& bytes);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

inline std::string image_to_base64_png(const Image& image) {
    return base64_encode(encode_png(image));
}
inline Image image_from_base64_png(const std::string& text) {
    return decode_png(base64_decode(text));
}

}  // namespace niceaug
