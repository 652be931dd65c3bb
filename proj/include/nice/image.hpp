#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace niceaug {

// Interleaved 8-bit RGB raster, row-major.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data;  // height * width * 3

    Image() = default;
    Image(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0) {}

    static Image filled(int h, int w, std::array<std::uint8_t, 3> rgb);

    std::uint8_t& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    void set_pixel(int y, int x, std::array<std::uint8_t, 3> rgb) {
        at(y, x, 0) = rgb[0];
        at(y, x, 1) = rgb[1];
        at(y, x, 2) = rgb[2];
    }
    std::array<std::uint8_t, 3> pixel(int y, int x) const {
        return {at(y, x, 0), at(y, x, 1), at(y, x, 2)};
    }

    bool same_size(const Image& other) const {
        return height == other.height && width == other.width;
    }
    bool empty() const { return data.empty(); }

    bool operator==(const Image&) const = default;
};

// Luminance plane, Y = 0.299 R + 0.587 G + 0.114 B, values in [0, 255].
std::vector<double> to_luminance(const Image& image);

// Hue as fraction of the circle in [0, 1); saturation and value in [0, 1].
struct Hsv {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> hsv_to_rgb(const Hsv& hsv);

}  // namespace niceaug
