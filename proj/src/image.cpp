#include "nice/image.hpp"

#include <algorithm>
#include <cmath>

namespace niceaug {

Image Image::filled(int h, int w, std::array<std::uint8_t, 3> rgb) {
    Image img(h, w);
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] = rgb[0];
        img.data[i + 1] = rgb[1];
        img.data[i + 2] = rgb[2];
    }
    return img;
}

std::vector<double> to_luminance(const Image& image) {
    std::vector<double> out(static_cast<std::size_t>(image.height) * image.width);
    const std::uint8_t* p = image.data.data();
    for (std::size_t i = 0; i < out.size(); ++i, p += 3) {
        out[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
    return out;
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;

    Hsv out;
    out.v = mx;
    out.s = mx > 0.0 ? delta / mx : 0.0;
    if (delta > 0.0) {
        double h;
        if (mx == r) {
            h = std::fmod((g - b) / delta, 6.0);
        } else if (mx == g) {
            h = (b - r) / delta + 2.0;
        } else {
            h = (r - g) / delta + 4.0;
        }
        h /= 6.0;
        if (h < 0.0) h += 1.0;
        out.h = h;
    }
    return out;
}

std::array<std::uint8_t, 3> hsv_to_rgb(const Hsv& hsv) {
    double h = hsv.h - std::floor(hsv.h);  // wrap to [0,1)
    const double s = std::clamp(hsv.s, 0.0, 1.0);
    const double v = std::clamp(hsv.v, 0.0, 1.0);

    const double h6 = h * 6.0;
    const int sector = std::min(5, static_cast<int>(h6));
    const double f = h6 - sector;
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));

    double r, g, b;
    switch (sector) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
    auto to8 = [](double x) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

}  // namespace niceaug
