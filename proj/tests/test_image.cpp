#include <doctest.h>

#include "nice/image.hpp"
#include "nice/image_io.hpp"
#include "nice/rng.hpp"

using namespace niceaug;

TEST_CASE("luminance uses the Y = 0.299R + 0.587G + 0.114B convention") {
    Image img(1, 3);
    img.set_pixel(0, 0, {255, 0, 0});
    img.set_pixel(0, 1, {0, 255, 0});
    img.set_pixel(0, 2, {0, 0, 255});
    const auto y = to_luminance(img);
    CHECK(y[0] == doctest::Approx(0.299 * 255));
    CHECK(y[1] == doctest::Approx(0.587 * 255));
    CHECK(y[2] == doctest::Approx(0.114 * 255));
}

TEST_CASE("rgb -> hsv -> rgb round trip is exact on 8-bit values") {
    SplitMix64 rng(41);
    int checked = 0;
    auto check_round_trip = [&](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        const auto back = hsv_to_rgb(rgb_to_hsv(r, g, b));
        CHECK(back[0] == r);
        CHECK(back[1] == g);
        CHECK(back[2] == b);
        ++checked;
    };
    for (int i = 0; i < 20000; ++i) {
        check_round_trip(static_cast<std::uint8_t>(rng.next_below(256)),
                         static_cast<std::uint8_t>(rng.next_below(256)),
                         static_cast<std::uint8_t>(rng.next_below(256)));
    }
    // Grays and saturated primaries sit on the formula's branch edges.
    for (int v = 0; v < 256; ++v) {
        const auto u = static_cast<std::uint8_t>(v);
        check_round_trip(u, u, u);
        check_round_trip(u, 0, 0);
        check_round_trip(0, u, 0);
        check_round_trip(0, 0, u);
        check_round_trip(u, u, 0);
        check_round_trip(255, u, u);
    }
    CHECK(checked > 20000);
}

TEST_CASE("hsv components match known values") {
    const Hsv red = rgb_to_hsv(255, 0, 0);
    CHECK(red.h == doctest::Approx(0.0));
    CHECK(red.s == doctest::Approx(1.0));
    CHECK(red.v == doctest::Approx(1.0));

    const Hsv green = rgb_to_hsv(0, 255, 0);
    CHECK(green.h == doctest::Approx(1.0 / 3.0));

    const Hsv gray = rgb_to_hsv(128, 128, 128);
    CHECK(gray.s == doctest::Approx(0.0));
    CHECK(gray.v == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("png bytes round trip through encode/decode") {
    SplitMix64 rng(7);
    Image img(21, 33);
    for (auto& byte : img.data) byte = static_cast<std::uint8_t>(rng.next_below(256));
    CHECK(decode_png(encode_png(img)) == img);
}

TEST_CASE("base64 round trips and matches a known vector") {
    CHECK(base64_encode({'M', 'a', 'n'}) == "TWFu");
    CHECK(base64_encode({'M', 'a'}) == "TWE=");
    CHECK(base64_encode({'M'}) == "TQ==");
    SplitMix64 rng(9);
    for (int n = 0; n < 40; ++n) {
        std::vector<std::uint8_t> bytes;
        for (int i = 0; i < n; ++i) bytes.push_back(static_cast<std::uint8_t>(rng.next_below(256)));
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
}
