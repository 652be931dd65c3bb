#pragma once

#include "nice/metrics.hpp"

namespace test_support {

// Independently coded SSIM oracle: naive per-window double loops, two-pass
// moment computation, no shared code with the library implementation.
double reference_ssim(const niceaug::GrayImage& a, const niceaug::GrayImage& b,
                      const niceaug::SsimParams& params = {});

}  // namespace test_support
