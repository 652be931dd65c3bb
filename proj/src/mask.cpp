#include "nice/mask.hpp"

#include <algorithm>
#include <numeric>

#include "nice/errors.hpp"

namespace niceaug {

std::size_t BinaryMask::popcount() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void BinaryMask::fill_rect(const BBox& box, bool v) {
    const int y0 = std::max(0, box.y);
    const int x0 = std::max(0, box.x);
    const int y1 = std::min(height_, box.y + box.h);
    const int x1 = std::min(width_, box.x + box.w);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) set(y, x, v);
    }
}

std::optional<BBox> BinaryMask::bounding_box() const {
    int min_x = width_, min_y = height_, max_x = -1, max_y = -1;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (!test(y, x)) continue;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0) return std::nullopt;
    return BBox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

BinaryMask union_masks(std::span<const BinaryMask> masks, int height, int width) {
    BinaryMask out(height, width);
    for (const BinaryMask& m : masks) {
        if (m.height() != height || m.width() != width) {
            throw DimensionMismatchError("union_masks: mask dimensions disagree");
        }
        const auto& src = m.raw();
        auto& dst = out.raw();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
    }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, int dil) {
    if (dil < 0) throw InvalidArgumentError("dilate: dil must be >= 0");
    if (dil == 0) return mask;
    const int h = mask.height(), w = mask.width();

    // Square structuring element separates into a horizontal then a vertical
    // 1-D dilation of radius dil.
    BinaryMask horiz(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - dil);
            const int x1 = std::min(w - 1, x + dil);
            for (int xi = x0; xi <= x1; ++xi) {
                if (mask.test(y, xi)) {
                    horiz.set(y, x);
                    break;
                }
            }
        }
    }
    BinaryMask out(h, w);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - dil);
        const int y1 = std::min(h - 1, y + dil);
        for (int x = 0; x < w; ++x) {
            for (int yi = y0; yi <= y1; ++yi) {
                if (horiz.test(yi, x)) {
                    out.set(y, x);
                    break;
                }
            }
        }
    }
    return out;
}

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_size(b)) throw DimensionMismatchError("intersect: dimensions disagree");
    BinaryMask out(a.height(), a.width());
    for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] = a.raw()[i] & b.raw()[i];
    return out;
}

double overlap_fraction(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_size(b)) throw DimensionMismatchError("overlap_fraction: dimensions disagree");
    std::size_t denom = 0, inter = 0;
    for (std::size_t i = 0; i < a.raw().size(); ++i) {
        if (a.raw()[i]) {
            ++denom;
            if (b.raw()[i]) ++inter;
        }
    }
    if (denom == 0) {
        throw InvalidArgumentError("overlap_fraction: first mask is empty (undefined denominator)");
    }
    return static_cast<double>(inter) / static_cast<double>(denom);
}

const char* to_string(SafetyVerdict v) {
    switch (v) {
        case SafetyVerdict::ok: return "ok";
        case SafetyVerdict::target_conflict: return "target_conflict";
        case SafetyVerdict::trajectory_conflict: return "trajectory_conflict";
    }
    return "unknown";
}

namespace {
bool intersects(const BinaryMask& a, const BinaryMask& b) {
    for (std::size_t i = 0; i < a.raw().size(); ++i) {
        if (a.raw()[i] && b.raw()[i]) return true;
    }
    return false;
}
}  // namespace

SafetyVerdict check_edit_safety(const BinaryMask& edit_region, const BinaryMask& target_mask,
                                const BinaryMask* trajectory_footprint, bool adds_content) {
    if (!edit_region.same_size(target_mask)) {
        throw DimensionMismatchError("check_edit_safety: edit/target dimensions disagree");
    }
    if (intersects(edit_region, target_mask)) return SafetyVerdict::target_conflict;
    if (adds_content && trajectory_footprint != nullptr) {
        if (!edit_region.same_size(*trajectory_footprint)) {
            throw DimensionMismatchError("check_edit_safety: edit/footprint dimensions disagree");
        }
        if (intersects(edit_region, *trajectory_footprint)) {
            return SafetyVerdict::trajectory_conflict;
        }
    }
    return SafetyVerdict::ok;
}

std::vector<std::uint64_t> rle_encode(const BinaryMask& mask) {
    std::vector<std::uint64_t> runs;
    std::uint8_t current = 0;  // runs alternate starting with zeros
    std::uint64_t length = 0;
    for (std::uint8_t bit : mask.raw()) {
        if (bit == current) {
            ++length;
        } else {
            runs.push_back(length);
            current = bit;
            length = 1;
        }
    }
    runs.push_back(length);
    return runs;
}

BinaryMask rle_decode(std::span<const std::uint64_t> runs, int height, int width) {
    BinaryMask out(height, width);
    const std::uint64_t total = static_cast<std::uint64_t>(height) * width;
    std::uint64_t pos = 0;
    std::uint8_t value = 0;
    for (std::uint64_t run : runs) {
        if (pos + run > total) throw InvalidArgumentError("rle_decode: runs exceed raster size");
        if (value) {
            std::fill_n(out.raw().begin() + pos, run, std::uint8_t{1});
        }
        pos += run;
        value ^= 1;
    }
    if (pos != total) throw InvalidArgumentError("rle_decode: runs do not cover the raster");
    return out;
}

}  // namespace niceaug
