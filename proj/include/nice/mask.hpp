#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace niceaug {

struct BBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const BBox&) const = default;
    bool inside(int image_h, int image_w) const {
        return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= image_w && y + h <= image_h;
    }
    std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
};

// 2-D boolean raster, row-major. The currency of all edit geometry.
class BinaryMask {
  public:
    BinaryMask() = default;
    BinaryMask(int h, int w) : height_(h), width_(w), bits_(static_cast<std::size_t>(h) * w, 0) {}

    int height() const { return height_; }
    int width() const { return width_; }
    bool empty_raster() const { return bits_.empty(); }

    bool test(int y, int x) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int y, int x, bool v = true) {
        bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
    }

    std::size_t popcount() const;
    bool any() const { return popcount() > 0; }
    bool same_size(const BinaryMask& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

    void fill_rect(const BBox& box, bool v = true);

    // Tight bounding box of the set pixels; nullopt when the mask is empty.
    std::optional<BBox> bounding_box() const;

    const std::vector<std::uint8_t>& raw() const { return bits_; }
    std::vector<std::uint8_t>& raw() { return bits_; }

    bool operator==(const BinaryMask&) const = default;

  private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> bits_;  // 0 or 1 per pixel
};

// Pixel-wise OR. All masks must share dimensions; the union of an empty list is
// the all-false mask of the requested dimensions.
BinaryMask union_masks(std::span<const BinaryMask> masks, int height, int width);

// Morphological dilation with a (2*dil+1)^2 square structuring element,
// clipped at the borders. dil = 0 is the identity.
BinaryMask dilate(const BinaryMask& mask, int dil);

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b);

// |a AND b| / |a|. Errors when popcount(a) == 0.
double overlap_fraction(const BinaryMask& a, const BinaryMask& b);

enum class SafetyVerdict { ok, target_conflict, trajectory_conflict };

const char* to_string(SafetyVerdict v);

// Action-label consistency gate. Any intersection with the target rejects the
// edit. The trajectory footprint only blocks content-adding operations
// (restyle/replace): removing an object cannot obstruct a recorded motion.
SafetyVerdict check_edit_safety(const BinaryMask& edit_region, const BinaryMask& target_mask,
                                const BinaryMask* trajectory_footprint, bool adds_content);

// Row-major RLE over the flattened raster: alternating run lengths starting
// with a zero-run (possibly of length 0). A 4-pixel raster [0,1,1,0] -> [1,2,1].
std::vector<std::uint64_t> rle_encode(const BinaryMask& mask);
BinaryMask rle_decode(std::span<const std::uint64_t> runs, int height, int width);

}  // namespace niceaug
