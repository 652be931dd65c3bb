#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nice/backends.hpp"

namespace niceaug {

// Reads `<frame_id>.detections.json` sidecars from a directory:
//   [{"x":..,"y":..,"w":..,"h":..,"label":"..","score":..}, ...]
// A missing sidecar means zero detections. Boxes reaching past the image edge
// are clipped and flagged.
class AnnotationDetector : public Detector {
  public:
    explicit AnnotationDetector(std::filesystem::path annotations_dir)
        : annotations_dir_(std::move(annotations_dir)) {}

    DetectResult detect(const Image& image, const DetectRequest& request) override;
    BackendDescriptor descriptor() const override;

  private:
    std::filesystem::path annotations_dir_;
};

// Returns each box as a filled rectangle with confidence 1.0.
class RectMaskSegmenter : public Segmenter {
  public:
    std::vector<SegmentResult> segment(const Image& image,
                                       const std::vector<BBox>& boxes) override;
    BackendDescriptor descriptor() const override;
};

// Iteratively assigns each masked boundary pixel the mean of its unmasked
// 8-neighbors until the mask is consumed. Good enough to reconstruct flat and
// gently varying backgrounds exactly or nearly so.
class RingMeanFillInpainter : public MaskInpainter {
  public:
    Image inpaint(const Image& image, const BinaryMask& mask) override;
    BackendDescriptor descriptor() const override;
};

Image ring_mean_fill(const Image& image, const BinaryMask& mask);

// Parses a color word from the prompt, fills the mask's inscribed ellipse with
// that color and the rest of the mask with ring-mean background.
class FlatColorObjectInpainter : public PromptedInpainter {
  public:
    Image inpaint(const Image& image, const BinaryMask& mask, const std::string& prompt) override;
    BackendDescriptor descriptor() const override;
};

// Fixed lookup table mapping object labels to replacement suggestions.
class DictionarySuggester : public ObjectSuggester {
  public:
    DictionarySuggester();
    explicit DictionarySuggester(std::map<std::string, Suggestion> entries)
        : entries_(std::move(entries)) {}

    Suggestion suggest(const std::string& object_label, const std::string& context) override;
    BackendDescriptor descriptor() const override;

  private:
    std::map<std::string, Suggestion> entries_;
};

// 8 bins per channel, D = 24. Each channel's bins are normalized by the pixel
// count, so a channel's mass sums to 1.
class ColorHistogramExtractor : public FeatureExtractor {
  public:
    static constexpr int kBinsPerChannel = 8;
    static constexpr int kDimensions = 24;

    std::vector<std::vector<double>> embed(const std::vector<Image>& images) override;
    BackendDescriptor descriptor() const override;
};

std::vector<double> color_histogram(const Image& image);

}  // namespace niceaug
