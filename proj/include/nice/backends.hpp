#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nice/detection.hpp"
#include "nice/image.hpp"
#include "nice/mask.hpp"

namespace niceaug {

// The five model roles sit behind these interfaces. Stub implementations are
// deterministic and run offline; remote implementations speak the HTTP wire
// protocol in remote_backend.hpp. Conformance tests run against both.

enum class BackendKind {
    detector,
    segmenter,
    mask_inpainter,
    prompted_inpainter,
    suggester,
    feature_extractor,
};

const char* to_string(BackendKind kind);

struct BackendDescriptor {
    BackendKind kind = BackendKind::detector;
    std::string implementation_id;
    std::string version;
    std::optional<std::string> endpoint;  // required iff the implementation is remote
};

struct DetectRequest {
    std::string frame_id;  // lets annotation-backed stubs find their sidecar
    std::optional<std::string> prompt;
};

struct DetectResult {
    std::vector<DetectedObject> objects;
    std::vector<std::string> warnings;  // e.g. boxes clipped to the image
};

class Detector {
  public:
    virtual ~Detector() = default;
    virtual DetectResult detect(const Image& image, const DetectRequest& request) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

struct SegmentResult {
    BinaryMask mask;
    double confidence = 0.0;
};

class Segmenter {
  public:
    virtual ~Segmenter() = default;
    // One result per box, same order.
    virtual std::vector<SegmentResult> segment(const Image& image,
                                               const std::vector<BBox>& boxes) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

class MaskInpainter {
  public:
    virtual ~MaskInpainter() = default;
    // Pixels where the mask is false come back byte-identical.
    virtual Image inpaint(const Image& image, const BinaryMask& mask) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

class PromptedInpainter {
  public:
    virtual ~PromptedInpainter() = default;
    virtual Image inpaint(const Image& image, const BinaryMask& mask,
                          const std::string& prompt) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

struct Suggestion {
    std::string name;
    std::string description;
    std::string size_class;  // "small" | "medium" | "large"
};

class ObjectSuggester {
  public:
    virtual ~ObjectSuggester() = default;
    // Throws SuggestionError when no usable suggestion exists.
    virtual Suggestion suggest(const std::string& object_label, const std::string& context) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

class FeatureExtractor {
  public:
    virtual ~FeatureExtractor() = default;
    // N x D feature matrix, row i for images[i]. D is fixed per implementation.
    virtual std::vector<std::vector<double>> embed(const std::vector<Image>& images) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

}  // namespace niceaug
