#pragma once

#include <functional>
#include <memory>
#include <string>

#include "nice/backends.hpp"

namespace niceaug {

// Exponential backoff for retriable (transport / 5xx) failures. All requests
// here are idempotent, so every endpoint retries.
struct RetryPolicy {
    double base_delay_s = 0.5;
    double factor = 2.0;
    int max_attempts = 3;
};

struct RemoteConfig {
    std::string base_url;  // e.g. http://127.0.0.1:8501
    RetryPolicy retry;
    double min_detection_score = 0.3;  // detector-only filter
    // Injectable for tests; defaults to a real sleep.
    std::function<void(double)> sleep = {};
};

// One HTTP client per backend role. JSON bodies, UTF-8, images as base64 PNG,
// masks as row-major RLE:
//   POST /v1/detect  {image, prompt?}        -> {objects:[{x,y,w,h,label,score}]}
//   POST /v1/segment {image, boxes:[...]}    -> {masks:[{rle,score}]}
//   POST /v1/inpaint {image, mask_rle, prompt?} -> {image}
//   POST /v1/suggest {label, context}        -> {name, description, size_class}
//   POST /v1/embed   {images:[...]}          -> {features:[[...]]}
// 4xx responses are permanent, 5xx retriable; error bodies are
// {error:{code,message}}.
class RemoteClient {
  public:
    explicit RemoteClient(RemoteConfig config);
    ~RemoteClient();

    RemoteClient(const RemoteClient&) = delete;
    RemoteClient& operator=(const RemoteClient&) = delete;

    std::string post_json(const std::string& path, const std::string& body);

    const RemoteConfig& config() const { return config_; }

  private:
    RemoteConfig config_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class RemoteDetector : public Detector {
  public:
    explicit RemoteDetector(RemoteConfig config)
        : client_(std::make_shared<RemoteClient>(std::move(config))) {}

    DetectResult detect(const Image& image, const DetectRequest& request) override;
    BackendDescriptor descriptor() const override;

  private:
    std::shared_ptr<RemoteClient> client_;
};

class RemoteSegmenter : public Segmenter {
  public:
    explicit RemoteSegmenter(RemoteConfig config)
        : client_(std::make_shared<RemoteClient>(std::move(config))) {}

    std::vector<SegmentResult> segment(const Image& image,
                                       const std::vector<BBox>& boxes) override;
    BackendDescriptor descriptor() const override;

  private:
    std::shared_ptr<RemoteClient> client_;
};

class RemoteMaskInpainter : public MaskInpainter {
  public:
    explicit RemoteMaskInpainter(RemoteConfig config)
        : client_(std::make_shared<RemoteClient>(std::move(config))) {}

    Image inpaint(const Image& image, const BinaryMask& mask) override;
    BackendDescriptor descriptor() const override;

  private:
    std::shared_ptr<RemoteClient> client_;
};

class RemotePromptedInpainter : public PromptedInpainter {
  public:
    explicit RemotePromptedInpainter(RemoteConfig config)
        : client_(std::make_shared<RemoteClient>(std::move(config))) {}

    Image inpaint(const Image& image, const BinaryMask& mask, const std::string& prompt) override;
    BackendDescriptor descriptor() const override;

  private:
    std::shared_ptr<RemoteClient> client_;
};

class RemoteObjectSuggester : public ObjectSuggester {
  public:
    explicit RemoteObjectSuggester(RemoteConfig config)
        : client_(std::make_shared<RemoteClient>(std::move(config))) {}

    Suggestion suggest(const std::string& object_label, const std::string& context) override;
    BackendDescriptor descriptor() const override;

  private:
    std::shared_ptr<RemoteClient> client_;
};

class RemoteFeatureExtractor : public FeatureExtractor {
  public:
    explicit RemoteFeatureExtractor(RemoteConfig config)
        : client_(std::make_shared<RemoteClient>(std::move(config))) {}

    std::vector<std::vector<double>> embed(const std::vector<Image>& images) override;
    BackendDescriptor descriptor() const override;

  private:
    std::shared_ptr<RemoteClient> client_;
};

}  // namespace niceaug
