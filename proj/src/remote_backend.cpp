#include "nice/remote_backend.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "nice/errors.hpp"
#include "nice/image_io.hpp"

namespace niceaug {

using nlohmann::json;

struct RemoteClient::Impl {
    httplib::Client http;
    std::mutex mutex;  // httplib::Client is not safe for concurrent requests

    explicit Impl(const std::string& base_url) : http(base_url) {
        http.set_connection_timeout(10);
        http.set_read_timeout(120);
    }
};

RemoteClient::RemoteClient(RemoteConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>(config_.base_url)) {
    if (!config_.sleep) {
        config_.sleep = [](double seconds) {
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
        };
    }
}

RemoteClient::~RemoteClient() = default;

namespace {

std::string error_body_message(const std::string& body) {
    try {
        const json doc = json::parse(body);
        if (doc.contains("error")) {
            return doc["error"].value("code", "") + ": " + doc["error"].value("message", "");
        }
    } catch (const json::exception&) {
        // non-JSON error body, fall through
    }
    return body.empty() ? "(empty body)" : body;
}

}  // namespace

std::string RemoteClient::post_json(const std::string& path, const std::string& body) {
    std::string last_error;
    double delay = config_.retry.base_delay_s;

    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            config_.sleep(delay);
            delay *= config_.retry.factor;
        }
        httplib::Result res = [&] {
            std::lock_guard lock(impl_->mutex);
            return impl_->http.Post(path, body, "application/json");
        }();
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 200 && res->status < 300) return res->body;
        if (res->status >= 400 && res->status < 500) {
            throw BackendError("permanent backend error (HTTP " + std::to_string(res->status) +
                                   ") on " + path + ": " + error_body_message(res->body),
                               /*retriable=*/false);
        }
        last_error =
            "HTTP " + std::to_string(res->status) + ": " + error_body_message(res->body);
    }
    throw BackendError("backend unavailable after " + std::to_string(config_.retry.max_attempts) +
                           " attempts on " + path + ": " + last_error,
                       /*retriable=*/true);
}

namespace {

json parse_response(const std::string& body, const char* endpoint) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed response from ") + endpoint + ": " + e.what(),
                           /*retriable=*/false);
    }
}

std::string version_of(const RemoteClient& client) {
    return "remote@" + client.config().base_url;
}

}  // namespace

DetectResult RemoteDetector::detect(const Image& image, const DetectRequest& request) {
    json req = {{"image", image_to_base64_png(image)}};
    if (request.prompt) req["prompt"] = *request.prompt;

    const json resp = parse_response(client_->post_json("/v1/detect", req.dump()), "/v1/detect");
    DetectResult result;
    int next_id = 0;
    try {
        for (const auto& entry : resp.at("objects")) {
            DetectedObject obj;
            obj.object_id = next_id++;
            obj.label = entry.at("label").get<std::string>();
            obj.bbox = BBox{entry.at("x").get<int>(), entry.at("y").get<int>(),
                            entry.at("w").get<int>(), entry.at("h").get<int>()};
            obj.detection_confidence = entry.at("score").get<double>();
            if (obj.detection_confidence < client_->config().min_detection_score) continue;
            if (!obj.bbox.inside(image.height, image.width)) {
                obj.bbox.x = std::clamp(obj.bbox.x, 0, image.width - 1);
                obj.bbox.y = std::clamp(obj.bbox.y, 0, image.height - 1);
                obj.bbox.w = std::clamp(obj.bbox.w, 1, image.width - obj.bbox.x);
                obj.bbox.h = std::clamp(obj.bbox.h, 1, image.height - obj.bbox.y);
                result.warnings.push_back("detection '" + obj.label + "' clipped to image bounds");
            }
            result.objects.push_back(std::move(obj));
        }
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed response from /v1/detect: ") + e.what(),
                           /*retriable=*/false);
    }
    return result;
}

BackendDescriptor RemoteDetector::descriptor() const {
    return {BackendKind::detector, "remote", version_of(*client_), client_->config().base_url};
}

std::vector<SegmentResult> RemoteSegmenter::segment(const Image& image,
                                                    const std::vector<BBox>& boxes) {
    json req = {{"image", image_to_base64_png(image)}, {"boxes", json::array()}};
    for (const BBox& b : boxes) {
        req["boxes"].push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
    }
    const json resp = parse_response(client_->post_json("/v1/segment", req.dump()), "/v1/segment");

    std::vector<SegmentResult> results;
    try {
        for (const auto& entry : resp.at("masks")) {
            const auto runs = entry.at("rle").get<std::vector<std::uint64_t>>();
            results.push_back(
                {rle_decode(runs, image.height, image.width), entry.at("score").get<double>()});
        }
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed response from /v1/segment: ") + e.what(),
                           /*retriable=*/false);
    }
    if (results.size() != boxes.size()) {
        throw BackendError("segmenter returned " + std::to_string(results.size()) +
                               " masks for " + std::to_string(boxes.size()) + " boxes",
                           /*retriable=*/false);
    }
    return results;
}

BackendDescriptor RemoteSegmenter::descriptor() const {
    return {BackendKind::segmenter, "remote", version_of(*client_), client_->config().base_url};
}

namespace {

Image remote_inpaint(RemoteClient& client, const Image& image, const BinaryMask& mask,
                     const std::string* prompt) {
    json req = {{"image", image_to_base64_png(image)},
                {"mask_rle", rle_encode(mask)}};
    if (prompt) req["prompt"] = *prompt;
    const json resp = parse_response(client.post_json("/v1/inpaint", req.dump()), "/v1/inpaint");
    Image out;
    try {
        out = image_from_base64_png(resp.at("image").get<std::string>());
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed response from /v1/inpaint: ") + e.what(),
                           /*retriable=*/false);
    }

    // Enforce the locality contract regardless of how well the backend behaves.
    if (!out.same_size(image)) {
        throw BackendError("inpainter changed image dimensions", /*retriable=*/false);
    }
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (!mask.test(y, x)) {
                for (int c = 0; c < 3; ++c) out.at(y, x, c) = image.at(y, x, c);
            }
        }
    }
    return out;
}

}  // namespace

Image RemoteMaskInpainter::inpaint(const Image& image, const BinaryMask& mask) {
    return remote_inpaint(*client_, image, mask, nullptr);
}

BackendDescriptor RemoteMaskInpainter::descriptor() const {
    return {BackendKind::mask_inpainter, "remote", version_of(*client_),
            client_->config().base_url};
}

Image RemotePromptedInpainter::inpaint(const Image& image, const BinaryMask& mask,
                                       const std::string& prompt) {
    return remote_inpaint(*client_, image, mask, &prompt);
}

BackendDescriptor RemotePromptedInpainter::descriptor() const {
    return {BackendKind::prompted_inpainter, "remote", version_of(*client_),
            client_->config().base_url};
}

Suggestion RemoteObjectSuggester::suggest(const std::string& object_label,
                                          const std::string& context) {
    const json req = {{"label", object_label}, {"context", context}};
    const json resp = parse_response(client_->post_json("/v1/suggest", req.dump()), "/v1/suggest");
    Suggestion s;
    try {
        s.name = resp.at("name").get<std::string>();
        s.description = resp.value("description", "");
        s.size_class = resp.value("size_class", "");
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed response from /v1/suggest: ") + e.what(),
                           /*retriable=*/false);
    }
    if (s.name.empty()) throw SuggestionError("remote suggester returned an empty name");
    return s;
}

BackendDescriptor RemoteObjectSuggester::descriptor() const {
    return {BackendKind::suggester, "remote", version_of(*client_), client_->config().base_url};
}

std::vector<std::vector<double>> RemoteFeatureExtractor::embed(const std::vector<Image>& images) {
    json req = {{"images", json::array()}};
    for (const Image& image : images) req["images"].push_back(image_to_base64_png(image));
    const json resp = parse_response(client_->post_json("/v1/embed", req.dump()), "/v1/embed");
    std::vector<std::vector<double>> features;
    try {
        features = resp.at("features").get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed response from /v1/embed: ") + e.what(),
                           /*retriable=*/false);
    }
    if (features.size() != images.size()) {
        throw BackendError("embed returned " + std::to_string(features.size()) +
                               " rows for " + std::to_string(images.size()) + " images",
                           /*retriable=*/false);
    }
    return features;
}

BackendDescriptor RemoteFeatureExtractor::descriptor() const {
    return {BackendKind::feature_extractor, "remote", version_of(*client_),
            client_->config().base_url};
}

}  // namespace niceaug
