#include "nice/backend_stubs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "nice/errors.hpp"

namespace niceaug {

using nlohmann::json;

DetectResult AnnotationDetector::detect(const Image& image, const DetectRequest& request) {
    DetectResult result;
    const auto path = annotations_dir_ / (request.frame_id + ".detections.json");
    if (!std::filesystem::exists(path)) return result;

    std::ifstream in(path);
    json doc;
    try {
        in >> doc;
        if (!doc.is_array()) throw BackendError("sidecar is not a list", false, request.frame_id);
    } catch (const json::exception& e) {
        throw BackendError("annotation sidecar parse error at " + path.string() + ": " + e.what(),
                           /*retriable=*/false, request.frame_id);
    }

    int next_id = 0;
    try {
        for (const auto& entry : doc) {
            DetectedObject obj;
            obj.object_id = next_id++;
            obj.label = entry.at("label").get<std::string>();
            obj.bbox = BBox{entry.at("x").get<int>(), entry.at("y").get<int>(),
                            entry.at("w").get<int>(), entry.at("h").get<int>()};
            obj.detection_confidence = entry.value("score", 1.0);

            if (!obj.bbox.inside(image.height, image.width)) {
                const BBox original = obj.bbox;
                obj.bbox.x = std::clamp(obj.bbox.x, 0, image.width - 1);
                obj.bbox.y = std::clamp(obj.bbox.y, 0, image.height - 1);
                obj.bbox.w = std::clamp(obj.bbox.w, 1, image.width - obj.bbox.x);
                obj.bbox.h = std::clamp(obj.bbox.h, 1, image.height - obj.bbox.y);
                result.warnings.push_back(
                    "detection '" + obj.label + "' box (" + std::to_string(original.x) + "," +
                    std::to_string(original.y) + "," + std::to_string(original.w) + "," +
                    std::to_string(original.h) + ") clipped to image bounds");
            }
            result.objects.push_back(std::move(obj));
        }
    } catch (const json::exception& e) {
        throw BackendError("malformed detection entry in " + path.string() + ": " + e.what(),
                           /*retriable=*/false, request.frame_id);
    }
    return result;
}

BackendDescriptor AnnotationDetector::descriptor() const {
    return {BackendKind::detector, "annotation", "1", std::nullopt};
}

std::vector<SegmentResult> RectMaskSegmenter::segment(const Image& image,
                                                      const std::vector<BBox>& boxes) {
    std::vector<SegmentResult> results;
    results.reserve(boxes.size());
    for (const BBox& box : boxes) {
        BinaryMask mask(image.height, image.width);
        mask.fill_rect(box);
        results.push_back({std::move(mask), 1.0});
    }
    return results;
}

BackendDescriptor RectMaskSegmenter::descriptor() const {
    return {BackendKind::segmenter, "rect_mask", "1", std::nullopt};
}

Image ring_mean_fill(const Image& image, const BinaryMask& mask) {
    if (mask.height() != image.height || mask.width() != image.width) {
        throw DimensionMismatchError("ring_mean_fill: mask dimensions disagree");
    }
    Image out = image;
    std::vector<std::uint8_t> hole = mask.raw();
    const int h = image.height, w = image.width;

    auto index = [w](int y, int x) { return static_cast<std::size_t>(y) * w + x; };

    std::size_t remaining = std::count(hole.begin(), hole.end(), std::uint8_t{1});
    while (remaining > 0) {
        // Synchronous update: all boundary pixels of this ring read the same
        // pre-iteration state.
        std::vector<std::pair<int, int>> ring;
        std::vector<std::array<std::uint8_t, 3>> values;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!hole[index(y, x)]) continue;
                double acc[3] = {0, 0, 0};
                int count = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dy == 0 && dx == 0) continue;
                        const int ny = y + dy, nx = x + dx;
                        if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
                        if (hole[index(ny, nx)]) continue;
                        for (int c = 0; c < 3; ++c) acc[c] += out.at(ny, nx, c);
                        ++count;
                    }
                }
                if (count == 0) continue;
                ring.emplace_back(y, x);
                values.push_back({static_cast<std::uint8_t>(std::lround(acc[0] / count)),
                                  static_cast<std::uint8_t>(std::lround(acc[1] / count)),
                                  static_cast<std::uint8_t>(std::lround(acc[2] / count))});
            }
        }
        if (ring.empty()) {
            // Fully masked image: nothing to propagate from.
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    if (hole[index(y, x)]) out.set_pixel(y, x, {128, 128, 128});
                }
            }
            break;
        }
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const auto [y, x] = ring[i];
            out.set_pixel(y, x, values[i]);
            hole[index(y, x)] = 0;
        }
        remaining -= ring.size();
    }
    return out;
}

Image RingMeanFillInpainter::inpaint(const Image& image, const BinaryMask& mask) {
    return ring_mean_fill(image, mask);
}

BackendDescriptor RingMeanFillInpainter::descriptor() const {
    return {BackendKind::mask_inpainter, "ring_mean", "1", std::nullopt};
}

namespace {

const std::map<std::string, std::array<std::uint8_t, 3>>& color_table() {
    static const std::map<std::string, std::array<std::uint8_t, 3>> table = {
        {"red", {220, 40, 40}},     {"green", {40, 180, 60}},   {"blue", {40, 80, 220}},
        {"yellow", {230, 210, 40}}, {"orange", {240, 140, 30}}, {"purple", {140, 60, 180}},
        {"pink", {240, 140, 190}},  {"brown", {140, 90, 50}},   {"black", {25, 25, 25}},
        {"white", {240, 240, 240}}, {"gray", {128, 128, 128}},  {"grey", {128, 128, 128}},
        {"cyan", {60, 200, 210}},
    };
    return table;
}

std::vector<std::string> tokenize_words(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace

Image FlatColorObjectInpainter::inpaint(const Image& image, const BinaryMask& mask,
                                        const std::string& prompt) {
    std::array<std::uint8_t, 3> color = {128, 128, 128};
    for (const std::string& word : tokenize_words(prompt)) {
        auto it = color_table().find(word);
        if (it != color_table().end()) {
            color = it->second;
            break;
        }
    }

    Image out = ring_mean_fill(image, mask);
    const auto box = mask.bounding_box();
    if (!box) return out;

    // Inscribed ellipse of the mask's bounding box.
    const double cx = box->x + (box->w - 1) / 2.0;
    const double cy = box->y + (box->h - 1) / 2.0;
    const double rx = std::max(0.5, box->w / 2.0);
    const double ry = std::max(0.5, box->h / 2.0);
    for (int y = box->y; y < box->y + box->h; ++y) {
        for (int x = box->x; x < box->x + box->w; ++x) {
            if (!mask.test(y, x)) continue;
            const double nx = (x - cx) / rx, ny = (y - cy) / ry;
            if (nx * nx + ny * ny <= 1.0) out.set_pixel(y, x, color);
        }
    }
    return out;
}

BackendDescriptor FlatColorObjectInpainter::descriptor() const {
    return {BackendKind::prompted_inpainter, "flat_color", "1", std::nullopt};
}

DictionarySuggester::DictionarySuggester() {
    entries_ = {
        {"cooking pan", {"dish cloth", "a gray dish cloth folded flat", "medium"}},
        {"pan", {"dish cloth", "a gray dish cloth folded flat", "medium"}},
        {"spoon", {"fork", "a stainless steel fork", "small"}},
        {"fork", {"spoon", "a stainless steel spoon", "small"}},
        {"bowl", {"plate", "a ceramic dinner plate", "medium"}},
        {"cup", {"mug", "a ceramic coffee mug", "small"}},
        {"mug", {"glass", "a drinking glass", "small"}},
        {"bottle", {"jar", "a glass jar with a lid", "small"}},
        {"box", {"basket", "a woven storage basket", "medium"}},
        {"pot", {"colander", "a metal colander", "medium"}},
        {"towel", {"sponge", "a yellow kitchen sponge", "small"}},
        {"block", {"cube", "a painted wooden cube", "small"}},
        {"cube", {"block", "a painted wooden block", "small"}},
        {"banana", {"carrot", "an orange carrot", "small"}},
        {"orange", {"apple", "a red apple", "small"}},
        {"apple", {"orange", "an orange", "small"}},
        {"plate", {"cutting board", "a small wooden cutting board", "medium"}},
        {"brush", {"comb", "a plastic comb", "small"}},
    };
}

Suggestion DictionarySuggester::suggest(const std::string& object_label,
                                        const std::string& context) {
    (void)context;
    std::string key;
    for (char c : object_label) {
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        // Fall back to the last token ("graphite cooking pan" -> "pan").
        const auto tokens = tokenize_words(key);
        if (!tokens.empty()) it = entries_.find(tokens.back());
    }
    if (it == entries_.end()) {
        throw SuggestionError("no suggestion for label '" + object_label + "'");
    }
    return it->second;
}

BackendDescriptor DictionarySuggester::descriptor() const {
    return {BackendKind::suggester, "dictionary", "1", std::nullopt};
}

std::vector<double> color_histogram(const Image& image) {
    std::vector<double> bins(ColorHistogramExtractor::kDimensions, 0.0);
    const std::size_t pixels = static_cast<std::size_t>(image.height) * image.width;
    if (pixels == 0) return bins;
    for (std::size_t i = 0; i < image.data.size(); i += 3) {
        for (int c = 0; c < 3; ++c) {
            bins[c * 8 + image.data[i + c] / 32] += 1.0;
        }
    }
    for (double& b : bins) b /= static_cast<double>(pixels);
    return bins;
}

std::vector<std::vector<double>> ColorHistogramExtractor::embed(const std::vector<Image>& images) {
    std::vector<std::vector<double>> features;
    features.reserve(images.size());
    for (const Image& image : images) features.push_back(color_histogram(image));
    return features;
}

BackendDescriptor ColorHistogramExtractor::descriptor() const {
    return {BackendKind::feature_extractor, "color_histogram", "1", std::nullopt};
}

const char* to_string(BackendKind kind) {
    switch (kind) {
        case BackendKind::detector: return "detector";
        case BackendKind::segmenter: return "segmenter";
        case BackendKind::mask_inpainter: return "mask_inpainter";
        case BackendKind::prompted_inpainter: return "prompted_inpainter";
        case BackendKind::suggester: return "suggester";
        case BackendKind::feature_extractor: return "feature_extractor";
    }
    return "unknown";
}

}  // namespace niceaug
