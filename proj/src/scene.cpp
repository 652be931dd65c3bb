#include "nice/scene.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "nice/errors.hpp"

namespace niceaug {

using nlohmann::json;

namespace {

std::set<std::string> normalized_tokens(const std::string& text) {
    std::set<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            tokens.insert(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.insert(std::move(current));
    return tokens;
}

// Command words stripped when falling back to the raw instruction.
const std::set<std::string>& instruction_stopwords() {
    static const std::set<std::string> words = {
        "pick", "up",   "put",  "place", "move", "push", "pull", "grab", "take",
        "lift", "set",  "the",  "a",     "an",   "on",   "onto", "to",   "in",
        "into", "of",   "and",  "with",  "near", "next", "then", "it",   "from",
        "down", "over", "under"};
    return words;
}

bool mask_within_box_tolerance(const BinaryMask& mask, const BBox& box, int tolerance) {
    const auto tight = mask.bounding_box();
    if (!tight) return true;
    return tight->x >= box.x - tolerance && tight->y >= box.y - tolerance &&
           tight->x + tight->w <= box.x + box.w + tolerance &&
           tight->y + tight->h <= box.y + box.h + tolerance;
}

}  // namespace

ParsedObjects parse_objects(const DemonstrationFrame& frame, Detector& detector,
                            Segmenter& segmenter) {
    ParsedObjects result;
    DetectRequest request;
    request.frame_id = frame.frame_id;
    DetectResult detections;
    try {
        detections = detector.detect(frame.image, request);
    } catch (const BackendError& e) {
        throw BackendError(std::string("detector failed: ") + e.what(), e.retriable(),
                           frame.frame_id);
    }
    result.warnings = detections.warnings;
    if (detections.objects.empty()) return result;

    std::vector<BBox> boxes;
    boxes.reserve(detections.objects.size());
    for (const DetectedObject& obj : detections.objects) boxes.push_back(obj.bbox);

    std::vector<SegmentResult> segments;
    try {
        segments = segmenter.segment(frame.image, boxes);
    } catch (const BackendError& e) {
        throw BackendError(std::string("segmenter failed: ") + e.what(), e.retriable(),
                           frame.frame_id);
    }
    if (segments.size() != detections.objects.size()) {
        throw BackendError("segmenter returned a result count that does not match its boxes",
                           /*retriable=*/false, frame.frame_id);
    }

    for (std::size_t i = 0; i < segments.size(); ++i) {
        const DetectedObject& det = detections.objects[i];
        SegmentResult& seg = segments[i];
        if (seg.mask.height() != frame.image.height || seg.mask.width() != frame.image.width) {
            result.warnings.push_back("object '" + det.label +
                                      "' dropped: mask dimensions disagree with the image");
            continue;
        }
        if (!seg.mask.any()) {
            result.warnings.push_back("object '" + det.label + "' dropped: empty mask");
            continue;
        }
        // Real segmenters smooth boundaries; allow 2 px of spill before
        // declaring the mask invalid.
        if (!mask_within_box_tolerance(seg.mask, det.bbox, 2)) {
            result.warnings.push_back("object '" + det.label +
                                      "' dropped: mask spills more than 2 px past its box");
            continue;
        }
        result.objects.push_back({det, std::move(seg.mask), seg.confidence});
    }
    return result;
}

int identify_target(const std::vector<SegmentedObject>& objects, const std::string& instruction,
                    const std::optional<std::string>& target_phrase,
                    const std::string& frame_id) {
    if (objects.empty()) {
        throw TargetNotFoundError(frame_id, "no objects to identify a target among");
    }

    std::set<std::string> phrase_tokens;
    if (target_phrase && !target_phrase->empty()) {
        phrase_tokens = normalized_tokens(*target_phrase);
    } else {
        for (const std::string& token : normalized_tokens(instruction)) {
            if (!instruction_stopwords().contains(token)) phrase_tokens.insert(token);
        }
    }

    int best_id = -1;
    std::size_t best_overlap = 0;
    double best_confidence = -1.0;
    for (const SegmentedObject& obj : objects) {
        std::size_t overlap = 0;
        for (const std::string& token : normalized_tokens(obj.label())) {
            if (phrase_tokens.contains(token)) ++overlap;
        }
        if (overlap == 0) continue;
        const bool better =
            overlap > best_overlap ||
            (overlap == best_overlap && obj.base.detection_confidence > best_confidence) ||
            (overlap == best_overlap && obj.base.detection_confidence == best_confidence &&
             obj.object_id() < best_id);
        if (better) {
            best_id = obj.object_id();
            best_overlap = overlap;
            best_confidence = obj.base.detection_confidence;
        }
    }
    if (best_id < 0) {
        throw TargetNotFoundError(frame_id,
                                  "no detected object overlaps the target phrase in: '" +
                                      (target_phrase ? *target_phrase : instruction) + "'");
    }
    return best_id;
}

SizePartition filter_large_objects(std::vector<SegmentedObject> objects, int image_height,
                                   int image_width, double threshold) {
    if (threshold <= 0.0 || threshold > 1.0) {
        throw InvalidArgumentError("filter_large_objects: threshold must be in (0,1]");
    }
    SizePartition partition;
    for (SegmentedObject& obj : objects) {
        const bool oversized = obj.base.bbox.w > threshold * image_width ||
                               obj.base.bbox.h > threshold * image_height;
        (oversized ? partition.excluded : partition.kept).push_back(std::move(obj));
    }
    return partition;
}

SceneGraph build_scene_graph(const DemonstrationFrame& frame, Detector& detector,
                             Segmenter& segmenter) {
    ParsedObjects parsed = parse_objects(frame, detector, segmenter);

    SceneGraph scene;
    scene.frame_id = frame.frame_id;
    scene.image_height = frame.image.height;
    scene.image_width = frame.image.width;
    scene.warnings = std::move(parsed.warnings);

    const int target_id =
        identify_target(parsed.objects, frame.instruction, frame.target_phrase, frame.frame_id);

    std::vector<SegmentedObject> rest;
    for (SegmentedObject& obj : parsed.objects) {
        if (obj.object_id() == target_id) {
            scene.target = std::move(obj);
        } else {
            rest.push_back(std::move(obj));
        }
    }
    SizePartition partition =
        filter_large_objects(std::move(rest), scene.image_height, scene.image_width);
    scene.candidates = std::move(partition.kept);
    scene.excluded_large = std::move(partition.excluded);
    return scene;
}

namespace {

json object_to_json(const SegmentedObject& obj) {
    return {
        {"object_id", obj.object_id()},
        {"label", obj.label()},
        {"bbox", {obj.base.bbox.x, obj.base.bbox.y, obj.base.bbox.w, obj.base.bbox.h}},
        {"detection_confidence", obj.base.detection_confidence},
        {"segmentation_confidence", obj.segmentation_confidence},
        {"mask_rle", rle_encode(obj.mask)},
    };
}

SegmentedObject object_from_json(const json& doc, int height, int width) {
    SegmentedObject obj;
    obj.base.object_id = doc.at("object_id").get<int>();
    obj.base.label = doc.at("label").get<std::string>();
    const auto& b = doc.at("bbox");
    obj.base.bbox = BBox{b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                         b.at(3).get<int>()};
    obj.base.detection_confidence = doc.at("detection_confidence").get<double>();
    obj.segmentation_confidence = doc.at("segmentation_confidence").get<double>();
    obj.mask = rle_decode(doc.at("mask_rle").get<std::vector<std::uint64_t>>(), height, width);
    return obj;
}

}  // namespace

json scene_to_json(const SceneGraph& scene) {
    json doc;
    doc["frame_id"] = scene.frame_id;
    doc["image_size"] = {scene.image_height, scene.image_width};
    doc["target"] = object_to_json(scene.target);
    doc["candidates"] = json::array();
    for (const auto& obj : scene.candidates) doc["candidates"].push_back(object_to_json(obj));
    doc["excluded_large"] = json::array();
    for (const auto& obj : scene.excluded_large) {
        doc["excluded_large"].push_back(object_to_json(obj));
    }
    doc["warnings"] = scene.warnings;
    return doc;
}

SceneGraph scene_from_json(const json& doc) {
    SceneGraph scene;
    scene.frame_id = doc.at("frame_id").get<std::string>();
    scene.image_height = doc.at("image_size").at(0).get<int>();
    scene.image_width = doc.at("image_size").at(1).get<int>();
    scene.target = object_from_json(doc.at("target"), scene.image_height, scene.image_width);
    for (const auto& entry : doc.at("candidates")) {
        scene.candidates.push_back(object_from_json(entry, scene.image_height, scene.image_width));
    }
    for (const auto& entry : doc.at("excluded_large")) {
        scene.excluded_large.push_back(
            object_from_json(entry, scene.image_height, scene.image_width));
    }
    scene.warnings = doc.value("warnings", std::vector<std::string>{});
    return scene;
}

}  // namespace niceaug
