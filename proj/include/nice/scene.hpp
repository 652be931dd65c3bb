#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nice/backends.hpp"
#include "nice/dataset.hpp"
#include "nice/detection.hpp"

namespace niceaug {

// Per-frame decomposition into the target (never edited), editable candidates,
// and size-excluded objects.
struct SceneGraph {
    std::string frame_id;
    int image_height = 0;
    int image_width = 0;
    SegmentedObject target;
    std::vector<SegmentedObject> candidates;
    std::vector<SegmentedObject> excluded_large;
    std::vector<std::string> warnings;  // dropped detections etc.
};

struct ParsedObjects {
    std::vector<SegmentedObject> objects;
    std::vector<std::string> warnings;
};

// Detect then segment. Detections whose masks come back empty or spill more
// than 2 px past their box are dropped with a warning record.
ParsedObjects parse_objects(const DemonstrationFrame& frame, Detector& detector,
                            Segmenter& segmenter);

// Normalized-token overlap between the target phrase (or, failing that, the
// instruction minus common command words) and object labels. Ties break toward
// higher detection confidence, then lower object id. Throws TargetNotFoundError
// when nothing overlaps: such frames are skipped, never edited blind.
int identify_target(const std::vector<SegmentedObject>& objects, const std::string& instruction,
                    const std::optional<std::string>& target_phrase,
                    const std::string& frame_id = {});

constexpr double kLargeObjectThreshold = 0.40;

struct SizePartition {
    std::vector<SegmentedObject> kept;
    std::vector<SegmentedObject> excluded;
};

// Excluded iff bbox.w > threshold*W or bbox.h > threshold*H (strict: a box
// exactly at the threshold is kept).
SizePartition filter_large_objects(std::vector<SegmentedObject> objects, int image_height,
                                   int image_width, double threshold = kLargeObjectThreshold);

// parse -> identify target -> size-filter the non-target remainder. The size
// filter never applies to the target itself.
SceneGraph build_scene_graph(const DemonstrationFrame& frame, Detector& detector,
                             Segmenter& segmenter);

nlohmann::json scene_to_json(const SceneGraph& scene);
SceneGraph scene_from_json(const nlohmann::json& doc);

}  // namespace niceaug
