#pragma once

#include <string>

#include "nice/mask.hpp"

namespace niceaug {

struct DetectedObject {
    int object_id = 0;
    std::string label;
    BBox bbox;
    double detection_confidence = 0.0;  // in [0, 1]

    bool operator==(const DetectedObject&) const = default;
};

struct SegmentedObject {
    DetectedObject base;
    BinaryMask mask;  // image dimensions
    double segmentation_confidence = 0.0;

    int object_id() const { return base.object_id; }
    const std::string& label() const { return base.label; }
};

}  // namespace niceaug
