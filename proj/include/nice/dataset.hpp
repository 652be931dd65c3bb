#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nice/backends.hpp"
#include "nice/image.hpp"
#include "nice/mask.hpp"
#include "nice/planner.hpp"

namespace niceaug {

// One RGB observation plus its instruction. Robot state/action ride along as
// opaque base64 blobs and are never reinterpreted.
struct DemonstrationFrame {
    std::string frame_id;
    std::string episode_id;
    Image image;
    std::string instruction;
    std::optional<std::string> target_phrase;        // overrides heuristic extraction
    std::optional<BinaryMask> trajectory_footprint;  // same H x W when present
    std::string state_b64;
    std::string action_b64;
};

struct EditedFrame {
    std::string source_frame_id;
    Image image;
    EditPlan plan;
    int variant_index = 0;
    BinaryMask edited_region;  // the dilated union mask recorded in the plan

    // Provenance carried into the manifest.
    std::map<std::string, BackendDescriptor> backends_used;  // by role name
    std::map<int, std::string> object_labels;                // edited id -> label
    std::optional<std::string> rendered_prompt;
    std::vector<std::string> warnings;
    std::string state_b64;   // copied verbatim from the source frame
    std::string action_b64;
};

struct FrameRecord {
    std::string frame_id;
    std::string episode_id;
    std::filesystem::path image_path;
    std::filesystem::path meta_path;
    std::optional<std::filesystem::path> footprint_path;
};

struct EditRecord {
    std::string source_frame_id;
    std::string operation;
    std::string plan_hash;
    int variant_index = 0;
    std::filesystem::path image_path;
    std::filesystem::path manifest_path;
};

struct LoadIssue {
    std::string frame_id;
    std::string message;
};

struct DatasetManifest {
    std::string schema_version;
    std::vector<FrameRecord> frames;
    std::vector<EditRecord> edits;
    std::vector<LoadIssue> load_errors;  // malformed entries, reported not skipped silently
};

// Manifest plus lazy frame access. Loading never mutates files on disk.
class Dataset {
  public:
    Dataset(std::filesystem::path root, DatasetManifest manifest)
        : root_(std::move(root)), manifest_(std::move(manifest)) {}

    const std::filesystem::path& root() const { return root_; }
    const DatasetManifest& manifest() const { return manifest_; }

    const FrameRecord* find_frame(const std::string& frame_id) const;

    // Decodes the image (and footprint when present) on demand.
    DemonstrationFrame load_frame(const std::string& frame_id) const;

  private:
    std::filesystem::path root_;
    DatasetManifest manifest_;
};

// Layout: <root>/meta.json, <root>/frames/<id>.png + <id>.json,
// <root>/footprints/<id>.png (optional), <root>/edits/<id>/<op>_<hash>_<v>.png
// + matching .json. A missing meta.json is fatal; per-frame problems land in
// manifest.load_errors.
Dataset load_dataset(const std::filesystem::path& root);

struct SaveOptions {
    bool overwrite = false;
    std::string format = "png";  // anything else is rejected: edits are SSIM ground truth
};

struct SavedEdit {
    std::filesystem::path image_path;
    std::filesystem::path manifest_path;
};

SavedEdit save_edited(const EditedFrame& frame, const std::filesystem::path& root,
                      const SaveOptions& options = {});

// Reads one edit manifest + image back.
EditedFrame load_edited(const std::filesystem::path& manifest_path);

struct Violation {
    std::string kind;  // duplicate_frame_id | dimension_mismatch | dangling_edit | ...
    std::string frame_id;
    std::string message;
};

// Pure check; violations are data, not exceptions. Empty result iff valid.
std::vector<Violation> validate_dataset(const Dataset& dataset);

}  // namespace niceaug
