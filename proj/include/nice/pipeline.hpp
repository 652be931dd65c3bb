#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nice/backends.hpp"
#include "nice/metrics.hpp"
#include "nice/planner.hpp"
#include "nice/remote_backend.hpp"

namespace niceaug {

inline constexpr const char* kRoleNames[] = {
    "detector",           "segmenter", "mask_inpainter",
    "prompted_inpainter", "suggester", "feature_extractor",
};

struct BackendRoleConfig {
    std::string implementation;  // empty = mode default
    std::optional<std::string> endpoint;
    std::optional<std::filesystem::path> annotations_dir;  // annotation detector stub
    double min_score = 0.3;
};

struct PipelineConfig {
    std::optional<std::uint64_t> seed;  // required for edit runs
    std::string backend_mode = "stub";  // stub | remote
    std::map<std::string, BackendRoleConfig> roles;
    PlannerConfig planner;
    std::optional<std::filesystem::path> texture_root;
    SsimParams ssim;
    RetryPolicy retry;
    bool overwrite = false;
    int workers = 1;
};

// Parses the structured config document; unknown keys are rejected to catch
// typos. Endpoint environment overrides (NICE_ENDPOINT_<ROLE>) are applied on
// top.
PipelineConfig parse_pipeline_config(const nlohmann::json& doc);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void apply_env_endpoint_overrides(PipelineConfig& config);

struct BackendSet {
    std::unique_ptr<Detector> detector;
    std::unique_ptr<Segmenter> segmenter;
    std::unique_ptr<MaskInpainter> mask_inpainter;
    std::unique_ptr<PromptedInpainter> prompted_inpainter;
    std::unique_ptr<ObjectSuggester> suggester;
    std::unique_ptr<FeatureExtractor> feature_extractor;
};

// dataset_root anchors the default annotation-sidecar directory.
BackendSet make_backends(const PipelineConfig& config, const std::filesystem::path& dataset_root);

struct SkipEntry {
    std::string frame_id;
    std::string reason;
};

struct ParseSummary {
    int frames = 0;
    int scenes_written = 0;
    std::vector<SkipEntry> skipped;
    std::filesystem::path report_path;
};

// One scene-graph JSON per frame under <out>/scenes/. Frames that fail target
// identification (or fail to load) land in the skip report, not in the caches.
ParseSummary cmd_parse(const std::filesystem::path& dataset_root,
                       const std::filesystem::path& out_root, const PipelineConfig& config);

struct EditSummary {
    int frames = 0;
    int plans = 0;
    int executed = 0;
    int rejected_target = 0;
    int rejected_trajectory = 0;
    std::vector<SkipEntry> skipped;
    std::vector<std::string> warnings;
    std::vector<std::filesystem::path> outputs;
};

// Plans and executes edits for every frame; scene graphs are cached under
// <out>/scenes/ and reused when present.
EditSummary cmd_edit(const std::filesystem::path& dataset_root,
                     const std::filesystem::path& out_root, const PipelineConfig& config);

struct EvalSummary {
    std::string kind;
    std::filesystem::path csv_path;
    int count = 0;
    std::map<std::string, double> headline;  // e.g. mean/median/min or per-group values
    std::vector<std::string> warnings;
};

// SSIM pairs are matched by frame_id between the two roots: a root contributes
// <root>/frames/<id>.png and/or <root>/edits/<id>/*.png.
EvalSummary cmd_eval_ssim(const std::filesystem::path& a_root,
                          const std::filesystem::path& b_root,
                          const std::filesystem::path& out_root, const PipelineConfig& config);

// Frechet distance between feature Gaussians, overall and per edit operation.
EvalSummary cmd_eval_fid(const std::filesystem::path& generated_root,
                         const std::filesystem::path& real_root,
                         const std::filesystem::path& out_root, const PipelineConfig& config);

// Samples file is JSON lines:
//   {"frame_id":..., "points":[[x,y],...], "mask_path":..., "clutter_level"?|"object_count"?}
EvalSummary cmd_eval_apa(const std::filesystem::path& samples_path,
                         const std::filesystem::path& out_root, const PipelineConfig& config);

struct ReportSummary {
    std::vector<std::filesystem::path> figures;
    std::filesystem::path summary_path;
};

// Renders figures from the metric CSVs found in a run directory.
ReportSummary cmd_report(const std::filesystem::path& run_dir);

nlohmann::json to_json(const ParseSummary& summary);
nlohmann::json to_json(const EditSummary& summary);
nlohmann::json to_json(const EvalSummary& summary);
nlohmann::json to_json(const ReportSummary& summary);

}  // namespace niceaug
