#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace niceaug {

struct SceneGraph;

enum class EditOperation { remove, restyle, replace };

const char* to_string(EditOperation op);
EditOperation edit_operation_from_string(const std::string& s);
inline bool adds_content(EditOperation op) { return op != EditOperation::remove; }

enum class ReplacementStrategy { same_category, suggested };

const char* to_string(ReplacementStrategy s);
ReplacementStrategy replacement_strategy_from_string(const std::string& s);

struct RestyleParams {
    std::string texture_id;
    double hue_shift = 0.0;         // fraction of the hue circle, [-0.5, 0.5)
    double saturation_scale = 1.0;  // > 0
    double value_scale = 1.0;       // > 0

    bool operator==(const RestyleParams&) const = default;
};

struct ReplaceParams {
    ReplacementStrategy strategy = ReplacementStrategy::same_category;
    std::string adjective;            // appearance word for same-category prompts
    std::string surface_description;  // e.g. "wooden table"

    bool operator==(const ReplaceParams&) const = default;
};

// Fully serialized description of one edit. Replaying a plan is deterministic
// up to backend output.
struct EditPlan {
    EditOperation operation = EditOperation::remove;
    std::vector<int> object_ids;  // candidate ids only; ascending
    std::uint64_t seed = 0;
    int dil = 0;
    std::optional<RestyleParams> restyle;
    std::optional<ReplaceParams> replace;

    bool operator==(const EditPlan&) const = default;
};

// Stable 16-hex-char digest (truncated SHA-256 of the canonical JSON encoding)
// of every plan field. Platform independent.
std::string plan_hash(const EditPlan& plan);

nlohmann::json plan_to_json(const EditPlan& plan);  // includes "plan_hash"
EditPlan plan_from_json(const nlohmann::json& doc);

struct PlannerConfig {
    int variants_per_operation = 2;
    int max_variants = 64;
    std::set<EditOperation> operations_enabled = {EditOperation::remove, EditOperation::restyle,
                                                  EditOperation::replace};
    // Probability that a replace plan uses the suggested strategy rather than
    // same-category.
    double strategy_mix = 0.5;

    // Explicit dilation per operation; unset means round(7 * W / 640), except
    // restyle which defaults to 0 (restyling must not bleed onto background).
    std::optional<int> dil_remove;
    std::optional<int> dil_restyle = 0;
    std::optional<int> dil_replace;

    std::pair<double, double> hue_shift_range = {-0.1, 0.1};
    std::pair<double, double> saturation_range = {0.7, 1.3};
    std::pair<double, double> value_range = {0.7, 1.3};

    std::vector<std::string> texture_ids;  // filled from the texture store
    std::vector<std::string> adjectives = {
        "red",   "blue",    "green",   "yellow",  "orange", "purple",
        "black", "white",   "gray",    "pink",    "wooden", "metallic",
        "plastic", "ceramic", "striped", "dotted",
    };
    std::string surface_description = "wooden table";
};

struct PlannedEdit {
    EditPlan plan;
    int variant_index = 0;  // within the plan's operation
};

struct PlanBatch {
    std::vector<PlannedEdit> plans;
    std::vector<std::string> warnings;
};

// Sample reproducible plans: for each enabled operation,
// `variants_per_operation` plans. remove/restyle draw a subset of candidates of
// size uniform in {0..n}; replace draws exactly one candidate (omitted, with a
// warning, when there are none). Identical (scene, config, seed) inputs yield
// identical plans.
PlanBatch plan_edits(const SceneGraph& scene, const PlannerConfig& config, std::uint64_t seed);

// Effective dilation radius for an operation at a given image width.
int resolve_dil(const PlannerConfig& config, EditOperation op, int image_width);

}  // namespace niceaug
