#include "nice/planner.hpp"

#include <algorithm>
#include <cmath>

#include <openssl/sha.h>

#include "nice/errors.hpp"
#include "nice/rng.hpp"
#include "nice/scene.hpp"

namespace niceaug {

using nlohmann::json;

const char* to_string(EditOperation op) {
    switch (op) {
        case EditOperation::remove: return "remove";
        case EditOperation::restyle: return "restyle";
        case EditOperation::replace: return "replace";
    }
    return "unknown";
}

EditOperation edit_operation_from_string(const std::string& s) {
    if (s == "remove") return EditOperation::remove;
    if (s == "restyle") return EditOperation::restyle;
    if (s == "replace") return EditOperation::replace;
    throw InvalidArgumentError("unknown edit operation: " + s);
}

const char* to_string(ReplacementStrategy s) {
    return s == ReplacementStrategy::same_category ? "same_category" : "suggested";
}

ReplacementStrategy replacement_strategy_from_string(const std::string& s) {
    if (s == "same_category") return ReplacementStrategy::same_category;
    if (s == "suggested") return ReplacementStrategy::suggested;
    throw InvalidArgumentError("unknown replacement strategy: " + s);
}

namespace {

json plan_fields_json(const EditPlan& plan) {
    json doc;
    doc["operation"] = to_string(plan.operation);
    doc["object_ids"] = plan.object_ids;
    doc["seed"] = plan.seed;
    doc["dil"] = plan.dil;
    json params = json::object();
    if (plan.restyle) {
        params["texture_id"] = plan.restyle->texture_id;
        params["hue_shift"] = plan.restyle->hue_shift;
        params["saturation_scale"] = plan.restyle->saturation_scale;
        params["value_scale"] = plan.restyle->value_scale;
    }
    if (plan.replace) {
        params["strategy"] = to_string(plan.replace->strategy);
        params["adjective"] = plan.replace->adjective;
        params["surface"] = plan.replace->surface_description;
    }
    doc["op_params"] = params;
    return doc;
}

}  // namespace

std::string plan_hash(const EditPlan& plan) {
    // nlohmann orders object keys, so dump() is a canonical encoding.
    const std::string canonical = plan_fields_json(plan).dump();
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(canonical.data()), canonical.size(), digest);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(16);
    for (int i = 0; i < 8; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

json plan_to_json(const EditPlan& plan) {
    json doc = plan_fields_json(plan);
    doc["plan_hash"] = plan_hash(plan);
    return doc;
}

EditPlan plan_from_json(const json& doc) {
    EditPlan plan;
    plan.operation = edit_operation_from_string(doc.at("operation").get<std::string>());
    plan.object_ids = doc.at("object_ids").get<std::vector<int>>();
    plan.seed = doc.at("seed").get<std::uint64_t>();
    plan.dil = doc.at("dil").get<int>();
    const json& params = doc.at("op_params");
    if (params.contains("texture_id")) {
        plan.restyle = RestyleParams{
            params.at("texture_id").get<std::string>(),
            params.at("hue_shift").get<double>(),
            params.at("saturation_scale").get<double>(),
            params.at("value_scale").get<double>(),
        };
    }
    if (params.contains("strategy")) {
        plan.replace = ReplaceParams{
            replacement_strategy_from_string(params.at("strategy").get<std::string>()),
            params.at("adjective").get<std::string>(),
            params.at("surface").get<std::string>(),
        };
    }
    if (doc.contains("plan_hash") && doc.at("plan_hash").get<std::string>() != plan_hash(plan)) {
        throw InvalidArgumentError("plan_hash does not match plan fields");
    }
    return plan;
}

int resolve_dil(const PlannerConfig& config, EditOperation op, int image_width) {
    std::optional<int> configured;
    switch (op) {
        case EditOperation::remove: configured = config.dil_remove; break;
        case EditOperation::restyle: configured = config.dil_restyle; break;
        case EditOperation::replace: configured = config.dil_replace; break;
    }
    if (configured) {
        if (*configured < 0) throw ConfigError("dil must be >= 0");
        return *configured;
    }
    // 7 px at 640-wide images, scaled proportionally with width.
    return static_cast<int>(std::lround(7.0 * image_width / 640.0));
}

namespace {

std::vector<int> sample_subset(SplitMix64& rng, const std::vector<int>& pool, std::size_t k) {
    std::vector<int> scratch = pool;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(scratch.size() - i));
        std::swap(scratch[i], scratch[j]);
    }
    std::vector<int> chosen(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

constexpr std::uint64_t kOpStream[] = {0x72656D6F7665ULL, 0x7265737479ULL, 0x7265706CULL};

}  // namespace

PlanBatch plan_edits(const SceneGraph& scene, const PlannerConfig& config, std::uint64_t seed) {
    if (config.variants_per_operation < 0 ||
        config.variants_per_operation > config.max_variants) {
        throw ConfigError("variants_per_operation out of range");
    }
    if (config.strategy_mix < 0.0 || config.strategy_mix > 1.0) {
        throw ConfigError("strategy_mix must be in [0,1]");
    }

    std::vector<int> candidate_ids;
    candidate_ids.reserve(scene.candidates.size());
    for (const SegmentedObject& obj : scene.candidates) candidate_ids.push_back(obj.object_id());
    std::sort(candidate_ids.begin(), candidate_ids.end());

    PlanBatch batch;
    const EditOperation all_ops[] = {EditOperation::remove, EditOperation::restyle,
                                     EditOperation::replace};
    for (EditOperation op : all_ops) {
        if (!config.operations_enabled.contains(op)) continue;
        if (op == EditOperation::replace && candidate_ids.empty()) {
            batch.warnings.push_back("scene '" + scene.frame_id +
                                     "' has no candidates; replace plans omitted");
            continue;
        }
        if (op == EditOperation::restyle && config.texture_ids.empty()) {
            batch.warnings.push_back("no textures configured; restyle plans omitted");
            continue;
        }
        for (int variant = 0; variant < config.variants_per_operation; ++variant) {
            EditPlan plan;
            plan.operation = op;
            plan.seed = split_seed(
                seed, {kOpStream[static_cast<int>(op)], static_cast<std::uint64_t>(variant)});
            plan.dil = resolve_dil(config, op, scene.image_width);

            SplitMix64 rng(plan.seed);
            switch (op) {
                case EditOperation::remove:
                case EditOperation::restyle: {
                    // "0 to n" inclusive; size-0 plans are legal no-ops.
                    const auto k = static_cast<std::size_t>(
                        rng.next_below(static_cast<std::uint64_t>(candidate_ids.size()) + 1));
                    plan.object_ids = sample_subset(rng, candidate_ids, k);
                    if (op == EditOperation::restyle) {
                        RestyleParams params;
                        params.texture_id = config.texture_ids[static_cast<std::size_t>(
                            rng.next_below(config.texture_ids.size()))];
                        params.hue_shift =
                            rng.next_in(config.hue_shift_range.first, config.hue_shift_range.second);
                        params.saturation_scale = rng.next_in(config.saturation_range.first,
                                                              config.saturation_range.second);
                        params.value_scale =
                            rng.next_in(config.value_range.first, config.value_range.second);
                        plan.restyle = params;
                    }
                    break;
                }
                case EditOperation::replace: {
                    plan.object_ids = {candidate_ids[static_cast<std::size_t>(
                        rng.next_below(candidate_ids.size()))]};
                    ReplaceParams params;
                    params.strategy = rng.next_double() < config.strategy_mix
                                          ? ReplacementStrategy::suggested
                                          : ReplacementStrategy::same_category;
                    params.adjective = config.adjectives[static_cast<std::size_t>(
                        rng.next_below(config.adjectives.size()))];
                    params.surface_description = config.surface_description;
                    plan.replace = params;
                    break;
                }
            }
            batch.plans.push_back({std::move(plan), variant});
        }
    }
    return batch;
}

}  // namespace niceaug
