#include "nice/editors.hpp"

#include <algorithm>

#include "nice/errors.hpp"
#include "nice/rng.hpp"

namespace niceaug {

namespace {

const SegmentedObject& find_candidate(const SceneGraph& scene, int object_id) {
    for (const SegmentedObject& obj : scene.candidates) {
        if (obj.object_id() == object_id) return obj;
    }
    throw InvalidArgumentError("plan references object id " + std::to_string(object_id) +
                               " which is not an editable candidate");
}

struct EditGeometry {
    std::vector<const SegmentedObject*> objects;
    BinaryMask union_mask;     // undilated
    BinaryMask edited_region;  // dilate(union, plan.dil)
};

EditGeometry resolve_geometry(const SceneGraph& scene, const EditPlan& plan) {
    EditGeometry geo;
    std::vector<BinaryMask> masks;
    for (int id : plan.object_ids) {
        const SegmentedObject& obj = find_candidate(scene, id);
        geo.objects.push_back(&obj);
        masks.push_back(obj.mask);
    }
    geo.union_mask = union_masks(masks, scene.image_height, scene.image_width);
    geo.edited_region = dilate(geo.union_mask, plan.dil);
    return geo;
}

// Pixels outside the recorded region come back byte-identical to the source,
// whatever the backend did.
void enforce_locality(Image& out, const Image& source, const BinaryMask& region) {
    for (int y = 0; y < source.height; ++y) {
        for (int x = 0; x < source.width; ++x) {
            if (!region.test(y, x)) {
                for (int c = 0; c < 3; ++c) out.at(y, x, c) = source.at(y, x, c);
            }
        }
    }
}

EditedFrame make_edited(const DemonstrationFrame& frame, const EditPlan& plan, int variant_index,
                        Image image, BinaryMask region, const EditGeometry& geo) {
    EditedFrame edited;
    edited.source_frame_id = frame.frame_id;
    edited.image = std::move(image);
    edited.plan = plan;
    edited.variant_index = variant_index;
    edited.edited_region = std::move(region);
    for (const SegmentedObject* obj : geo.objects) {
        edited.object_labels[obj->object_id()] = obj->label();
    }
    edited.state_b64 = frame.state_b64;
    edited.action_b64 = frame.action_b64;
    return edited;
}

SafetyVerdict gate(const DemonstrationFrame& frame, const SceneGraph& scene,
                   const EditPlan& plan, const BinaryMask& edited_region) {
    const BinaryMask* footprint =
        frame.trajectory_footprint ? &*frame.trajectory_footprint : nullptr;
    return check_edit_safety(edited_region, scene.target.mask, footprint,
                             adds_content(plan.operation));
}

}  // namespace

std::string render_prompt(const std::string& object_name,
                          const std::string& surface_description) {
    return "a " + object_name + " on a " + surface_description;
}

std::string size_class_of(const BBox& bbox, int image_height, int image_width) {
    const double fraction = static_cast<double>(bbox.area()) /
                            (static_cast<double>(image_height) * image_width);
    if (fraction <= 0.02) return "small";
    if (fraction <= 0.10) return "medium";
    return "large";
}

EditResult remove_objects(const DemonstrationFrame& frame, const SceneGraph& scene,
                          const EditPlan& plan, MaskInpainter& inpainter, int variant_index) {
    if (plan.operation != EditOperation::remove) {
        throw InvalidArgumentError("remove_objects called with a non-remove plan");
    }
    const EditGeometry geo = resolve_geometry(scene, plan);
    const SafetyVerdict verdict = gate(frame, scene, plan, geo.edited_region);
    if (verdict != SafetyVerdict::ok) return {verdict, std::nullopt};

    Image out = frame.image;
    if (geo.edited_region.any()) {
        out = inpainter.inpaint(frame.image, geo.edited_region);
        enforce_locality(out, frame.image, geo.edited_region);
    }
    EditResult result;
    result.frame = make_edited(frame, plan, variant_index, std::move(out), geo.edited_region, geo);
    result.frame->backends_used["mask_inpainter"] = inpainter.descriptor();
    return result;
}

EditResult restyle_objects(const DemonstrationFrame& frame, const SceneGraph& scene,
                           const EditPlan& plan, const TextureStore& textures,
                           int variant_index) {
    if (plan.operation != EditOperation::restyle) {
        throw InvalidArgumentError("restyle_objects called with a non-restyle plan");
    }
    if (!plan.restyle) throw InvalidArgumentError("restyle plan without restyle parameters");
    const RestyleParams& params = *plan.restyle;
    const TextureRecord& texture = textures.get(params.texture_id);

    const EditGeometry geo = resolve_geometry(scene, plan);
    const SafetyVerdict verdict = gate(frame, scene, plan, geo.edited_region);
    if (verdict != SafetyVerdict::ok) return {verdict, std::nullopt};

    Image out = frame.image;
    constexpr double kShadingAlpha = 0.6;  // share of original value kept
    for (const SegmentedObject* obj : geo.objects) {
        const BBox& box = obj->base.bbox;
        const auto maybe_tight = obj->mask.bounding_box();
        if (!maybe_tight) continue;
        for (int y = maybe_tight->y; y < maybe_tight->y + maybe_tight->h; ++y) {
            for (int x = maybe_tight->x; x < maybe_tight->x + maybe_tight->w; ++x) {
                if (!obj->mask.test(y, x)) continue;
                // Texture tiled to the object's box.
                const int ty = ((y - box.y) % texture.image.height + texture.image.height) %
                               texture.image.height;
                const int tx = ((x - box.x) % texture.image.width + texture.image.width) %
                               texture.image.width;
                const Hsv orig = rgb_to_hsv(frame.image.at(y, x, 0), frame.image.at(y, x, 1),
                                            frame.image.at(y, x, 2));
                const Hsv tex = rgb_to_hsv(texture.image.at(ty, tx, 0),
                                           texture.image.at(ty, tx, 1),
                                           texture.image.at(ty, tx, 2));
                Hsv mixed;
                mixed.h = tex.h;
                mixed.s = tex.s;
                mixed.v = kShadingAlpha * orig.v + (1.0 - kShadingAlpha) * tex.v;
                // Jitter inside the mask, in the same pass to avoid double
                // quantization.
                mixed.h += params.hue_shift;
                mixed.s = std::clamp(mixed.s * params.saturation_scale, 0.0, 1.0);
                mixed.v = std::clamp(mixed.v * params.value_scale, 0.0, 1.0);
                out.set_pixel(y, x, hsv_to_rgb(mixed));
            }
        }
    }
    enforce_locality(out, frame.image, geo.union_mask);

    EditResult result;
    result.frame = make_edited(frame, plan, variant_index, std::move(out), geo.edited_region, geo);
    return result;
}

EditResult replace_object(const DemonstrationFrame& frame, const SceneGraph& scene,
                          const EditPlan& plan, PromptedInpainter& inpainter,
                          ObjectSuggester& suggester, int variant_index) {
    if (plan.operation != EditOperation::replace) {
        throw InvalidArgumentError("replace_object called with a non-replace plan");
    }
    if (plan.object_ids.size() != 1) {
        throw InvalidArgumentError("replace plans exchange exactly one object at a time");
    }
    if (!plan.replace) throw InvalidArgumentError("replace plan without replace parameters");
    const ReplaceParams& params = *plan.replace;

    const EditGeometry geo = resolve_geometry(scene, plan);
    const SafetyVerdict verdict = gate(frame, scene, plan, geo.edited_region);
    if (verdict != SafetyVerdict::ok) return {verdict, std::nullopt};

    const SegmentedObject& object = *geo.objects.front();
    std::vector<std::string> warnings;
    bool suggester_used = false;

    ReplacementPrompt prompt;
    prompt.surface_description = params.surface_description;
    if (params.strategy == ReplacementStrategy::suggested) {
        std::string context = "instruction: " + frame.instruction + "; objects:";
        for (const SegmentedObject& other : scene.candidates) {
            context += " " + other.label();
        }
        try {
            const Suggestion suggestion = suggester.suggest(object.label(), context);
            const std::string wanted =
                size_class_of(object.base.bbox, scene.image_height, scene.image_width);
            if (suggestion.name.empty()) {
                throw SuggestionError("empty suggestion name");
            }
            if (suggestion.size_class != wanted) {
                throw SuggestionError("suggestion '" + suggestion.name + "' is " +
                                      suggestion.size_class + " but the original is " + wanted);
            }
            prompt.object_name = suggestion.name;
            prompt.object_description = suggestion.description;
            suggester_used = true;
        } catch (const SuggestionError& e) {
            warnings.push_back(std::string("suggester_fallback: ") + e.what());
        }
    }
    if (prompt.object_name.empty()) {
        // Same-category: the original label with a sampled appearance word.
        prompt.object_name = params.adjective + " " + object.label();
        prompt.object_description = "a " + params.adjective + " " + object.label();
    }
    prompt.rendered_prompt = render_prompt(prompt.object_name, prompt.surface_description);

    Image out = inpainter.inpaint(frame.image, geo.edited_region, prompt.rendered_prompt);
    enforce_locality(out, frame.image, geo.edited_region);

    EditResult result;
    result.frame = make_edited(frame, plan, variant_index, std::move(out), geo.edited_region, geo);
    result.frame->rendered_prompt = prompt.rendered_prompt;
    result.frame->warnings = std::move(warnings);
    result.frame->backends_used["prompted_inpainter"] = inpainter.descriptor();
    if (suggester_used) result.frame->backends_used["suggester"] = suggester.descriptor();
    return result;
}

}  // namespace niceaug
