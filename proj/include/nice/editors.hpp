#pragma once

#include <optional>
#include <string>

#include "nice/backends.hpp"
#include "nice/dataset.hpp"
#include "nice/planner.hpp"
#include "nice/scene.hpp"
#include "nice/textures.hpp"

namespace niceaug {

// Structured prompt for replacement inpainting.
struct ReplacementPrompt {
    std::string object_name;
    std::string object_description;
    std::string surface_description;
    std::string rendered_prompt;  // nonempty; contains object_name
};

// surface_description is a bare noun phrase ("wooden table"); the template
// supplies the articles: "a <object> on a <surface>".
std::string render_prompt(const std::string& object_name, const std::string& surface_description);

// Bounding-box area class relative to the image: <= 2% small, <= 10% medium,
// else large. Used to gate suggester output lexically.
std::string size_class_of(const BBox& bbox, int image_height, int image_width);

struct EditResult {
    SafetyVerdict verdict = SafetyVerdict::ok;
    std::optional<EditedFrame> frame;  // engaged iff verdict == ok

    bool accepted() const { return verdict == SafetyVerdict::ok; }
};

// Mask out the (dilated) union of the selected objects and fill it with
// background content. An empty selection returns the source image unchanged.
EditResult remove_objects(const DemonstrationFrame& frame, const SceneGraph& scene,
                          const EditPlan& plan, MaskInpainter& inpainter, int variant_index = 0);

// Re-texture each selected object in place (undilated masks): chroma comes
// from the tiled texture, value keeps 60% of the original shading, then the
// plan's HSV jitter is applied inside the mask.
EditResult restyle_objects(const DemonstrationFrame& frame, const SceneGraph& scene,
                           const EditPlan& plan, const TextureStore& textures,
                           int variant_index = 0);

// Replace exactly one object via prompted inpainting. The suggested strategy
// asks the suggester for a similar-size household object and falls back to
// same-category (with a manifest warning) when the suggestion is unusable.
EditResult replace_object(const DemonstrationFrame& frame, const SceneGraph& scene,
                          const EditPlan& plan, PromptedInpainter& inpainter,
                          ObjectSuggester& suggester, int variant_index = 0);

}  // namespace niceaug
