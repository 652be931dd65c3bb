#include <doctest.h>

#include <cmath>

#include "nice/backend_stubs.hpp"
#include "nice/editors.hpp"
#include "nice/errors.hpp"
#include "nice/metrics.hpp"
#include "nice/rng.hpp"
#include "support/synthetic.hpp"

using namespace niceaug;
using test_support::frame_for;
using test_support::make_synthetic_scene;
using test_support::scene_graph_for;
using test_support::SyntheticScene;

namespace {

// Paints the whole mask one flat color: the simplest conforming
// PromptedInpainter, handy for byte-exact editor contracts.
class BlueFillInpainter : public PromptedInpainter {
  public:
    Image inpaint(const Image& image, const BinaryMask& mask, const std::string&) override {
        Image out = image;
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                if (mask.test(y, x)) out.set_pixel(y, x, {0, 0, 255});
            }
        }
        return out;
    }
    BackendDescriptor descriptor() const override {
        return {BackendKind::prompted_inpainter, "blue_fill", "1", std::nullopt};
    }
};

EditPlan remove_plan(std::vector<int> ids, int dil = 2, std::uint64_t seed = 5) {
    EditPlan plan;
    plan.operation = EditOperation::remove;
    plan.object_ids = std::move(ids);
    plan.seed = seed;
    plan.dil = dil;
    return plan;
}

EditPlan restyle_plan(std::vector<int> ids, RestyleParams params) {
    EditPlan plan;
    plan.operation = EditOperation::restyle;
    plan.object_ids = std::move(ids);
    plan.seed = 6;
    plan.dil = 0;
    plan.restyle = std::move(params);
    return plan;
}

EditPlan replace_plan(int id, ReplaceParams params, int dil = 2) {
    EditPlan plan;
    plan.operation = EditOperation::replace;
    plan.object_ids = {id};
    plan.seed = 7;
    plan.dil = dil;
    plan.replace = std::move(params);
    return plan;
}

void check_outside_unchanged(const Image& source, const EditedFrame& edited) {
    REQUIRE(edited.image.same_size(source));
    for (int y = 0; y < source.height; ++y) {
        for (int x = 0; x < source.width; ++x) {
            if (!edited.edited_region.test(y, x)) {
                REQUIRE(edited.image.pixel(y, x) == source.pixel(y, x));
            }
        }
    }
}

}  // namespace

TEST_CASE("remove: an empty selection returns the source unchanged") {
    const SyntheticScene synthetic = make_synthetic_scene(21);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    RingMeanFillInpainter inpainter;

    const EditResult result = remove_objects(frame, scene, remove_plan({}), inpainter);
    REQUIRE(result.accepted());
    CHECK(result.frame->image == frame.image);
    CHECK(result.frame->edited_region.popcount() == 0);
    CHECK(result.frame->state_b64 == frame.state_b64);
}

TEST_CASE("remove: synthetic scene reconstruction scores high SSIM vs the clean render") {
    // Uniform background + one red square, mean-fill stub: the hole fills with
    // the exact background color, so SSIM vs. the clean render is ~1.
    const SyntheticScene synthetic = make_synthetic_scene(22, 120, 160, 3, false);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    RingMeanFillInpainter inpainter;

    const int candidate_id = scene.candidates.front().object_id();
    const EditResult result =
        remove_objects(frame, scene, remove_plan({candidate_id}), inpainter);
    REQUIRE(result.accepted());

    const Image clean = synthetic.render_without(static_cast<std::size_t>(candidate_id));
    const double score = ssim(to_gray(result.frame->image), to_gray(clean));
    CHECK(score > 0.95);
}

TEST_CASE("remove: a plan whose dilated region touches the target is rejected") {
    // Build a scene where a candidate sits 1 px from the target, then dilate
    // enough to overlap.
    SceneGraph scene;
    scene.frame_id = "f";
    scene.image_height = 64;
    scene.image_width = 64;
    SegmentedObject target;
    target.base = {0, "blue cube", {30, 30, 6, 6}, 0.9};
    target.mask = BinaryMask(64, 64);
    target.mask.fill_rect(target.base.bbox);
    scene.target = target;
    SegmentedObject near_candidate;
    near_candidate.base = {1, "bowl", {37, 30, 6, 6}, 0.9};  // 1 px gap
    near_candidate.mask = BinaryMask(64, 64);
    near_candidate.mask.fill_rect(near_candidate.base.bbox);
    scene.candidates.push_back(near_candidate);

    DemonstrationFrame frame;
    frame.frame_id = "f";
    frame.image = Image(64, 64);
    RingMeanFillInpainter inpainter;

    const EditResult rejected = remove_objects(frame, scene, remove_plan({1}, 2), inpainter);
    CHECK(!rejected.accepted());
    CHECK(rejected.verdict == SafetyVerdict::target_conflict);
    CHECK(!rejected.frame.has_value());

    const EditResult accepted = remove_objects(frame, scene, remove_plan({1}, 0), inpainter);
    CHECK(accepted.accepted());
}

TEST_CASE("restyle: identity texture and identity jitter reproduce the object exactly") {
    const SyntheticScene synthetic = make_synthetic_scene(23, 120, 160, 2);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    SceneGraph scene = scene_graph_for(synthetic, "f");

    // Texture = the object's own bbox crop, tiled at the bbox origin.
    const SegmentedObject& obj = scene.candidates.front();
    TextureRecord identity;
    identity.texture_id = "self";
    identity.category = "identity";
    identity.image = Image(std::max(32, obj.base.bbox.h), std::max(32, obj.base.bbox.w));
    for (int y = 0; y < identity.image.height; ++y) {
        for (int x = 0; x < identity.image.width; ++x) {
            const int sy = std::min(frame.image.height - 1, obj.base.bbox.y + y);
            const int sx = std::min(frame.image.width - 1, obj.base.bbox.x + x);
            identity.image.set_pixel(y, x, frame.image.pixel(sy, sx));
        }
    }
    const TextureStore store = TextureStore::from_records({identity});

    const EditResult result = restyle_objects(
        frame, scene, restyle_plan({obj.object_id()}, {"self", 0.0, 1.0, 1.0}), store);
    REQUIRE(result.accepted());
    CHECK(result.frame->image == frame.image);
}

TEST_CASE("restyle: value_scale 0.5 halves a flat gray object's V channel") {
    // Flat gray object (V = 200) on a white background.
    DemonstrationFrame frame;
    frame.frame_id = "f";
    frame.image = Image::filled(64, 64, {255, 255, 255});
    SceneGraph scene;
    scene.frame_id = "f";
    scene.image_height = scene.image_width = 64;
    SegmentedObject target;
    target.base = {0, "blue cube", {2, 2, 4, 4}, 0.9};
    target.mask = BinaryMask(64, 64);
    target.mask.fill_rect(target.base.bbox);
    scene.target = target;

    SegmentedObject obj;
    obj.base = {1, "gray box", {20, 20, 32, 32}, 0.9};
    obj.mask = BinaryMask(64, 64);
    obj.mask.fill_rect(obj.base.bbox);
    scene.candidates.push_back(obj);
    for (int y = 20; y < 52; ++y) {
        for (int x = 20; x < 52; ++x) frame.image.set_pixel(y, x, {200, 200, 200});
    }

    // Identity texture (the object's own flat gray), value scaled by 0.5.
    TextureRecord gray;
    gray.texture_id = "gray";
    gray.image = Image::filled(32, 32, {200, 200, 200});
    const TextureStore store = TextureStore::from_records({gray});

    const EditResult result =
        restyle_objects(frame, scene, restyle_plan({1}, {"gray", 0.0, 1.0, 0.5}), store);
    REQUIRE(result.accepted());
    for (int y = 20; y < 52; ++y) {
        for (int x = 20; x < 52; ++x) {
            const auto px = result.frame->image.pixel(y, x);
            const int value = std::max({px[0], px[1], px[2]});
            CHECK(std::abs(value - 100) <= 1);
        }
    }
}

TEST_CASE("restyle: pixels outside the masks are untouched, geometry preserved") {
    const SyntheticScene synthetic = make_synthetic_scene(24, 120, 160, 3);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    TextureRecord checker;
    checker.texture_id = "checker";
    checker.image = make_procedural_texture("checker", 48, 3);
    const TextureStore store = TextureStore::from_records({checker});

    std::vector<int> ids;
    for (const auto& c : scene.candidates) ids.push_back(c.object_id());
    const EditResult result =
        restyle_objects(frame, scene, restyle_plan(ids, {"checker", 0.05, 1.1, 0.9}), store);
    REQUIRE(result.accepted());
    check_outside_unchanged(frame.image, *result.frame);

    // Changed pixels all lie inside the union of the selected (undilated)
    // object masks: shape and pose cannot drift.
    std::vector<BinaryMask> masks;
    for (const auto& c : scene.candidates) masks.push_back(c.mask);
    const BinaryMask union_mask = union_masks(masks, 120, 160);
    for (int y = 0; y < 120; ++y) {
        for (int x = 0; x < 160; ++x) {
            if (result.frame->image.pixel(y, x) != frame.image.pixel(y, x)) {
                REQUIRE(union_mask.test(y, x));
            }
        }
    }
}

TEST_CASE("restyle: unknown texture id is an error") {
    const SyntheticScene synthetic = make_synthetic_scene(25);
    const TextureStore store = TextureStore::from_records({});
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    CHECK_THROWS_AS(restyle_objects(frame, scene,
                                    restyle_plan({scene.candidates[0].object_id()},
                                                 {"missing", 0.0, 1.0, 1.0}),
                                    store),
                    InvalidArgumentError);
}

TEST_CASE("replace: flat-fill stub paints the region, outside unchanged") {
    const SyntheticScene synthetic = make_synthetic_scene(26);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    BlueFillInpainter inpainter;
    DictionarySuggester suggester;

    const int id = scene.candidates.front().object_id();
    const EditResult result = replace_object(
        frame, scene, replace_plan(id, {ReplacementStrategy::same_category, "red", "wooden table"}),
        inpainter, suggester);
    REQUIRE(result.accepted());
    check_outside_unchanged(frame.image, *result.frame);
    for (int y = 0; y < 120; ++y) {
        for (int x = 0; x < 160; ++x) {
            if (result.frame->edited_region.test(y, x)) {
                REQUIRE(result.frame->image.pixel(y, x) == std::array<std::uint8_t, 3>{0, 0, 255});
            }
        }
    }
}

TEST_CASE("replace: same-category prompts name the original label with an adjective") {
    const SyntheticScene synthetic = make_synthetic_scene(27);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    BlueFillInpainter inpainter;
    DictionarySuggester suggester;

    const SegmentedObject& obj = scene.candidates.front();
    const EditResult result = replace_object(
        frame, scene,
        replace_plan(obj.object_id(), {ReplacementStrategy::same_category, "striped", "wooden table"}),
        inpainter, suggester);
    REQUIRE(result.accepted());
    REQUIRE(result.frame->rendered_prompt.has_value());
    CHECK(*result.frame->rendered_prompt ==
          "a striped " + obj.label() + " on a wooden table");
    CHECK(result.frame->warnings.empty());
}

TEST_CASE("replace: suggested strategy consults the suggester") {
    // A medium-size pan so the dictionary's size class matches.
    DemonstrationFrame frame;
    frame.frame_id = "f";
    frame.image = Image::filled(100, 100, {180, 180, 180});
    SceneGraph scene;
    scene.frame_id = "f";
    scene.image_height = scene.image_width = 100;
    SegmentedObject target;
    target.base = {0, "blue cube", {2, 2, 6, 6}, 0.9};
    target.mask = BinaryMask(100, 100);
    target.mask.fill_rect(target.base.bbox);
    scene.target = target;
    SegmentedObject pan;
    pan.base = {1, "cooking pan", {40, 40, 25, 25}, 0.9};  // 6.25% of the image: medium
    pan.mask = BinaryMask(100, 100);
    pan.mask.fill_rect(pan.base.bbox);
    scene.candidates.push_back(pan);

    BlueFillInpainter inpainter;
    DictionarySuggester suggester;
    const EditResult result = replace_object(
        frame, scene, replace_plan(1, {ReplacementStrategy::suggested, "red", "wooden table"}),
        inpainter, suggester);
    REQUIRE(result.accepted());
    CHECK(*result.frame->rendered_prompt == "a dish cloth on a wooden table");
    CHECK(result.frame->warnings.empty());
    CHECK(result.frame->backends_used.contains("suggester"));
}

TEST_CASE("replace: unusable suggestions fall back to same-category with a warning") {
    const SyntheticScene synthetic = make_synthetic_scene(28);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    BlueFillInpainter inpainter;
    // Empty dictionary: every lookup raises SuggestionError.
    DictionarySuggester suggester{std::map<std::string, Suggestion>{}};

    const SegmentedObject& obj = scene.candidates.front();
    const EditResult result = replace_object(
        frame, scene,
        replace_plan(obj.object_id(), {ReplacementStrategy::suggested, "green", "wooden table"}),
        inpainter, suggester);
    REQUIRE(result.accepted());
    CHECK(*result.frame->rendered_prompt == "a green " + obj.label() + " on a wooden table");
    REQUIRE(result.frame->warnings.size() == 1);
    CHECK(result.frame->warnings[0].starts_with("suggester_fallback"));
    CHECK(!result.frame->backends_used.contains("suggester"));
}

TEST_CASE("replace: size-class mismatches also trigger the fallback") {
    // A tiny spoon (small) whose dictionary suggestion is small: matches. Then
    // shrink the image so the same bbox becomes medium and the match breaks.
    DemonstrationFrame frame;
    frame.frame_id = "f";
    frame.image = Image::filled(100, 100, {180, 180, 180});
    SceneGraph scene;
    scene.frame_id = "f";
    scene.image_height = scene.image_width = 100;
    SegmentedObject target;
    target.base = {0, "blue cube", {2, 2, 5, 5}, 0.9};
    target.mask = BinaryMask(100, 100);
    target.mask.fill_rect(target.base.bbox);
    scene.target = target;
    SegmentedObject spoon;
    spoon.base = {1, "spoon", {40, 40, 30, 30}, 0.9};  // 9% -> medium, dictionary says small
    spoon.mask = BinaryMask(100, 100);
    spoon.mask.fill_rect(spoon.base.bbox);
    scene.candidates.push_back(spoon);

    BlueFillInpainter inpainter;
    DictionarySuggester suggester;
    const EditResult result = replace_object(
        frame, scene, replace_plan(1, {ReplacementStrategy::suggested, "red", "wooden table"}),
        inpainter, suggester);
    REQUIRE(result.accepted());
    REQUIRE(result.frame->warnings.size() == 1);
    CHECK(result.frame->warnings[0].find("small") != std::string::npos);
    CHECK(*result.frame->rendered_prompt == "a red spoon on a wooden table");
}

TEST_CASE("render_prompt matches the documented template") {
    CHECK(render_prompt("yellow block", "wooden table") == "a yellow block on a wooden table");
}

TEST_CASE("replace plans must hold exactly one id") {
    const SyntheticScene synthetic = make_synthetic_scene(29);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    BlueFillInpainter inpainter;
    DictionarySuggester suggester;
    EditPlan plan = replace_plan(scene.candidates[0].object_id(),
                                 {ReplacementStrategy::same_category, "red", "t"});
    plan.object_ids.push_back(scene.candidates[1].object_id());
    CHECK_THROWS_AS(replace_object(frame, scene, plan, inpainter, suggester),
                    InvalidArgumentError);
}

TEST_CASE("editors are deterministic with stub backends") {
    const SyntheticScene synthetic = make_synthetic_scene(30);
    const DemonstrationFrame frame = frame_for(synthetic, "f");
    const SceneGraph scene = scene_graph_for(synthetic, "f");
    RingMeanFillInpainter ring;

    const EditPlan plan = remove_plan({scene.candidates[0].object_id(),
                                       scene.candidates[1].object_id()});
    const EditResult a = remove_objects(frame, scene, plan, ring);
    const EditResult b = remove_objects(frame, scene, plan, ring);
    REQUIRE(a.accepted());
    REQUIRE(b.accepted());
    CHECK(a.frame->image == b.frame->image);
    CHECK(a.frame->edited_region == b.frame->edited_region);
}

TEST_CASE("locality fuzz: pixels outside the edited region are byte-identical") {
    SplitMix64 rng(909);
    FlatColorObjectInpainter prompted;
    RingMeanFillInpainter ring;
    DictionarySuggester suggester;
    TextureRecord checker;
    checker.texture_id = "checker";
    checker.image = make_procedural_texture("checker", 48, 5);
    const TextureStore store = TextureStore::from_records({checker});

    PlannerConfig config;
    config.texture_ids = {"checker"};
    config.variants_per_operation = 1;

    int accepted = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const SyntheticScene synthetic =
            make_synthetic_scene(rng.next(), 120, 160, 1 + static_cast<int>(rng.next_below(5)),
                                 rng.next_below(2) == 0);
        const DemonstrationFrame frame = frame_for(synthetic, "f");
        const SceneGraph scene = scene_graph_for(synthetic, "f");
        for (const PlannedEdit& planned : plan_edits(scene, config, rng.next()).plans) {
            EditResult result;
            switch (planned.plan.operation) {
                case EditOperation::remove:
                    result = remove_objects(frame, scene, planned.plan, ring);
                    break;
                case EditOperation::restyle:
                    result = restyle_objects(frame, scene, planned.plan, store);
                    break;
                case EditOperation::replace:
                    result = replace_object(frame, scene, planned.plan, prompted, suggester);
                    break;
            }
            if (!result.accepted()) continue;
            ++accepted;
            check_outside_unchanged(frame.image, *result.frame);
            // Target immunity: the edited region never touches the target.
            CHECK(intersect(result.frame->edited_region, scene.target.mask).popcount() == 0);
        }
    }
    CHECK(accepted > 60);
}
