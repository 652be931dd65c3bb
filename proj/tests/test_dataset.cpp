#include <doctest.h>

#include <fstream>

#include "nice/dataset.hpp"
#include "nice/errors.hpp"
#include "nice/image_io.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace niceaug;
using test_support::make_synthetic_scene;
using test_support::TempDir;
using test_support::write_synthetic_dataset;

namespace {

std::vector<test_support::SyntheticScene> three_scenes() {
    return {make_synthetic_scene(1), make_synthetic_scene(2), make_synthetic_scene(3)};
}

EditPlan sample_plan() {
    EditPlan plan;
    plan.operation = EditOperation::remove;
    plan.object_ids = {1, 2};
    plan.seed = 0xDEADBEEFCAFE1234ULL;
    plan.dil = 3;
    return plan;
}

std::string file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("load_dataset: three valid frames give three records") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    const Dataset ds = load_dataset(dir.path());
    CHECK(ds.manifest().frames.size() == 3);
    CHECK(ds.manifest().load_errors.empty());
    CHECK(ds.manifest().edits.empty());

    const DemonstrationFrame frame = ds.load_frame("frame_000");
    CHECK(frame.image.height == 120);
    CHECK(frame.image.width == 160);
    CHECK(frame.instruction == "pick up the red block");
    CHECK(frame.episode_id == "ep0");
    CHECK(frame.state_b64 == "c3RhdGU=");
}

TEST_CASE("load_dataset: empty dataset with a valid manifest is fine") {
    TempDir dir;
    std::ofstream out(dir / "meta.json");
    out << R"({"schema_version":"1.0","episodes":[]})";
    out.close();
    const Dataset ds = load_dataset(dir.path());
    CHECK(ds.manifest().frames.empty());
    CHECK(ds.manifest().load_errors.empty());
}

TEST_CASE("load_dataset: missing meta.json is fatal") {
    TempDir dir;
    CHECK_THROWS_AS(load_dataset(dir.path()), IoError);
}

TEST_CASE("load_dataset: a frame with a missing image is reported, others load") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    std::filesystem::remove(dir.path() / "frames" / "frame_001.png");

    const Dataset ds = load_dataset(dir.path());
    CHECK(ds.manifest().frames.size() == 2);
    REQUIRE(ds.manifest().load_errors.size() == 1);
    CHECK(ds.manifest().load_errors[0].frame_id == "frame_001");
    CHECK(ds.load_frame("frame_000").image.width == 160);
    CHECK(ds.load_frame("frame_002").image.width == 160);
}

TEST_CASE("load_dataset never mutates files on disk") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    std::map<std::string, std::string> before;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir.path())) {
        if (entry.is_regular_file()) before[entry.path().string()] = file_bytes(entry.path());
    }
    const Dataset ds = load_dataset(dir.path());
    (void)ds.load_frame("frame_000");
    for (const auto& [path, bytes] : before) {
        CHECK(file_bytes(path) == bytes);
    }
}

TEST_CASE("save_edited round trips plan fields and pixels exactly") {
    TempDir dir;
    EditedFrame edited;
    edited.source_frame_id = "frame_000";
    edited.image = make_synthetic_scene(1).full_render();
    edited.plan = sample_plan();
    edited.variant_index = 0;
    edited.edited_region = BinaryMask(120, 160);
    edited.edited_region.fill_rect({10, 10, 20, 20});
    edited.object_labels = {{1, "blue bowl"}, {2, "green cup"}};
    edited.rendered_prompt = "a yellow block on a wooden table";
    edited.warnings = {"suggester_fallback: no entry"};
    edited.state_b64 = "c3RhdGU=";
    edited.action_b64 = "YWN0aW9u";
    edited.backends_used["mask_inpainter"] =
        BackendDescriptor{BackendKind::mask_inpainter, "ring_mean", "1", std::nullopt};

    const SavedEdit saved = save_edited(edited, dir.path());
    CHECK(saved.image_path.filename().string().starts_with("remove_"));

    const EditedFrame loaded = load_edited(saved.manifest_path);
    CHECK(loaded.plan == edited.plan);
    CHECK(loaded.image == edited.image);
    CHECK(loaded.edited_region == edited.edited_region);
    CHECK(loaded.variant_index == 0);
    CHECK(loaded.object_labels == edited.object_labels);
    CHECK(loaded.rendered_prompt == edited.rendered_prompt);
    CHECK(loaded.warnings == edited.warnings);
    CHECK(loaded.state_b64 == edited.state_b64);
    CHECK(loaded.action_b64 == edited.action_b64);
    CHECK(loaded.backends_used.at("mask_inpainter").implementation_id == "ring_mean");
}

TEST_CASE("save_edited: two variants differ only in the variant suffix") {
    TempDir dir;
    EditedFrame edited;
    edited.source_frame_id = "f";
    edited.image = Image::filled(64, 64, {1, 2, 3});
    edited.plan = sample_plan();
    edited.edited_region = BinaryMask(64, 64);

    edited.variant_index = 0;
    const SavedEdit first = save_edited(edited, dir.path());
    edited.variant_index = 1;
    const SavedEdit second = save_edited(edited, dir.path());

    const std::string a = first.image_path.filename().string();
    const std::string b = second.image_path.filename().string();
    CHECK(a != b);
    CHECK(a.substr(0, a.rfind('_')) == b.substr(0, b.rfind('_')));
    CHECK(a.ends_with("_0.png"));
    CHECK(b.ends_with("_1.png"));
}

TEST_CASE("save_edited rejects lossy formats") {
    TempDir dir;
    EditedFrame edited;
    edited.source_frame_id = "f";
    edited.image = Image::filled(64, 64, {0, 0, 0});
    edited.plan = sample_plan();
    edited.edited_region = BinaryMask(64, 64);
    SaveOptions options;
    options.format = "jpg";
    CHECK_THROWS_AS(save_edited(edited, dir.path(), options), FormatError);
}

TEST_CASE("save_edited: collisions need the overwrite flag") {
    TempDir dir;
    EditedFrame edited;
    edited.source_frame_id = "f";
    edited.image = Image::filled(64, 64, {0, 0, 0});
    edited.plan = sample_plan();
    edited.edited_region = BinaryMask(64, 64);

    save_edited(edited, dir.path());
    CHECK_THROWS_AS(save_edited(edited, dir.path()), IoError);
    SaveOptions overwrite;
    overwrite.overwrite = true;
    CHECK_NOTHROW(save_edited(edited, dir.path(), overwrite));
}

TEST_CASE("saved edits are discovered by load_dataset") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    EditedFrame edited;
    edited.source_frame_id = "frame_000";
    edited.image = Image::filled(64, 64, {9, 9, 9});
    edited.plan = sample_plan();
    edited.edited_region = BinaryMask(64, 64);
    save_edited(edited, dir.path());

    const Dataset ds = load_dataset(dir.path());
    REQUIRE(ds.manifest().edits.size() == 1);
    CHECK(ds.manifest().edits[0].source_frame_id == "frame_000");
    CHECK(ds.manifest().edits[0].operation == "remove");
    CHECK(ds.manifest().edits[0].plan_hash == plan_hash(edited.plan));
}

TEST_CASE("validate_dataset: clean dataset has no violations") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    const Dataset ds = load_dataset(dir.path());
    CHECK(validate_dataset(ds).empty());
    // Pure and deterministic.
    CHECK(validate_dataset(ds).empty());
}

TEST_CASE("validate_dataset flags duplicate frame ids") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    // Duplicate an id inside meta.json.
    std::ofstream out(dir / "meta.json");
    out << R"({"schema_version":"1.0","episodes":[
          {"episode_id":"ep0","frames":["frame_000","frame_000","frame_001","frame_002"]}]})";
    out.close();

    const auto violations = validate_dataset(load_dataset(dir.path()));
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == "duplicate_frame_id");
    CHECK(violations[0].frame_id == "frame_000");
}

TEST_CASE("validate_dataset flags footprint dimension mismatches") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    // Footprint 2 px narrower than the image.
    std::filesystem::create_directories(dir.path() / "footprints");
    save_mask_png(BinaryMask(120, 158), dir.path() / "footprints" / "frame_000.png");

    const auto violations = validate_dataset(load_dataset(dir.path()));
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == "dimension_mismatch");
    CHECK(violations[0].frame_id == "frame_000");
    CHECK(violations[0].message.find("158") != std::string::npos);
}

TEST_CASE("validate_dataset flags dangling edits") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    EditedFrame edited;
    edited.source_frame_id = "not_a_frame";
    edited.image = Image::filled(64, 64, {9, 9, 9});
    edited.plan = sample_plan();
    edited.edited_region = BinaryMask(64, 64);
    save_edited(edited, dir.path());

    const auto violations = validate_dataset(load_dataset(dir.path()));
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == "dangling_edit");
}

TEST_CASE("frames load their trajectory footprint when present") {
    TempDir dir;
    write_synthetic_dataset(dir.path(), three_scenes());
    std::filesystem::create_directories(dir.path() / "footprints");
    BinaryMask footprint(120, 160);
    footprint.fill_rect({30, 30, 40, 10});
    save_mask_png(footprint, dir.path() / "footprints" / "frame_001.png");

    const Dataset ds = load_dataset(dir.path());
    const DemonstrationFrame frame = ds.load_frame("frame_001");
    REQUIRE(frame.trajectory_footprint.has_value());
    CHECK(*frame.trajectory_footprint == footprint);
    CHECK(!ds.load_frame("frame_000").trajectory_footprint.has_value());
}

TEST_CASE("validate_dataset flags images smaller than 64x64") {
    TempDir dir;
    std::filesystem::create_directories(dir.path() / "frames");
    save_image_png(Image::filled(32, 48, {10, 10, 10}), dir.path() / "frames" / "tiny.png");
    std::ofstream meta(dir.path() / "frames" / "tiny.json");
    meta << R"({"instruction":"pick up the cube"})";
    meta.close();
    std::ofstream root_meta(dir / "meta.json");
    root_meta << R"({"schema_version":"1.0","episodes":[{"episode_id":"e","frames":["tiny"]}]})";
    root_meta.close();

    const auto violations = validate_dataset(load_dataset(dir.path()));
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == "image_too_small");
}

TEST_CASE("frame ids that cannot form file names are load errors") {
    TempDir dir;
    std::ofstream meta(dir / "meta.json");
    meta << R"({"schema_version":"1.0","episodes":[{"episode_id":"e","frames":["../escape","ok me"]}]})";
    meta.close();
    const Dataset ds = load_dataset(dir.path());
    CHECK(ds.manifest().frames.empty());
    CHECK(ds.manifest().load_errors.size() == 2);
}
