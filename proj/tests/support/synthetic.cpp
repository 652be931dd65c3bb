#include "support/synthetic.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "nice/image_io.hpp"
#include "nice/rng.hpp"

namespace test_support {

using namespace niceaug;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void draw_object(Image& canvas, const SyntheticObject& obj) {
    const BBox& b = obj.bbox;
    const double cx = b.x + (b.w - 1) / 2.0, cy = b.y + (b.h - 1) / 2.0;
    const double rx = b.w / 2.0, ry = b.h / 2.0;
    for (int y = b.y; y < b.y + b.h; ++y) {
        for (int x = b.x; x < b.x + b.w; ++x) {
            if (obj.is_circle) {
                const double nx = (x - cx) / rx, ny = (y - cy) / ry;
                if (nx * nx + ny * ny > 1.0) continue;
            }
            canvas.set_pixel(y, x, obj.color);
        }
    }
}

}  // namespace

Image SyntheticScene::background() const {
    Image canvas(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            // Gentle slope (1 intensity level per column) keeps the ring-mean
            // stub's reconstruction error within a couple of levels.
            const std::uint8_t v =
                gradient_background ? static_cast<std::uint8_t>(60 + x % 196) : 180;
            canvas.set_pixel(y, x, {v, v, v});
        }
    }
    return canvas;
}

Image SyntheticScene::full_render() const {
    Image canvas = background();
    for (const SyntheticObject& obj : objects) draw_object(canvas, obj);
    return canvas;
}

Image SyntheticScene::render_without(std::size_t index) const {
    Image canvas = background();
    for (std::size_t i = 0; i < objects.size(); ++i) {
        if (i != index) draw_object(canvas, objects[i]);
    }
    return canvas;
}

BinaryMask SyntheticScene::mask_of(std::size_t index) const {
    const SyntheticObject& obj = objects[index];
    BinaryMask mask(height, width);
    Image scratch(height, width);
    draw_object(scratch, obj);
    for (int y = obj.bbox.y; y < obj.bbox.y + obj.bbox.h; ++y) {
        for (int x = obj.bbox.x; x < obj.bbox.x + obj.bbox.w; ++x) {
            const auto px = scratch.pixel(y, x);
            if (px == obj.color) mask.set(y, x);
        }
    }
    return mask;
}

SyntheticScene make_synthetic_scene(std::uint64_t seed, int height, int width, int distractors,
                                    bool gradient_background) {
    SplitMix64 rng(seed);
    SyntheticScene scene;
    scene.height = height;
    scene.width = width;
    scene.gradient_background = gradient_background;

    const std::array<std::array<std::uint8_t, 3>, 6> palette = {{
        {200, 40, 40},   // target red
        {40, 80, 200},   // blue
        {40, 170, 70},   // green
        {230, 200, 40},  // yellow
        {150, 60, 190},  // purple
        {240, 140, 40},  // orange
    }};
    const std::array<std::string, 6> labels = {"red block",    "blue bowl", "green cup",
                                               "yellow box",   "purple sponge",
                                               "orange brush"};

    // One object per grid cell keeps them apart by at least ~12 px, enough for
    // dilated removal masks to stay clear of neighbors.
    const int cols = 4, rows = 3;
    const int cell_w = width / cols, cell_h = height / rows;
    std::vector<int> cells(static_cast<std::size_t>(cols * rows));
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const auto j = i + static_cast<std::size_t>(rng.next_below(cells.size() - i));
        std::swap(cells[i], cells[j]);
    }

    const int count = std::min(distractors + 1, static_cast<int>(palette.size()));
    for (int i = 0; i < count; ++i) {
        const int cell = cells[static_cast<std::size_t>(i)];
        const int cx = (cell % cols) * cell_w, cy = (cell / cols) * cell_h;
        SyntheticObject obj;
        const int size = 14 + static_cast<int>(rng.next_below(6));
        obj.bbox.w = size;
        obj.bbox.h = size - static_cast<int>(rng.next_below(4));
        obj.bbox.x = cx + 8 + static_cast<int>(rng.next_below(
                                  static_cast<std::uint64_t>(std::max(1, cell_w - size - 16))));
        obj.bbox.y = cy + 8 + static_cast<int>(rng.next_below(
                                  static_cast<std::uint64_t>(std::max(1, cell_h - size - 16))));
        obj.color = palette[static_cast<std::size_t>(i)];
        obj.label = labels[static_cast<std::size_t>(i)];
        obj.is_circle = i > 0 && rng.next_below(2) == 0;
        scene.objects.push_back(obj);
    }
    return scene;
}

std::vector<std::string> write_synthetic_dataset(const fs::path& root,
                                                 const std::vector<SyntheticScene>& scenes) {
    fs::create_directories(root / "frames");
    std::vector<std::string> frame_ids;
    json episodes = json::array();
    json frames = json::array();
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "frame_%03zu", i);
        const std::string frame_id = buffer;
        frame_ids.push_back(frame_id);
        frames.push_back(frame_id);

        const SyntheticScene& scene = scenes[i];
        save_image_png(scene.full_render(), root / "frames" / (frame_id + ".png"));

        json meta = {{"instruction", scene.instruction()},
                     {"state", "c3RhdGU="},
                     {"action", "YWN0aW9u"}};
        std::ofstream meta_out(root / "frames" / (frame_id + ".json"));
        meta_out << meta.dump(2) << '\n';

        json detections = json::array();
        for (const SyntheticObject& obj : scene.objects) {
            detections.push_back({{"x", obj.bbox.x},
                                  {"y", obj.bbox.y},
                                  {"w", obj.bbox.w},
                                  {"h", obj.bbox.h},
                                  {"label", obj.label},
                                  {"score", 0.9}});
        }
        std::ofstream det_out(root / "frames" / (frame_id + ".detections.json"));
        det_out << detections.dump(2) << '\n';
    }
    json meta = {{"schema_version", "1.0"},
                 {"episodes", json::array({{{"episode_id", "ep0"}, {"frames", frames}}})}};
    std::ofstream out(root / "meta.json");
    out << meta.dump(2) << '\n';
    return frame_ids;
}

DemonstrationFrame frame_for(const SyntheticScene& scene, const std::string& frame_id) {
    DemonstrationFrame frame;
    frame.frame_id = frame_id;
    frame.episode_id = "ep0";
    frame.image = scene.full_render();
    frame.instruction = scene.instruction();
    frame.state_b64 = "c3RhdGU=";
    frame.action_b64 = "YWN0aW9u";
    return frame;
}

SceneGraph scene_graph_for(const SyntheticScene& scene, const std::string& frame_id) {
    SceneGraph graph;
    graph.frame_id = frame_id;
    graph.image_height = scene.height;
    graph.image_width = scene.width;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const SyntheticObject& obj = scene.objects[i];
        SegmentedObject seg;
        seg.base.object_id = static_cast<int>(i);
        seg.base.label = obj.label;
        seg.base.bbox = obj.bbox;
        seg.base.detection_confidence = 0.9;
        seg.segmentation_confidence = 1.0;
        seg.mask = scene.mask_of(i);
        if (i == 0) {
            graph.target = std::move(seg);
        } else {
            graph.candidates.push_back(std::move(seg));
        }
    }
    return graph;
}

BinaryMask random_mask(std::uint64_t seed, int height, int width, double density) {
    SplitMix64 rng(seed);
    BinaryMask mask(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (rng.next_double() < density) mask.set(y, x);
        }
    }
    return mask;
}

}  // namespace test_support
