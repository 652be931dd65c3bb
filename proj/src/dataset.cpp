#include "nice/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "nice/errors.hpp"
#include "nice/image_io.hpp"

namespace niceaug {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return doc;
}

void write_json_file(const json& doc, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

bool valid_frame_id(const std::string& id) {
    if (id.empty() || id.size() > 128) return false;
    for (char c : id) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
            return false;
        }
    }
    return id != "." && id != "..";
}

// <op>_<hash>_<variant>
bool parse_edit_stem(const std::string& stem, EditRecord& record) {
    const auto first = stem.find('_');
    const auto last = stem.rfind('_');
    if (first == std::string::npos || last == first) return false;
    record.operation = stem.substr(0, first);
    record.plan_hash = stem.substr(first + 1, last - first - 1);
    try {
        record.variant_index = std::stoi(stem.substr(last + 1));
    } catch (const std::exception&) {
        return false;
    }
    return record.operation == "remove" || record.operation == "restyle" ||
           record.operation == "replace";
}

}  // namespace

const FrameRecord* Dataset::find_frame(const std::string& frame_id) const {
    for (const FrameRecord& record : manifest_.frames) {
        if (record.frame_id == frame_id) return &record;
    }
    return nullptr;
}

DemonstrationFrame Dataset::load_frame(const std::string& frame_id) const {
    const FrameRecord* record = find_frame(frame_id);
    if (!record) throw IoError("unknown frame_id: " + frame_id);

    DemonstrationFrame frame;
    frame.frame_id = record->frame_id;
    frame.episode_id = record->episode_id;
    frame.image = load_image_png(record->image_path);

    const json meta = read_json_file(record->meta_path);
    frame.instruction = meta.value("instruction", "");
    if (meta.contains("target_phrase") && !meta.at("target_phrase").is_null()) {
        frame.target_phrase = meta.at("target_phrase").get<std::string>();
    }
    frame.state_b64 = meta.value("state", "");
    frame.action_b64 = meta.value("action", "");

    if (record->footprint_path) {
        frame.trajectory_footprint = load_mask_png(*record->footprint_path);
    }
    return frame;
}

Dataset load_dataset(const fs::path& root) {
    const fs::path meta_path = root / "meta.json";
    if (!fs::exists(meta_path)) {
        throw IoError("dataset is missing its manifest: " + meta_path.string());
    }
    const json meta = read_json_file(meta_path);

    DatasetManifest manifest;
    manifest.schema_version = meta.value("schema_version", "1.0");

    for (const auto& episode : meta.value("episodes", json::array())) {
        const std::string episode_id = episode.value("episode_id", "");
        for (const auto& id_entry : episode.value("frames", json::array())) {
            const std::string frame_id = id_entry.get<std::string>();
            if (!valid_frame_id(frame_id)) {
                manifest.load_errors.push_back(
                    {frame_id, "frame_id contains characters that cannot form a file name"});
                continue;
            }
            FrameRecord record;
            record.frame_id = frame_id;
            record.episode_id = episode_id;
            record.image_path = root / "frames" / (frame_id + ".png");
            record.meta_path = root / "frames" / (frame_id + ".json");

            std::string problem;
            if (!fs::exists(record.image_path)) {
                problem = "missing image file " + record.image_path.string();
            } else if (!fs::exists(record.meta_path)) {
                problem = "missing frame metadata " + record.meta_path.string();
            } else {
                try {
                    read_json_file(record.meta_path);
                } catch (const IoError& e) {
                    problem = e.what();
                }
            }
            if (!problem.empty()) {
                manifest.load_errors.push_back({frame_id, problem});
                continue;
            }
            const fs::path footprint = root / "footprints" / (frame_id + ".png");
            if (fs::exists(footprint)) record.footprint_path = footprint;
            manifest.frames.push_back(std::move(record));
        }
    }

    const fs::path edits_root = root / "edits";
    if (fs::exists(edits_root)) {
        std::vector<fs::path> manifests;
        for (const auto& entry : fs::recursive_directory_iterator(edits_root)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                manifests.push_back(entry.path());
            }
        }
        std::sort(manifests.begin(), manifests.end());
        for (const fs::path& path : manifests) {
            EditRecord record;
            record.source_frame_id = path.parent_path().filename().string();
            record.manifest_path = path;
            record.image_path = fs::path(path).replace_extension(".png");
            if (!parse_edit_stem(path.stem().string(), record)) {
                manifest.load_errors.push_back(
                    {record.source_frame_id, "unrecognized edit file name " + path.string()});
                continue;
            }
            if (!fs::exists(record.image_path)) {
                manifest.load_errors.push_back(
                    {record.source_frame_id, "edit manifest without image: " + path.string()});
                continue;
            }
            manifest.edits.push_back(std::move(record));
        }
    }
    return Dataset(root, std::move(manifest));
}

SavedEdit save_edited(const EditedFrame& frame, const fs::path& root, const SaveOptions& options) {
    if (options.format != "png") {
        throw FormatError("edited frames must be saved losslessly; refusing format '" +
                          options.format + "'");
    }
    if (!valid_frame_id(frame.source_frame_id)) {
        throw InvalidArgumentError("source_frame_id cannot form a file name: '" +
                                   frame.source_frame_id + "'");
    }
    if (frame.plan.operation == EditOperation::restyle && !frame.plan.restyle) {
        throw InvalidArgumentError("restyle plan without restyle parameters");
    }
    if (frame.plan.operation == EditOperation::replace && !frame.plan.replace) {
        throw InvalidArgumentError("replace plan without replace parameters");
    }

    const std::string stem = std::string(to_string(frame.plan.operation)) + "_" +
                             plan_hash(frame.plan) + "_" + std::to_string(frame.variant_index);
    const fs::path dir = root / "edits" / frame.source_frame_id;
    fs::create_directories(dir);

    SavedEdit saved;
    saved.image_path = dir / (stem + ".png");
    saved.manifest_path = dir / (stem + ".json");
    if (!options.overwrite && (fs::exists(saved.image_path) || fs::exists(saved.manifest_path))) {
        throw IoError("edit already exists (pass overwrite to replace): " +
                      saved.image_path.string());
    }

    json doc;
    doc["schema_version"] = "1.0";
    doc["source_frame_id"] = frame.source_frame_id;
    doc["variant_index"] = frame.variant_index;
    doc["plan"] = plan_to_json(frame.plan);
    doc["image_size"] = {frame.image.height, frame.image.width};
    doc["edited_region_rle"] = rle_encode(frame.edited_region);
    json backends = json::object();
    for (const auto& [role, desc] : frame.backends_used) {
        json d = {{"implementation_id", desc.implementation_id}, {"version", desc.version}};
        if (desc.endpoint) d["endpoint"] = *desc.endpoint;
        backends[role] = std::move(d);
    }
    doc["backends"] = std::move(backends);
    json labels = json::object();
    for (const auto& [id, label] : frame.object_labels) labels[std::to_string(id)] = label;
    doc["object_labels"] = std::move(labels);
    if (frame.rendered_prompt) doc["rendered_prompt"] = *frame.rendered_prompt;
    doc["warnings"] = frame.warnings;
    doc["state"] = frame.state_b64;
    doc["action"] = frame.action_b64;

    save_image_png(frame.image, saved.image_path);
    write_json_file(doc, saved.manifest_path);
    return saved;
}

EditedFrame load_edited(const fs::path& manifest_path) {
    const json doc = read_json_file(manifest_path);
    EditedFrame frame;
    frame.source_frame_id = doc.at("source_frame_id").get<std::string>();
    frame.variant_index = doc.at("variant_index").get<int>();
    frame.plan = plan_from_json(doc.at("plan"));
    frame.image = load_image_png(fs::path(manifest_path).replace_extension(".png"));
    const int h = doc.at("image_size").at(0).get<int>();
    const int w = doc.at("image_size").at(1).get<int>();
    frame.edited_region =
        rle_decode(doc.at("edited_region_rle").get<std::vector<std::uint64_t>>(), h, w);
    const json backends = doc.value("backends", json::object());
    for (const auto& [role, d] : backends.items()) {
        BackendDescriptor desc;
        desc.implementation_id = d.value("implementation_id", "");
        desc.version = d.value("version", "");
        if (d.contains("endpoint")) desc.endpoint = d.at("endpoint").get<std::string>();
        frame.backends_used[role] = std::move(desc);
    }
    const json labels = doc.value("object_labels", json::object());
    for (const auto& [id, label] : labels.items()) {
        frame.object_labels[std::stoi(id)] = label.get<std::string>();
    }
    if (doc.contains("rendered_prompt")) {
        frame.rendered_prompt = doc.at("rendered_prompt").get<std::string>();
    }
    frame.warnings = doc.value("warnings", std::vector<std::string>{});
    frame.state_b64 = doc.value("state", "");
    frame.action_b64 = doc.value("action", "");
    return frame;
}

std::vector<Violation> validate_dataset(const Dataset& dataset) {
    std::vector<Violation> violations;
    const DatasetManifest& manifest = dataset.manifest();

    std::set<std::string> seen;
    for (const FrameRecord& record : manifest.frames) {
        if (!seen.insert(record.frame_id).second) {
            violations.push_back({"duplicate_frame_id", record.frame_id,
                                  "frame_id '" + record.frame_id + "' appears more than once"});
        }
    }

    for (const FrameRecord& record : manifest.frames) {
        DemonstrationFrame frame;
        try {
            frame = dataset.load_frame(record.frame_id);
        } catch (const Error& e) {
            violations.push_back({"decode_error", record.frame_id, e.what()});
            continue;
        }
        if (frame.image.height < 64 || frame.image.width < 64) {
            violations.push_back({"image_too_small", record.frame_id,
                                  "image is " + std::to_string(frame.image.width) + "x" +
                                      std::to_string(frame.image.height) +
                                      "; minimum is 64x64"});
        }
        if (frame.trajectory_footprint &&
            (frame.trajectory_footprint->height() != frame.image.height ||
             frame.trajectory_footprint->width() != frame.image.width)) {
            violations.push_back(
                {"dimension_mismatch", record.frame_id,
                 "trajectory footprint is " + std::to_string(frame.trajectory_footprint->width()) +
                     "x" + std::to_string(frame.trajectory_footprint->height()) + " but image is " +
                     std::to_string(frame.image.width) + "x" + std::to_string(frame.image.height)});
        }
    }

    for (const EditRecord& record : manifest.edits) {
        if (!seen.contains(record.source_frame_id)) {
            violations.push_back({"dangling_edit", record.source_frame_id,
                                  "edit " + record.image_path.string() +
                                      " references a frame that is not in the dataset"});
        }
    }
    return violations;
}

}  // namespace niceaug
