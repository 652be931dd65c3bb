#include "nice/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "nice/backend_stubs.hpp"
#include "nice/dataset.hpp"
#include "nice/editors.hpp"
#include "nice/errors.hpp"
#include "nice/image_io.hpp"
#include "nice/report.hpp"
#include "nice/rng.hpp"
#include "nice/scene.hpp"
#include "nice/textures.hpp"

namespace niceaug {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void expect_keys(const json& doc, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    for (const auto& [key, value] : doc.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end()) {
            throw ConfigError("unknown config key '" + key + "' in " + where);
        }
    }
}

std::pair<double, double> parse_range(const json& doc, const char* key,
                                      std::pair<double, double> fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& r = doc.at(key);
    if (!r.is_array() || r.size() != 2) {
        throw ConfigError(std::string(key) + " must be a [lo, hi] pair");
    }
    return {r.at(0).get<double>(), r.at(1).get<double>()};
}

}  // namespace

PipelineConfig parse_pipeline_config(const json& doc) {
    expect_keys(doc,
                {"seed", "backends", "planner", "textures", "ssim", "retry", "output", "workers"},
                "config root");
    PipelineConfig config;
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("workers")) config.workers = doc.at("workers").get<int>();
    if (config.workers < 1) throw ConfigError("workers must be >= 1");

    if (doc.contains("backends")) {
        const json& backends = doc.at("backends");
        for (const auto& [key, value] : backends.items()) {
            if (key == "mode") {
                config.backend_mode = value.get<std::string>();
                if (config.backend_mode != "stub" && config.backend_mode != "remote") {
                    throw ConfigError("backends.mode must be 'stub' or 'remote'");
                }
                continue;
            }
            const bool known = std::find_if(std::begin(kRoleNames), std::end(kRoleNames),
                                            [&](const char* role) { return key == role; }) !=
                               std::end(kRoleNames);
            if (!known) throw ConfigError("unknown backend role '" + key + "'");
            expect_keys(value, {"implementation", "endpoint", "annotations_dir", "min_score"},
                        "backends." + key);
            BackendRoleConfig role;
            role.implementation = value.value("implementation", "");
            if (value.contains("endpoint")) role.endpoint = value.at("endpoint").get<std::string>();
            if (value.contains("annotations_dir")) {
                role.annotations_dir = fs::path(value.at("annotations_dir").get<std::string>());
            }
            role.min_score = value.value("min_score", 0.3);
            config.roles[key] = std::move(role);
        }
    }

    if (doc.contains("planner")) {
        const json& planner = doc.at("planner");
        expect_keys(planner,
                    {"variants_per_operation", "max_variants", "operations", "strategy_mix", "dil",
                     "hue_shift_range", "saturation_range", "value_range", "adjectives",
                     "surface_description"},
                    "planner");
        PlannerConfig& p = config.planner;
        p.variants_per_operation = planner.value("variants_per_operation", 2);
        p.max_variants = planner.value("max_variants", 64);
        if (planner.contains("operations")) {
            p.operations_enabled.clear();
            for (const auto& name : planner.at("operations")) {
                p.operations_enabled.insert(edit_operation_from_string(name.get<std::string>()));
            }
        }
        p.strategy_mix = planner.value("strategy_mix", 0.5);
        if (planner.contains("dil")) {
            const json& dil = planner.at("dil");
            expect_keys(dil, {"remove", "restyle", "replace"}, "planner.dil");
            if (dil.contains("remove") && !dil.at("remove").is_null()) {
                p.dil_remove = dil.at("remove").get<int>();
            }
            if (dil.contains("restyle") && !dil.at("restyle").is_null()) {
                p.dil_restyle = dil.at("restyle").get<int>();
            }
            if (dil.contains("replace") && !dil.at("replace").is_null()) {
                p.dil_replace = dil.at("replace").get<int>();
            }
        }
        p.hue_shift_range = parse_range(planner, "hue_shift_range", p.hue_shift_range);
        p.saturation_range = parse_range(planner, "saturation_range", p.saturation_range);
        p.value_range = parse_range(planner, "value_range", p.value_range);
        if (planner.contains("adjectives")) {
            p.adjectives = planner.at("adjectives").get<std::vector<std::string>>();
            if (p.adjectives.empty()) throw ConfigError("planner.adjectives must not be empty");
        }
        p.surface_description = planner.value("surface_description", p.surface_description);
    }

    if (doc.contains("textures")) {
        expect_keys(doc.at("textures"), {"root"}, "textures");
        if (doc.at("textures").contains("root")) {
            config.texture_root = fs::path(doc.at("textures").at("root").get<std::string>());
        }
    }
    if (doc.contains("ssim")) {
        const json& s = doc.at("ssim");
        expect_keys(s, {"window", "k1", "k2", "dynamic_range"}, "ssim");
        config.ssim.window = s.value("window", config.ssim.window);
        config.ssim.k1 = s.value("k1", config.ssim.k1);
        config.ssim.k2 = s.value("k2", config.ssim.k2);
        config.ssim.dynamic_range = s.value("dynamic_range", config.ssim.dynamic_range);
    }
    if (doc.contains("retry")) {
        const json& r = doc.at("retry");
        expect_keys(r, {"base_delay_s", "factor", "max_attempts"}, "retry");
        config.retry.base_delay_s = r.value("base_delay_s", config.retry.base_delay_s);
        config.retry.factor = r.value("factor", config.retry.factor);
        config.retry.max_attempts = r.value("max_attempts", config.retry.max_attempts);
    }
    if (doc.contains("output")) {
        expect_keys(doc.at("output"), {"overwrite"}, "output");
        config.overwrite = doc.at("output").value("overwrite", false);
    }

    apply_env_endpoint_overrides(config);

    // Referenced paths must exist at validation time.
    if (config.texture_root && !fs::exists(*config.texture_root / "textures.json")) {
        throw ConfigError("textures.root has no textures.json index: " +
                          config.texture_root->string());
    }
    for (const auto& [role, role_config] : config.roles) {
        if (role_config.annotations_dir && !fs::exists(*role_config.annotations_dir)) {
            throw ConfigError("backends." + role + ".annotations_dir does not exist: " +
                              role_config.annotations_dir->string());
        }
    }
    return config;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }
    return parse_pipeline_config(doc);
}

void apply_env_endpoint_overrides(PipelineConfig& config) {
    for (const char* role : kRoleNames) {
        std::string var = "NICE_ENDPOINT_";
        for (const char* p = role; *p; ++p) {
            var.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(*p))));
        }
        if (const char* value = std::getenv(var.c_str()); value && *value) {
            config.roles[role].endpoint = std::string(value);
        }
    }
}

namespace {

RemoteConfig remote_config_for(const PipelineConfig& config, const std::string& role) {
    auto it = config.roles.find(role);
    if (it == config.roles.end() || !it->second.endpoint) {
        throw ConfigError("remote backend '" + role +
                          "' has no endpoint (set backends." + role +
                          ".endpoint or NICE_ENDPOINT_* env)");
    }
    RemoteConfig rc;
    rc.base_url = *it->second.endpoint;
    rc.retry = config.retry;
    rc.min_detection_score = it->second.min_score;
    return rc;
}

std::string role_impl(const PipelineConfig& config, const std::string& role,
                      const char* stub_default) {
    auto it = config.roles.find(role);
    if (it != config.roles.end() && !it->second.implementation.empty()) {
        return it->second.implementation;
    }
    return config.backend_mode == "remote" ? "remote" : stub_default;
}

}  // namespace

BackendSet make_backends(const PipelineConfig& config, const fs::path& dataset_root) {
    BackendSet set;

    const std::string detector_impl = role_impl(config, "detector", "annotation");
    if (detector_impl == "annotation") {
        fs::path dir = dataset_root / "frames";
        auto it = config.roles.find("detector");
        if (it != config.roles.end() && it->second.annotations_dir) {
            dir = *it->second.annotations_dir;
        }
        set.detector = std::make_unique<AnnotationDetector>(dir);
    } else if (detector_impl == "remote") {
        set.detector = std::make_unique<RemoteDetector>(remote_config_for(config, "detector"));
    } else {
        throw ConfigError("unknown detector implementation '" + detector_impl + "'");
    }

    const std::string segmenter_impl = role_impl(config, "segmenter", "rect_mask");
    if (segmenter_impl == "rect_mask") {
        set.segmenter = std::make_unique<RectMaskSegmenter>();
    } else if (segmenter_impl == "remote") {
        set.segmenter = std::make_unique<RemoteSegmenter>(remote_config_for(config, "segmenter"));
    } else {
        throw ConfigError("unknown segmenter implementation '" + segmenter_impl + "'");
    }

    const std::string mask_impl = role_impl(config, "mask_inpainter", "ring_mean");
    if (mask_impl == "ring_mean") {
        set.mask_inpainter = std::make_unique<RingMeanFillInpainter>();
    } else if (mask_impl == "remote") {
        set.mask_inpainter =
            std::make_unique<RemoteMaskInpainter>(remote_config_for(config, "mask_inpainter"));
    } else {
        throw ConfigError("unknown mask_inpainter implementation '" + mask_impl + "'");
    }

    const std::string prompted_impl = role_impl(config, "prompted_inpainter", "flat_color");
    if (prompted_impl == "flat_color") {
        set.prompted_inpainter = std::make_unique<FlatColorObjectInpainter>();
    } else if (prompted_impl == "remote") {
        set.prompted_inpainter = std::make_unique<RemotePromptedInpainter>(
            remote_config_for(config, "prompted_inpainter"));
    } else {
        throw ConfigError("unknown prompted_inpainter implementation '" + prompted_impl + "'");
    }

    const std::string suggester_impl = role_impl(config, "suggester", "dictionary");
    if (suggester_impl == "dictionary") {
        set.suggester = std::make_unique<DictionarySuggester>();
    } else if (suggester_impl == "remote") {
        set.suggester =
            std::make_unique<RemoteObjectSuggester>(remote_config_for(config, "suggester"));
    } else {
        throw ConfigError("unknown suggester implementation '" + suggester_impl + "'");
    }

    const std::string extractor_impl = role_impl(config, "feature_extractor", "color_histogram");
    if (extractor_impl == "color_histogram") {
        set.feature_extractor = std::make_unique<ColorHistogramExtractor>();
    } else if (extractor_impl == "remote") {
        set.feature_extractor = std::make_unique<RemoteFeatureExtractor>(
            remote_config_for(config, "feature_extractor"));
    } else {
        throw ConfigError("unknown feature_extractor implementation '" + extractor_impl + "'");
    }
    return set;
}

namespace {

void write_json_to(const json& doc, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

json read_json_from(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json doc;
    in >> doc;
    return doc;
}

// Frame-level worker pool. Each worker owns its backend set; failures are
// collected per frame, never fatal for the batch.
void for_each_frame(int workers, const std::vector<std::string>& frame_ids,
                    const std::function<void(int worker, const std::string& frame_id)>& fn) {
    const int n = std::max(1, std::min<int>(workers, static_cast<int>(frame_ids.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= frame_ids.size()) return;
                fn(w, frame_ids[i]);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

SceneGraph scene_for_frame(const DemonstrationFrame& frame, BackendSet& backends,
                           const fs::path& scenes_dir) {
    const fs::path cache = scenes_dir / (frame.frame_id + ".json");
    if (fs::exists(cache)) return scene_from_json(read_json_from(cache));
    SceneGraph scene = build_scene_graph(frame, *backends.detector, *backends.segmenter);
    write_json_to(scene_to_json(scene), cache);
    return scene;
}

}  // namespace

ParseSummary cmd_parse(const fs::path& dataset_root, const fs::path& out_root,
                       const PipelineConfig& config) {
    const Dataset dataset = load_dataset(dataset_root);
    const fs::path scenes_dir = out_root / "scenes";
    fs::create_directories(scenes_dir);

    ParseSummary summary;
    summary.frames = static_cast<int>(dataset.manifest().frames.size());
    for (const LoadIssue& issue : dataset.manifest().load_errors) {
        summary.skipped.push_back({issue.frame_id, issue.message});
    }

    std::vector<std::string> frame_ids;
    for (const FrameRecord& record : dataset.manifest().frames) {
        frame_ids.push_back(record.frame_id);
    }
    std::sort(frame_ids.begin(), frame_ids.end());

    std::mutex mu;
    std::vector<std::unique_ptr<BackendSet>> worker_backends;
    for (int w = 0; w < std::max(1, config.workers); ++w) {
        worker_backends.push_back(
            std::make_unique<BackendSet>(make_backends(config, dataset_root)));
    }

    for_each_frame(config.workers, frame_ids, [&](int worker, const std::string& frame_id) {
        try {
            const DemonstrationFrame frame = dataset.load_frame(frame_id);
            const SceneGraph scene =
                build_scene_graph(frame, *worker_backends[static_cast<std::size_t>(worker)]->detector,
                                  *worker_backends[static_cast<std::size_t>(worker)]->segmenter);
            // Rewrite the cache unconditionally so reruns stay byte-identical.
            write_json_to(scene_to_json(scene), scenes_dir / (frame_id + ".json"));
            std::lock_guard lock(mu);
            ++summary.scenes_written;
        } catch (const std::exception& e) {
            std::lock_guard lock(mu);
            summary.skipped.push_back({frame_id, e.what()});
        }
    });

    std::sort(summary.skipped.begin(), summary.skipped.end(),
              [](const SkipEntry& a, const SkipEntry& b) { return a.frame_id < b.frame_id; });

    json report;
    report["schema_version"] = "1.0";
    report["scenes_written"] = summary.scenes_written;
    report["skipped"] = json::array();
    for (const SkipEntry& skip : summary.skipped) {
        report["skipped"].push_back({{"frame_id", skip.frame_id}, {"reason", skip.reason}});
    }
    summary.report_path = out_root / "parse_report.json";
    write_json_to(report, summary.report_path);
    return summary;
}

EditSummary cmd_edit(const fs::path& dataset_root, const fs::path& out_root,
                     const PipelineConfig& config) {
    if (!config.seed) throw ConfigError("edit runs require a seed");
    const Dataset dataset = load_dataset(dataset_root);
    const fs::path scenes_dir = out_root / "scenes";
    fs::create_directories(scenes_dir);

    PlannerConfig planner = config.planner;
    std::optional<TextureStore> textures;
    if (config.texture_root) {
        textures = TextureStore::open(*config.texture_root);
        planner.texture_ids = textures->ids();
    }

    EditSummary summary;
    summary.frames = static_cast<int>(dataset.manifest().frames.size());
    for (const LoadIssue& issue : dataset.manifest().load_errors) {
        summary.skipped.push_back({issue.frame_id, issue.message});
    }

    std::vector<std::string> frame_ids;
    for (const FrameRecord& record : dataset.manifest().frames) {
        frame_ids.push_back(record.frame_id);
    }
    std::sort(frame_ids.begin(), frame_ids.end());

    std::vector<std::unique_ptr<BackendSet>> worker_backends;
    for (int w = 0; w < std::max(1, config.workers); ++w) {
        worker_backends.push_back(
            std::make_unique<BackendSet>(make_backends(config, dataset_root)));
    }

    std::mutex mu;
    for_each_frame(config.workers, frame_ids, [&](int worker, const std::string& frame_id) {
        BackendSet& backends = *worker_backends[static_cast<std::size_t>(worker)];
        try {
            const DemonstrationFrame frame = dataset.load_frame(frame_id);
            const SceneGraph scene = scene_for_frame(frame, backends, scenes_dir);

            const std::uint64_t frame_seed = split_seed(*config.seed, {fnv1a64(frame_id)});
            PlanBatch batch = plan_edits(scene, planner, frame_seed);

            int executed = 0, rejected_target = 0, rejected_trajectory = 0;
            std::vector<fs::path> outputs;
            std::vector<std::string> warnings = batch.warnings;
            for (const PlannedEdit& planned : batch.plans) {
                EditResult result;
                switch (planned.plan.operation) {
                    case EditOperation::remove:
                        result = remove_objects(frame, scene, planned.plan,
                                                *backends.mask_inpainter, planned.variant_index);
                        break;
                    case EditOperation::restyle:
                        result = restyle_objects(frame, scene, planned.plan, *textures,
                                                 planned.variant_index);
                        break;
                    case EditOperation::replace:
                        result = replace_object(frame, scene, planned.plan,
                                                *backends.prompted_inpainter, *backends.suggester,
                                                planned.variant_index);
                        break;
                }
                if (!result.accepted()) {
                    (result.verdict == SafetyVerdict::target_conflict ? rejected_target
                                                                      : rejected_trajectory)++;
                    continue;
                }
                result.frame->backends_used["detector"] = backends.detector->descriptor();
                result.frame->backends_used["segmenter"] = backends.segmenter->descriptor();
                SaveOptions options;
                options.overwrite = config.overwrite;
                outputs.push_back(save_edited(*result.frame, out_root, options).image_path);
                ++executed;
            }

            std::lock_guard lock(mu);
            summary.plans += static_cast<int>(batch.plans.size());
            summary.executed += executed;
            summary.rejected_target += rejected_target;
            summary.rejected_trajectory += rejected_trajectory;
            summary.outputs.insert(summary.outputs.end(), outputs.begin(), outputs.end());
            summary.warnings.insert(summary.warnings.end(), warnings.begin(), warnings.end());
        } catch (const std::exception& e) {
            std::lock_guard lock(mu);
            summary.skipped.push_back({frame_id, e.what()});
        }
    });

    std::sort(summary.outputs.begin(), summary.outputs.end());
    std::sort(summary.skipped.begin(), summary.skipped.end(),
              [](const SkipEntry& a, const SkipEntry& b) { return a.frame_id < b.frame_id; });
    std::sort(summary.warnings.begin(), summary.warnings.end());

    // The on-disk summary stores outputs relative to the run root so a run
    // directory can be moved or diffed as a unit.
    json disk_summary = to_json(summary);
    json relative_outputs = json::array();
    for (const fs::path& path : summary.outputs) {
        relative_outputs.push_back(fs::relative(path, out_root).string());
    }
    disk_summary["outputs"] = std::move(relative_outputs);
    write_json_to(disk_summary, out_root / "edit_summary.json");
    return summary;
}

namespace {

// frame_id -> [(key, path)] where key is "frame" for the raw observation and
// the file stem for edit outputs.
std::map<std::string, std::vector<std::pair<std::string, fs::path>>> collect_images(
    const fs::path& root) {
    std::map<std::string, std::vector<std::pair<std::string, fs::path>>> out;
    const fs::path frames_dir = root / "frames";
    if (fs::exists(frames_dir)) {
        for (const auto& entry : fs::directory_iterator(frames_dir)) {
            if (entry.path().extension() == ".png") {
                out[entry.path().stem().string()].emplace_back("frame", entry.path());
            }
        }
    }
    const fs::path edits_dir = root / "edits";
    if (fs::exists(edits_dir)) {
        for (const auto& entry : fs::recursive_directory_iterator(edits_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".png") {
                out[entry.path().parent_path().filename().string()].emplace_back(
                    entry.path().stem().string(), entry.path());
            }
        }
    }
    for (auto& [id, images] : out) std::sort(images.begin(), images.end());
    if (out.empty()) throw IoError("no images found under " + root.string());
    return out;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

EvalSummary cmd_eval_ssim(const fs::path& a_root, const fs::path& b_root,
                          const fs::path& out_root, const PipelineConfig& config) {
    const auto images_a = collect_images(a_root);
    const auto images_b = collect_images(b_root);
    fs::create_directories(out_root);

    EvalSummary summary;
    summary.kind = "ssim";
    std::vector<ReportRow> rows;
    std::vector<double> values;

    for (const auto& [frame_id, list_a] : images_a) {
        auto it = images_b.find(frame_id);
        if (it == images_b.end()) {
            summary.warnings.push_back("frame '" + frame_id + "' missing from " + b_root.string());
            continue;
        }
        std::map<std::string, fs::path> by_key(it->second.begin(), it->second.end());
        for (const auto& [key, path_a] : list_a) {
            fs::path path_b;
            std::string key_b;
            if (auto match = by_key.find(key); match != by_key.end()) {
                path_b = match->second;
                key_b = key;
            } else if (auto frame = by_key.find("frame"); frame != by_key.end()) {
                path_b = frame->second;
                key_b = "frame";
            } else {
                summary.warnings.push_back("no counterpart for '" + frame_id + "/" + key + "'");
                continue;
            }
            const double value = ssim(to_gray(load_image_png(path_a)),
                                      to_gray(load_image_png(path_b)), config.ssim);
            rows.push_back({"ssim", frame_id + ":" + key + "|" + key_b, value});
            values.push_back(value);
        }
    }
    if (values.empty()) throw IoError("no comparable image pairs between the two roots");

    summary.count = static_cast<int>(values.size());
    summary.headline["mean"] = std::accumulate(values.begin(), values.end(), 0.0) /
                               static_cast<double>(values.size());
    summary.headline["median"] = median_of(values);
    summary.headline["min"] = *std::min_element(values.begin(), values.end());
    summary.csv_path = out_root / "ssim_report.csv";
    write_report_csv(rows, summary.csv_path);
    return summary;
}

EvalSummary cmd_eval_fid(const fs::path& generated_root, const fs::path& real_root,
                         const fs::path& out_root, const PipelineConfig& config) {
    const auto images_gen = collect_images(generated_root);
    const auto images_real = collect_images(real_root);
    fs::create_directories(out_root);

    BackendSet backends = make_backends(config, generated_root);
    FeatureExtractor& extractor = *backends.feature_extractor;

    auto load_all = [](const std::map<std::string, std::vector<std::pair<std::string, fs::path>>>&
                           images) {
        std::vector<std::pair<std::string, fs::path>> flat;
        for (const auto& [frame_id, list] : images) {
            for (const auto& [key, path] : list) flat.emplace_back(key, path);
        }
        std::sort(flat.begin(), flat.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
        return flat;
    };

    const auto real_list = load_all(images_real);
    std::vector<Image> real_images;
    for (const auto& [key, path] : real_list) real_images.push_back(load_image_png(path));
    if (real_images.size() < 2) throw IoError("need at least 2 reference images for FID");
    const auto real_features = extractor.embed(real_images);

    auto to_matrix = [](const std::vector<std::vector<double>>& rows) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(rows.front().size()));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
        return m;
    };
    const GaussianSummary real_gaussian = fit_gaussian(to_matrix(real_features));

    // Group generated images by operation (file stems are <op>_<hash>_<variant>;
    // raw frames count toward "all" only).
    std::map<std::string, std::vector<fs::path>> groups;
    for (const auto& [key, path] : load_all(images_gen)) {
        groups["all"].push_back(path);
        const auto underscore = key.find('_');
        if (underscore == std::string::npos) continue;
        const std::string op = key.substr(0, underscore);
        if (op == "remove" || op == "restyle" || op == "replace") groups[op].push_back(path);
    }

    EvalSummary summary;
    summary.kind = "fid";
    std::vector<ReportRow> rows;
    for (const auto& [group, paths] : groups) {
        if (paths.size() < 2) {
            summary.warnings.push_back("group '" + group + "' has fewer than 2 images; skipped");
            continue;
        }
        std::vector<Image> batch;
        for (const fs::path& path : paths) batch.push_back(load_image_png(path));
        const GaussianSummary g = fit_gaussian(to_matrix(extractor.embed(batch)));
        const double value = frechet_distance(g, real_gaussian);
        rows.push_back({"fid", group, value});
        summary.headline[group] = value;
        ++summary.count;
    }
    if (rows.empty()) throw IoError("no image group had enough samples for FID");

    summary.csv_path = out_root / "fid_report.csv";
    write_report_csv(rows, summary.csv_path);
    return summary;
}

EvalSummary cmd_eval_apa(const fs::path& samples_path, const fs::path& out_root,
                         const PipelineConfig& config) {
    (void)config;
    std::ifstream in(samples_path);
    if (!in) throw IoError("cannot open APA samples: " + samples_path.string());
    fs::create_directories(out_root);

    std::vector<ApaSample> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw IoError("malformed APA sample at " + samples_path.string() + ":" +
                          std::to_string(line_no) + ": " + e.what());
        }
        ApaSample sample;
        sample.frame_id = doc.value("frame_id", "sample_" + std::to_string(line_no));
        for (const auto& point : doc.at("points")) {
            sample.predicted_points.emplace_back(point.at(0).get<int>(), point.at(1).get<int>());
        }
        fs::path mask_path = doc.at("mask_path").get<std::string>();
        if (mask_path.is_relative()) mask_path = samples_path.parent_path() / mask_path;
        sample.target_mask = load_mask_png(mask_path);
        if (!sample.target_mask.any()) {
            throw IoError("APA sample '" + sample.frame_id + "' has an empty target mask");
        }
        if (doc.contains("clutter_level")) {
            const std::string level = doc.at("clutter_level").get<std::string>();
            if (level == "LC") {
                sample.clutter = ClutterLevel::LC;
            } else if (level == "MC") {
                sample.clutter = ClutterLevel::MC;
            } else if (level == "HC") {
                sample.clutter = ClutterLevel::HC;
            } else {
                sample.clutter = ClutterLevel::UNCLASSIFIED;
            }
        } else if (doc.contains("object_count")) {
            sample.clutter = clutter_level(doc.at("object_count").get<int>());
        }
        samples.push_back(std::move(sample));
    }

    const ApaResult result = apa(samples);
    EvalSummary summary;
    summary.kind = "apa";
    summary.warnings = result.warnings;
    std::vector<ReportRow> rows;
    for (const auto& [level, percent] : result.percent_by_level) {
        rows.push_back({"apa", to_string(level), percent});
        summary.headline[to_string(level)] = percent;
        summary.count += result.samples_by_level.at(level);
    }
    if (rows.empty()) throw IoError("no usable APA samples in " + samples_path.string());
    summary.csv_path = out_root / "apa_report.csv";
    write_report_csv(rows, summary.csv_path);
    return summary;
}

ReportSummary cmd_report(const fs::path& run_dir) {
    if (!fs::exists(run_dir)) throw IoError("run directory does not exist: " + run_dir.string());

    ReportSummary summary;
    json metrics = json::object();

    const fs::path ssim_csv = run_dir / "ssim_report.csv";
    if (fs::exists(ssim_csv)) {
        std::vector<double> values;
        for (const ReportRow& row : read_report_csv(ssim_csv)) values.push_back(row.value);
        const fs::path figure = run_dir / "ssim_hist.png";
        render_histogram(values, 20, "SSIM distribution (removal vs. reference)", figure);
        summary.figures.push_back(figure);
        metrics["ssim"] = {{"count", values.size()}, {"median", median_of(values)}};
    }
    const fs::path fid_csv = run_dir / "fid_report.csv";
    if (fs::exists(fid_csv)) {
        std::vector<std::pair<std::string, double>> bars;
        for (const ReportRow& row : read_report_csv(fid_csv)) {
            bars.emplace_back(row.group, row.value);
            metrics["fid"][row.group] = row.value;
        }
        const fs::path figure = run_dir / "fid_by_operation.png";
        render_bar_chart(bars, "FID per edit operation", figure);
        summary.figures.push_back(figure);
    }
    const fs::path apa_csv = run_dir / "apa_report.csv";
    if (fs::exists(apa_csv)) {
        std::vector<std::pair<std::string, double>> bars;
        for (const ReportRow& row : read_report_csv(apa_csv)) {
            bars.emplace_back(row.group, row.value);
            metrics["apa"][row.group] = row.value;
        }
        const fs::path figure = run_dir / "apa_by_clutter.png";
        render_bar_chart(bars, "APA (%) per clutter level", figure);
        summary.figures.push_back(figure);
    }

    if (summary.figures.empty()) {
        throw IoError("no metric reports (ssim_report.csv / fid_report.csv / apa_report.csv) in " +
                      run_dir.string());
    }
    summary.summary_path = run_dir / "report_summary.json";
    write_json_to(metrics, summary.summary_path);
    return summary;
}

json to_json(const ParseSummary& summary) {
    json skipped = json::array();
    for (const SkipEntry& s : summary.skipped) {
        skipped.push_back({{"frame_id", s.frame_id}, {"reason", s.reason}});
    }
    return {{"command", "parse"},
            {"frames", summary.frames},
            {"scenes_written", summary.scenes_written},
            {"skipped", skipped},
            {"report", summary.report_path.string()}};
}

json to_json(const EditSummary& summary) {
    json skipped = json::array();
    for (const SkipEntry& s : summary.skipped) {
        skipped.push_back({{"frame_id", s.frame_id}, {"reason", s.reason}});
    }
    json outputs = json::array();
    for (const fs::path& p : summary.outputs) outputs.push_back(p.string());
    return {{"command", "edit"},
            {"frames", summary.frames},
            {"plans", summary.plans},
            {"executed", summary.executed},
            {"rejected_target", summary.rejected_target},
            {"rejected_trajectory", summary.rejected_trajectory},
            {"skipped", skipped},
            {"warnings", summary.warnings},
            {"outputs", outputs}};
}

json to_json(const EvalSummary& summary) {
    return {{"command", "eval"},
            {"kind", summary.kind},
            {"csv", summary.csv_path.string()},
            {"count", summary.count},
            {"headline", summary.headline},
            {"warnings", summary.warnings}};
}

json to_json(const ReportSummary& summary) {
    json figures = json::array();
    for (const fs::path& p : summary.figures) figures.push_back(p.string());
    return {{"command", "report"},
            {"figures", figures},
            {"summary", summary.summary_path.string()}};
}

}  // namespace niceaug
