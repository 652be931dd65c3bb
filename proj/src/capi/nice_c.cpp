#include "nice/nice_c.h"

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "nice/errors.hpp"
#include "nice/pipeline.hpp"

using nlohmann::json;

struct nice_pipeline {
    niceaug::PipelineConfig config;
    std::string last_error;
};

namespace {

constexpr const char* kVersion = "0.1.0";

char* dup_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out) std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

nice_status classify(const std::exception& e) {
    if (dynamic_cast<const niceaug::ConfigError*>(&e)) return NICE_ERROR_CONFIG;
    if (dynamic_cast<const niceaug::InvalidArgumentError*>(&e)) return NICE_ERROR_CONFIG;
    if (dynamic_cast<const niceaug::BackendError*>(&e)) return NICE_ERROR_BACKEND;
    if (dynamic_cast<const niceaug::IoError*>(&e)) return NICE_ERROR_IO;
    if (dynamic_cast<const niceaug::FormatError*>(&e)) return NICE_ERROR_IO;
    if (dynamic_cast<const niceaug::Error*>(&e)) return NICE_ERROR_INTERNAL;
    return NICE_ERROR_INTERNAL;
}

template <typename Fn>
nice_status run_command(nice_pipeline* pipeline, char** out_summary_json, Fn&& fn) {
    if (!pipeline) return NICE_ERROR_CONFIG;
    pipeline->last_error.clear();
    if (out_summary_json) *out_summary_json = nullptr;
    try {
        const auto [doc, partial] = fn();
        if (out_summary_json) *out_summary_json = dup_string(doc.dump(2));
        return partial ? NICE_ERROR_PARTIAL : NICE_OK;
    } catch (const std::exception& e) {
        pipeline->last_error = e.what();
        return classify(e);
    } catch (...) {
        pipeline->last_error = "unknown error";
        return NICE_ERROR_INTERNAL;
    }
}

bool require(nice_pipeline* pipeline, const char* value, const char* name) {
    if (value && *value) return true;
    if (pipeline) pipeline->last_error = std::string(name) + " is required";
    return false;
}

}  // namespace

extern "C" {

const char* nice_version(void) { return kVersion; }

namespace {
thread_local std::string g_create_error;
}

nice_status nice_pipeline_create(const char* config_json, nice_pipeline** out_pipeline) {
    if (!out_pipeline) return NICE_ERROR_CONFIG;
    *out_pipeline = nullptr;
    g_create_error.clear();
    auto handle = new (std::nothrow) nice_pipeline();
    if (!handle) return NICE_ERROR_INTERNAL;
    try {
        json doc = json::object();
        if (config_json && *config_json) doc = json::parse(config_json);
        handle->config = niceaug::parse_pipeline_config(doc);
    } catch (const std::exception& e) {
        g_create_error = e.what();
        delete handle;
        return NICE_ERROR_CONFIG;
    }
    *out_pipeline = handle;
    return NICE_OK;
}

void nice_pipeline_destroy(nice_pipeline* pipeline) { delete pipeline; }

const char* nice_last_error(const nice_pipeline* pipeline) {
    // With a null handle this reports the most recent creation failure on
    // this thread.
    return pipeline ? pipeline->last_error.c_str() : g_create_error.c_str();
}

nice_status nice_run_parse(nice_pipeline* pipeline, const char* dataset_root,
                           const char* out_root, char** out_summary_json) {
    if (!require(pipeline, dataset_root, "dataset_root") || !require(pipeline, out_root, "out_root")) {
        return NICE_ERROR_CONFIG;
    }
    return run_command(pipeline, out_summary_json, [&] {
        const auto summary = niceaug::cmd_parse(dataset_root, out_root, pipeline->config);
        return std::pair{niceaug::to_json(summary), !summary.skipped.empty()};
    });
}

nice_status nice_run_edit(nice_pipeline* pipeline, const char* dataset_root,
                          const char* out_root, char** out_summary_json) {
    if (!require(pipeline, dataset_root, "dataset_root") || !require(pipeline, out_root, "out_root")) {
        return NICE_ERROR_CONFIG;
    }
    return run_command(pipeline, out_summary_json, [&] {
        const auto summary = niceaug::cmd_edit(dataset_root, out_root, pipeline->config);
        return std::pair{niceaug::to_json(summary), !summary.skipped.empty()};
    });
}

nice_status nice_run_eval(nice_pipeline* pipeline, const char* kind, const char* input_a,
                          const char* input_b, const char* out_root, char** out_summary_json) {
    if (!require(pipeline, kind, "kind") || !require(pipeline, input_a, "input_a") ||
        !require(pipeline, out_root, "out_root")) {
        return NICE_ERROR_CONFIG;
    }
    const std::string kind_s = kind;
    return run_command(pipeline, out_summary_json, [&] {
        niceaug::EvalSummary summary;
        if (kind_s == "ssim") {
            if (!input_b || !*input_b) throw niceaug::ConfigError("ssim needs two dataset roots");
            summary = niceaug::cmd_eval_ssim(input_a, input_b, out_root, pipeline->config);
        } else if (kind_s == "fid") {
            if (!input_b || !*input_b) throw niceaug::ConfigError("fid needs two dataset roots");
            summary = niceaug::cmd_eval_fid(input_a, input_b, out_root, pipeline->config);
        } else if (kind_s == "apa") {
            summary = niceaug::cmd_eval_apa(input_a, out_root, pipeline->config);
        } else {
            throw niceaug::ConfigError("unknown eval kind '" + kind_s + "'");
        }
        return std::pair{niceaug::to_json(summary), false};
    });
}

nice_status nice_run_report(nice_pipeline* pipeline, const char* run_dir,
                            char** out_summary_json) {
    if (!require(pipeline, run_dir, "run_dir")) return NICE_ERROR_CONFIG;
    return run_command(pipeline, out_summary_json, [&] {
        const auto summary = niceaug::cmd_report(run_dir);
        return std::pair{niceaug::to_json(summary), false};
    });
}

void nice_string_free(char* text) { std::free(text); }

}  // extern "C"
