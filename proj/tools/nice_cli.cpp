// Command-line front end. Deliberately thin: flags are folded into the JSON
// config document and everything else goes through the shared-library C API.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nice/nice_c.h"

using nlohmann::json;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> ops;
    std::optional<int> variants;
    std::optional<int> workers;
    std::optional<std::string> backends;
    std::optional<std::string> textures;
    bool overwrite = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Pipeline config file (JSON)");
    cmd->add_option("--seed", flags.seed, "Root seed for plan sampling");
    cmd->add_option("--ops", flags.ops, "Comma list of operations: remove,restyle,replace");
    cmd->add_option("--variants", flags.variants, "Variants per operation");
    cmd->add_option("--workers", flags.workers, "Frame-level worker cap");
    cmd->add_option("--backends", flags.backends, "Backend mode: stub or remote");
    cmd->add_option("--textures", flags.textures, "Texture store directory (for restyle)");
    cmd->add_flag("--overwrite", flags.overwrite, "Replace existing edit outputs");
}

// File config first, then flag overrides on top.
std::string build_config_json(const CommonFlags& flags) {
    json doc = json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            throw CLI::ValidationError("--config", "cannot open " + flags.config_path);
        }
        in >> doc;
    }
    if (flags.seed) doc["seed"] = *flags.seed;
    if (flags.workers) doc["workers"] = *flags.workers;
    if (flags.backends) doc["backends"]["mode"] = *flags.backends;
    if (flags.textures) doc["textures"]["root"] = *flags.textures;
    if (flags.overwrite) doc["output"]["overwrite"] = true;
    if (flags.variants) doc["planner"]["variants_per_operation"] = *flags.variants;
    if (flags.ops) {
        json ops = json::array();
        std::stringstream ss(*flags.ops);
        std::string op;
        while (std::getline(ss, op, ',')) {
            if (!op.empty()) ops.push_back(op);
        }
        doc["planner"]["operations"] = ops;
    }
    return doc.dump();
}

class Pipeline {
  public:
    explicit Pipeline(const std::string& config_json) {
        const nice_status status = nice_pipeline_create(config_json.c_str(), &handle_);
        if (status != NICE_OK) {
            std::cerr << "error: invalid configuration: " << nice_last_error(nullptr) << "\n";
            std::exit(1);
        }
    }
    ~Pipeline() { nice_pipeline_destroy(handle_); }
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    nice_pipeline* get() { return handle_; }

  private:
    nice_pipeline* handle_ = nullptr;
};

void print_summary(const char* summary_json) {
    if (!summary_json) return;
    const json doc = json::parse(summary_json, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        std::cout << summary_json << "\n";
        return;
    }
    const std::string command = doc.value("command", "");
    if (command == "parse") {
        std::cout << "frames:         " << doc.value("frames", 0) << "\n"
                  << "scenes written: " << doc.value("scenes_written", 0) << "\n"
                  << "skipped:        " << doc["skipped"].size() << "\n"
                  << "skip report:    " << doc.value("report", "") << "\n";
    } else if (command == "edit") {
        std::cout << "frames:              " << doc.value("frames", 0) << "\n"
                  << "plans:               " << doc.value("plans", 0) << "\n"
                  << "executed:            " << doc.value("executed", 0) << "\n"
                  << "rejected (target):   " << doc.value("rejected_target", 0) << "\n"
                  << "rejected (trajectory): " << doc.value("rejected_trajectory", 0) << "\n"
                  << "skipped frames:      " << doc["skipped"].size() << "\n";
    } else if (command == "eval") {
        std::cout << "kind:  " << doc.value("kind", "") << "\n"
                  << "count: " << doc.value("count", 0) << "\n"
                  << "csv:   " << doc.value("csv", "") << "\n";
        const json headline = doc.value("headline", json::object());
        for (const auto& [key, value] : headline.items()) {
            std::cout << "  " << key << ": " << value << "\n";
        }
    } else if (command == "report") {
        for (const auto& figure : doc.value("figures", json::array())) {
            std::cout << "figure: " << figure.get<std::string>() << "\n";
        }
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    for (const auto& skip : doc.value("skipped", json::array())) {
        std::cerr << "skipped " << skip.value("frame_id", "") << ": " << skip.value("reason", "")
                  << "\n";
    }
    for (const auto& warning : doc.value("warnings", json::array())) {
        std::cerr << "warning: " << warning.get<std::string>() << "\n";
    }
}

// 0 success, 1 fatal config/IO, 2 partial failures.
int exit_code_for(nice_pipeline* pipeline, nice_status status) {
    switch (status) {
        case NICE_OK:
            return 0;
        case NICE_ERROR_PARTIAL:
            return 2;
        default:
            std::cerr << "error: " << nice_last_error(pipeline) << "\n";
            return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scene enhancement for robot demonstration datasets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nice_version()));

    CommonFlags flags;
    std::string dataset, out, input_a, input_b, run_dir, samples;

    CLI::App* parse = app.add_subcommand("parse", "Decompose frames into scene graphs");
    parse->add_option("--dataset", dataset, "Dataset root")->required();
    parse->add_option("--out", out, "Output root")->required();
    add_common_flags(parse, flags);

    CLI::App* edit = app.add_subcommand("edit", "Plan and execute distractor edits");
    edit->add_option("--dataset", dataset, "Dataset root")->required();
    edit->add_option("--out", out, "Output root")->required();
    add_common_flags(edit, flags);

    CLI::App* eval = app.add_subcommand("eval", "Run a metric study");
    std::string kind;
    eval->add_option("kind", kind, "ssim | fid | apa")->required();
    eval->add_option("--a", input_a, "First input (dataset root, or samples file for apa)");
    eval->add_option("--b", input_b, "Second input (reference dataset root)");
    eval->add_option("--samples", samples, "APA samples file (JSON lines)");
    eval->add_option("--out", out, "Output root")->required();
    add_common_flags(eval, flags);

    CLI::App* report = app.add_subcommand("report", "Render figures from metric CSVs");
    report->add_option("--run", run_dir, "Run directory containing metric CSVs")->required();

    CLI11_PARSE(app, argc, argv);

    std::string config_json;
    try {
        config_json = build_config_json(flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    Pipeline pipeline(config_json);

    nice_status status = NICE_OK;
    char* summary = nullptr;
    if (parse->parsed()) {
        status = nice_run_parse(pipeline.get(), dataset.c_str(), out.c_str(), &summary);
    } else if (edit->parsed()) {
        status = nice_run_edit(pipeline.get(), dataset.c_str(), out.c_str(), &summary);
    } else if (eval->parsed()) {
        if (kind == "apa" && input_a.empty()) input_a = samples;
        status = nice_run_eval(pipeline.get(), kind.c_str(), input_a.c_str(), input_b.c_str(),
                               out.c_str(), &summary);
    } else if (report->parsed()) {
        status = nice_run_report(pipeline.get(), run_dir.c_str(), &summary);
    }

    print_summary(summary);
    nice_string_free(summary);
    return exit_code_for(pipeline.get(), status);
}
