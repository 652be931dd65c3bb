#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace niceaug {

// Flat report row; all metric CSVs share the header "metric,group,value".
struct ReportRow {
    std::string metric;
    std::string group;
    double value = 0.0;
};

void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& path);
std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);

// Simple rendered figures (PNG) for run summaries.
void render_histogram(const std::vector<double>& values, int bins, const std::string& title,
                      const std::filesystem::path& path);
void render_bar_chart(const std::vector<std::pair<std::string, double>>& bars,
                      const std::string& title, const std::filesystem::path& path);

}  // namespace niceaug
