#include "nice/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "nice/errors.hpp"

namespace niceaug {

void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path.string());
    out << "metric,group,value\n";
    for (const ReportRow& row : rows) {
        out << row.metric << ',' << row.group << ',' << std::fixed << std::setprecision(6)
            << row.value << '\n';
    }
}

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read report: " + path.string());
    std::vector<ReportRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.rfind(',');
        if (c1 == std::string::npos || c2 == c1) {
            throw IoError("malformed report row in " + path.string() + ": " + line);
        }
        rows.push_back(
            {line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1), std::stod(line.substr(c2 + 1))});
    }
    return rows;
}

namespace {

constexpr int kChartW = 640;
constexpr int kChartH = 420;
constexpr int kMarginLeft = 60;
constexpr int kMarginBottom = 50;
constexpr int kMarginTop = 40;
constexpr int kMarginRight = 20;

std::string format_value(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

cv::Mat chart_canvas(const std::string& title) {
    cv::Mat canvas(kChartH, kChartW, CV_8UC3, cv::Scalar(250, 250, 250));
    cv::putText(canvas, title, {kMarginLeft, 26}, cv::FONT_HERSHEY_SIMPLEX, 0.6,
                cv::Scalar(30, 30, 30), 1, cv::LINE_AA);
    cv::line(canvas, {kMarginLeft, kChartH - kMarginBottom},
             {kChartW - kMarginRight, kChartH - kMarginBottom}, cv::Scalar(60, 60, 60), 1);
    cv::line(canvas, {kMarginLeft, kMarginTop}, {kMarginLeft, kChartH - kMarginBottom},
             cv::Scalar(60, 60, 60), 1);
    return canvas;
}

}  // namespace

void render_histogram(const std::vector<double>& values, int bins, const std::string& title,
                      const std::filesystem::path& path) {
    if (values.empty()) throw InvalidArgumentError("render_histogram: no values");
    if (bins < 1) throw InvalidArgumentError("render_histogram: bins must be >= 1");

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    double lo = *min_it, hi = *max_it;
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<int> counts(bins, 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    }
    const int peak = *std::max_element(counts.begin(), counts.end());

    cv::Mat canvas = chart_canvas(title);
    const int plot_w = kChartW - kMarginLeft - kMarginRight;
    const int plot_h = kChartH - kMarginTop - kMarginBottom;
    for (int b = 0; b < bins; ++b) {
        const int x0 = kMarginLeft + b * plot_w / bins;
        const int x1 = kMarginLeft + (b + 1) * plot_w / bins - 2;
        const int h = peak > 0 ? counts[b] * plot_h / peak : 0;
        const int y0 = kChartH - kMarginBottom - h;
        cv::rectangle(canvas, {x0, y0}, {std::max(x0 + 1, x1), kChartH - kMarginBottom},
                      cv::Scalar(180, 120, 40), cv::FILLED);
    }
    cv::putText(canvas, format_value(lo), {kMarginLeft - 10, kChartH - kMarginBottom + 20},
                cv::FONT_HERSHEY_SIMPLEX, 0.45, cv::Scalar(60, 60, 60), 1, cv::LINE_AA);
    cv::putText(canvas, format_value(hi), {kChartW - kMarginRight - 60, kChartH - kMarginBottom + 20},
                cv::FONT_HERSHEY_SIMPLEX, 0.45, cv::Scalar(60, 60, 60), 1, cv::LINE_AA);
    cv::putText(canvas, "n=" + std::to_string(values.size()), {kChartW - 120, 26},
                cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(60, 60, 60), 1, cv::LINE_AA);
    if (!cv::imwrite(path.string(), canvas)) throw IoError("cannot write " + path.string());
}

void render_bar_chart(const std::vector<std::pair<std::string, double>>& bars,
                      const std::string& title, const std::filesystem::path& path) {
    if (bars.empty()) throw InvalidArgumentError("render_bar_chart: no bars");
    double peak = 0.0;
    for (const auto& [label, v] : bars) peak = std::max(peak, v);
    if (peak <= 0.0) peak = 1.0;

    cv::Mat canvas = chart_canvas(title);
    const int plot_w = kChartW - kMarginLeft - kMarginRight;
    const int plot_h = kChartH - kMarginTop - kMarginBottom;
    const int n = static_cast<int>(bars.size());
    for (int i = 0; i < n; ++i) {
        const auto& [label, value] = bars[static_cast<std::size_t>(i)];
        const int slot = plot_w / n;
        const int x0 = kMarginLeft + i * slot + slot / 6;
        const int x1 = kMarginLeft + (i + 1) * slot - slot / 6;
        const int h = static_cast<int>(std::lround(value / peak * plot_h));
        const int y0 = kChartH - kMarginBottom - h;
        cv::rectangle(canvas, {x0, y0}, {x1, kChartH - kMarginBottom}, cv::Scalar(90, 150, 60),
                      cv::FILLED);
        cv::putText(canvas, label, {x0, kChartH - kMarginBottom + 20}, cv::FONT_HERSHEY_SIMPLEX,
                    0.45, cv::Scalar(60, 60, 60), 1, cv::LINE_AA);
        cv::putText(canvas, format_value(value), {x0, std::max(kMarginTop, y0 - 6)},
                    cv::FONT_HERSHEY_SIMPLEX, 0.45, cv::Scalar(60, 60, 60), 1, cv::LINE_AA);
    }
    if (!cv::imwrite(path.string(), canvas)) throw IoError("cannot write " + path.string());
}

}  // namespace niceaug
