#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "nice/image.hpp"
#include "nice/mask.hpp"

namespace niceaug {

// Windowed SSIM with a uniform (box) window over all fully contained window
// positions. Sample (N-1) variance convention; parameters follow the usual
// SSIM constants.
struct SsimParams {
    int window = 11;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
};

// Grayscale plane for the metric path: row-major doubles in [0, dynamic_range].
struct GrayImage {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    GrayImage() = default;
    GrayImage(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w, 0.0) {}
    double& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

GrayImage to_gray(const Image& image);  // luminance Y = 0.299 R + 0.587 G + 0.114 B

// Mean SSIM map value over all valid window positions.
double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params = {});

// Gaussian fit of a feature matrix (rows = samples).
struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;  // symmetric PSD, unbiased
    int count = 0;
};

GaussianSummary fit_gaussian(const Eigen::MatrixXd& features);

// ||mu1-mu2||^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2}); the matrix square root goes
// through an eigendecomposition of sqrt(S1) S2 sqrt(S1). Eigenvalues in
// [-1e-8, 0) are clamped to zero; anything below that is an error.
double frechet_distance(const GaussianSummary& g1, const GaussianSummary& g2);

enum class ClutterLevel { LC, MC, HC, UNCLASSIFIED };

const char* to_string(ClutterLevel level);

// 1-2 objects -> LC, 5-8 -> MC, 11-15 -> HC. The gaps are intentionally left
// unclassified rather than guessed.
ClutterLevel clutter_level(int object_count);

struct ApaSample {
    std::string frame_id;
    std::vector<std::pair<int, int>> predicted_points;  // (x, y)
    BinaryMask target_mask;
    ClutterLevel clutter = ClutterLevel::UNCLASSIFIED;
};

struct ApaResult {
    // Mean of per-sample hit fractions, as a percentage, per clutter level.
    std::map<ClutterLevel, double> percent_by_level;
    std::map<ClutterLevel, int> samples_by_level;
    std::vector<double> sample_fractions;  // one per counted sample, input order
    std::vector<std::string> warnings;
};

ApaResult apa(const std::vector<ApaSample>& samples);

}  // namespace niceaug
