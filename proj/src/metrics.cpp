#include "nice/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nice/errors.hpp"

namespace niceaug {

GrayImage to_gray(const Image& image) {
    GrayImage out(image.height, image.width);
    out.values = to_luminance(image);
    return out;
}

double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params) {
    if (a.height != b.height || a.width != b.width) {
        throw DimensionMismatchError("ssim: image dimensions disagree");
    }
    const int w = params.window;
    if (w < 3 || w % 2 == 0) throw InvalidArgumentError("ssim: window must be odd and >= 3");
    if (params.k1 <= 0.0 || params.k2 <= 0.0) {
        throw InvalidArgumentError("ssim: k1 and k2 must be positive");
    }
    if (a.height < w || a.width < w) {
        throw InvalidArgumentError("ssim: image smaller than the window");
    }

    const int H = a.height, W = a.width;
    const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
    const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);

    // Integral images for window sums: x, y, x^2, y^2, xy.
    const int iw = W + 1;
    std::vector<double> sx((H + 1) * iw, 0.0), sy((H + 1) * iw, 0.0), sxx((H + 1) * iw, 0.0),
        syy((H + 1) * iw, 0.0), sxy((H + 1) * iw, 0.0);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const double va = a.at(y, x), vb = b.at(y, x);
            const std::size_t idx = static_cast<std::size_t>(y + 1) * iw + (x + 1);
            const std::size_t up = idx - iw, left = idx - 1, diag = up - 1;
            sx[idx] = va + sx[up] + sx[left] - sx[diag];
            sy[idx] = vb + sy[up] + sy[left] - sy[diag];
            sxx[idx] = va * va + sxx[up] + sxx[left] - sxx[diag];
            syy[idx] = vb * vb + syy[up] + syy[left] - syy[diag];
            sxy[idx] = va * vb + sxy[up] + sxy[left] - sxy[diag];
        }
    }
    auto window_sum = [&](const std::vector<double>& s, int y, int x) {
        const std::size_t r0 = static_cast<std::size_t>(y), r1 = static_cast<std::size_t>(y + w);
        return s[r1 * iw + (x + w)] - s[r0 * iw + (x + w)] - s[r1 * iw + x] + s[r0 * iw + x];
    };

    const double n = static_cast<double>(w) * w;
    const double norm = n - 1.0;  // sample variance
    double total = 0.0;
    std::size_t windows = 0;
    for (int y = 0; y + w <= H; ++y) {
        for (int x = 0; x + w <= W; ++x) {
            const double sum_x = window_sum(sx, y, x), sum_y = window_sum(sy, y, x);
            const double mu_x = sum_x / n, mu_y = sum_y / n;
            const double var_x = (window_sum(sxx, y, x) - sum_x * mu_x) / norm;
            const double var_y = (window_sum(syy, y, x) - sum_y * mu_y) / norm;
            const double cov = (window_sum(sxy, y, x) - sum_x * mu_y) / norm;
            const double val = ((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)) /
                               ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2));
            total += val;
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

GaussianSummary fit_gaussian(const Eigen::MatrixXd& features) {
    const auto n = features.rows();
    if (n < 2) throw InvalidArgumentError("fit_gaussian: need at least 2 samples");

    GaussianSummary g;
    g.count = static_cast<int>(n);
    g.mean = features.colwise().mean();
    const Eigen::MatrixXd centered = features.rowwise() - g.mean.transpose();
    g.covariance = (centered.transpose() * centered) / static_cast<double>(n - 1);
    g.covariance = ((g.covariance + g.covariance.transpose()) / 2.0).eval();
    return g;
}

namespace {

constexpr double kEigClampTolerance = 1e-8;

// Symmetric PSD square root; eigenvalues slightly below zero are clamped.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw Error("frechet_distance: eigendecomposition failed");
    Eigen::VectorXd lambda = es.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < -kEigClampTolerance) {
            throw InvalidArgumentError(std::string("frechet_distance: matrix not PSD: ") + what);
        }
        lambda[i] = std::max(0.0, lambda[i]);
    }
    return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double frechet_distance(const GaussianSummary& g1, const GaussianSummary& g2) {
    if (g1.mean.size() != g2.mean.size()) {
        throw DimensionMismatchError("frechet_distance: feature dimensions disagree");
    }
    const double mean_term = (g1.mean - g2.mean).squaredNorm();

    const Eigen::MatrixXd root1 = psd_sqrt(g1.covariance, "covariance 1");
    // S1 S2 is similar to sqrt(S1) S2 sqrt(S1), which is symmetric PSD, so its
    // eigenvalues give Tr((S1 S2)^{1/2}) directly.
    Eigen::MatrixXd product = root1 * g2.covariance * root1;
    product = ((product + product.transpose()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(product);
    if (es.info() != Eigen::Success) throw Error("frechet_distance: eigendecomposition failed");
    double trace_sqrt = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lambda = es.eigenvalues()[i];
        if (lambda < -kEigClampTolerance) {
            throw InvalidArgumentError("frechet_distance: product matrix not PSD");
        }
        trace_sqrt += std::sqrt(std::max(0.0, lambda));
    }

    const double value =
        mean_term + g1.covariance.trace() + g2.covariance.trace() - 2.0 * trace_sqrt;
    // Exact-zero distances can land a hair negative numerically.
    return std::max(0.0, value);
}

const char* to_string(ClutterLevel level) {
    switch (level) {
        case ClutterLevel::LC: return "LC";
        case ClutterLevel::MC: return "MC";
        case ClutterLevel::HC: return "HC";
        case ClutterLevel::UNCLASSIFIED: return "UNCLASSIFIED";
    }
    return "UNCLASSIFIED";
}

ClutterLevel clutter_level(int object_count) {
    if (object_count >= 1 && object_count <= 2) return ClutterLevel::LC;
    if (object_count >= 5 && object_count <= 8) return ClutterLevel::MC;
    if (object_count >= 11 && object_count <= 15) return ClutterLevel::HC;
    return ClutterLevel::UNCLASSIFIED;
}

ApaResult apa(const std::vector<ApaSample>& samples) {
    ApaResult result;
    std::map<ClutterLevel, double> sum_by_level;

    for (const ApaSample& sample : samples) {
        if (sample.predicted_points.empty()) {
            result.warnings.push_back("sample '" + sample.frame_id +
                                      "' has no predicted points; excluded");
            continue;
        }
        const int h = sample.target_mask.height(), w = sample.target_mask.width();
        std::size_t inside = 0;
        for (const auto& [x, y] : sample.predicted_points) {
            if (x < 0 || y < 0 || x >= w || y >= h) {
                result.warnings.push_back("sample '" + sample.frame_id + "' point (" +
                                          std::to_string(x) + "," + std::to_string(y) +
                                          ") outside image bounds; counted as miss");
                continue;
            }
            if (sample.target_mask.test(y, x)) ++inside;
        }
        const double fraction =
            static_cast<double>(inside) / static_cast<double>(sample.predicted_points.size());
        result.sample_fractions.push_back(fraction);
        sum_by_level[sample.clutter] += fraction;
        result.samples_by_level[sample.clutter] += 1;
    }

    for (const auto& [level, count] : result.samples_by_level) {
        result.percent_by_level[level] = 100.0 * sum_by_level[level] / count;
    }
    return result;
}

}  // namespace niceaug
