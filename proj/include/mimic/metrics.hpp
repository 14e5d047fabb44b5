#pragma once

#include <optional>
#include <string>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mimic/body_model.hpp"
#include "mimic/image.hpp"

namespace mimic {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

// 10 log10(peak^2 / MSE) over all channels; +inf for identical images.
double psnr(const RgbImage& a, const RgbImage& b, double peak = 255.0);

// Gaussian-window SSIM (11x11, sigma 1.5, K1 0.01, K2 0.03, L 255), mean over
// all window positions fully inside the image. RGB is the mean of the channels.
double ssim(const GrayImage& a, const GrayImage& b);
double ssim(const RgbImage& a, const RgbImage& b);

// Mean absolute per-channel difference divided by 255.
double l1(const RgbImage& a, const RgbImage& b);

// Mean absolute per-channel difference in 8-bit units over the pixels whose
// `foreground` entry is nonzero (one entry per pixel). 0 for an empty mask.
double masked_mae(const RgbImage& a, const RgbImage& b, std::span<const std::uint8_t> foreground);

// Millimeters; inputs in meters.
double mpvpe(std::span<const Vec3> pred, std::span<const Vec3> gt);

struct SimilarityTransform {
    double scale = 1.0;
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return scale * rotation * p + translation; }
};

// Least-squares similarity taking `pred` onto `gt` (SVD of the cross-covariance
// with reflection correction). Throws for fewer than 3 points or collinear sets.
SimilarityTransform procrustes_align(std::span<const Vec3> pred, std::span<const Vec3> gt);
double pa_mpvpe(std::span<const Vec3> pred, std::span<const Vec3> gt);

struct FrameMetrics {
    double psnr = 0.0;  // may be +inf
    double ssim = 0.0;
    double l1 = 0.0;
    std::optional<double> mpvpe;
    std::optional<double> pa_mpvpe;
};

struct MetricsReport {
    std::vector<FrameMetrics> per_frame;
    double mean_psnr = 0.0;  // over finite frames; +inf if every frame is identical
    int infinite_psnr_frames = 0;
    double mean_ssim = 0.0;
    double mean_l1 = 0.0;
    std::optional<double> mean_mpvpe;
    std::optional<double> mean_pa_mpvpe;
};

using VertexStream = std::vector<std::vector<Vec3>>;

MetricsReport evaluate_sequence(std::span<const RgbImage> pred, std::span<const RgbImage> gt,
                                const VertexStream* pred_vertices = nullptr,
                                const VertexStream* gt_vertices = nullptr);

// Units are spelled out; learned metrics are present as null slots.
nlohmann::json metrics_report_to_json(const MetricsReport& report);
// Fixed-width table: PSNR SSIM FID LPIPS L1 FID-VID FVD MPVPE PA-MPVPE.
std::string format_metrics_table(const MetricsReport& report);

}  // namespace mimic
