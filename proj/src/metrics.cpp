#include "mimic/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "mimic/error.hpp"

namespace mimic {

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        compensation_ += (sum_ - t) + x;
    else
        compensation_ += (x - t) + sum_;
    sum_ = t;
}

namespace {

void check_same_size(const RgbImage& a, const RgbImage& b, const char* what)
{
    if (a.width() != b.width() || a.height() != b.height())
        throw ValidationError(std::string(what) + ": image sizes differ (" + std::to_string(a.width()) + "x" +
                              std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                              std::to_string(b.height()) + ")");
}

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

std::array<double, kWindow> gaussian_window()
{
    std::array<double, kWindow> w{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kWindow / 2;
        w[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += w[static_cast<std::size_t>(i)];
    }
    for (double& x : w)
        x /= sum;
    return w;
}

// Separable "valid" Gaussian filter of a row-major plane.
std::vector<double> filter_valid(const std::vector<double>& plane, int width, int height)
{
    static const std::array<double, kWindow> w = gaussian_window();
    const int ow = width - kWindow + 1, oh = height - kWindow + 1;
    std::vector<double> horizontal(static_cast<std::size_t>(ow) * height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < kWindow; ++k)
                s += w[static_cast<std::size_t>(k)] * plane[static_cast<std::size_t>(y) * width + x + k];
            horizontal[static_cast<std::size_t>(y) * ow + x] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < kWindow; ++k)
                s += w[static_cast<std::size_t>(k)] * horizontal[static_cast<std::size_t>(y + k) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    return out;
}

double ssim_plane(const std::vector<double>& a, const std::vector<double>& b, int width, int height)
{
    std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }
    const std::vector<double> mu_a = filter_valid(a, width, height);
    const std::vector<double> mu_b = filter_valid(b, width, height);
    const std::vector<double> e_aa = filter_valid(aa, width, height);
    const std::vector<double> e_bb = filter_valid(bb, width, height);
    const std::vector<double> e_ab = filter_valid(ab, width, height);
    CompensatedSum sum;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i], mb = mu_b[i];
        const double va = e_aa[i] - ma * ma, vb = e_bb[i] - mb * mb, cov = e_ab[i] - ma * mb;
        sum.add(((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) / ((ma * ma + mb * mb + kC1) * (va + vb + kC2)));
    }
    return sum.value() / static_cast<double>(mu_a.size());
}

void check_ssim_size(int width, int height)
{
    if (width < kWindow || height < kWindow)
        throw ValidationError("ssim: images must be at least 11x11, got " + std::to_string(width) + "x" +
                              std::to_string(height));
}

}  // namespace

double psnr(const RgbImage& a, const RgbImage& b, double peak)
{
    check_same_size(a, b, "psnr");
    CompensatedSum sum;
    const auto& da = a.data();
    const auto& db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = double(da[i]) - double(db[i]);
        sum.add(d * d);
    }
    if (da.empty())
        throw ValidationError("psnr: empty images");
    const double mse = sum.value() / static_cast<double>(da.size());
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const GrayImage& a, const GrayImage& b)
{
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("ssim: image sizes differ");
    check_ssim_size(a.width, a.height);
    const std::vector<double> pa(a.data.begin(), a.data.end());
    const std::vector<double> pb(b.data.begin(), b.data.end());
    return ssim_plane(pa, pb, a.width, a.height);
}

double ssim(const RgbImage& a, const RgbImage& b)
{
    check_same_size(a, b, "ssim");
    check_ssim_size(a.width(), a.height());
    const std::size_t n = static_cast<std::size_t>(a.width()) * static_cast<std::size_t>(a.height());
    double total = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> pa(n), pb(n);
        for (std::size_t i = 0; i < n; ++i) {
            pa[i] = a.data()[3 * i + c];
            pb[i] = b.data()[3 * i + c];
        }
        total += ssim_plane(pa, pb, a.width(), a.height());
    }
    return total / 3.0;
}

double l1(const RgbImage& a, const RgbImage& b)
{
    check_same_size(a, b, "l1");
    if (a.data().empty())
        throw ValidationError("l1: empty images");
    CompensatedSum sum;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        sum.add(std::abs(double(a.data()[i]) - double(b.data()[i])));
    return sum.value() / static_cast<double>(a.data().size()) / 255.0;
}

double masked_mae(const RgbImage& a, const RgbImage& b, std::span<const std::uint8_t> foreground)
{
    check_same_size(a, b, "masked_mae");
    const std::size_t n = static_cast<std::size_t>(a.width()) * static_cast<std::size_t>(a.height());
    if (foreground.size() != n)
        throw ValidationError("masked_mae: mask size does not match the images");
    CompensatedSum sum;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!foreground[i])
            continue;
        for (std::size_t c = 0; c < 3; ++c)
            sum.add(std::abs(double(a.data()[3 * i + c]) - double(b.data()[3 * i + c])));
        ++count;
    }
    return count == 0 ? 0.0 : sum.value() / (3.0 * static_cast<double>(count));
}

double mpvpe(std::span<const Vec3> pred, std::span<const Vec3> gt)
{
    if (pred.size() != gt.size())
        throw ValidationError("mpvpe: " + std::to_string(pred.size()) + " predicted vs " + std::to_string(gt.size()) +
                              " ground-truth vertices");
    if (pred.empty())
        throw ValidationError("mpvpe: no vertices");
    CompensatedSum sum;
    for (std::size_t i = 0; i < pred.size(); ++i)
        sum.add((pred[i] - gt[i]).norm());
    return 1000.0 * sum.value() / static_cast<double>(pred.size());
}

namespace {

Vec3 mean_of(std::span<const Vec3> points)
{
    CompensatedSum s[3];
    for (const Vec3& p : points)
        for (int k = 0; k < 3; ++k)
            s[k].add(p[k]);
    const double n = static_cast<double>(points.size());
    return {s[0].value() / n, s[1].value() / n, s[2].value() / n};
}

void check_not_collinear(std::span<const Vec3> points, const Vec3& mean, const char* which)
{
    Mat3 scatter = Mat3::Zero();
    for (const Vec3& p : points)
        scatter += (p - mean) * (p - mean).transpose();
    const Eigen::JacobiSVD<Mat3> svd(scatter);
    const Vec3 sv = svd.singularValues();
    if (!(sv[0] > 0.0) || sv[1] <= 1e-12 * sv[0])
        throw ValidationError(std::string("pa_mpvpe: ") + which + " vertices are collinear or coincident");
}

}  // namespace

SimilarityTransform procrustes_align(std::span<const Vec3> pred, std::span<const Vec3> gt)
{
    if (pred.size() != gt.size())
        throw ValidationError("pa_mpvpe: " + std::to_string(pred.size()) + " predicted vs " +
                              std::to_string(gt.size()) + " ground-truth vertices");
    if (pred.size() < 3)
        throw ValidationError("pa_mpvpe: at least 3 vertices are required");
    const Vec3 mu_x = mean_of(pred), mu_y = mean_of(gt);
    check_not_collinear(pred, mu_x, "predicted");
    check_not_collinear(gt, mu_y, "ground-truth");

    Mat3 cov = Mat3::Zero();
    double var_x = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const Vec3 x = pred[i] - mu_x;
        cov += (gt[i] - mu_y) * x.transpose();
        var_x += x.squaredNorm();
    }
    const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat3& u = svd.matrixU();
    const Mat3& v = svd.matrixV();
    Vec3 s(1.0, 1.0, 1.0);
    if (u.determinant() * v.determinant() < 0.0)
        s[2] = -1.0;
    SimilarityTransform t;
    t.rotation = u * s.asDiagonal() * v.transpose();
    t.scale = svd.singularValues().dot(s) / var_x;
    t.translation = mu_y - t.scale * t.rotation * mu_x;
    return t;
}

double pa_mpvpe(std::span<const Vec3> pred, std::span<const Vec3> gt)
{
    const SimilarityTransform t = procrustes_align(pred, gt);
    std::vector<Vec3> aligned(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
        aligned[i] = t.apply(pred[i]);
    return mpvpe(aligned, gt);
}

MetricsReport evaluate_sequence(std::span<const RgbImage> pred, std::span<const RgbImage> gt,
                                const VertexStream* pred_vertices, const VertexStream* gt_vertices)
{
    if (pred.size() != gt.size())
        throw ValidationError("evaluate_sequence: " + std::to_string(pred.size()) + " predicted vs " +
                              std::to_string(gt.size()) + " ground-truth frames");
    if (pred.empty())
        throw ValidationError("evaluate_sequence: no frames");
    if ((pred_vertices == nullptr) != (gt_vertices == nullptr))
        throw ValidationError("evaluate_sequence: vertex streams must be given for both pred and gt");
    if (pred_vertices && (pred_vertices->size() != pred.size() || gt_vertices->size() != pred.size()))
        throw ValidationError("evaluate_sequence: vertex streams must have one entry per frame");

    MetricsReport report;
    CompensatedSum psnr_sum, ssim_sum, l1_sum, mpvpe_sum, pa_sum;
    int finite_psnr = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        FrameMetrics m;
        try {
            m.psnr = psnr(pred[i], gt[i]);
            m.ssim = ssim(pred[i], gt[i]);
            m.l1 = l1(pred[i], gt[i]);
            if (pred_vertices) {
                m.mpvpe = mpvpe((*pred_vertices)[i], (*gt_vertices)[i]);
                m.pa_mpvpe = pa_mpvpe((*pred_vertices)[i], (*gt_vertices)[i]);
                mpvpe_sum.add(*m.mpvpe);
                pa_sum.add(*m.pa_mpvpe);
            }
        } catch (const ValidationError& e) {
            throw ValidationError("frame " + std::to_string(i) + ": " + e.what());
        }
        if (std::isinf(m.psnr)) {
            ++report.infinite_psnr_frames;
        } else {
            psnr_sum.add(m.psnr);
            ++finite_psnr;
        }
        ssim_sum.add(m.ssim);
        l1_sum.add(m.l1);
        report.per_frame.push_back(m);
    }
    const double n = static_cast<double>(pred.size());
    report.mean_psnr = finite_psnr > 0 ? psnr_sum.value() / finite_psnr : std::numeric_limits<double>::infinity();
    report.mean_ssim = ssim_sum.value() / n;
    report.mean_l1 = l1_sum.value() / n;
    if (pred_vertices) {
        report.mean_mpvpe = mpvpe_sum.value() / n;
        report.mean_pa_mpvpe = pa_sum.value() / n;
    }
    return report;
}

namespace {

nlohmann::json finite_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json optional_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json metrics_report_to_json(const MetricsReport& report)
{
    nlohmann::json frames = nlohmann::json::array();
    for (std::size_t i = 0; i < report.per_frame.size(); ++i) {
        const FrameMetrics& m = report.per_frame[i];
        frames.push_back({{"frame", i},
                          {"psnr_db", finite_or_null(m.psnr)},
                          {"ssim", m.ssim},
                          {"l1", m.l1},
                          {"mpvpe_mm", optional_json(m.mpvpe)},
                          {"pa_mpvpe_mm", optional_json(m.pa_mpvpe)}});
    }
    nlohmann::json mean = {{"psnr_db", finite_or_null(report.mean_psnr)},
                           {"ssim", report.mean_ssim},
                           {"fid", nullptr},
                           {"lpips", nullptr},
                           {"l1", report.mean_l1},
                           {"fid_vid", nullptr},
                           {"fvd", nullptr},
                           {"mpvpe_mm", optional_json(report.mean_mpvpe)},
                           {"pa_mpvpe_mm", optional_json(report.mean_pa_mpvpe)}};
    return {{"units",
             {{"psnr_db", "decibels, peak 255; null = identical images"},
              {"ssim", "unitless"},
              {"l1", "mean absolute error / 255"},
              {"mpvpe_mm", "millimeters"},
              {"pa_mpvpe_mm", "millimeters"}}},
            {"frame_count", report.per_frame.size()},
            {"infinite_psnr_frames", report.infinite_psnr_frames},
            {"mean", std::move(mean)},
            {"per_frame", std::move(frames)}};
}

std::string format_metrics_table(const MetricsReport& report)
{
    auto cell = [](std::optional<double> v, const char* fmt) {
        char buf[32];
        if (!v)
            return std::string("-");
        if (std::isinf(*v))
            return std::string("inf");
        std::snprintf(buf, sizeof buf, fmt, *v);
        return std::string(buf);
    };
    const char* head = "%10s %8s %8s %8s %8s %8s %8s %10s %10s\n";
    char line[256];
    std::string out;
    std::snprintf(line, sizeof line, head, "PSNR(dB)", "SSIM", "FID", "LPIPS", "L1", "FID-VID", "FVD", "MPVPE(mm)",
                  "PA(mm)");
    out += line;
    std::snprintf(line, sizeof line, head, cell(report.mean_psnr, "%.4f").c_str(),
                  cell(report.mean_ssim, "%.4f").c_str(), "-", "-", cell(report.mean_l1, "%.5f").c_str(), "-", "-",
                  cell(report.mean_mpvpe, "%.3f").c_str(), cell(report.mean_pa_mpvpe, "%.3f").c_str());
    out += line;
    return out;
}

}  // namespace mimic
