#include "gencam/metrics.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gencam/kernels.hpp"

namespace gencam {

namespace {

// Deterministic equal-area spiral on the open cap z > 0 (golden-angle
// azimuth, uniform z strata).
std::vector<Vec3> repe_spiral(int count) {
    std::vector<Vec3> pts(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double az = std::fmod(golden * i, 2.0 * kPi);
        pts[i] = {r * std::cos(az), r * std::sin(az), z};
    }
    return pts;
}

// Projects with the incident angle clamped to the valid cone, keeping the
// azimuth, so every bearing maps to a finite pixel.
PixelCoord project_clamped(const CameraParameters& cam, const Mat3& rot, const Vec3& bearing) {
    const Vec3 pc = rot * bearing;
    const double z = std::max(-1.0, std::min(1.0, pc.z));
    const double eta = std::min(std::acos(z), cam.eta_valid_rad());
    const double r_px = radial_distance(cam.model(), eta) / cam.pixel_pitch_mm();
    const double alpha = std::atan2(pc.y, pc.x);
    return {cam.principal_u() + r_px * std::cos(alpha),
            cam.principal_v() + r_px * std::sin(alpha)};
}

std::vector<double> to_gray(const Image& img) {
    std::vector<double> g(img.pixel_count());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::uint8_t* p = img.data.data() + 3 * i;
        g[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
    return g;
}

std::vector<double> gaussian_kernel_11() {
    std::vector<double> k(11);
    const double sigma = 1.5;
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double x = i - 5.0;
        k[i] = std::exp(-x * x / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable valid-mode filtering: output is (h-10) x (w-10).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h, int& ow, int& oh) {
    const auto k = gaussian_kernel_11();
    ow = w - 10;
    oh = h - 10;
    std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int t = 0; t < 11; ++t) acc += k[t] * src[static_cast<std::size_t>(r) * w + c + t];
            tmp[static_cast<std::size_t>(r) * ow + c] = acc;
        }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int r = 0; r < oh; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int t = 0; t < 11; ++t) acc += k[t] * tmp[static_cast<std::size_t>(r + t) * ow + c];
            out[static_cast<std::size_t>(r) * ow + c] = acc;
        }
    return out;
}

}  // namespace

double repe(const CameraParameters& gt, const CameraParameters& pred) {
    CameraParameters pr = pred;
    pr.pan_deg = gt.pan_deg;  // pan is provided, not predicted
    const Mat3 gt_rot = rotation_matrix(gt.pan_deg, gt.tilt_deg, gt.roll_deg);
    const Mat3 pr_rot = rotation_matrix(pr.pan_deg, pr.tilt_deg, pr.roll_deg);

    static const std::vector<Vec3> spiral = repe_spiral(kRepePointCount);
    std::vector<double> a(2 * spiral.size()), b(2 * spiral.size());
    for (std::size_t i = 0; i < spiral.size(); ++i) {
        const Vec3 world = gt_rot.tmul(spiral[i]);  // cap sits around gt's optical axis
        const PixelCoord pa = project_clamped(gt, gt_rot, world);
        const PixelCoord pb = project_clamped(pr, pr_rot, world);
        a[2 * i] = pa.u;
        a[2 * i + 1] = pa.v;
        b[2 * i] = pb.u;
        b[2 * i + 1] = pb.v;
    }
    return kernels::sum_point_dist2(a.data(), b.data(), spiral.size()) / spiral.size();
}

double psnr(const Image& a, const Image& b) {
    if (!a.same_size(b)) throw std::invalid_argument("psnr: image dimensions differ");
    const std::size_t n = a.pixel_count() * 3;
    const std::uint64_t sq = kernels::sum_sq_diff_u8(a.data.data(), b.data.data(), n);
    if (sq == 0) return std::numeric_limits<double>::infinity();
    const double mse = static_cast<double>(sq) / static_cast<double>(n);
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Image& a, const Image& b) {
    if (!a.same_size(b)) throw std::invalid_argument("ssim: image dimensions differ");
    if (a.width < 11 || a.height < 11)
        throw std::invalid_argument("ssim: images must be at least 11x11");

    const std::vector<double> x = to_gray(a);
    const std::vector<double> y = to_gray(b);
    const int w = a.width, h = a.height;

    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    int ow = 0, oh = 0;
    const auto mu_x = filter_valid(x, w, h, ow, oh);
    const auto mu_y = filter_valid(y, w, h, ow, oh);
    const auto m_xx = filter_valid(xx, w, h, ow, oh);
    const auto m_yy = filter_valid(yy, w, h, ow, oh);
    const auto m_xy = filter_valid(xy, w, h, ow, oh);

    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double mx = mu_x[i], my = mu_y[i];
        const double vx = m_xx[i] - mx * mx;
        const double vy = m_yy[i] - my * my;
        const double cxy = m_xy[i] - mx * my;
        acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    return acc / static_cast<double>(mu_x.size());
}

EvaluationReport evaluate_manifest(const std::vector<ManifestEntry>& manifest,
                                   const std::map<std::string, CameraParameters>& predictions,
                                   const std::map<std::string, std::pair<Image, Image>>* image_pairs,
                                   int threads) {
    std::vector<std::string> missing;
    for (const auto& entry : manifest)
        if (!predictions.count(entry.id)) missing.push_back(entry.id);
    if (!missing.empty()) {
        std::ostringstream os;
        os << "evaluate_manifest: missing predictions for ids:";
        for (const auto& id : missing) os << " " << id;
        throw std::runtime_error(os.str());
    }
    if (manifest.empty()) throw std::invalid_argument("evaluate_manifest: empty manifest");

    const std::size_t n = manifest.size();
    std::vector<double> tilt_err(n), roll_err(n), f_err(n), k1_err(n), repe_err(n);

    auto eval_one = [&](std::size_t i) {
        const auto& gt = manifest[i].params;
        const auto& pred = predictions.at(manifest[i].id);
        tilt_err[i] = std::abs(gt.tilt_deg - pred.tilt_deg);
        roll_err[i] = std::abs(gt.roll_deg - pred.roll_deg);
        f_err[i] = std::abs(gt.focal_mm - pred.focal_mm);
        k1_err[i] = std::abs(gt.k1 - pred.k1);
        repe_err[i] = repe(gt, pred);
    };
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) eval_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) eval_one(i);
            });
        for (auto& th : pool) th.join();
    }

    EvaluationReport rep;
    rep.entry_count = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.mean_abs_tilt_deg += tilt_err[i];
        rep.mean_abs_roll_deg += roll_err[i];
        rep.mean_abs_f_mm += f_err[i];
        rep.mean_abs_k1 += k1_err[i];
        rep.repe_px += repe_err[i];
    }
    rep.mean_abs_tilt_deg /= n;
    rep.mean_abs_roll_deg /= n;
    rep.mean_abs_f_mm /= n;
    rep.mean_abs_k1 /= n;
    rep.repe_px /= n;

    if (image_pairs && !image_pairs->empty()) {
        double psnr_acc = 0.0, ssim_acc = 0.0;
        std::size_t count = 0;
        for (const auto& entry : manifest) {
            const auto it = image_pairs->find(entry.id);
            if (it == image_pairs->end()) continue;
            psnr_acc += psnr(it->second.first, it->second.second);
            ssim_acc += ssim(it->second.first, it->second.second);
            ++count;
        }
        if (count > 0) {
            rep.psnr_db = psnr_acc / count;
            rep.ssim_value = ssim_acc / count;
        }
    }
    return rep;
}

}  // namespace gencam
