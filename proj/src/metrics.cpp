#include "hazeclear/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace hazeclear {

double psnr(const Image& a, const Image& b, double peak) {
    if (a.height() != b.height() || a.width() != b.width())
        throw Error(ErrorKind::value, "psnr: dimension mismatch");
    if (!(peak > 0.0)) throw Error(ErrorKind::value, "psnr: peak must be > 0");
    double sum = 0.0;
    const std::size_t n = a.pixel_count();
    for (int c = 0; c < 3; ++c) {
        const auto& pa = a.plane(c);
        const auto& pb = b.plane(c);
        for (std::size_t i = 0; i < n; ++i) {
            double e = double(pa[i]) - double(pb[i]);
            sum += e * e;
        }
    }
    double mse = sum / (3.0 * double(n));
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

namespace {

// Weighted local means under a border-clipped Gaussian window with
// renormalized weights. Separable: numerator and weight sum factor into
// row and column passes.
struct GaussianWindow {
    int radius;
    std::vector<double> w;  // one-sided taps, w[radius] center

    explicit GaussianWindow(int window, double sigma) : radius(window / 2), w(window) {
        double sum = 0.0;
        for (int i = 0; i < window; ++i) {
            double d = i - radius;
            w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
            sum += w[i];
        }
        for (double& v : w) v /= sum;
    }
};

std::vector<double> weighted_mean(const std::vector<double>& in, int h, int w,
                                  const GaussianWindow& win) {
    const int r = win.radius;
    std::vector<double> num(in.size()), den_row(std::size_t(w), 0.0), tmp(in.size());
    // row pass: weighted sums and per-column weight totals
    for (int x = 0; x < w; ++x) {
        double dw = 0.0;
        for (int j = std::max(0, x - r); j <= std::min(w - 1, x + r); ++j)
            dw += win.w[j - x + r];
        den_row[x] = dw;
    }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int j = std::max(0, x - r); j <= std::min(w - 1, x + r); ++j)
                s += win.w[j - x + r] * in[std::size_t(y) * w + j];
            tmp[std::size_t(y) * w + x] = s;
        }
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) {
            double s = 0.0, dw = 0.0;
            for (int i = std::max(0, y - r); i <= std::min(h - 1, y + r); ++i) {
                s += win.w[i - y + r] * tmp[std::size_t(i) * w + x];
                dw += win.w[i - y + r];
            }
            num[std::size_t(y) * w + x] = s / (dw * den_row[x]);
        }
    return num;
}

}  // namespace

double ssim(const Image& a, const Image& b, const SsimParams& params) {
    if (a.height() != b.height() || a.width() != b.width())
        throw Error(ErrorKind::value, "ssim: dimension mismatch");
    const int h = a.height(), w = a.width();
    if (h < params.window || w < params.window)
        throw Error(ErrorKind::value, "ssim: image smaller than window");
    const double c1 = params.k1 * params.dynamic_range * params.k1 * params.dynamic_range;
    const double c2 = params.k2 * params.dynamic_range * params.k2 * params.dynamic_range;
    GaussianWindow win(params.window, params.sigma);
    const std::size_t n = a.pixel_count();
    double channel_sum = 0.0;
    std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            pa[i] = a.plane(c)[i];
            pb[i] = b.plane(c)[i];
            paa[i] = pa[i] * pa[i];
            pbb[i] = pb[i] * pb[i];
            pab[i] = pa[i] * pb[i];
        }
        auto mu_a = weighted_mean(pa, h, w, win);
        auto mu_b = weighted_mean(pb, h, w, win);
        auto m_aa = weighted_mean(paa, h, w, win);
        auto m_bb = weighted_mean(pbb, h, w, win);
        auto m_ab = weighted_mean(pab, h, w, win);
        double map_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double va = m_aa[i] - mu_a[i] * mu_a[i];
            double vb = m_bb[i] - mu_b[i] * mu_b[i];
            double cov = m_ab[i] - mu_a[i] * mu_b[i];
            double numer = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
            double denom = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2);
            map_sum += numer / denom;
        }
        channel_sum += map_sum / double(n);
    }
    return channel_sum / 3.0;
}

EvalSummary evaluate_set(const PairManifest& manifest,
                         const std::function<Image(const Image&)>& dehazer) {
    if (manifest.empty()) throw Error(ErrorKind::value, "evaluate_set: empty manifest");
    EvalSummary summary;
    double psnr_sum = 0.0, ssim_sum = 0.0;
    int psnr_count = 0;
    for (const auto& rec : manifest.records) {
        EvalRow row;
        row.hazy_path = rec.hazy_path;
        row.clean_path = rec.clean_path;
        try {
            Image hazy = load_image(rec.hazy_path);
            Image clean = load_image(rec.clean_path);
            Image out = dehazer(hazy);
            row.psnr_db = psnr(out, clean);
            row.ssim = ssim(out, clean);
            row.status = "ok";
            ++summary.ok_count;
            ssim_sum += row.ssim;
            if (std::isinf(row.psnr_db)) {
                ++summary.psnr_inf_count;
            } else {
                psnr_sum += row.psnr_db;
                ++psnr_count;
            }
        } catch (const std::exception& e) {
            row.status = std::string("failed: ") + e.what();
            ++summary.failed_count;
        }
        summary.rows.push_back(std::move(row));
    }
    summary.mean_psnr = psnr_count > 0 ? psnr_sum / psnr_count
                                       : std::numeric_limits<double>::infinity();
    summary.mean_ssim = summary.ok_count > 0 ? ssim_sum / summary.ok_count : 0.0;
    return summary;
}

namespace {

std::string format4(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void write_report(const EvalSummary& summary, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write report: " + path.string());
    out << "hazy,clean,psnr_db,ssim,status\n";
    out << "#psnr: per-sample over all 3 channels on float images; "
           "ssim: mean of per-channel ssim (11x11 gaussian, sigma 1.5)\n";
    for (const auto& row : summary.rows) {
        if (row.status == "ok")
            out << row.hazy_path << ',' << row.clean_path << ',' << format4(row.psnr_db)
                << ',' << format4(row.ssim) << ",ok\n";
        else
            out << row.hazy_path << ',' << row.clean_path << ",,,\"" << row.status
                << "\"\n";
    }
    out << "#mean,," << format4(summary.mean_psnr) << ',' << format4(summary.mean_ssim)
        << ",ok=" << summary.ok_count << ";psnr_inf=" << summary.psnr_inf_count
        << ";failed=" << summary.failed_count << '\n';
    if (!out) throw Error(ErrorKind::io, "report write failed: " + path.string());
}

}  // namespace hazeclear
