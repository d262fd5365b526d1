#ifndef HAZECLEAR_METRICS_HPP
#define HAZECLEAR_METRICS_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hazeclear/dataset.hpp"
#include "hazeclear/image.hpp"

namespace hazeclear {

/// Canonical SSIM configuration: 11x11 Gaussian window, sigma 1.5.
struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// PSNR in dB over all 3*H*W float samples. Identical images return
/// +infinity.
double psnr(const Image& a, const Image& b, double peak = 1.0);

/// Mean SSIM over a border-clipped, weight-renormalized Gaussian window,
/// averaged over the three channels. Requires min dimension >= window.
double ssim(const Image& a, const Image& b, const SsimParams& params = {});

struct EvalRow {
    std::string hazy_path;
    std::string clean_path;
    double psnr_db = 0.0;
    double ssim = 0.0;
    std::string status;  // "ok" or an error note
};

struct EvalSummary {
    std::vector<EvalRow> rows;
    double mean_psnr = 0.0;  // over finite-PSNR ok rows
    double mean_ssim = 0.0;  // over ok rows
    int ok_count = 0;
    int psnr_inf_count = 0;
    int failed_count = 0;
};

/// Runs the dehazer over every pair, scoring against the clean image.
/// Failed pairs become failed rows and are excluded from the means;
/// infinite-PSNR pairs are excluded from the PSNR mean only.
EvalSummary evaluate_set(const PairManifest& manifest,
                         const std::function<Image(const Image&)>& dehazer);

/// CSV report: header `hazy,clean,psnr_db,ssim,status`, one row per
/// pair, then a final `#mean` comment row. Floats at 4 decimal places.
void write_report(const EvalSummary& summary, const std::filesystem::path& path);

}  // namespace hazeclear

#endif
