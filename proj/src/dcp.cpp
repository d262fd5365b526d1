#include "hazeclear/dcp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hazeclear {

void DcpParams::validate() const {
    if (window_radius < 0)
        throw Error(ErrorKind::value, "window_radius must be >= 0");
    if (!(omega > 0.0f && omega <= 1.0f))
        throw Error(ErrorKind::value, "omega must be in (0,1]");
    if (!(t0 > 0.0f && t0 < 1.0f))
        throw Error(ErrorKind::value, "t0 must be in (0,1)");
    if (!(airlight_fraction > 0.0f && airlight_fraction <= 1.0f))
        throw Error(ErrorKind::value, "airlight_fraction must be in (0,1]");
    if (refine == Refine::guided) {
        if (guided_radius < 0)
            throw Error(ErrorKind::value, "guided_radius must be >= 0");
        if (!(guided_eps > 0.0f))
            throw Error(ErrorKind::value, "guided_eps must be > 0");
    }
}

ScalarMap dark_channel(const Image& img, int radius) {
    if (radius < 0) throw Error(ErrorKind::value, "dark_channel: radius < 0");
    ScalarMap chan_min(img.height(), img.width());
    const auto& r = img.plane(0);
    const auto& g = img.plane(1);
    const auto& b = img.plane(2);
    for (std::size_t i = 0; i < chan_min.size(); ++i)
        chan_min.data()[i] = std::min(r[i], std::min(g[i], b[i]));
    return min_filter(chan_min, radius);
}

Rgb estimate_atmospheric_light(const Image& img, const ScalarMap& dark, float fraction) {
    if (dark.height() != img.height() || dark.width() != img.width())
        throw Error(ErrorKind::value, "estimate_atmospheric_light: dimension mismatch");
    if (!(fraction > 0.0f && fraction <= 1.0f))
        throw Error(ErrorKind::value, "estimate_atmospheric_light: fraction out of (0,1]");
    const std::size_t n = dark.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::size_t k = std::size_t(std::max<long long>(1, std::llround(double(fraction) * double(n))));
    k = std::min(k, n);
    const auto& d = dark.data();
    // brightest dark-channel values first; equal values keep index order
    std::partial_sort(idx.begin(), idx.begin() + std::ptrdiff_t(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (d[a] != d[b]) return d[a] > d[b];
                          return a < b;
                      });
    std::sort(idx.begin(), idx.begin() + std::ptrdiff_t(k));
    const auto& r = img.plane(0);
    const auto& g = img.plane(1);
    const auto& b = img.plane(2);
    std::size_t best = idx[0];
    float best_intensity = (r[best] + g[best] + b[best]) / 3.0f;
    for (std::size_t j = 1; j < k; ++j) {
        std::size_t i = idx[j];
        float intensity = (r[i] + g[i] + b[i]) / 3.0f;
        if (intensity > best_intensity) {
            best = i;
            best_intensity = intensity;
        }
    }
    return {r[best], g[best], b[best]};
}

ScalarMap estimate_transmission(const Image& img, Rgb airlight, float omega, int radius) {
    for (int c = 0; c < 3; ++c)
        if (!(airlight[c] > 0.0f))
            throw Error(ErrorKind::value, "estimate_transmission: nonpositive airlight component");
    if (!(omega > 0.0f && omega <= 1.0f))
        throw Error(ErrorKind::value, "estimate_transmission: omega out of (0,1]");
    ScalarMap ratio_min(img.height(), img.width());
    for (std::size_t i = 0; i < ratio_min.size(); ++i) {
        float m = 1.0f;
        for (int c = 0; c < 3; ++c) {
            float v = std::min(img.plane(c)[i] / airlight[c], 1.0f);
            m = std::min(m, v);
        }
        ratio_min.data()[i] = m;
    }
    ScalarMap win = min_filter(ratio_min, radius);
    for (float& v : win.data()) v = std::clamp(1.0f - omega * v, 0.0f, 1.0f);
    return win;
}

ScalarMap refine_transmission(const Image& guide, const ScalarMap& t, int radius, float eps) {
    if (guide.height() != t.height() || guide.width() != t.width())
        throw Error(ErrorKind::value, "refine_transmission: dimension mismatch");
    if (!(eps > 0.0f)) throw Error(ErrorKind::value, "refine_transmission: eps must be > 0");
    const int h = t.height(), w = t.width();
    const std::size_t n = t.size();
    ScalarMap gmap = gray(guide);
    std::vector<double> g(n), tv(n), gg(n), gt(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = gmap.data()[i];
        tv[i] = t.data()[i];
        gg[i] = g[i] * g[i];
        gt[i] = g[i] * tv[i];
    }
    auto mean_g = detail::box_mean(g, h, w, radius);
    auto mean_t = detail::box_mean(tv, h, w, radius);
    auto corr_gg = detail::box_mean(gg, h, w, radius);
    auto corr_gt = detail::box_mean(gt, h, w, radius);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        double var = corr_gg[i] - mean_g[i] * mean_g[i];
        double cov = corr_gt[i] - mean_g[i] * mean_t[i];
        a[i] = cov / (var + eps);
        b[i] = mean_t[i] - a[i] * mean_g[i];
    }
    auto mean_a = detail::box_mean(a, h, w, radius);
    auto mean_b = detail::box_mean(b, h, w, radius);
    ScalarMap out(h, w);
    for (std::size_t i = 0; i < n; ++i)
        out.data()[i] = float(std::clamp(mean_a[i] * g[i] + mean_b[i], 0.0, 1.0));
    return out;
}

ScalarMap clamp_transmission(const ScalarMap& t, float t0) {
    if (!(t0 > 0.0f && t0 < 1.0f))
        throw Error(ErrorKind::value, "clamp_transmission: t0 out of (0,1)");
    ScalarMap out = t;
    for (float& v : out.data()) v = std::max(v, t0);
    return out;
}

Image recover_radiance(const Image& img, const ScalarMap& t, Rgb airlight) {
    if (t.height() != img.height() || t.width() != img.width())
        throw Error(ErrorKind::value, "recover_radiance: dimension mismatch");
    for (float v : t.data())
        if (!(v > 0.0f))
            throw Error(ErrorKind::value, "recover_radiance: transmission <= 0");
    Image out(img.height(), img.width());
    for (int c = 0; c < 3; ++c) {
        const auto& in = img.plane(c);
        auto& dst = out.plane(c);
        const float a = airlight[c];
        for (std::size_t i = 0; i < in.size(); ++i)
            dst[i] = std::clamp((in[i] - a) / t.data()[i] + a, 0.0f, 1.0f);
    }
    return out;
}

std::pair<ScalarMap, Rgb> dcp_transmission(const Image& img, const DcpParams& params) {
    params.validate();
    ScalarMap dark = dark_channel(img, params.window_radius);
    Rgb airlight = estimate_atmospheric_light(img, dark, params.airlight_fraction);
    // guard against a zero airlight channel on degenerate inputs
    for (int c = 0; c < 3; ++c) airlight[c] = std::max(airlight[c], 1e-4f);
    ScalarMap t = estimate_transmission(img, airlight, params.omega, params.window_radius);
    if (params.refine == Refine::guided)
        t = refine_transmission(img, t, params.guided_radius, params.guided_eps);
    return {clamp_transmission(t, params.t0), airlight};
}

std::tuple<Image, ScalarMap, Rgb> dehaze_dcp(const Image& img, const DcpParams& params) {
    auto [t, airlight] = dcp_transmission(img, params);
    Image recovered = recover_radiance(img, t, airlight);
    return {std::move(recovered), std::move(t), airlight};
}

}  // namespace hazeclear
