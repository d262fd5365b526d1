#include "hazeclear/image.hpp"

#include <algorithm>

namespace hazeclear {

ScalarMap::ScalarMap(int height, int width, float fill)
    : height_(height), width_(width) {
    if (height < 1 || width < 1)
        throw Error(ErrorKind::value, "ScalarMap dimensions must be >= 1");
    data_.assign(std::size_t(height) * width, fill);
}

Image::Image(int height, int width, Rgb fill) : height_(height), width_(width) {
    if (height < 1 || width < 1)
        throw Error(ErrorKind::value, "Image dimensions must be >= 1");
    for (int c = 0; c < 3; ++c)
        planes_[c].assign(std::size_t(height) * width, fill[c]);
}

namespace {

// Separable pass: windowed min along one row of length n.
void row_min(const float* in, float* out, int n, int radius) {
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, i - radius);
        int hi = std::min(n - 1, i + radius);
        float m = in[lo];
        for (int j = lo + 1; j <= hi; ++j) m = std::min(m, in[j]);
        out[i] = m;
    }
}

}  // namespace

ScalarMap min_filter(const ScalarMap& map, int radius) {
    if (radius < 0) throw Error(ErrorKind::value, "min_filter: radius < 0");
    if (radius == 0) return map;
    const int h = map.height(), w = map.width();
    ScalarMap tmp(h, w), out(h, w);
    for (int y = 0; y < h; ++y)
        row_min(&map.data()[std::size_t(y) * w], &tmp.data()[std::size_t(y) * w], w, radius);
    std::vector<float> col(h), colmin(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col[y] = tmp.at(y, x);
        row_min(col.data(), colmin.data(), h, radius);
        for (int y = 0; y < h; ++y) out.at(y, x) = colmin[y];
    }
    return out;
}

namespace detail {

// Windowed mean with border-clipped windows, double precision throughout.
// Shared by box_filter, the guided filter, and SSIM tests.
std::vector<double> box_mean(const std::vector<double>& in, int h, int w, int radius) {
    std::vector<double> rowsum(in.size()), out(in.size());
    // row pass: sliding sums over clipped horizontal windows
    for (int y = 0; y < h; ++y) {
        const double* src = &in[std::size_t(y) * w];
        double* dst = &rowsum[std::size_t(y) * w];
        for (int x = 0; x < w; ++x) {
            int lo = std::max(0, x - radius);
            int hi = std::min(w - 1, x + radius);
            double s = 0.0;
            for (int j = lo; j <= hi; ++j) s += src[j];
            dst[x] = s;
        }
    }
    // column pass plus division by the true window area
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            int lo = std::max(0, y - radius);
            int hi = std::min(h - 1, y + radius);
            double s = 0.0;
            for (int i = lo; i <= hi; ++i) s += rowsum[std::size_t(i) * w + x];
            int cols = std::min(w - 1, x + radius) - std::max(0, x - radius) + 1;
            int rows = hi - lo + 1;
            out[std::size_t(y) * w + x] = s / (double(rows) * cols);
        }
    }
    return out;
}

}  // namespace detail

ScalarMap box_filter(const ScalarMap& map, int radius) {
    if (radius < 0) throw Error(ErrorKind::value, "box_filter: radius < 0");
    if (radius == 0) return map;
    std::vector<double> in(map.data().begin(), map.data().end());
    std::vector<double> mean = detail::box_mean(in, map.height(), map.width(), radius);
    ScalarMap out(map.height(), map.width());
    for (std::size_t i = 0; i < mean.size(); ++i) out.data()[i] = float(mean[i]);
    return out;
}

ScalarMap gray(const Image& img) {
    ScalarMap out(img.height(), img.width());
    const auto& r = img.plane(0);
    const auto& g = img.plane(1);
    const auto& b = img.plane(2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] = (r[i] + g[i] + b[i]) / 3.0f;
    return out;
}

}  // namespace hazeclear
