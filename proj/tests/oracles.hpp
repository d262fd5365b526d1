// Brute-force reference implementations used to check the optimized
// paths. Everything here is written as direct nested loops, independent
// of the library code under test.
#ifndef HAZECLEAR_TEST_ORACLES_HPP
#define HAZECLEAR_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hazeclear/image.hpp"
#include "hazeclear/regression.hpp"

namespace oracle {

using hazeclear::Image;
using hazeclear::Rgb;
using hazeclear::ScalarMap;

inline float uniform01(std::mt19937& rng) {
    return float(rng() >> 8) * (1.0f / 16777216.0f);
}

inline ScalarMap random_map(int h, int w, std::mt19937& rng, float lo = 0.0f,
                            float hi = 1.0f) {
    ScalarMap m(h, w);
    for (auto& v : m.data()) v = lo + (hi - lo) * uniform01(rng);
    return m;
}

inline Image random_image(int h, int w, std::mt19937& rng, float lo = 0.0f,
                          float hi = 1.0f) {
    Image img(h, w);
    for (int c = 0; c < 3; ++c)
        for (auto& v : img.plane(c)) v = lo + (hi - lo) * uniform01(rng);
    return img;
}

inline ScalarMap min_filter(const ScalarMap& in, int radius) {
    ScalarMap out(in.height(), in.width());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) {
            float m = std::numeric_limits<float>::infinity();
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= in.height() || xx < 0 || xx >= in.width()) continue;
                    m = std::min(m, in.at(yy, xx));
                }
            out.at(y, x) = m;
        }
    return out;
}

inline std::vector<double> box_mean(const ScalarMap& in, int radius) {
    std::vector<double> out(in.size());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) {
            double s = 0.0;
            int n = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= in.height() || xx < 0 || xx >= in.width()) continue;
                    s += in.at(yy, xx);
                    ++n;
                }
            out[std::size_t(y) * in.width() + x] = s / n;
        }
    return out;
}

inline ScalarMap dark_channel(const Image& img, int radius) {
    ScalarMap out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            float m = std::numeric_limits<float>::infinity();
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= img.height() || xx < 0 || xx >= img.width()) continue;
                    Rgb p = img.pixel(yy, xx);
                    m = std::min({m, p.r, p.g, p.b});
                }
            out.at(y, x) = m;
        }
    return out;
}

// Guided filter by per-window linear regression, all direct loops.
inline std::vector<double> guided_filter(const ScalarMap& guide, const ScalarMap& t,
                                         int radius, double eps) {
    const int h = t.height(), w = t.width();
    std::vector<double> a(t.size()), b(t.size()), out(t.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double sg = 0, st = 0, sgg = 0, sgt = 0;
            int n = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
                    double g = guide.at(yy, xx), tv = t.at(yy, xx);
                    sg += g;
                    st += tv;
                    sgg += g * g;
                    sgt += g * tv;
                    ++n;
                }
            double mg = sg / n, mt = st / n;
            double var = sgg / n - mg * mg;
            double cov = sgt / n - mg * mt;
            a[std::size_t(y) * w + x] = cov / (var + eps);
            b[std::size_t(y) * w + x] = mt - a[std::size_t(y) * w + x] * mg;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double sa = 0, sb = 0;
            int n = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
                    sa += a[std::size_t(yy) * w + xx];
                    sb += b[std::size_t(yy) * w + xx];
                    ++n;
                }
            out[std::size_t(y) * w + x] =
                std::clamp(sa / n * guide.at(y, x) + sb / n, 0.0, 1.0);
        }
    return out;
}

inline double psnr(const Image& a, const Image& b, double peak = 1.0) {
    double sum = 0.0;
    long n = 0;
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < a.height(); ++y)
            for (int x = 0; x < a.width(); ++x) {
                double e = double(a.at(c, y, x)) - double(b.at(c, y, x));
                sum += e * e;
                ++n;
            }
    double mse = sum / double(n);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

inline double ssim(const Image& a, const Image& b, int window = 11, double sigma = 1.5,
                   double k1 = 0.01, double k2 = 0.03, double range = 1.0) {
    const int h = a.height(), w = a.width(), r = window / 2;
    const double c1 = (k1 * range) * (k1 * range), c2 = (k2 * range) * (k2 * range);
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double map_sum = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double wsum = 0, ma = 0, mb = 0, maa = 0, mbb = 0, mab = 0;
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx) {
                        int yy = y + dy, xx = x + dx;
                        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
                        double weight = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
                        double va = a.at(c, yy, xx), vb = b.at(c, yy, xx);
                        wsum += weight;
                        ma += weight * va;
                        mb += weight * vb;
                        maa += weight * va * va;
                        mbb += weight * vb * vb;
                        mab += weight * va * vb;
                    }
                ma /= wsum;
                mb /= wsum;
                maa /= wsum;
                mbb /= wsum;
                mab /= wsum;
                double var_a = maa - ma * ma, var_b = mbb - mb * mb, cov = mab - ma * mb;
                double numer = (2 * ma * mb + c1) * (2 * cov + c2);
                double denom = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
                map_sum += numer / denom;
            }
        total += map_sum / (double(h) * w);
    }
    return total / 3.0;
}

// Per-channel quadratic cost of the linear model from its definition:
// L_c = 1/(2n) sum (J_c - Jw_c)^2. Parameters are passed as doubles so
// finite-difference steps are not rounded to float.
inline double channel_cost(const double params[4], const hazeclear::FeatureField& f,
                           const std::vector<Rgb>& target, int c) {
    const std::size_t n = f.count();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = params[0] * f.x0[c][i] + params[1] * f.x1[c][i] +
                      params[2] * f.x2[c][i] + params[3];
        double e = double(target[i][c]) - pred;
        sum += e * e;
    }
    return sum / (2.0 * double(n));
}

// Central finite differences of channel_cost over the 12 parameters,
// indexed [channel][param] with params in order w0,w1,w2,b.
inline std::vector<double> fd_gradient(const hazeclear::RegressionModel& m,
                                       const hazeclear::FeatureField& f,
                                       const std::vector<Rgb>& target, double h_step) {
    std::vector<double> grad;
    for (int c = 0; c < 3; ++c) {
        double base[4] = {m.w0[c], m.w1[c], m.w2[c], m.b[c]};
        for (int p = 0; p < 4; ++p) {
            double plus[4] = {base[0], base[1], base[2], base[3]};
            double minus[4] = {base[0], base[1], base[2], base[3]};
            plus[p] += h_step;
            minus[p] -= h_step;
            grad.push_back((channel_cost(plus, f, target, c) -
                            channel_cost(minus, f, target, c)) /
                           (2.0 * h_step));
        }
    }
    return grad;
}

}  // namespace oracle

#endif
