#ifndef HAZECLEAR_IMAGE_HPP
#define HAZECLEAR_IMAGE_HPP

#include <array>
#include <filesystem>
#include <vector>

#include "hazeclear/error.hpp"

namespace hazeclear {

/// RGB triple. Carries colors, the atmospheric light A, and per-channel
/// regression coefficients.
struct Rgb {
    float r = 0.0f;
    float g = 0.0f;
    float b = 0.0f;

    float operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
    float& operator[](int c) { return c == 0 ? r : (c == 1 ? g : b); }
    float mean() const { return (r + g + b) / 3.0f; }

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Single-plane float map, row-major. Holds dark channels, transmission
/// maps and depth maps.
class ScalarMap {
public:
    ScalarMap() = default;
    ScalarMap(int height, int width, float fill = 0.0f);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }

    float at(int y, int x) const { return data_[std::size_t(y) * width_ + x]; }
    float& at(int y, int x) { return data_[std::size_t(y) * width_ + x]; }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// Three-channel float image, planar (channel-major) storage, row-major
/// planes. Samples from load_image are in [0,1]; arithmetic results may
/// exceed that range until clipped at emission.
class Image {
public:
    Image() = default;
    Image(int height, int width, Rgb fill = {});

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixel_count() const { return std::size_t(height_) * width_; }

    float at(int c, int y, int x) const {
        return planes_[c][std::size_t(y) * width_ + x];
    }
    float& at(int c, int y, int x) {
        return planes_[c][std::size_t(y) * width_ + x];
    }

    Rgb pixel(int y, int x) const {
        std::size_t i = std::size_t(y) * width_ + x;
        return {planes_[0][i], planes_[1][i], planes_[2][i]};
    }
    void set_pixel(int y, int x, Rgb v) {
        std::size_t i = std::size_t(y) * width_ + x;
        planes_[0][i] = v.r;
        planes_[1][i] = v.g;
        planes_[2][i] = v.b;
    }

    const std::vector<float>& plane(int c) const { return planes_[c]; }
    std::vector<float>& plane(int c) { return planes_[c]; }

private:
    int height_ = 0;
    int width_ = 0;
    std::array<std::vector<float>, 3> planes_;
};

/// Reads PNG or binary PPM (P6); format detected from the file's magic
/// bytes. 8-bit samples map to float as v/255.
Image load_image(const std::filesystem::path& path);

/// Writes PNG or PPM chosen by extension (.png / .ppm). Samples are
/// clipped to [0,1] and quantized by round(v*255), round half up.
void save_image(const Image& img, const std::filesystem::path& path);

/// Windowed minimum over a (2*radius+1)^2 window clipped at the borders.
ScalarMap min_filter(const ScalarMap& map, int radius);

/// Windowed mean over a border-clipped window; the divisor is the actual
/// window size, so constant maps stay constant at the borders.
ScalarMap box_filter(const ScalarMap& map, int radius);

/// Channel mean (R+G+B)/3 as a scalar map.
ScalarMap gray(const Image& img);

namespace detail {
/// Border-clipped windowed mean in double precision; building block for
/// box_filter and the guided filter.
std::vector<double> box_mean(const std::vector<double>& in, int h, int w, int radius);
}  // namespace detail

}  // namespace hazeclear

#endif
