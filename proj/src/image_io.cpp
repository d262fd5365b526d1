#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hazeclear/image.hpp"

namespace hazeclear {

namespace {

constexpr float kScale = 1.0f / 255.0f;

std::uint8_t quantize(float v) {
    v = std::clamp(v, 0.0f, 1.0f);
    // round half up
    return std::uint8_t(std::floor(v * 255.0f + 0.5f));
}

Image from_rgb8(const std::vector<std::uint8_t>& buf, int h, int w) {
    Image img(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::size_t i = (std::size_t(y) * w + x) * 3;
            img.set_pixel(y, x,
                          {buf[i] * kScale, buf[i + 1] * kScale, buf[i + 2] * kScale});
        }
    return img;
}

std::vector<std::uint8_t> to_rgb8(const Image& img) {
    std::vector<std::uint8_t> buf(img.pixel_count() * 3);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            Rgb p = img.pixel(y, x);
            std::size_t i = (std::size_t(y) * img.width() + x) * 3;
            buf[i] = quantize(p.r);
            buf[i + 1] = quantize(p.g);
            buf[i + 2] = quantize(p.b);
        }
    return buf;
}

Image load_png(const std::filesystem::path& path) {
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&pi, path.string().c_str()))
        throw Error(ErrorKind::format, "not a readable PNG: " + path.string());
    pi.format = PNG_FORMAT_RGB;
    if (pi.width == 0 || pi.height == 0) {
        png_image_free(&pi);
        throw Error(ErrorKind::format, "zero-sized image: " + path.string());
    }
    std::vector<std::uint8_t> buf(std::size_t(PNG_IMAGE_SIZE(pi)));
    if (!png_image_finish_read(&pi, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = pi.message;
        png_image_free(&pi);
        throw Error(ErrorKind::format, "PNG decode failed: " + msg);
    }
    return from_rgb8(buf, int(pi.height), int(pi.width));
}

void save_png(const Image& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> buf = to_rgb8(img);
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    pi.width = png_uint_32(img.width());
    pi.height = png_uint_32(img.height());
    pi.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&pi, path.string().c_str(), 0, buf.data(), 0, nullptr))
        throw Error(ErrorKind::io, "cannot write PNG: " + path.string());
}

int ppm_token(std::istream& in) {
    // skips whitespace and '#' comments
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int v = -1;
    in >> v;
    return v;
}

Image load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '6')
        throw Error(ErrorKind::format, "not a binary PPM: " + path.string());
    int w = ppm_token(in);
    int h = ppm_token(in);
    int maxval = ppm_token(in);
    if (w <= 0 || h <= 0)
        throw Error(ErrorKind::format, "zero-sized image: " + path.string());
    if (maxval != 255)
        throw Error(ErrorKind::format, "unsupported PPM maxval: " + std::to_string(maxval));
    in.get();  // single whitespace after header
    std::vector<std::uint8_t> buf(std::size_t(h) * w * 3);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (!in)
        throw Error(ErrorKind::format, "truncated PPM: " + path.string());
    return from_rgb8(buf, h, w);
}

void save_ppm(const Image& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot open for write: " + path.string());
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<std::uint8_t> buf = to_rgb8(img);
    out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error(ErrorKind::io, "file not found: " + path.string());
    unsigned char magic[8] = {};
    probe.read(reinterpret_cast<char*>(magic), 8);
    std::streamsize got = probe.gcount();
    probe.close();
    if (got >= 8 && magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G')
        return load_png(path);
    if (got >= 2 && magic[0] == 'P' && magic[1] == '6') return load_ppm(path);
    throw Error(ErrorKind::format, "unsupported image format: " + path.string());
}

void save_image(const Image& img, const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".ppm")
        save_ppm(img, path);
    else if (ext == ".png")
        save_png(img, path);
    else
        throw Error(ErrorKind::format, "unsupported output format: " + path.string());
}

}  // namespace hazeclear
