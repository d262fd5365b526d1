#include "hazeclear/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace hazeclear {

std::string DepthModel::name() const {
    switch (kind) {
        case Kind::constant: return "constant";
        case Kind::vertical_ramp: return "vertical_ramp";
        case Kind::radial: return "radial";
    }
    return "?";
}

DepthModel DepthModel::parse(const std::string& text) {
    std::size_t colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            double v = 0.0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
                throw Error(ErrorKind::value, "bad depth parameter: " + tok);
            args.push_back(v);
        }
    }
    DepthModel m;
    if (kind == "constant") {
        if (args.size() != 1) throw Error(ErrorKind::value, "constant depth needs 1 parameter");
        m.kind = Kind::constant;
        m.p0 = args[0];
    } else if (kind == "ramp" || kind == "vertical_ramp") {
        if (args.size() != 2) throw Error(ErrorKind::value, "ramp depth needs near,far");
        m.kind = Kind::vertical_ramp;
        m.p0 = args[0];
        m.p1 = args[1];
    } else if (kind == "radial") {
        if (args.size() != 2) throw Error(ErrorKind::value, "radial depth needs center,edge");
        m.kind = Kind::radial;
        m.p0 = args[0];
        m.p1 = args[1];
    } else {
        throw Error(ErrorKind::value, "unknown depth model: " + kind);
    }
    if (m.p0 < 0.0 || m.p1 < 0.0)
        throw Error(ErrorKind::value, "depths must be >= 0");
    return m;
}

ScalarMap render_depth(const DepthModel& model, int height, int width) {
    ScalarMap out(height, width);
    switch (model.kind) {
        case DepthModel::Kind::constant:
            std::fill(out.data().begin(), out.data().end(), float(model.p0));
            break;
        case DepthModel::Kind::vertical_ramp: {
            const double near = model.p0, far = model.p1;
            for (int y = 0; y < height; ++y) {
                double frac = height > 1 ? double(y) / (height - 1) : 0.0;
                float d = float(far + (near - far) * frac);
                for (int x = 0; x < width; ++x) out.at(y, x) = d;
            }
            break;
        }
        case DepthModel::Kind::radial: {
            const double cy = (height - 1) / 2.0, cx = (width - 1) / 2.0;
            const double max_dist = std::sqrt(cy * cy + cx * cx);
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x) {
                    double dist = std::sqrt((y - cy) * (y - cy) + (x - cx) * (x - cx));
                    double frac = max_dist > 0.0 ? dist / max_dist : 0.0;
                    out.at(y, x) = float(model.p0 + (model.p1 - model.p0) * frac);
                }
            break;
        }
    }
    return out;
}

ScalarMap transmission_from_depth(const ScalarMap& depth, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw Error(ErrorKind::value, "beta must be finite and >= 0");
    ScalarMap out(depth.height(), depth.width());
    for (std::size_t i = 0; i < depth.size(); ++i)
        out.data()[i] = float(std::exp(-beta * double(depth.data()[i])));
    return out;
}

Image apply_haze(const Image& clean, const ScalarMap& t, Rgb airlight) {
    if (t.height() != clean.height() || t.width() != clean.width())
        throw Error(ErrorKind::value, "apply_haze: dimension mismatch");
    Image out(clean.height(), clean.width());
    for (int c = 0; c < 3; ++c) {
        const auto& j = clean.plane(c);
        auto& dst = out.plane(c);
        const float a = airlight[c];
        for (std::size_t i = 0; i < j.size(); ++i) {
            float tv = t.data()[i];
            dst[i] = j[i] * tv + a * (1.0f - tv);
        }
    }
    return out;
}

namespace {

std::string compact_float(double v) {
    std::ostringstream os;
    os << v;  // default precision, "%g"-style
    return os.str();
}

}  // namespace

PairManifest synth_set(const std::filesystem::path& clean_dir,
                       const std::filesystem::path& out_dir,
                       const std::vector<double>& betas,
                       const std::vector<Rgb>& airlights, const DepthModel& depth,
                       std::uint64_t /*seed*/) {
    if (betas.empty()) throw Error(ErrorKind::value, "no haze parameters: beta list empty");
    if (airlights.empty()) throw Error(ErrorKind::value, "no haze parameters: airlight list empty");
    if (!std::filesystem::is_directory(clean_dir))
        throw Error(ErrorKind::io, "not a directory: " + clean_dir.string());
    std::vector<std::filesystem::path> clean_files;
    for (const auto& e : std::filesystem::directory_iterator(clean_dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return char(std::tolower(c)); });
        if (ext == ".png" || ext == ".ppm") clean_files.push_back(e.path());
    }
    std::sort(clean_files.begin(), clean_files.end());
    if (clean_files.empty())
        throw Error(ErrorKind::io, "no readable images in " + clean_dir.string());
    std::filesystem::create_directories(out_dir);

    PairManifest manifest;
    std::set<std::string> used_names;
    for (const auto& clean_path : clean_files) {
        Image clean = load_image(clean_path);
        ScalarMap d = render_depth(depth, clean.height(), clean.width());
        for (double beta : betas) {
            ScalarMap t = transmission_from_depth(d, beta);
            for (const Rgb& a : airlights) {
                Image hazy = apply_haze(clean, t, a);
                std::string name = clean_path.stem().string() + "_" +
                                   compact_float(a.mean()) + "_" + compact_float(beta) +
                                   ".png";
                if (!used_names.insert(name).second)
                    throw Error(ErrorKind::value, "duplicate output name: " + name);
                std::filesystem::path hazy_path = out_dir / name;
                save_image(hazy, hazy_path);
                PairRecord rec;
                rec.hazy_path = hazy_path.string();
                rec.clean_path = clean_path.string();
                rec.beta = beta;
                rec.airlight = a;
                rec.depth_kind = depth.name();
                manifest.records.push_back(std::move(rec));
            }
        }
    }
    std::sort(manifest.records.begin(), manifest.records.end(),
              [](const PairRecord& a, const PairRecord& b) { return a.hazy_path < b.hazy_path; });
    write_manifest(manifest, out_dir / "manifest.tsv");
    return manifest;
}

}  // namespace hazeclear
