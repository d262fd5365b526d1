#include "hazeclear/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "hazeclear/random.hpp"

namespace hazeclear {

namespace {

std::string format_float(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

bool parse_double(const std::string& s, double& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool is_image_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return ext == ".png" || ext == ".ppm";
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

void write_manifest(const PairManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write manifest: " + path.string());
    for (const auto& r : manifest.records) {
        out << r.hazy_path << '\t' << r.clean_path << '\t';
        out << (r.beta ? format_float(*r.beta) : std::string("-")) << '\t';
        if (r.airlight) {
            out << format_float(r.airlight->r) << '\t' << format_float(r.airlight->g)
                << '\t' << format_float(r.airlight->b) << '\t';
        } else {
            out << "-\t-\t-\t";
        }
        out << (r.depth_kind.empty() ? "-" : r.depth_kind) << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "manifest write failed: " + path.string());
}

PairManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read manifest: " + path.string());
    PairManifest m;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_fields(line, '\t');
        if (fields.size() != 7)
            throw Error(ErrorKind::format, "manifest line " + std::to_string(lineno) +
                                               ": expected 7 fields, got " +
                                               std::to_string(fields.size()));
        PairRecord r;
        r.hazy_path = fields[0];
        r.clean_path = fields[1];
        double v = 0.0;
        if (fields[2] != "-" && parse_double(fields[2], v)) r.beta = v;
        if (fields[3] != "-") {
            double ar = 0, ag = 0, ab = 0;
            if (parse_double(fields[3], ar) && parse_double(fields[4], ag) &&
                parse_double(fields[5], ab))
                r.airlight = Rgb{float(ar), float(ag), float(ab)};
        }
        if (fields[6] != "-") r.depth_kind = fields[6];
        m.records.push_back(std::move(r));
    }
    return m;
}

PairManifest scan_pairs(const std::filesystem::path& hazy_dir,
                        const std::filesystem::path& clean_dir,
                        const std::string& pattern, int* skipped) {
    if (!std::filesystem::is_directory(hazy_dir))
        throw Error(ErrorKind::io, "not a directory: " + hazy_dir.string());
    if (!std::filesystem::is_directory(clean_dir))
        throw Error(ErrorKind::io, "not a directory: " + clean_dir.string());
    if (pattern != "auto" && pattern != "exact" && pattern != "params")
        throw Error(ErrorKind::value, "unknown pattern: " + pattern);

    // clean stem -> path, lexicographically smallest path wins
    std::map<std::string, std::string> clean_by_stem;
    std::vector<std::filesystem::path> clean_files;
    for (const auto& e : std::filesystem::directory_iterator(clean_dir))
        if (e.is_regular_file() && is_image_file(e.path())) clean_files.push_back(e.path());
    std::sort(clean_files.begin(), clean_files.end());
    for (const auto& p : clean_files) clean_by_stem.emplace(p.stem().string(), p.string());

    std::vector<std::filesystem::path> hazy_files;
    for (const auto& e : std::filesystem::directory_iterator(hazy_dir))
        if (e.is_regular_file() && is_image_file(e.path())) hazy_files.push_back(e.path());
    std::sort(hazy_files.begin(), hazy_files.end());

    PairManifest m;
    int skip_count = 0;
    for (const auto& hp : hazy_files) {
        std::string stem = hp.stem().string();
        PairRecord rec;
        rec.hazy_path = hp.string();
        bool matched = false;
        if (pattern != "params") {
            auto it = clean_by_stem.find(stem);
            if (it != clean_by_stem.end()) {
                rec.clean_path = it->second;
                matched = true;
            }
        }
        if (!matched && pattern != "exact") {
            // strip up to two trailing _<number> tokens: <stem>_<A>_<beta>
            std::string s = stem;
            std::vector<double> params;
            for (int strip = 0; strip < 2 && !matched; ++strip) {
                std::size_t pos = s.rfind('_');
                if (pos == std::string::npos) break;
                double v = 0.0;
                if (!parse_double(s.substr(pos + 1), v)) break;
                params.insert(params.begin(), v);
                s = s.substr(0, pos);
                auto it = clean_by_stem.find(s);
                if (it != clean_by_stem.end()) {
                    rec.clean_path = it->second;
                    if (params.size() == 2) {
                        rec.airlight = Rgb{float(params[0]), float(params[0]), float(params[0])};
                        rec.beta = params[1];
                    } else if (params.size() == 1) {
                        rec.beta = params[0];
                    }
                    matched = true;
                }
            }
        }
        if (matched)
            m.records.push_back(std::move(rec));
        else
            ++skip_count;
    }
    if (skipped) *skipped = skip_count;
    if (m.empty())
        throw Error(ErrorKind::value, "no hazy/clean pairs matched between " +
                                          hazy_dir.string() + " and " + clean_dir.string());
    return m;
}

std::pair<PairManifest, PairManifest> split(const PairManifest& manifest,
                                            double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorKind::value, "train_fraction must be in (0,1)");
    std::vector<std::string> scenes;
    std::set<std::string> seen;
    for (const auto& r : manifest.records) {
        std::string stem = std::filesystem::path(r.clean_path).stem().string();
        if (seen.insert(stem).second) scenes.push_back(stem);
    }
    std::sort(scenes.begin(), scenes.end());
    if (scenes.size() < 2)
        throw Error(ErrorKind::value, "need at least 2 scenes to split");
    std::mt19937 rng{std::uint32_t(seed)};
    deterministic_shuffle(scenes, rng);
    std::size_t n_train = std::size_t(std::llround(train_fraction * double(scenes.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, scenes.size() - 1);
    std::set<std::string> train_scenes(scenes.begin(), scenes.begin() + std::ptrdiff_t(n_train));
    PairManifest train, test;
    for (const auto& r : manifest.records) {
        std::string stem = std::filesystem::path(r.clean_path).stem().string();
        (train_scenes.count(stem) ? train : test).records.push_back(r);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace hazeclear
