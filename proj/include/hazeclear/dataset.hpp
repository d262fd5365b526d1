#ifndef HAZECLEAR_DATASET_HPP
#define HAZECLEAR_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hazeclear/image.hpp"

namespace hazeclear {

/// One hazy/clean pair plus optional synthesis provenance.
struct PairRecord {
    std::string hazy_path;
    std::string clean_path;
    std::optional<double> beta;
    std::optional<Rgb> airlight;
    std::string depth_kind;  // empty when unknown
};

struct PairManifest {
    std::vector<PairRecord> records;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }
};

/// Tab-separated manifest: hazy_path, clean_path, beta, A_r, A_g, A_b,
/// depth_kind per line; "-" marks absent fields.
void write_manifest(const PairManifest& manifest, const std::filesystem::path& path);
PairManifest read_manifest(const std::filesystem::path& path);

/// Matches hazy files to clean files by stem. A hazy stem `<stem>` or
/// `<stem>_<A>_<beta>` (RESIDE-OTS style) maps to clean `<stem>`;
/// parameter suffixes are parsed as metadata when present. Unmatched
/// hazy files are skipped and counted. pattern: "auto" (exact then
/// suffix-stripped), "exact", or "params" (suffix rule only).
PairManifest scan_pairs(const std::filesystem::path& hazy_dir,
                        const std::filesystem::path& clean_dir,
                        const std::string& pattern = "auto",
                        int* skipped = nullptr);

/// Seeded scene-level split: all haze variants of one clean image land on
/// the same side. Record order within each side follows the input.
std::pair<PairManifest, PairManifest> split(const PairManifest& manifest,
                                            double train_fraction, std::uint64_t seed);

}  // namespace hazeclear

#endif
