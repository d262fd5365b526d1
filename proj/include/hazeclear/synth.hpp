#ifndef HAZECLEAR_SYNTH_HPP
#define HAZECLEAR_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hazeclear/dataset.hpp"
#include "hazeclear/image.hpp"

namespace hazeclear {

/// Parametric scene depth, the stand-in for measured depth maps.
struct DepthModel {
    enum class Kind { constant, vertical_ramp, radial };
    Kind kind = Kind::vertical_ramp;
    // constant: p0 = depth; vertical_ramp: p0 = near, p1 = far (far at
    // row 0); radial: p0 = center depth, p1 = edge depth
    double p0 = 0.0;
    double p1 = 1.0;

    std::string name() const;
    static DepthModel parse(const std::string& text);
};

struct HazeParams {
    double beta = 1.0;
    Rgb airlight{0.9f, 0.9f, 0.9f};
    DepthModel depth;
};

ScalarMap render_depth(const DepthModel& model, int height, int width);

/// t(x) = exp(-beta * d(x))
ScalarMap transmission_from_depth(const ScalarMap& depth, double beta);

/// Forward scattering model: I = J*t + A*(1-t).
Image apply_haze(const Image& clean, const ScalarMap& t, Rgb airlight);

/// Renders every clean image in clean_dir under each (beta, A)
/// combination into out_dir (named `<stem>_<Amean>_<beta>.png`) and
/// returns the manifest, which is also written to out_dir/manifest.tsv.
PairManifest synth_set(const std::filesystem::path& clean_dir,
                       const std::filesystem::path& out_dir,
                       const std::vector<double>& betas,
                       const std::vector<Rgb>& airlights, const DepthModel& depth,
                       std::uint64_t seed);

}  // namespace hazeclear

#endif
