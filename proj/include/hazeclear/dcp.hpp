#ifndef HAZECLEAR_DCP_HPP
#define HAZECLEAR_DCP_HPP

#include <tuple>
#include <utility>

#include "hazeclear/image.hpp"

namespace hazeclear {

enum class Refine { none, guided };

/// Knobs of the dark-channel dehazing chain. Defaults follow common
/// practice: 15x15 dark-channel window, omega 0.95, transmission floor
/// 0.1, top 0.1% airlight candidates, guided-filter refinement.
struct DcpParams {
    int window_radius = 7;
    float omega = 0.95f;
    float t0 = 0.1f;
    float airlight_fraction = 0.001f;
    Refine refine = Refine::guided;
    int guided_radius = 30;
    float guided_eps = 1e-3f;

    void validate() const;
};

/// Per-pixel channel minimum followed by a windowed minimum.
ScalarMap dark_channel(const Image& img, int radius);

/// Picks the top `fraction` of pixels by dark-channel value, then the
/// single candidate with the highest channel-mean intensity. Ties break
/// toward the smallest row-major index at both stages.
Rgb estimate_atmospheric_light(const Image& img, const ScalarMap& dark, float fraction);

/// Raw transmission 1 - omega * min-window(min-channel(I/A)). The ratio
/// is clipped to <= 1 inside the min chain, so the result is in [0,1].
ScalarMap estimate_transmission(const Image& img, Rgb airlight, float omega, int radius);

/// Guided-filter smoothing of the transmission, guided by the gray of
/// the hazy image. Output clipped to [0,1].
ScalarMap refine_transmission(const Image& guide, const ScalarMap& t, int radius, float eps);

/// max(t, t0) per pixel.
ScalarMap clamp_transmission(const ScalarMap& t, float t0);

/// Inverts the scattering model: J = (I - A)/t + A, clipped to [0,1].
/// Throws if any t(x) <= 0.
Image recover_radiance(const Image& img, const ScalarMap& t, Rgb airlight);

/// Runs dark_channel -> atmospheric light -> transmission -> optional
/// refinement -> floor clamp; returns the final transmission and A.
std::pair<ScalarMap, Rgb> dcp_transmission(const Image& img, const DcpParams& params);

/// Full chain; returns the recovered image, the final transmission map,
/// and the estimated atmospheric light.
std::tuple<Image, ScalarMap, Rgb> dehaze_dcp(const Image& img, const DcpParams& params);

}  // namespace hazeclear

#endif
