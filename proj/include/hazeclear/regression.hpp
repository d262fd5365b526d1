#ifndef HAZECLEAR_REGRESSION_HPP
#define HAZECLEAR_REGRESSION_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hazeclear/dataset.hpp"
#include "hazeclear/dcp.hpp"
#include "hazeclear/image.hpp"

namespace hazeclear {

/// Per-channel weights and bias of the linear correction model. The
/// identity setting (1, -1, 1, 0) reproduces plain dark-channel recovery.
struct RegressionModel {
    Rgb w0{1.0f, 1.0f, 1.0f};
    Rgb w1{-1.0f, -1.0f, -1.0f};
    Rgb w2{1.0f, 1.0f, 1.0f};
    Rgb b{0.0f, 0.0f, 0.0f};

    static RegressionModel identity() { return {}; }

    friend bool operator==(const RegressionModel&, const RegressionModel&) = default;
};

/// Explanatory variables per pixel and channel: x0 = I/t, x1 = A/t,
/// x2 = A. Stored channel-major in double precision for stable gradient
/// arithmetic. height/width are zero for sampled (non-image) fields.
struct FeatureField {
    int height = 0;
    int width = 0;
    std::array<std::vector<double>, 3> x0, x1, x2;

    std::size_t count() const { return x0[0].size(); }
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 10;
    int pixels_per_image = 4096;  // <= 0 means all pixels
    std::uint64_t seed = 0;
    DcpParams dcp;

    void validate() const;
};

struct TrainReport {
    std::vector<double> epoch_loss;  // mean per-image loss per epoch
    RegressionModel model;
    long images_seen = 0;
    bool diverged = false;
    int diverged_epoch = -1;  // 0-based, valid when diverged
};

/// Builds the feature field from a hazy image and its (clamped)
/// transmission and atmospheric light. Throws if any t(x) <= 0.
FeatureField compute_features(const Image& img, const ScalarMap& t, Rgb airlight);

/// Linear prediction w0*x0 + w1*x1 + w2*x2 + b per channel. Output is
/// not clipped; clipping happens at image emission only.
Image predict(const RegressionModel& model, const FeatureField& features);

/// (1/(2n)) * sum over pixels of the channel-mean squared error.
double mse_loss(const Image& pred, const Image& target);

/// True gradient of the per-channel cost L_c = 1/(2n) sum (J_c - Jw_c)^2
/// with respect to (w0, w1, w2, b), indexed [channel][param].
std::array<std::array<double, 4>, 3> model_gradient(const RegressionModel& model,
                                                    const FeatureField& features,
                                                    const std::vector<Rgb>& target);

/// One full-batch gradient-descent update over the given pixels,
/// channels independent: w_k += alpha*(1/n)*sum((J - Jw)*x_k).
RegressionModel sgd_step(const RegressionModel& model, const FeatureField& features,
                         const std::vector<Rgb>& target, double alpha);
RegressionModel sgd_step(const RegressionModel& model, const FeatureField& features,
                         const Image& target, double alpha);

/// SGD over the manifest: per epoch, pairs visited in seeded-shuffled
/// order; per pair, one sgd_step on a seeded pixel sample. Deterministic
/// given the seed. On divergence the report stops at the failing epoch
/// with `diverged` set.
TrainReport train(const PairManifest& manifest, const TrainConfig& config);

/// DCP stages, features, prediction, clip to [0,1].
Image dehaze_mlr(const Image& img, const RegressionModel& model, const DcpParams& dcp);

/// Text model file: `MLRHAZE 1` then w0/w1/w2/b lines with three
/// round-trip-exact floats each.
void save_model(const RegressionModel& model, const std::filesystem::path& path);
RegressionModel load_model(const std::filesystem::path& path);

}  // namespace hazeclear

#endif
