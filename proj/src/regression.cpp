#include "hazeclear/regression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "hazeclear/random.hpp"

namespace hazeclear {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw Error(ErrorKind::value, "learning_rate must be > 0");
    if (epochs < 1) throw Error(ErrorKind::value, "epochs must be >= 1");
    dcp.validate();
}

FeatureField compute_features(const Image& img, const ScalarMap& t, Rgb airlight) {
    if (t.height() != img.height() || t.width() != img.width())
        throw Error(ErrorKind::value, "compute_features: dimension mismatch");
    for (float v : t.data())
        if (!(v > 0.0f))
            throw Error(ErrorKind::value, "compute_features: transmission <= 0");
    FeatureField f;
    f.height = img.height();
    f.width = img.width();
    const std::size_t n = img.pixel_count();
    for (int c = 0; c < 3; ++c) {
        f.x0[c].resize(n);
        f.x1[c].resize(n);
        f.x2[c].resize(n);
        const auto& plane = img.plane(c);
        const double a = airlight[c];
        for (std::size_t i = 0; i < n; ++i) {
            double tv = t.data()[i];
            f.x0[c][i] = plane[i] / tv;
            f.x1[c][i] = a / tv;
            f.x2[c][i] = a;
        }
    }
    return f;
}

Image predict(const RegressionModel& model, const FeatureField& features) {
    if (features.height < 1 || features.width < 1)
        throw Error(ErrorKind::value, "predict: feature field carries no image shape");
    Image out(features.height, features.width);
    for (int c = 0; c < 3; ++c) {
        auto& dst = out.plane(c);
        const double w0 = model.w0[c], w1 = model.w1[c], w2 = model.w2[c], b = model.b[c];
        for (std::size_t i = 0; i < features.count(); ++i)
            dst[i] = float(w0 * features.x0[c][i] + w1 * features.x1[c][i] +
                           w2 * features.x2[c][i] + b);
    }
    return out;
}

double mse_loss(const Image& pred, const Image& target) {
    if (pred.height() != target.height() || pred.width() != target.width())
        throw Error(ErrorKind::value, "mse_loss: dimension mismatch");
    const std::size_t n = pred.pixel_count();
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& p = pred.plane(c);
        const auto& t = target.plane(c);
        for (std::size_t i = 0; i < n; ++i) {
            double e = double(p[i]) - double(t[i]);
            sum += e * e;
        }
    }
    return sum / 3.0 / (2.0 * double(n));
}

namespace {

// Cost over a sampled batch, same 1/(2n) * channel-mean convention.
double batch_loss(const RegressionModel& model, const FeatureField& f,
                  const std::vector<Rgb>& target) {
    const std::size_t n = f.count();
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double w0 = model.w0[c], w1 = model.w1[c], w2 = model.w2[c], b = model.b[c];
        for (std::size_t i = 0; i < n; ++i) {
            double pred = w0 * f.x0[c][i] + w1 * f.x1[c][i] + w2 * f.x2[c][i] + b;
            double e = double(target[i][c]) - pred;
            sum += e * e;
        }
    }
    return sum / 3.0 / (2.0 * double(n));
}

}  // namespace

std::array<std::array<double, 4>, 3> model_gradient(const RegressionModel& model,
                                                    const FeatureField& features,
                                                    const std::vector<Rgb>& target) {
    const std::size_t n = features.count();
    if (n == 0 || target.size() != n)
        throw Error(ErrorKind::value, "model_gradient: empty batch or size mismatch");
    std::array<std::array<double, 4>, 3> grad{};
    for (int c = 0; c < 3; ++c) {
        const double w0 = model.w0[c], w1 = model.w1[c], w2 = model.w2[c], b = model.b[c];
        double g0 = 0.0, g1 = 0.0, g2 = 0.0, gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pred = w0 * features.x0[c][i] + w1 * features.x1[c][i] +
                          w2 * features.x2[c][i] + b;
            double resid = double(target[i][c]) - pred;
            g0 += resid * features.x0[c][i];
            g1 += resid * features.x1[c][i];
            g2 += resid * features.x2[c][i];
            gb += resid;
        }
        // dL/dw = -(1/n) sum(resid * x)
        grad[c] = {-g0 / double(n), -g1 / double(n), -g2 / double(n), -gb / double(n)};
    }
    return grad;
}

RegressionModel sgd_step(const RegressionModel& model, const FeatureField& features,
                         const std::vector<Rgb>& target, double alpha) {
    if (!(alpha > 0.0)) throw Error(ErrorKind::value, "sgd_step: alpha must be > 0");
    auto grad = model_gradient(model, features, target);
    RegressionModel out = model;
    for (int c = 0; c < 3; ++c) {
        out.w0[c] = float(double(model.w0[c]) - alpha * grad[c][0]);
        out.w1[c] = float(double(model.w1[c]) - alpha * grad[c][1]);
        out.w2[c] = float(double(model.w2[c]) - alpha * grad[c][2]);
        out.b[c] = float(double(model.b[c]) - alpha * grad[c][3]);
        if (!std::isfinite(out.w0[c]) || !std::isfinite(out.w1[c]) ||
            !std::isfinite(out.w2[c]) || !std::isfinite(out.b[c]))
            throw Error(ErrorKind::divergence, "sgd_step: non-finite parameter update");
    }
    return out;
}

RegressionModel sgd_step(const RegressionModel& model, const FeatureField& features,
                         const Image& target, double alpha) {
    if (std::size_t(target.pixel_count()) != features.count())
        throw Error(ErrorKind::value, "sgd_step: target does not cover feature field");
    std::vector<Rgb> flat(target.pixel_count());
    for (int y = 0; y < target.height(); ++y)
        for (int x = 0; x < target.width(); ++x)
            flat[std::size_t(y) * target.width() + x] = target.pixel(y, x);
    return sgd_step(model, features, flat, alpha);
}

namespace {

FeatureField gather(const FeatureField& f, const std::vector<std::size_t>& idx) {
    FeatureField out;
    for (int c = 0; c < 3; ++c) {
        out.x0[c].reserve(idx.size());
        out.x1[c].reserve(idx.size());
        out.x2[c].reserve(idx.size());
        for (std::size_t i : idx) {
            out.x0[c].push_back(f.x0[c][i]);
            out.x1[c].push_back(f.x1[c][i]);
            out.x2[c].push_back(f.x2[c][i]);
        }
    }
    return out;
}

}  // namespace

TrainReport train(const PairManifest& manifest, const TrainConfig& config) {
    config.validate();
    if (manifest.empty()) throw Error(ErrorKind::value, "train: empty manifest");
    TrainReport report;
    report.model = RegressionModel::identity();
    std::mt19937 rng(std::uint32_t(config.seed));
    std::vector<std::size_t> order(manifest.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        deterministic_shuffle(order, rng);
        double loss_sum = 0.0;
        std::size_t count = 0;
        for (std::size_t pair_idx : order) {
            const PairRecord& rec = manifest.records[pair_idx];
            Image hazy = load_image(rec.hazy_path);
            Image clean = load_image(rec.clean_path);
            if (hazy.height() != clean.height() || hazy.width() != clean.width())
                throw Error(ErrorKind::value, "train: pair dimension mismatch: " + rec.hazy_path);
            auto [t, airlight] = dcp_transmission(hazy, config.dcp);
            FeatureField full = compute_features(hazy, t, airlight);
            std::size_t total = full.count();
            std::size_t want = config.pixels_per_image <= 0
                                   ? total
                                   : std::min<std::size_t>(std::size_t(config.pixels_per_image), total);
            std::vector<std::size_t> idx = sample_indices(total, want, rng);
            FeatureField batch = gather(full, idx);
            std::vector<Rgb> target(idx.size());
            const int w = clean.width();
            for (std::size_t j = 0; j < idx.size(); ++j)
                target[j] = clean.pixel(int(idx[j] / std::size_t(w)), int(idx[j] % std::size_t(w)));
            double loss = batch_loss(report.model, batch, target);
            if (!std::isfinite(loss)) {
                report.diverged = true;
                report.diverged_epoch = epoch;
                return report;
            }
            loss_sum += loss;
            ++count;
            try {
                report.model = sgd_step(report.model, batch, target, config.learning_rate);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::divergence) {
                    report.diverged = true;
                    report.diverged_epoch = epoch;
                    return report;
                }
                throw;
            }
            ++report.images_seen;
        }
        report.epoch_loss.push_back(loss_sum / double(count));
    }
    return report;
}

Image dehaze_mlr(const Image& img, const RegressionModel& model, const DcpParams& dcp) {
    auto [t, airlight] = dcp_transmission(img, dcp);
    FeatureField features = compute_features(img, t, airlight);
    Image out = predict(model, features);
    for (int c = 0; c < 3; ++c)
        for (float& v : out.plane(c)) v = std::clamp(v, 0.0f, 1.0f);
    return out;
}

namespace {

std::string float_repr(float v) {
    std::ostringstream os;
    os.precision(9);  // max_digits10 for float
    os << v;
    return os.str();
}

}  // namespace

void save_model(const RegressionModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write model file: " + path.string());
    out << "MLRHAZE 1\n";
    const char* names[4] = {"w0", "w1", "w2", "b"};
    const Rgb* rows[4] = {&model.w0, &model.w1, &model.w2, &model.b};
    for (int i = 0; i < 4; ++i)
        out << names[i] << ' ' << float_repr(rows[i]->r) << ' ' << float_repr(rows[i]->g)
            << ' ' << float_repr(rows[i]->b) << '\n';
    if (!out) throw Error(ErrorKind::io, "model write failed: " + path.string());
}

RegressionModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read model file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "MLRHAZE 1")
        throw Error(ErrorKind::format, "unrecognized model file: " + path.string());
    RegressionModel model;
    const char* names[4] = {"w0", "w1", "w2", "b"};
    Rgb* rows[4] = {&model.w0, &model.w1, &model.w2, &model.b};
    for (int i = 0; i < 4; ++i) {
        if (!std::getline(in, line))
            throw Error(ErrorKind::format,
                        std::string("model file missing line for ") + names[i]);
        std::istringstream ss(line);
        std::string name;
        ss >> name;
        if (name != names[i])
            throw Error(ErrorKind::format, "model file: expected field " +
                                               std::string(names[i]) + ", got " + name);
        for (int c = 0; c < 3; ++c) {
            float v = 0.0f;
            if (!(ss >> v))
                throw Error(ErrorKind::format, "model file: missing value " +
                                                   std::string(names[i]) + "[" +
                                                   std::to_string(c) + "]");
            (*rows[i])[c] = v;
        }
    }
    return model;
}

}  // namespace hazeclear
