#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hazeclear/dataset.hpp"
#include "hazeclear/dcp.hpp"
#include "hazeclear/image.hpp"
#include "hazeclear/metrics.hpp"
#include "hazeclear/regression.hpp"
#include "hazeclear/synth.hpp"

namespace fs = std::filesystem;
using namespace hazeclear;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (const auto& tok : split_list(s, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw UsageError("bad value '" + tok + "' in " + flag);
        }
    }
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

// each item is a gray level or an r:g:b triplet, items comma-separated
std::vector<Rgb> parse_airlight_list(const std::string& s) {
    std::vector<Rgb> out;
    for (const auto& tok : split_list(s, ',')) {
        if (tok.empty()) continue;
        auto parts = split_list(tok, ':');
        try {
            if (parts.size() == 1) {
                float v = std::stof(parts[0]);
                out.push_back({v, v, v});
            } else if (parts.size() == 3) {
                out.push_back({std::stof(parts[0]), std::stof(parts[1]), std::stof(parts[2])});
            } else {
                throw UsageError("");
            }
        } catch (...) {
            throw UsageError("bad airlight '" + tok + "' (want gray or r:g:b)");
        }
        Rgb a = out.back();
        for (int c = 0; c < 3; ++c)
            if (!(a[c] > 0.0f && a[c] <= 1.0f))
                throw UsageError("airlight components must be in (0,1]");
    }
    if (out.empty()) throw UsageError("--airlights: empty list");
    return out;
}

struct DcpFlags {
    DcpParams params;
    std::string refine_name = "guided";

    void attach(CLI::App* cmd) {
        cmd->add_option("--window-radius", params.window_radius,
                        "dark-channel window radius (window side 2r+1)");
        cmd->add_option("--omega", params.omega, "haze retention factor, (0,1]");
        cmd->add_option("--t0", params.t0, "transmission floor, (0,1)");
        cmd->add_option("--airlight-fraction", params.airlight_fraction,
                        "brightest-pixel fraction for A, (0,1]");
        cmd->add_option("--refine", refine_name, "transmission refinement: none|guided");
        cmd->add_option("--guided-radius", params.guided_radius, "guided filter radius");
        cmd->add_option("--guided-eps", params.guided_eps, "guided filter regularizer");
    }

    DcpParams resolve() const {
        DcpParams p = params;
        if (refine_name == "none")
            p.refine = Refine::none;
        else if (refine_name == "guided")
            p.refine = Refine::guided;
        else
            throw UsageError("--refine must be none or guided");
        try {
            p.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        return p;
    }
};

// flat `key = value` file mirroring flag names; flags given on the command line win
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        std::size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string entry = trim(line);
        if (entry.empty()) continue;
        std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line is not key = value: '" + entry + "'");
        std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        CLI::Option* op = cmd->get_option_no_throw("--" + key);
        if (op == nullptr || key == "config") throw UsageError("unknown config key '" + key + "'");
        if (op->count() > 0) continue;
        op->add_result(value);
        op->run_callback();
    }
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return ext == ".png" || ext == ".ppm";
}

int run_synth(const std::string& clean_dir, const std::string& out_dir,
              const std::string& betas_s, const std::string& airlights_s,
              const std::string& depth_s, std::uint64_t seed) {
    auto betas = parse_double_list(betas_s, "--betas");
    for (double b : betas)
        if (!(b >= 0.0)) throw UsageError("--betas: values must be >= 0");
    auto airlights = parse_airlight_list(airlights_s);
    DepthModel depth;
    try {
        depth = DepthModel::parse(depth_s);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    PairManifest m = synth_set(clean_dir, out_dir, betas, airlights, depth, seed);
    std::cout << "manifest " << (fs::path(out_dir) / "manifest.tsv").string() << "\n";
    std::cout << "pairs " << m.size() << "\n";
    return 0;
}

int run_train(const std::string& manifest_path, const std::string& out_path,
              const TrainConfig& config) {
    PairManifest manifest = read_manifest(manifest_path);
    TrainReport report = train(manifest, config);
    for (std::size_t i = 0; i < report.epoch_loss.size(); ++i)
        std::printf("epoch %zu loss %.10g\n", i + 1, report.epoch_loss[i]);
    if (report.diverged) {
        std::cerr << "training diverged at epoch " << (report.diverged_epoch + 1) << "\n";
        return 1;
    }
    save_model(report.model, out_path);
    std::cout << "model " << out_path << "\n";
    return 0;
}

int run_dehaze(const std::string& in_path, const std::string& out_path,
               const std::string& model_path, const DcpParams& dcp) {
    std::optional<RegressionModel> model;
    if (!model_path.empty()) model = load_model(model_path);
    auto process = [&](const fs::path& src, const fs::path& dst) {
        Image img = load_image(src);
        Image out = model ? dehaze_mlr(img, *model, dcp) : std::get<0>(dehaze_dcp(img, dcp));
        save_image(out, dst);
    };
    if (fs::is_directory(in_path)) {
        fs::create_directories(out_path);
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(in_path))
            if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw Error(ErrorKind::io, "no images in " + in_path);
        for (const auto& f : files) process(f, fs::path(out_path) / f.filename());
        std::cout << "dehazed " << files.size() << " images\n";
    } else {
        process(in_path, out_path);
        std::cout << "dehazed " << out_path << "\n";
    }
    return 0;
}

int run_eval(const std::string& manifest_path, const std::string& model_path,
             const std::string& report_path, const DcpParams& dcp) {
    PairManifest manifest = read_manifest(manifest_path);
    std::optional<RegressionModel> model;
    if (!model_path.empty()) model = load_model(model_path);
    auto dehazer = [&](const Image& img) {
        return model ? dehaze_mlr(img, *model, dcp) : std::get<0>(dehaze_dcp(img, dcp));
    };
    EvalSummary summary = evaluate_set(manifest, dehazer);
    write_report(summary, report_path);
    if (summary.ok_count == 0) {
        std::cerr << "all pairs failed\n";
        return 1;
    }
    auto fmt = [](double v) {
        if (std::isinf(v)) return std::string("inf");
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    std::cout << "mean_psnr " << fmt(summary.mean_psnr) << " mean_ssim "
              << fmt(summary.mean_ssim) << "\n";
    return 0;
}

int run_compare(const std::string& in_path, const std::string& out_path,
                const std::string& model_path, const DcpParams& dcp) {
    Image input = load_image(in_path);
    std::vector<Image> panels;
    panels.push_back(input);
    panels.push_back(std::get<0>(dehaze_dcp(input, dcp)));
    if (!model_path.empty()) {
        RegressionModel model = load_model(model_path);
        panels.push_back(dehaze_mlr(input, model, dcp));
    }
    const int gutter = 8;
    const int h = input.height();
    int total_w = 0;
    for (const auto& p : panels) total_w += p.width();
    total_w += gutter * int(panels.size() - 1);
    Image montage(h, total_w, {1.0f, 1.0f, 1.0f});
    int x0 = 0;
    for (const auto& p : panels) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < p.width(); ++x) montage.set_pixel(y, x0 + x, p.pixel(y, x));
        x0 += p.width() + gutter;
    }
    save_image(montage, out_path);
    std::cout << "montage " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hazeclear: dark-channel dehazing with a trained linear correction"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "render synthetic hazy images from clean ones");
    std::string sy_cfg;
    synth->add_option("--config", sy_cfg, "flat key = value config file; flags override");
    std::string sy_clean, sy_out;
    std::string sy_betas = "0.4,0.6,0.8,1.0,1.2,1.4,1.6,1.8,2.0";
    std::string sy_airlights = "0.7,0.8,0.9,1.0";
    std::string sy_depth = "ramp:0.2,2.0";
    std::uint64_t sy_seed = 0;
    synth->add_option("--clean", sy_clean, "directory of clean images")->required();
    synth->add_option("--out", sy_out, "output directory")->required();
    synth->add_option("--betas", sy_betas, "comma-separated scattering coefficients");
    synth->add_option("--airlights", sy_airlights, "gray levels or r:g:b triplets");
    synth->add_option("--depth", sy_depth, "constant:c | ramp:near,far | radial:center,edge");
    synth->add_option("--seed", sy_seed, "determinism seed");

    // train
    auto* train_cmd = app.add_subcommand("train", "fit the correction model on a manifest");
    std::string tr_cfg;
    train_cmd->add_option("--config", tr_cfg, "flat key = value config file; flags override");
    std::string tr_manifest, tr_out;
    TrainConfig tr_config;
    std::string tr_pixels = "4096";
    DcpFlags tr_dcp;
    train_cmd->add_option("--manifest", tr_manifest, "pair manifest file")->required();
    train_cmd->add_option("--out", tr_out, "model output path")->required();
    train_cmd->add_option("--lr", tr_config.learning_rate, "learning rate");
    train_cmd->add_option("--epochs", tr_config.epochs, "training epochs");
    train_cmd->add_option("--pixels", tr_pixels, "pixels per image, or 'all'");
    train_cmd->add_option("--seed", tr_config.seed, "shuffle/sampling seed");
    tr_dcp.attach(train_cmd);

    // dehaze
    auto* dehaze_cmd = app.add_subcommand("dehaze", "dehaze an image or directory");
    std::string dh_cfg;
    dehaze_cmd->add_option("--config", dh_cfg, "flat key = value config file; flags override");
    std::string dh_in, dh_out, dh_model;
    DcpFlags dh_dcp;
    dehaze_cmd->add_option("--in", dh_in, "input image or directory")->required();
    dehaze_cmd->add_option("--out", dh_out, "output image or directory")->required();
    dehaze_cmd->add_option("--model", dh_model, "model file (omit for plain DCP)");
    dh_dcp.attach(dehaze_cmd);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a dehazer over a manifest");
    std::string ev_cfg;
    eval_cmd->add_option("--config", ev_cfg, "flat key = value config file; flags override");
    std::string ev_manifest, ev_model, ev_report;
    DcpFlags ev_dcp;
    eval_cmd->add_option("--manifest", ev_manifest, "pair manifest file")->required();
    eval_cmd->add_option("--model", ev_model, "model file (omit for plain DCP)");
    eval_cmd->add_option("--report", ev_report, "CSV report path")->required();
    ev_dcp.attach(eval_cmd);

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "write an input|DCP|model montage");
    std::string cp_cfg;
    compare_cmd->add_option("--config", cp_cfg, "flat key = value config file; flags override");
    std::string cp_in, cp_out, cp_model;
    DcpFlags cp_dcp;
    compare_cmd->add_option("--in", cp_in, "input image")->required();
    compare_cmd->add_option("--out", cp_out, "montage output image")->required();
    compare_cmd->add_option("--model", cp_model, "model file (omit for 2-panel montage)");
    cp_dcp.attach(compare_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (synth->parsed()) apply_config(synth, sy_cfg);
        if (train_cmd->parsed()) apply_config(train_cmd, tr_cfg);
        if (dehaze_cmd->parsed()) apply_config(dehaze_cmd, dh_cfg);
        if (eval_cmd->parsed()) apply_config(eval_cmd, ev_cfg);
        if (compare_cmd->parsed()) apply_config(compare_cmd, cp_cfg);
        if (synth->parsed()) return run_synth(sy_clean, sy_out, sy_betas, sy_airlights, sy_depth, sy_seed);
        if (train_cmd->parsed()) {
            if (tr_pixels == "all") {
                tr_config.pixels_per_image = 0;
            } else {
                try {
                    tr_config.pixels_per_image = std::stoi(tr_pixels);
                } catch (...) {
                    throw UsageError("--pixels must be an integer or 'all'");
                }
                if (tr_config.pixels_per_image < 1)
                    throw UsageError("--pixels must be >= 1 or 'all'");
            }
            tr_config.dcp = tr_dcp.resolve();
            try {
                tr_config.validate();
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            return run_train(tr_manifest, tr_out, tr_config);
        }
        if (dehaze_cmd->parsed()) return run_dehaze(dh_in, dh_out, dh_model, dh_dcp.resolve());
        if (eval_cmd->parsed()) return run_eval(ev_manifest, ev_model, ev_report, ev_dcp.resolve());
        if (compare_cmd->parsed()) return run_compare(cp_in, cp_out, cp_model, cp_dcp.resolve());
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
