#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "hazeclear/metrics.hpp"
#include "oracles.hpp"

using namespace hazeclear;
namespace fs = std::filesystem;

TEST_CASE("psnr basics") {
    std::mt19937 rng(107);
    Image a = oracle::random_image(12, 12, rng);
    CHECK(std::isinf(psnr(a, a)));

    Image base(8, 8, {0.4f, 0.4f, 0.4f});
    Image off(8, 8, {0.5f, 0.5f, 0.5f});
    CHECK(psnr(base, off) == doctest::Approx(20.0).epsilon(1e-6));

    Image b = oracle::random_image(8, 8, rng);
    Image c = oracle::random_image(8, 8, rng);
    CHECK(std::abs(psnr(b, c) - oracle::psnr(b, c)) < 1e-9);
}

TEST_CASE("psnr decreases with noise amplitude") {
    std::mt19937 rng(109);
    Image base = oracle::random_image(16, 16, rng, 0.3f, 0.7f);
    double prev = std::numeric_limits<double>::infinity();
    for (float amp : {0.01f, 0.05f, 0.1f}) {
        Image noisy = base;
        std::mt19937 nrng(5);
        for (int ch = 0; ch < 3; ++ch)
            for (float& v : noisy.plane(ch))
                v += amp * (oracle::uniform01(nrng) * 2.0f - 1.0f);
        double p = psnr(base, noisy);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("psnr invariant under identical permutation of both images") {
    std::mt19937 rng(113);
    Image a = oracle::random_image(6, 6, rng);
    Image b = oracle::random_image(6, 6, rng);
    // reverse both pixel orders
    Image ar(6, 6), br(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) {
            ar.set_pixel(5 - y, 5 - x, a.pixel(y, x));
            br.set_pixel(5 - y, 5 - x, b.pixel(y, x));
        }
    CHECK(psnr(a, b) == doctest::Approx(psnr(ar, br)).epsilon(1e-12));
}

TEST_CASE("ssim identity, symmetry, constant case") {
    std::mt19937 rng(127);
    Image a = oracle::random_image(16, 16, rng);
    CHECK(ssim(a, a) == 1.0);

    for (int trial = 0; trial < 10; ++trial) {
        Image x = oracle::random_image(14, 14, rng);
        Image y = oracle::random_image(14, 14, rng);
        CHECK(std::abs(ssim(x, y) - ssim(y, x)) < 1e-9);
    }

    Image c1(16, 16, {0.2f, 0.2f, 0.2f});
    Image c2(16, 16, {0.8f, 0.8f, 0.8f});
    double expected = (0.32 + 1e-4) / (0.68 + 1e-4);
    CHECK(ssim(c1, c2) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("ssim matches brute-force reference") {
    std::mt19937 rng(131);
    for (int trial = 0; trial < 10; ++trial) {
        Image a = oracle::random_image(16, 16, rng);
        Image b = oracle::random_image(16, 16, rng);
        CHECK(std::abs(ssim(a, b) - oracle::ssim(a, b)) < 1e-6);
    }
}

TEST_CASE("ssim rejects images smaller than the window") {
    Image small(8, 8, {0.5f, 0.5f, 0.5f});
    CHECK_THROWS_AS(ssim(small, small), Error);
}

TEST_CASE("evaluate_set with identity dehazer on hazy=clean pairs") {
    fs::path dir = fs::temp_directory_path() / "hazeclear_metrics_tests";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::mt19937 rng(137);
    PairManifest manifest;
    for (int i = 0; i < 3; ++i) {
        fs::path p = dir / ("img" + std::to_string(i) + ".png");
        save_image(oracle::random_image(16, 16, rng), p);
        manifest.records.push_back({p.string(), p.string(), std::nullopt, std::nullopt, ""});
    }
    EvalSummary s = evaluate_set(manifest, [](const Image& img) { return img; });
    CHECK(s.ok_count == 3);
    CHECK(s.psnr_inf_count == 3);
    CHECK(s.mean_ssim == doctest::Approx(1.0));

    fs::path report = dir / "report.csv";
    write_report(s, report);
    std::ifstream in(report);
    std::string line;
    std::getline(in, line);
    CHECK(line == "hazy,clean,psnr_db,ssim,status");
    int rows = 0;
    bool mean_row = false;
    while (std::getline(in, line)) {
        if (line.rfind("#mean", 0) == 0) mean_row = true;
        else if (line.rfind("#", 0) != 0) ++rows;
    }
    CHECK(rows == 3);
    CHECK(mean_row);
}

TEST_CASE("evaluate_set records unreadable pairs as failed rows") {
    fs::path dir = fs::temp_directory_path() / "hazeclear_metrics_tests2";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::mt19937 rng(139);
    fs::path good = dir / "good.png";
    save_image(oracle::random_image(16, 16, rng), good);
    PairManifest manifest;
    manifest.records.push_back({good.string(), good.string(), std::nullopt, std::nullopt, ""});
    manifest.records.push_back({(dir / "missing.png").string(), good.string(),
                                std::nullopt, std::nullopt, ""});
    EvalSummary s = evaluate_set(manifest, [](const Image& img) { return img; });
    CHECK(s.ok_count == 1);
    CHECK(s.failed_count == 1);
    CHECK(s.rows[1].status.rfind("failed", 0) == 0);
}

TEST_CASE("two dehazers over the same manifest see the same pairs") {
    fs::path dir = fs::temp_directory_path() / "hazeclear_metrics_tests3";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::mt19937 rng(149);
    PairManifest manifest;
    for (int i = 0; i < 3; ++i) {
        fs::path h = dir / ("h" + std::to_string(i) + ".png");
        fs::path c = dir / ("c" + std::to_string(i) + ".png");
        save_image(oracle::random_image(16, 16, rng), h);
        save_image(oracle::random_image(16, 16, rng), c);
        manifest.records.push_back({h.string(), c.string(), std::nullopt, std::nullopt, ""});
    }
    EvalSummary s1 = evaluate_set(manifest, [](const Image& img) { return img; });
    EvalSummary s2 = evaluate_set(manifest, [](const Image& img) {
        Image dark = img;
        for (int c = 0; c < 3; ++c)
            for (float& v : dark.plane(c)) v *= 0.5f;
        return dark;
    });
    REQUIRE(s1.rows.size() == s2.rows.size());
    for (std::size_t i = 0; i < s1.rows.size(); ++i) {
        CHECK(s1.rows[i].hazy_path == s2.rows[i].hazy_path);
        CHECK(s1.rows[i].clean_path == s2.rows[i].clean_path);
    }
}
