#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "hazeclear/dataset.hpp"
#include "hazeclear/synth.hpp"
#include "oracles.hpp"

using namespace hazeclear;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "hazeclear_dataset_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void touch_png(const fs::path& p) {
    std::mt19937 rng(std::hash<std::string>{}(p.string()) & 0xffffffffu);
    save_image(oracle::random_image(4, 4, rng), p);
}

}  // namespace

TEST_CASE("scan_pairs stem rule with parameter suffix") {
    fs::path hazy = fresh_dir("hazy_a");
    fs::path clean = fresh_dir("clean_a");
    touch_png(clean / "0001.png");
    touch_png(hazy / "0001_0.9_1.2.png");
    touch_png(hazy / "x.png");  // no clean partner

    int skipped = 0;
    PairManifest m = scan_pairs(hazy, clean, "auto", &skipped);
    CHECK(m.size() == 1);
    CHECK(skipped == 1);
    const auto& r = m.records[0];
    CHECK(fs::path(r.clean_path).filename() == "0001.png");
    REQUIRE(r.beta.has_value());
    CHECK(*r.beta == doctest::Approx(1.2));
    REQUIRE(r.airlight.has_value());
    CHECK(r.airlight->mean() == doctest::Approx(0.9f));
}

TEST_CASE("scan_pairs errors when nothing matches") {
    fs::path hazy = fresh_dir("hazy_b");
    fs::path clean = fresh_dir("clean_b");
    touch_png(hazy / "only.png");
    touch_png(clean / "other.png");
    CHECK_THROWS_AS(scan_pairs(hazy, clean, "exact"), Error);
}

TEST_CASE("scan_pairs round trips a synth_set directory") {
    fs::path clean = fresh_dir("clean_c");
    std::mt19937 rng(9);
    save_image(oracle::random_image(12, 10, rng), clean / "s1.png");
    save_image(oracle::random_image(12, 10, rng), clean / "s2.png");
    fs::path out = fresh_dir("hazy_c");
    PairManifest written = synth_set(clean, out, {0.5, 1.5}, {{0.8f, 0.8f, 0.8f}},
                                     {DepthModel::Kind::constant, 1.0, 0.0}, 0);
    PairManifest scanned = scan_pairs(out, clean);
    REQUIRE(scanned.size() == written.size());
    for (std::size_t i = 0; i < scanned.size(); ++i) {
        CHECK(scanned.records[i].hazy_path == written.records[i].hazy_path);
        CHECK(scanned.records[i].clean_path == written.records[i].clean_path);
        CHECK(*scanned.records[i].beta == doctest::Approx(*written.records[i].beta));
    }
}

TEST_CASE("manifest file round trip") {
    PairManifest m;
    m.records.push_back({"h1.png", "c1.png", 1.25, Rgb{0.8f, 0.85f, 0.9f}, "radial"});
    m.records.push_back({"h2.png", "c2.png", std::nullopt, std::nullopt, ""});
    fs::path p = fresh_dir("manifest") / "m.tsv";
    write_manifest(m, p);
    PairManifest back = read_manifest(p);
    REQUIRE(back.size() == 2);
    CHECK(back.records[0].hazy_path == "h1.png");
    CHECK(*back.records[0].beta == doctest::Approx(1.25));
    CHECK(back.records[0].airlight->g == doctest::Approx(0.85f));
    CHECK(back.records[0].depth_kind == "radial");
    CHECK(!back.records[1].beta.has_value());
    CHECK(!back.records[1].airlight.has_value());
}

TEST_CASE("split: scene-level partition") {
    PairManifest m;
    for (int s = 0; s < 10; ++s)
        for (int v = 0; v < 3; ++v) {
            std::string stem = "scene" + std::to_string(s);
            m.records.push_back({stem + "_0.9_" + std::to_string(v) + ".png",
                                 stem + ".png", double(v), std::nullopt, ""});
        }
    auto [train, test] = split(m, 0.8, 123);
    CHECK(train.size() + test.size() == m.size());
    CHECK(train.size() == 24);  // 8 scenes x 3 variants
    CHECK(test.size() == 6);

    // deterministic
    auto [train2, test2] = split(m, 0.8, 123);
    REQUIRE(train2.size() == train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        CHECK(train2.records[i].hazy_path == train.records[i].hazy_path);

    // scene disjointness for several seeds
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        auto [tr, te] = split(m, 0.7, seed);
        std::set<std::string> tr_scenes, te_scenes;
        for (const auto& r : tr.records)
            tr_scenes.insert(fs::path(r.clean_path).stem().string());
        for (const auto& r : te.records)
            te_scenes.insert(fs::path(r.clean_path).stem().string());
        for (const auto& s : tr_scenes) CHECK(te_scenes.count(s) == 0);
        CHECK(tr.size() + te.size() == m.size());
    }
}

TEST_CASE("split rejects degenerate inputs") {
    PairManifest m;
    m.records.push_back({"a_1.png", "a.png", std::nullopt, std::nullopt, ""});
    CHECK_THROWS_AS(split(m, 0.5, 0), Error);  // single scene
    m.records.push_back({"b_1.png", "b.png", std::nullopt, std::nullopt, ""});
    CHECK_THROWS_AS(split(m, 0.0, 0), Error);
    CHECK_THROWS_AS(split(m, 1.0, 0), Error);
}
