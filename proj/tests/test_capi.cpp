#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "wia_ld2nd.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& stem)
        : path(fs::path("/tmp") / ("wia_capi_" + std::to_string(::getpid()) + "_" + stem)) {
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

struct ImageHandle {
    wld_image* p = nullptr;
    ~ImageHandle() { wld_image_free(p); }
};

ImageHandle make_ramp(int h, int w, double rmax = 4096.0, const char* id = "ramp") {
    std::vector<double> data(static_cast<size_t>(h) * w);
    for (size_t i = 0; i < data.size(); ++i) data[i] = std::fmod(17.0 * i, rmax);
    ImageHandle img;
    REQUIRE(wld_image_create(h, w, data.data(), 0.0, rmax, id, &img.p) == WLD_OK);
    return img;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    nlohmann::json j;
    f >> j;
    return j;
}

}  // namespace

TEST_CASE("version and error-message plumbing") {
    const char* v = wld_version();
    REQUIRE(v != nullptr);
    CHECK(std::strlen(v) > 0);

    wld_image* out = nullptr;
    CHECK(wld_image_load("/tmp/wia_capi_definitely_missing.wim", &out) == WLD_ERR_DATA);
    CHECK(out == nullptr);
    CHECK(std::strlen(wld_last_error()) > 0);

    // A subsequent success clears the message.
    ImageHandle ok = make_ramp(8, 8);
    CHECK(std::strlen(wld_last_error()) == 0);
}

TEST_CASE("image handles: create, inspect, save, load") {
    const std::vector<double> data{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    ImageHandle img;
    REQUIRE(wld_image_create(2, 3, data.data(), 0.0, 10.0, "abc", &img.p) == WLD_OK);

    int h = 0, w = 0;
    REQUIRE(wld_image_dims(img.p, &h, &w) == WLD_OK);
    CHECK(h == 2);
    CHECK(w == 3);
    double rmin = -1.0, rmax = -1.0;
    REQUIRE(wld_image_range(img.p, &rmin, &rmax) == WLD_OK);
    CHECK(rmin == 0.0);
    CHECK(rmax == 10.0);
    CHECK(std::string(wld_image_id(img.p)) == "abc");
    std::vector<double> buf(6, -1.0);
    REQUIRE(wld_image_data(img.p, buf.data()) == WLD_OK);
    CHECK(buf == data);

    TempDir dir("img");
    const std::string path = (dir.path / "abc.wim").string();
    REQUIRE(wld_image_save(img.p, path.c_str()) == WLD_OK);
    ImageHandle back;
    REQUIRE(wld_image_load(path.c_str(), &back.p) == WLD_OK);
    std::vector<double> buf2(6, -1.0);
    REQUIRE(wld_image_data(back.p, buf2.data()) == WLD_OK);
    CHECK(buf2 == data);
    CHECK(std::string(wld_image_id(back.p)) == "abc");

    CHECK(wld_image_create(0, 3, data.data(), 0.0, 1.0, "x", &img.p) != WLD_OK);
    ImageHandle zeros;
    REQUIRE(wld_image_create(2, 3, nullptr, 0.0, 1.0, "z", &zeros.p) == WLD_OK);
    std::vector<double> zbuf(6, -1.0);
    REQUIRE(wld_image_data(zeros.p, zbuf.data()) == WLD_OK);
    CHECK(zbuf == std::vector<double>(6, 0.0));
    wld_image* null_out = nullptr;
    CHECK(wld_image_create(2, 3, data.data(), 1.0, 1.0, "x", &null_out) == WLD_ERR_CONFIG);
    CHECK(null_out == nullptr);
    CHECK(wld_image_dims(nullptr, &h, &w) != WLD_OK);
}

TEST_CASE("presets and corruption through the ABI") {
    double s2016[4] = {0, 0, 0, 0};
    REQUIRE(wld_preset_sigmas("mayo2016", s2016) == WLD_OK);
    CHECK(s2016[0] == 100.0);
    CHECK(s2016[1] == 200.0);
    CHECK(s2016[2] == 200.0);
    CHECK(s2016[3] == 150.0);
    double s2020[4];
    REQUIRE(wld_preset_sigmas("mayo2020", s2020) == WLD_OK);
    CHECK(s2020[0] == 25.0);
    CHECK(s2020[1] == 50.0);
    CHECK(s2020[2] == 50.0);
    CHECK(s2020[3] == 50.0);
    CHECK(wld_preset_sigmas("mayo1999", s2020) == WLD_ERR_CONFIG);

    ImageHandle img = make_ramp(16, 16);
    ImageHandle c1, c2, c3;
    REQUIRE(wld_corrupt(img.p, s2016, 11, 0, &c1.p) == WLD_OK);
    REQUIRE(wld_corrupt(img.p, s2016, 11, 0, &c2.p) == WLD_OK);
    REQUIRE(wld_corrupt(img.p, s2016, 11, 1, &c3.p) == WLD_OK);
    std::vector<double> b1(256), b2(256), b3(256);
    wld_image_data(c1.p, b1.data());
    wld_image_data(c2.p, b2.data());
    wld_image_data(c3.p, b3.data());
    CHECK(b1 == b2);
    CHECK(b1 != b3);

    const double zeros[4] = {0, 0, 0, 0};
    ImageHandle same;
    REQUIRE(wld_corrupt(img.p, zeros, 11, 0, &same.p) == WLD_OK);
    std::vector<double> bs(256), orig(256);
    wld_image_data(same.p, bs.data());
    wld_image_data(img.p, orig.data());
    for (size_t i = 0; i < bs.size(); ++i) CHECK(bs[i] == doctest::Approx(orig[i]).epsilon(1e-12));

    const double bad[4] = {-1, 0, 0, 0};
    wld_image* out = nullptr;
    CHECK(wld_corrupt(img.p, bad, 11, 0, &out) == WLD_ERR_CONFIG);
}

TEST_CASE("metrics through the ABI, including shape failures") {
    ImageHandle a = make_ramp(32, 32);
    double psnr = 0.0, ssim = 0.0;
    REQUIRE(wld_psnr(a.p, a.p, 4096.0, &psnr) == WLD_OK);
    REQUIRE(wld_ssim(a.p, a.p, 4096.0, &ssim) == WLD_OK);
    CHECK(psnr == 100.0);  // identical images hit the cap
    CHECK(ssim == doctest::Approx(1.0).epsilon(1e-12));
    double sb[4];
    REQUIRE(wld_subband_difference(a.p, a.p, sb) == WLD_OK);
    for (double v : sb) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));

    ImageHandle b = make_ramp(16, 32);
    CHECK(wld_psnr(a.p, b.p, 4096.0, &psnr) == WLD_ERR_SHAPE);
    CHECK(wld_ssim(a.p, b.p, 4096.0, &ssim) == WLD_ERR_SHAPE);
    CHECK(wld_subband_difference(a.p, b.p, sb) == WLD_ERR_SHAPE);
}

TEST_CASE("phantom generation, low-dose simulation, dataset layout") {
    ImageHandle ph1, ph2, ld;
    REQUIRE(wld_generate_phantom(32, 5, 2, &ph1.p) == WLD_OK);
    REQUIRE(wld_generate_phantom(32, 5, 2, &ph2.p) == WLD_OK);
    std::vector<double> b1(1024), b2(1024);
    wld_image_data(ph1.p, b1.data());
    wld_image_data(ph2.p, b2.data());
    CHECK(b1 == b2);
    REQUIRE(wld_simulate_ldct(ph1.p, 0.25, 3, &ld.p) == WLD_OK);
    std::vector<double> bl(1024);
    wld_image_data(ld.p, bl.data());
    CHECK(b1 != bl);
    wld_image* out = nullptr;
    CHECK(wld_simulate_ldct(ph1.p, 0.0, 3, &out) == WLD_ERR_CONFIG);
    CHECK(wld_generate_phantom(31, 5, 0, &out) == WLD_ERR_CONFIG);

    TempDir dir("dataset");
    REQUIRE(wld_phantom_dataset(dir.path.string().c_str(), 3, 32, 7, 0.25) == WLD_OK);
    CHECK(fs::exists(dir.path / "p0000.wim"));
    CHECK(fs::exists(dir.path / "p0002.wim"));
    CHECK(fs::exists(dir.path / "p0000_ld.wim"));
    const auto manifest = read_json(dir.path / "manifest.json");
    REQUIRE(manifest.contains("items"));
    CHECK(manifest.at("items").size() == 6);
    int trains = 0, tests = 0;
    for (const auto& item : manifest.at("items")) {
        if (item.at("split") == "train") ++trains;
        if (item.at("split") == "test") ++tests;
    }
    CHECK(trains == 3);  // clean phantoms feed training
    CHECK(tests == 3);   // low-dose pairs are evaluation data

    // Clean-only dataset: no _ld files, all split train.
    TempDir dir2("clean");
    REQUIRE(wld_phantom_dataset(dir2.path.string().c_str(), 2, 32, 7, 0.0) == WLD_OK);
    CHECK(fs::exists(dir2.path / "p0001.wim"));
    CHECK_FALSE(fs::exists(dir2.path / "p0001_ld.wim"));
    CHECK(read_json(dir2.path / "manifest.json").at("items").size() == 2);
}

TEST_CASE("corrupt_file and analyze_files write their JSON artifacts") {
    TempDir dir("files");
    ImageHandle img = make_ramp(32, 32);
    const std::string in = (dir.path / "in.wim").string();
    const std::string outp = (dir.path / "out.wim").string();
    REQUIRE(wld_image_save(img.p, in.c_str()) == WLD_OK);

    double sigma[4] = {25.0, 50.0, 50.0, 50.0};
    REQUIRE(wld_corrupt_file(in.c_str(), outp.c_str(), sigma, 9, 0) == WLD_OK);
    CHECK(fs::exists(outp));
    const auto side = read_json(outp + ".corrupt.json");
    CHECK(side.contains("sigma"));
    CHECK(side.at("seed") == 9);
    CHECK(side.at("predicted_residual_std").get<double>() ==
          doctest::Approx(std::sqrt(25.0 * 25 + 3 * 50.0 * 50) / 2.0));
    CHECK(side.at("empirical_residual_std").get<double>() > 0.0);

    double ratio = -1.0;
    const std::string rep = (dir.path / "analysis.json").string();
    REQUIRE(wld_analyze_files(in.c_str(), outp.c_str(), rep.c_str(), &ratio) == WLD_OK);
    CHECK(ratio > 0.0);
    const auto rj = read_json(rep);
    CHECK(rj.contains("subband_mse"));
    CHECK(rj.contains("hf_ll_ratio"));
}

TEST_CASE("train / load / denoise / evaluate across the ABI") {
    TempDir data_dir("traindata");
    REQUIRE(wld_phantom_dataset(data_dir.path.string().c_str(), 4, 32, 21, 0.25) == WLD_OK);

    nlohmann::json cfg = {
        {"mode", "wia_only"},
        {"seed", 5},
        {"epochs", 1},
        {"batch_size", 2},
        {"crop", 16},
        {"lr", 1e-3},
        {"data_dir", data_dir.path.string()},
        {"noise", {{"sigma_ll", 25.0}, {"sigma_lh", 50.0}, {"sigma_hl", 50.0}, {"sigma_hh", 50.0}}},
        {"backbone", {{"base_channels", 4}, {"n_res_blocks", 1}, {"n_downsample", 1}}},
        {"encoder", {{"stage_channels", {4, 6, 8}}, {"patch_grid", 2}}},
    };
    TempDir run("run");
    REQUIRE(wld_train(cfg.dump().c_str(), run.path.string().c_str()) == WLD_OK);
    CHECK(fs::exists(run.path / "loss.log"));
    CHECK(fs::exists(run.path / "resolved_config.json"));
    REQUIRE(fs::exists(run.path / "final.ckpt"));

    CHECK(wld_train("{not json", run.path.string().c_str()) == WLD_ERR_CONFIG);
    nlohmann::json no_data = cfg;
    no_data.erase("data_dir");
    CHECK(wld_train(no_data.dump().c_str(), run.path.string().c_str()) == WLD_ERR_CONFIG);

    wld_model* model = nullptr;
    REQUIRE(wld_model_load((run.path / "final.ckpt").string().c_str(), &model) == WLD_OK);
    REQUIRE(model != nullptr);

    ImageHandle probe;
    REQUIRE(wld_generate_phantom(32, 33, 0, &probe.p) == WLD_OK);
    ImageHandle den;
    REQUIRE(wld_denoise(model, probe.p, 0, &den.p) == WLD_OK);
    int h = 0, w = 0;
    wld_image_dims(den.p, &h, &w);
    CHECK(h == 32);
    CHECK(w == 32);

    // Odd dims: strict mode refuses, padded mode restores the input shape.
    std::vector<double> odd_data(31 * 30);
    for (size_t i = 0; i < odd_data.size(); ++i) odd_data[i] = static_cast<double>(i % 256);
    ImageHandle odd;
    REQUIRE(wld_image_create(31, 30, odd_data.data(), 0.0, 4096.0, "odd", &odd.p) == WLD_OK);
    wld_image* bad = nullptr;
    CHECK(wld_denoise(model, odd.p, 0, &bad) == WLD_ERR_SHAPE);
    ImageHandle padded;
    REQUIRE(wld_denoise(model, odd.p, 1, &padded.p) == WLD_OK);
    wld_image_dims(padded.p, &h, &w);
    CHECK(h == 31);
    CHECK(w == 30);
    wld_model_free(model);

    // Self-evaluation of the dataset: clean vs low-dose via the suffix rule.
    TempDir eval("eval");
    const std::string report = (eval.path / "report.json").string();
    double mean_psnr = 0.0, mean_ssim = 0.0;
    REQUIRE(wld_evaluate_dirs(data_dir.path.string().c_str(), data_dir.path.string().c_str(),
                              report.c_str(), 0.0, 16, "_ld", &mean_psnr, &mean_ssim) == WLD_OK);
    CHECK(mean_psnr > 10.0);
    CHECK(mean_psnr < 100.0);
    CHECK(mean_ssim > 0.0);
    CHECK(mean_ssim < 1.0);
    const auto rj = read_json(report);
    CHECK(rj.at("images").size() == 4);
    CHECK(rj.at("summary").at("count") == 4);

    // ref == test with an empty suffix: every pair is identical.
    REQUIRE(wld_evaluate_dirs(data_dir.path.string().c_str(), data_dir.path.string().c_str(),
                              report.c_str(), 4096.0, 16, "", &mean_psnr, &mean_ssim) == WLD_OK);
    CHECK(mean_psnr == 100.0);
    CHECK(mean_ssim == doctest::Approx(1.0).epsilon(1e-12));

    // A suffix that matches nothing is a data error.
    CHECK(wld_evaluate_dirs(data_dir.path.string().c_str(), data_dir.path.string().c_str(),
                            report.c_str(), 0.0, 16, "_nope", &mean_psnr,
                            &mean_ssim) == WLD_ERR_DATA);
}
