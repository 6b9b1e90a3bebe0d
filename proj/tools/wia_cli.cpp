// Command-line front end. Talks to the toolkit exclusively through the C
// API; the vendored CLI11/json headers are used only for flag parsing and
// config-file merging. Exit codes: 0 ok, 1 unknown, 2 config, 3 data,
// 4 numeric, 5 shape.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wia_ld2nd.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

int fail(wld_status st) {
    std::cerr << "error: " << wld_last_error() << "\n";
    return static_cast<int>(st);
}

int fail_config(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitConfig;
}

// Dotted-path override into the config JSON; the value is parsed as JSON
// when possible, otherwise kept as a bare string. A leading "trainer." is
// an accepted alias for the config root.
bool apply_override(json& j, const std::string& spec, std::string& err) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        err = "override '" + spec + "' is not of the form key=value";
        return false;
    }
    std::string key = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    if (key.rfind("trainer.", 0) == 0) key = key.substr(8);
    json* cur = &j;
    size_t start = 0;
    while (true) {
        const size_t dot = key.find('.', start);
        const std::string part =
            key.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) {
            err = "override key '" + key + "' has an empty path segment";
            return false;
        }
        if (dot == std::string::npos) {
            json parsed;
            try {
                parsed = json::parse(value);
            } catch (const json::exception&) {
                parsed = value;
            }
            (*cur)[part] = parsed;
            return true;
        }
        if (!cur->contains(part) || !(*cur)[part].is_object()) (*cur)[part] = json::object();
        cur = &(*cur)[part];
        start = dot + 1;
    }
}

struct Closer {
    wld_image* img = nullptr;
    ~Closer() { wld_image_free(img); }
};

int cmd_train(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& sets) {
    std::ifstream f(config_path);
    if (!f) return fail_config("cannot open config file: " + config_path);
    json cfg;
    try {
        f >> cfg;
    } catch (const json::exception& e) {
        return fail_config("config parse failure in " + config_path + ": " + e.what());
    }
    for (const auto& s : sets) {
        std::string err;
        if (!apply_override(cfg, s, err)) return fail_config(err);
    }
    const std::string merged = cfg.dump();
    if (auto st = wld_train(merged.c_str(), out_dir.c_str()); st != WLD_OK) return fail(st);
    std::cout << "training complete; artifacts in " << out_dir << " (final.ckpt, loss.log, "
              << "resolved_config.json)\n";
    return 0;
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string ext = e.path().extension().string();
        if (ext == ".wim" || ext == ".pgm") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_denoise(const std::string& ckpt, const std::string& in_path, const std::string& out_dir,
                bool pad) {
    std::error_code ec;
    if (!fs::exists(in_path, ec)) {
        std::cerr << "error: input path '" << in_path << "' does not exist\n";
        return kExitData;
    }
    std::vector<fs::path> inputs;
    if (fs::is_directory(in_path)) {
        inputs = list_images(in_path);
    } else {
        inputs.push_back(in_path);
    }
    if (inputs.empty()) {
        std::cout << "0 images\n";
        return 0;
    }

    wld_model* model = nullptr;
    if (auto st = wld_model_load(ckpt.c_str(), &model); st != WLD_OK) return fail(st);
    fs::create_directories(out_dir, ec);

    int written = 0;
    for (const auto& p : inputs) {
        Closer src, dst;
        if (auto st = wld_image_load(p.string().c_str(), &src.img); st != WLD_OK) {
            wld_model_free(model);
            return fail(st);
        }
        if (auto st = wld_denoise(model, src.img, pad ? 1 : 0, &dst.img); st != WLD_OK) {
            wld_model_free(model);
            return fail(st);
        }
        const fs::path out = fs::path(out_dir) / (std::string(wld_image_id(dst.img)) + ".wim");
        if (auto st = wld_image_save(dst.img, out.string().c_str()); st != WLD_OK) {
            wld_model_free(model);
            return fail(st);
        }
        ++written;
    }
    wld_model_free(model);
    std::cout << written << " image" << (written == 1 ? "" : "s") << " -> " << out_dir << "\n";
    return 0;
}

int cmd_evaluate(const std::string& ref_dir, const std::string& test_dir,
                 const std::string& out_path, double peak, int nps_patch,
                 const std::string& suffix) {
    double mean_psnr = 0.0, mean_ssim = 0.0;
    if (auto st = wld_evaluate_dirs(ref_dir.c_str(), test_dir.c_str(), out_path.c_str(), peak,
                                    nps_patch, suffix.c_str(), &mean_psnr, &mean_ssim);
        st != WLD_OK) {
        return fail(st);
    }
    std::printf("mean PSNR %.4f dB, mean SSIM(x100) %.4f; report: %s\n", mean_psnr,
                100.0 * mean_ssim, out_path.c_str());
    return 0;
}

int cmd_corrupt(const std::string& in_path, const std::string& out_path, double sigma[4],
                uint64_t seed, uint64_t draw_index) {
    if (auto st = wld_corrupt_file(in_path.c_str(), out_path.c_str(), sigma, seed, draw_index);
        st != WLD_OK) {
        return fail(st);
    }
    std::cout << "wrote " << out_path << " and " << out_path << ".corrupt.json\n";
    return 0;
}

int cmd_analyze(const std::string& a_path, const std::string& b_path,
                const std::string& out_path) {
    double ratio = 0.0;
    if (auto st = wld_analyze_files(a_path.c_str(), b_path.c_str(), out_path.c_str(), &ratio);
        st != WLD_OK) {
        return fail(st);
    }
    std::printf("high/low frequency MSE ratio %.6g; report: %s\n", ratio, out_path.c_str());
    return 0;
}

int cmd_phantom(const std::string& out_dir, int n, int size, uint64_t seed, double dose) {
    if (auto st = wld_phantom_dataset(out_dir.c_str(), n, size, seed, dose); st != WLD_OK) {
        return fail(st);
    }
    std::cout << n << " phantom" << (n == 1 ? "" : "s")
              << (dose > 0.0 ? " with paired low-dose simulations" : "") << " -> " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-supervised denoising toolkit: wavelet-domain corruption, "
                 "frequency-aware feature loss, training, inference and evaluation."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wld_version()));

    // train
    std::string t_config, t_out;
    std::vector<std::string> t_sets;
    auto* train = app.add_subcommand("train", "Train a denoiser from a JSON config");
    train->add_option("--config", t_config, "JSON config file")->required();
    train->add_option("--out", t_out, "Output directory for checkpoints/logs")
        ->envname("WIA_OUT")
        ->required();
    train->add_option("--set", t_sets,
                      "Override a config key, e.g. --set lambda_fam=0 or --set mode=baseline "
                      "(dotted paths reach nested sections)");

    // denoise
    std::string d_ckpt, d_in, d_out;
    bool d_pad = false;
    auto* denoise = app.add_subcommand("denoise", "Run a trained model over a file or directory");
    denoise->add_option("--ckpt", d_ckpt, "Checkpoint file")->required();
    denoise->add_option("--in", d_in, "Input image file (.wim/.pgm) or directory")->required();
    denoise->add_option("--out", d_out, "Output directory")->envname("WIA_OUT")->required();
    denoise->add_flag("--pad", d_pad,
                      "Reflect-pad inputs to the backbone stride instead of rejecting them");

    // evaluate
    std::string e_ref, e_test, e_out, e_suffix;
    double e_peak = 0.0;
    int e_nps = 32;
    auto* evaluate = app.add_subcommand("evaluate", "PSNR/SSIM/NPS/subband report for paired dirs");
    evaluate->add_option("--ref", e_ref, "Reference image directory")->required();
    evaluate->add_option("--test", e_test, "Test image directory")->required();
    evaluate->add_option("--out", e_out, "Report JSON path")->envname("WIA_OUT")->required();
    evaluate->add_option("--peak", e_peak, "PSNR/SSIM peak; <= 0 uses the reference range span")
        ->capture_default_str();
    evaluate->add_option("--nps-patch", e_nps, "NPS patch size (must divide image dims)")
        ->capture_default_str();
    evaluate->add_option("--suffix", e_suffix, "Test id suffix (test id == ref id + suffix)");

    // corrupt
    std::string c_in, c_out, c_preset;
    double c_ll = 0.0, c_lh = 0.0, c_hl = 0.0, c_hh = 0.0;
    uint64_t c_seed = 0, c_draw = 0;
    auto* corrupt = app.add_subcommand("corrupt", "Per-subband Gaussian corruption preview");
    corrupt->add_option("--in", c_in, "Input image")->required();
    corrupt->add_option("--out", c_out, "Output image")->required();
    corrupt->add_option("--preset", c_preset, "Sigma preset: mayo2016 or mayo2020");
    auto* o_ll = corrupt->add_option("--sigma-ll", c_ll, "LL sigma")->capture_default_str();
    auto* o_lh = corrupt->add_option("--sigma-lh", c_lh, "LH sigma")->capture_default_str();
    auto* o_hl = corrupt->add_option("--sigma-hl", c_hl, "HL sigma")->capture_default_str();
    auto* o_hh = corrupt->add_option("--sigma-hh", c_hh, "HH sigma")->capture_default_str();
    corrupt->add_option("--seed", c_seed, "Noise stream seed")->capture_default_str();
    corrupt->add_option("--draw-index", c_draw, "Draw index within the stream")
        ->capture_default_str();

    // analyze
    std::string a_a, a_b, a_out;
    auto* analyze = app.add_subcommand("analyze", "Subband difference map for two images");
    analyze->add_option("--a", a_a, "First image")->required();
    analyze->add_option("--b", a_b, "Second image")->required();
    analyze->add_option("--out", a_out, "Report JSON path")->envname("WIA_OUT")->required();

    // phantom
    std::string p_out;
    int p_n = 0, p_size = 64;
    uint64_t p_seed = 0;
    double p_dose = 0.0;
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic phantom dataset");
    phantom->add_option("--n", p_n, "Number of phantoms")->required();
    phantom->add_option("--size", p_size, "Image side length (even)")->capture_default_str();
    phantom->add_option("--seed", p_seed, "Generator seed")->capture_default_str();
    phantom->add_option("--out", p_out, "Output directory")->envname("WIA_OUT")->required();
    phantom->add_option("--simulate-ldct", p_dose,
                        "Also write paired low-dose simulations at this dose factor (0, 1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (train->parsed()) return cmd_train(t_config, t_out, t_sets);
    if (denoise->parsed()) return cmd_denoise(d_ckpt, d_in, d_out, d_pad);
    if (evaluate->parsed()) return cmd_evaluate(e_ref, e_test, e_out, e_peak, e_nps, e_suffix);
    if (corrupt->parsed()) {
        double sigma[4] = {c_ll, c_lh, c_hl, c_hh};
        if (!c_preset.empty()) {
            double preset[4];
            if (auto st = wld_preset_sigmas(c_preset.c_str(), preset); st != WLD_OK) {
                return fail(st);
            }
            for (int i = 0; i < 4; ++i) sigma[i] = preset[i];
            // explicit flags still win over the preset
            if (o_ll->count()) sigma[0] = c_ll;
            if (o_lh->count()) sigma[1] = c_lh;
            if (o_hl->count()) sigma[2] = c_hl;
            if (o_hh->count()) sigma[3] = c_hh;
        }
        return cmd_corrupt(c_in, c_out, sigma, c_seed, c_draw);
    }
    if (analyze->parsed()) return cmd_analyze(a_a, a_b, a_out);
    if (phantom->parsed()) return cmd_phantom(p_out, p_n, p_size, p_seed, p_dose);
    return kExitConfig;
}
