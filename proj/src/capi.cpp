// C API over the C++ core. Every entry point catches wia::Error (mapped to
// its status class) and anything else (WLD_ERR_UNKNOWN); the message lands
// in a thread-local buffer read by wld_last_error().
#include "wia_ld2nd.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "wia/error.hpp"
#include "wia/image.hpp"
#include "wia/image_io.hpp"
#include "wia/metrics.hpp"
#include "wia/phantom.hpp"
#include "wia/report.hpp"
#include "wia/rng.hpp"
#include "wia/trainer.hpp"
#include "wia/wia.hpp"

struct wld_image {
    wia::Image img;
};

struct wld_model {
    std::unique_ptr<wia::Trainer> trainer;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
wld_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return WLD_OK;
    } catch (const wia::Error& e) {
        g_last_error = e.what();
        return static_cast<wld_status>(e.status());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return WLD_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return WLD_ERR_UNKNOWN;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw wia::Error(wia::ErrorKind::InvalidArgument, what);
}

wia::NoiseConfig noise_from_array(const double sigma[4], std::uint64_t seed) {
    require(sigma != nullptr, "sigma[4] must not be NULL");
    wia::NoiseConfig cfg;
    cfg.sigma_ll = sigma[0];
    cfg.sigma_lh = sigma[1];
    cfg.sigma_hl = sigma[2];
    cfg.sigma_hh = sigma[3];
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

}  // namespace

extern "C" {

const char* wld_version(void) { return "1.0.0"; }

const char* wld_last_error(void) { return g_last_error.c_str(); }

wld_status wld_image_create(int height, int width, const double* data, double range_min,
                            double range_max, const char* id, wld_image** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        if (height <= 0 || width <= 0) {
            throw wia::Error(wia::ErrorKind::ShapeError, "image dims must be positive");
        }
        if (!(range_max > range_min)) {
            throw wia::Error(wia::ErrorKind::DegenerateRange, "range_max must exceed range_min");
        }
        auto holder = std::make_unique<wld_image>();
        holder->img = wia::Image(height, width, range_min, range_max, id ? id : "");
        if (data != nullptr) {
            std::copy(data, data + holder->img.size(), holder->img.data.begin());
        }
        *out = holder.release();
    });
}

wld_status wld_image_load(const char* path, wld_image** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path/out must not be NULL");
        auto holder = std::make_unique<wld_image>();
        holder->img = wia::io::load_image(path);
        *out = holder.release();
    });
}

wld_status wld_image_save(const wld_image* img, const char* path) {
    return guarded([&] {
        require(img != nullptr && path != nullptr, "img/path must not be NULL");
        wia::io::save_image(img->img, path);
    });
}

void wld_image_free(wld_image* img) { delete img; }

wld_status wld_image_dims(const wld_image* img, int* height, int* width) {
    return guarded([&] {
        require(img != nullptr, "img must not be NULL");
        if (height) *height = img->img.height;
        if (width) *width = img->img.width;
    });
}

wld_status wld_image_range(const wld_image* img, double* range_min, double* range_max) {
    return guarded([&] {
        require(img != nullptr, "img must not be NULL");
        if (range_min) *range_min = img->img.range_min;
        if (range_max) *range_max = img->img.range_max;
    });
}

wld_status wld_image_data(const wld_image* img, double* buffer) {
    return guarded([&] {
        require(img != nullptr && buffer != nullptr, "img/buffer must not be NULL");
        std::copy(img->img.data.begin(), img->img.data.end(), buffer);
    });
}

const char* wld_image_id(const wld_image* img) { return img ? img->img.id.c_str() : ""; }

wld_status wld_preset_sigmas(const char* name, double sigma[4]) {
    return guarded([&] {
        require(name != nullptr && sigma != nullptr, "name/sigma must not be NULL");
        wia::NoiseConfig cfg;
        const std::string s = name;
        if (s == "mayo2016") {
            cfg = wia::mayo2016_noise();
        } else if (s == "mayo2020") {
            cfg = wia::mayo2020_noise();
        } else {
            throw wia::Error(wia::ErrorKind::ConfigError, "unknown noise preset '" + s + "'");
        }
        sigma[0] = cfg.sigma_ll;
        sigma[1] = cfg.sigma_lh;
        sigma[2] = cfg.sigma_hl;
        sigma[3] = cfg.sigma_hh;
    });
}

wld_status wld_corrupt(const wld_image* img, const double sigma[4], uint64_t seed,
                       uint64_t draw_index, wld_image** out) {
    return guarded([&] {
        require(img != nullptr && out != nullptr, "img/out must not be NULL");
        const wia::NoiseConfig cfg = noise_from_array(sigma, seed);
        auto holder = std::make_unique<wld_image>();
        holder->img = wia::corrupt(img->img, cfg, draw_index);
        *out = holder.release();
    });
}

wld_status wld_corrupt_file(const char* in_path, const char* out_path, const double sigma[4],
                            uint64_t seed, uint64_t draw_index) {
    return guarded([&] {
        require(in_path != nullptr && out_path != nullptr, "paths must not be NULL");
        const wia::NoiseConfig cfg = noise_from_array(sigma, seed);
        const wia::Image src = wia::io::load_image(in_path);
        const wia::Image dst = wia::corrupt(src, cfg, draw_index);
        wia::io::save_image(dst, out_path);

        double acc = 0.0, mean = 0.0;
        for (size_t i = 0; i < src.size(); ++i) mean += dst.data[i] - src.data[i];
        mean /= static_cast<double>(src.size());
        for (size_t i = 0; i < src.size(); ++i) {
            const double d = dst.data[i] - src.data[i] - mean;
            acc += d * d;
        }
        const double empirical = std::sqrt(acc / static_cast<double>(src.size()));

        nlohmann::json j;
        j["input"] = in_path;
        j["sigma"] = {cfg.sigma_ll, cfg.sigma_lh, cfg.sigma_hl, cfg.sigma_hh};
        j["seed"] = seed;
        j["draw_index"] = draw_index;
        j["predicted_residual_std"] = cfg.pixel_residual_std();
        j["empirical_residual_std"] = empirical;
        const std::string warn = cfg.ordering_warning();
        if (!warn.empty()) j["warning"] = warn;
        std::string report = out_path;
        report += ".corrupt.json";
        std::ofstream f(report);
        if (!f) throw wia::Error(wia::ErrorKind::IoError, "cannot write '" + report + "'");
        f << j.dump(2) << "\n";
    });
}

wld_status wld_psnr(const wld_image* ref, const wld_image* test, double peak, double* out_db) {
    return guarded([&] {
        require(ref != nullptr && test != nullptr && out_db != nullptr,
                "ref/test/out must not be NULL");
        *out_db = wia::metrics::psnr(ref->img, test->img, peak);
    });
}

wld_status wld_ssim(const wld_image* ref, const wld_image* test, double peak, double* out) {
    return guarded([&] {
        require(ref != nullptr && test != nullptr && out != nullptr,
                "ref/test/out must not be NULL");
        *out = wia::metrics::ssim(ref->img, test->img, peak);
    });
}

wld_status wld_subband_difference(const wld_image* a, const wld_image* b, double out_mse[4]) {
    return guarded([&] {
        require(a != nullptr && b != nullptr && out_mse != nullptr,
                "a/b/out must not be NULL");
        const wia::metrics::SubbandMse s = wia::metrics::subband_difference(a->img, b->img);
        out_mse[0] = s.ll;
        out_mse[1] = s.lh;
        out_mse[2] = s.hl;
        out_mse[3] = s.hh;
    });
}

wld_status wld_analyze_files(const char* a_path, const char* b_path, const char* out_path,
                             double* hf_ll_ratio) {
    return guarded([&] {
        require(a_path != nullptr && b_path != nullptr, "paths must not be NULL");
        const wia::Image a = wia::io::load_image(a_path);
        const wia::Image b = wia::io::load_image(b_path);
        const wia::metrics::SubbandMse s = wia::metrics::subband_difference(a, b);
        const double ratio = s.ll > 0.0 ? s.high_sum() / s.ll
                                        : std::numeric_limits<double>::quiet_NaN();
        if (hf_ll_ratio) *hf_ll_ratio = ratio;
        if (out_path != nullptr && out_path[0] != '\0') {
            nlohmann::json j;
            j["a"] = a.id;
            j["b"] = b.id;
            j["subband_mse"] = {{"ll", s.ll}, {"lh", s.lh}, {"hl", s.hl}, {"hh", s.hh}};
            j["high_sum"] = s.high_sum();
            j["total"] = s.total();
            j["hf_ll_ratio"] = std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json();
            std::ofstream f(out_path);
            if (!f) {
                throw wia::Error(wia::ErrorKind::IoError,
                                 "cannot write '" + std::string(out_path) + "'");
            }
            f << j.dump(2) << "\n";
        }
    });
}

wld_status wld_generate_phantom(int size, uint64_t seed, uint64_t index, wld_image** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        wia::PhantomSpec spec;
        spec.size = size;
        spec.seed = seed;
        auto holder = std::make_unique<wld_image>();
        holder->img = wia::generate_phantom(spec, index);
        *out = holder.release();
    });
}

wld_status wld_simulate_ldct(const wld_image* img, double dose_factor, uint64_t seed,
                             wld_image** out) {
    return guarded([&] {
        require(img != nullptr && out != nullptr, "img/out must not be NULL");
        auto holder = std::make_unique<wld_image>();
        holder->img = wia::simulate_ldct(img->img, dose_factor, seed);
        *out = holder.release();
    });
}

wld_status wld_phantom_dataset(const char* out_dir, int n, int size, uint64_t seed,
                               double dose_factor) {
    return guarded([&] {
        require(out_dir != nullptr, "out_dir must not be NULL");
        if (n <= 0) throw wia::Error(wia::ErrorKind::ConfigError, "dataset size must be positive");
        std::filesystem::create_directories(out_dir);
        wia::PhantomSpec spec;
        spec.size = size;
        spec.seed = seed;
        std::vector<wia::io::ManifestItem> items;
        for (int i = 0; i < n; ++i) {
            char name[16];
            std::snprintf(name, sizeof(name), "p%04d", i);
            wia::Image clean = wia::generate_phantom(spec, static_cast<std::uint64_t>(i));
            clean.id = name;
            const std::string file = std::string(name) + ".wim";
            wia::io::save_image(clean, (std::filesystem::path(out_dir) / file).string());
            items.push_back({clean.id, file, "train"});
            if (dose_factor > 0.0) {
                // Per-image noise seed so paired simulations draw independent fields.
                const std::uint64_t ld_seed =
                    wia::CounterRng{seed, static_cast<std::uint64_t>(i), 0x6c646374ULL}.next_u64();
                wia::Image ld = wia::simulate_ldct(clean, dose_factor, ld_seed);
                ld.id = std::string(name) + "_ld";
                const std::string ld_file = ld.id + ".wim";
                wia::io::save_image(ld, (std::filesystem::path(out_dir) / ld_file).string());
                items.push_back({ld.id, ld_file, "test"});
            }
        }
        wia::io::write_manifest(out_dir, items);
    });
}

wld_status wld_train(const char* config_json, const char* out_dir) {
    return guarded([&] {
        require(config_json != nullptr && out_dir != nullptr,
                "config_json/out_dir must not be NULL");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::exception& e) {
            throw wia::Error(wia::ErrorKind::ConfigError,
                             std::string("config JSON parse failed: ") + e.what());
        }
        const wia::TrainConfig cfg = wia::TrainConfig::from_json(j);
        if (cfg.data_dir.empty()) {
            throw wia::Error(wia::ErrorKind::ConfigError, "config field 'data_dir' is required");
        }
        const wia::io::Dataset ds = wia::io::load_dataset(cfg.data_dir, "train");
        wia::Trainer trainer(cfg);
        trainer.fit(ds.items, out_dir);
    });
}

wld_status wld_model_load(const char* checkpoint_path, wld_model** out) {
    return guarded([&] {
        require(checkpoint_path != nullptr && out != nullptr, "path/out must not be NULL");
        auto holder = std::make_unique<wld_model>();
        holder->trainer = wia::Trainer::from_checkpoint(checkpoint_path);
        *out = holder.release();
    });
}

void wld_model_free(wld_model* model) { delete model; }

wld_status wld_denoise(wld_model* model, const wld_image* img, int pad_to_stride,
                       wld_image** out) {
    return guarded([&] {
        require(model != nullptr && img != nullptr && out != nullptr,
                "model/img/out must not be NULL");
        auto holder = std::make_unique<wld_image>();
        holder->img = pad_to_stride != 0 ? model->trainer->denoise_padded(img->img)
                                         : model->trainer->denoise(img->img);
        *out = holder.release();
    });
}

wld_status wld_evaluate_dirs(const char* ref_dir, const char* test_dir, const char* out_path,
                             double peak, int nps_patch, const char* test_suffix,
                             double* mean_psnr_db, double* mean_ssim) {
    return guarded([&] {
        require(ref_dir != nullptr && test_dir != nullptr && out_path != nullptr,
                "ref_dir/test_dir/out_path must not be NULL");
        const std::string suffix = test_suffix ? test_suffix : "";
        const wia::io::Dataset refs = wia::io::load_dataset(ref_dir);
        const wia::io::Dataset tests = wia::io::load_dataset(test_dir);
        if (refs.items.empty()) {
            throw wia::Error(wia::ErrorKind::FormatError,
                             "no images found in '" + std::string(ref_dir) + "'");
        }
        std::map<std::string, const wia::Image*> by_id;
        for (const auto& t : tests.items) by_id[t.id] = &t;

        const auto has_suffix = [&](const std::string& id) {
            return !suffix.empty() && id.size() >= suffix.size() &&
                   id.compare(id.size() - suffix.size(), suffix.size(), suffix) == 0;
        };

        double eff_peak = peak;
        std::vector<std::pair<const wia::Image*, const wia::Image*>> pairs;
        for (const auto& r : refs.items) {
            if (has_suffix(r.id)) continue;  // the pair target, not a reference
            const auto it = by_id.find(r.id + suffix);
            if (it == by_id.end()) {
                throw wia::Error(wia::ErrorKind::FormatError,
                                 "no test image with id '" + r.id + suffix + "'");
            }
            pairs.emplace_back(&r, it->second);
            if (peak <= 0.0) {
                const double span = r.span();
                if (eff_peak <= 0.0) {
                    eff_peak = span;
                } else if (std::abs(span - eff_peak) > 1e-9) {
                    throw wia::Error(wia::ErrorKind::ConfigError,
                                     "reference intensity spans differ; pass an explicit peak");
                }
            }
        }
        if (pairs.empty()) {
            throw wia::Error(wia::ErrorKind::FormatError, "no ref/test pairs matched");
        }
        if (suffix.empty() && tests.items.size() != pairs.size()) {
            throw wia::Error(wia::ErrorKind::FormatError,
                             "ref/test ids do not match 1:1 (" + std::to_string(pairs.size()) +
                                 " refs vs " + std::to_string(tests.items.size()) + " tests)");
        }

        std::vector<wia::metrics::MetricsReport> reports;
        reports.reserve(pairs.size());
        for (const auto& [r, t] : pairs) {
            reports.push_back(wia::evaluate_pair(*r, *t, eff_peak, nps_patch));
        }
        const wia::CorpusSummary summary = wia::summarize(reports, eff_peak, nps_patch);
        wia::write_report(out_path, reports, summary);
        if (mean_psnr_db) *mean_psnr_db = summary.mean_psnr_db;
        if (mean_ssim) *mean_ssim = summary.mean_ssim;
    });
}

}  // extern "C"
