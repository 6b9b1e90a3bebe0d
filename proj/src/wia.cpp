#include "wia/wia.hpp"

#include <cmath>

#include "wia/rng.hpp"
#include "wia/wavelet.hpp"

namespace wia {

namespace {

void check_sigma(double sigma, const char* name) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::InvalidSigma,
                    std::string(name) + " = " + std::to_string(sigma) + " (must be finite and >= 0)");
    }
}

// Stream ids for the per-subband noise; part of the on-disk reproducibility
// contract, do not reorder.
enum SubbandStream : std::uint64_t { kLL = 1, kLH = 2, kHL = 3, kHH = 4, kPixel = 5 };

void add_noise(std::vector<double>& plane, double sigma, std::uint64_t seed,
               std::uint64_t draw_index, std::uint64_t stream) {
    if (sigma == 0.0) return;
    CounterRng rng{seed, draw_index, stream};
    for (double& v : plane) {
        v += sigma * rng.next_gauss();
    }
}

}  // namespace

void NoiseConfig::validate() const {
    check_sigma(sigma_ll, "sigma_ll");
    check_sigma(sigma_lh, "sigma_lh");
    check_sigma(sigma_hl, "sigma_hl");
    check_sigma(sigma_hh, "sigma_hh");
}

std::string NoiseConfig::ordering_warning() const {
    if (sigma_lh >= sigma_ll && sigma_hl >= sigma_ll && sigma_hh >= sigma_ll) return {};
    return "high-frequency sigmas (" + std::to_string(sigma_lh) + ", " + std::to_string(sigma_hl) +
           ", " + std::to_string(sigma_hh) + ") are expected to be >= sigma_ll (" +
           std::to_string(sigma_ll) + ")";
}

double NoiseConfig::pixel_residual_std() const {
    return std::sqrt(sigma_ll * sigma_ll + sigma_lh * sigma_lh + sigma_hl * sigma_hl +
                     sigma_hh * sigma_hh) /
           2.0;
}

NoiseConfig mayo2016_noise() { return NoiseConfig{100.0, 200.0, 200.0, 150.0, 0}; }
NoiseConfig mayo2020_noise() { return NoiseConfig{25.0, 50.0, 50.0, 50.0, 0}; }

Image corrupt(const Image& img, const NoiseConfig& cfg, std::uint64_t draw_index) {
    cfg.validate();
    wavelet::SubbandSet sb = wavelet::dwt2(img);
    add_noise(sb.ll, cfg.sigma_ll, cfg.seed, draw_index, kLL);
    add_noise(sb.lh, cfg.sigma_lh, cfg.seed, draw_index, kLH);
    add_noise(sb.hl, cfg.sigma_hl, cfg.seed, draw_index, kHL);
    add_noise(sb.hh, cfg.sigma_hh, cfg.seed, draw_index, kHH);
    return wavelet::idwt2(sb);
}

Image corrupt_direct(const Image& img, double sigma, std::uint64_t seed,
                     std::uint64_t draw_index) {
    check_sigma(sigma, "sigma");
    if (!all_finite(img)) {
        throw Error(ErrorKind::NonFinite, "input image '" + img.id + "' contains NaN/Inf");
    }
    Image out = img;
    if (sigma == 0.0) return out;
    CounterRng rng{seed, draw_index, kPixel};
    for (double& v : out.data) {
        v += sigma * rng.next_gauss();
    }
    return out;
}

}  // namespace wia
