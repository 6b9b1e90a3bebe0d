#pragma once

#include <cstdint>
#include <string>

#include "wia/image.hpp"

namespace wia {

// Per-subband Gaussian noise levels, in the native intensity units of the
// image the corruption is applied to (i.e. before any normalization).
struct NoiseConfig {
    double sigma_ll = 0.0;
    double sigma_lh = 0.0;
    double sigma_hl = 0.0;
    double sigma_hh = 0.0;
    std::uint64_t seed = 0;

    // Throws InvalidSigma on negative / non-finite values.
    void validate() const;

    // Non-empty when the high-frequency sigmas are not all >= sigma_ll.
    // This is a recommendation, not a hard constraint.
    std::string ordering_warning() const;

    // Pixel-domain residual std implied by the orthonormal transform:
    // sqrt(sum of sigma^2) / 2.
    double pixel_residual_std() const;
};

NoiseConfig mayo2016_noise();
NoiseConfig mayo2020_noise();

// Adds i.i.d. zero-mean Gaussian noise per wavelet subband and inverts.
// Deterministic given (cfg.seed, draw_index); each subband uses its own
// counter stream, so results do not depend on evaluation order.
Image corrupt(const Image& img, const NoiseConfig& cfg, std::uint64_t draw_index);

// Ablation variant: plain pixel-domain Gaussian noise.
Image corrupt_direct(const Image& img, double sigma, std::uint64_t seed,
                     std::uint64_t draw_index);

}  // namespace wia
