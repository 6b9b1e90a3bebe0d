#pragma once

#include <cstdint>

#include "wia/image.hpp"

namespace wia {

// Synthetic CT-like slice: a dark background holding a body disk with
// piecewise-constant soft-edged ellipses plus thin bright/dark lines, so
// generated images carry both low- and high-frequency content.
struct PhantomSpec {
    int size = 64;              // even
    int min_ellipses = 4;
    int max_ellipses = 9;
    double intensity_min = 200.0;   // per-ellipse interior value range
    double intensity_max = 3600.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic given (spec.seed, index). Output range is (0, 4096) and
// pixel values are quantized to float32 so that file round trips are
// bit-exact.
Image generate_phantom(const PhantomSpec& spec, std::uint64_t index);

// Evaluation-only degradation. The residual is a signal-dependent
// Gaussian field: amplitude noise_scale * sqrt(max(pixel, floor) /
// dose_factor) applied to a high-pass shaped unit field plus a mild white
// component. Deterministic given seed; zero-mean; halving dose_factor
// doubles the residual variance.
struct LdctParams {
    double dose_factor = 0.25;  // in (0, 1]
    double noise_scale = 1.0;
    double white_weight = 0.25;
    double floor = 64.0;
    std::uint64_t seed = 0;

    void validate() const;
};

Image simulate_ldct(const Image& img, const LdctParams& params);

inline Image simulate_ldct(const Image& img, double dose_factor, std::uint64_t seed) {
    LdctParams p;
    p.dose_factor = dose_factor;
    p.seed = seed;
    return simulate_ldct(img, p);
}

}  // namespace wia
