#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wia/image.hpp"

namespace wia::metrics {

// PSNR cap returned when MSE == 0.
inline constexpr double kPsnrCapDb = 100.0;

double mse(const Image& ref, const Image& test);

// 10*log10(peak^2 / MSE), capped at kPsnrCapDb for identical images.
double psnr(const Image& ref, const Image& test, double peak);

// Mean local SSIM, 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03,
// valid-mode windows (no padding). `peak` is the dynamic range L.
double ssim(const Image& ref, const Image& test, double peak);

// One radial bin of the noise power spectrum. `power` is the mean
// periodogram value per DFT cell in the bin (DFT normalized so that the
// non-DC cells of a patch sum to the patch variance); `freq` is the bin's
// upper-edge radius in cycles/pixel; `cells` counts contributing DFT cells
// across all patches.
struct NpsBin {
    double freq = 0.0;
    double power = 0.0;
    std::int64_t cells = 0;
};

// Patch-averaged periodogram of a residual image, radially binned into
// patch/2 bins. The per-patch mean (DC) is removed before the transform.
// Bin k collects cells with integer-radius in (k, k+1]; cells beyond the
// last edge fold into the final bin so total power is preserved.
std::vector<NpsBin> nps(const Image& residual, int patch);

// Sum over bins of power * cells; equals the mean within-patch variance of
// the residual (Parseval with DC excluded).
double nps_total_power(const std::vector<NpsBin>& profile);

struct SubbandMse {
    double ll = 0.0, lh = 0.0, hl = 0.0, hh = 0.0;

    double high_sum() const { return lh + hl + hh; }
    double total() const { return ll + lh + hl + hh; }
};

// Per-subband squared differences between dwt2(a) and dwt2(b), normalized
// by the full source pixel count so the four entries sum to the image MSE
// (orthonormal transform).
SubbandMse subband_difference(const Image& a, const Image& b);

struct MetricsReport {
    std::string id;
    double psnr_db = 0.0;
    double ssim = 0.0;  // raw value in [-1, 1]; reported x100 in CLI output
    std::vector<NpsBin> nps_radial;
    SubbandMse subband_mse;
};

}  // namespace wia::metrics
