#include "wia/metrics.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "wia/wavelet.hpp"

namespace wia::metrics {

namespace {

void check_same_shape(const Image& a, const Image& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorKind::ShapeMismatch,
                    "images are " + std::to_string(a.height) + "x" + std::to_string(a.width) +
                        " vs " + std::to_string(b.height) + "x" + std::to_string(b.width));
    }
}

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimK1 = 0.01;
constexpr double kSsimK2 = 0.03;

// Normalized 11x11 Gaussian window, separable.
const double* ssim_window_1d() {
    static double g[kSsimWindow];
    static std::once_flag once;
    std::call_once(once, [] {
        double sum = 0.0;
        for (int i = 0; i < kSsimWindow; ++i) {
            const double d = i - (kSsimWindow - 1) / 2.0;
            g[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
            sum += g[i];
        }
        for (int i = 0; i < kSsimWindow; ++i) g[i] /= sum;
    });
    return g;
}

// FFTW's planner is not reentrant; serialize plan creation/destruction.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double mse(const Image& ref, const Image& test) {
    check_same_shape(ref, test);
    double acc = 0.0;
    for (size_t i = 0; i < ref.data.size(); ++i) {
        const double d = ref.data[i] - test.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(ref.data.size());
}

double psnr(const Image& ref, const Image& test, double peak) {
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw Error(ErrorKind::InvalidArgument, "psnr peak must be finite and > 0");
    }
    const double m = mse(ref, test);
    if (m <= 0.0) return kPsnrCapDb;
    return std::min(kPsnrCapDb, 10.0 * std::log10(peak * peak / m));
}

double ssim(const Image& ref, const Image& test, double peak) {
    check_same_shape(ref, test);
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw Error(ErrorKind::InvalidArgument, "ssim peak must be finite and > 0");
    }
    const int H = ref.height, W = ref.width;
    if (H < kSsimWindow || W < kSsimWindow) {
        throw Error(ErrorKind::TooSmall, "image " + std::to_string(H) + "x" + std::to_string(W) +
                                             " is smaller than the 11x11 SSIM window");
    }
    const double c1 = (kSsimK1 * peak) * (kSsimK1 * peak);
    const double c2 = (kSsimK2 * peak) * (kSsimK2 * peak);
    const double* g = ssim_window_1d();

    // Separable windowed moments: filter rows then columns for the five
    // maps (x, y, x^2, y^2, xy). Valid-mode output.
    const int Wo = W - kSsimWindow + 1;
    const int Ho = H - kSsimWindow + 1;
    const size_t rowN = static_cast<size_t>(H) * Wo;
    std::vector<double> rx(rowN), ry(rowN), rxx(rowN), ryy(rowN), rxy(rowN);
    for (int r = 0; r < H; ++r) {
        const double* xr = ref.data.data() + static_cast<size_t>(r) * W;
        const double* yr = test.data.data() + static_cast<size_t>(r) * W;
        for (int c = 0; c < Wo; ++c) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (int k = 0; k < kSsimWindow; ++k) {
                const double xv = xr[c + k], yv = yr[c + k], wk = g[k];
                sx += wk * xv;
                sy += wk * yv;
                sxx += wk * xv * xv;
                syy += wk * yv * yv;
                sxy += wk * xv * yv;
            }
            const size_t o = static_cast<size_t>(r) * Wo + c;
            rx[o] = sx;
            ry[o] = sy;
            rxx[o] = sxx;
            ryy[o] = syy;
            rxy[o] = sxy;
        }
    }

    double acc = 0.0;
    for (int r = 0; r < Ho; ++r) {
        for (int c = 0; c < Wo; ++c) {
            double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
            for (int k = 0; k < kSsimWindow; ++k) {
                const size_t o = static_cast<size_t>(r + k) * Wo + c;
                const double wk = g[k];
                mx += wk * rx[o];
                my += wk * ry[o];
                mxx += wk * rxx[o];
                myy += wk * ryy[o];
                mxy += wk * rxy[o];
            }
            const double vx = mxx - mx * mx;
            const double vy = myy - my * my;
            const double cxy = mxy - mx * my;
            const double a1 = 2.0 * mx * my + c1;
            const double a2 = 2.0 * cxy + c2;
            const double b1 = mx * mx + my * my + c1;
            const double b2 = vx + vy + c2;
            acc += (a1 * a2) / (b1 * b2);
        }
    }
    return acc / (static_cast<double>(Ho) * Wo);
}

std::vector<NpsBin> nps(const Image& residual, int patch) {
    if (patch < 2) {
        throw Error(ErrorKind::InvalidArgument, "nps patch must be >= 2");
    }
    if (residual.height % patch != 0 || residual.width % patch != 0) {
        throw Error(ErrorKind::IndivisiblePatch,
                    "patch " + std::to_string(patch) + " does not divide " +
                        std::to_string(residual.height) + "x" + std::to_string(residual.width));
    }
    const int N = patch;
    const int n_bins = N / 2;
    const int tiles_r = residual.height / N;
    const int tiles_c = residual.width / N;

    std::vector<double> power(static_cast<size_t>(N) * N, 0.0);
    {
        std::vector<fftw_complex> in(static_cast<size_t>(N) * N);
        std::vector<fftw_complex> out(static_cast<size_t>(N) * N);
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            plan = fftw_plan_dft_2d(N, N, in.data(), out.data(), FFTW_FORWARD, FFTW_ESTIMATE);
        }
        for (int tr = 0; tr < tiles_r; ++tr) {
            for (int tc = 0; tc < tiles_c; ++tc) {
                double mean = 0.0;
                for (int r = 0; r < N; ++r)
                    for (int c = 0; c < N; ++c) mean += residual.at(tr * N + r, tc * N + c);
                mean /= static_cast<double>(N) * N;
                for (int r = 0; r < N; ++r) {
                    for (int c = 0; c < N; ++c) {
                        in[static_cast<size_t>(r) * N + c][0] =
                            residual.at(tr * N + r, tc * N + c) - mean;
                        in[static_cast<size_t>(r) * N + c][1] = 0.0;
                    }
                }
                fftw_execute(plan);
                for (size_t i = 0; i < power.size(); ++i) {
                    power[i] += out[i][0] * out[i][0] + out[i][1] * out[i][1];
                }
            }
        }
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_destroy_plan(plan);
        }
    }

    const double n_tiles = static_cast<double>(tiles_r) * tiles_c;
    // Periodogram normalization: sum of non-DC cells equals patch variance.
    const double norm = n_tiles * static_cast<double>(N) * N * N * N;

    std::vector<NpsBin> bins(n_bins);
    for (int k = 0; k < n_bins; ++k) bins[k].freq = static_cast<double>(k + 1) / N;
    for (int u = 0; u < N; ++u) {
        const double fu = (u <= N / 2) ? u : u - N;
        for (int v = 0; v < N; ++v) {
            if (u == 0 && v == 0) continue;  // DC removed
            const double fv = (v <= N / 2) ? v : v - N;
            const double r = std::sqrt(fu * fu + fv * fv);
            int k = static_cast<int>(std::ceil(r)) - 1;
            if (k < 0) k = 0;
            if (k >= n_bins) k = n_bins - 1;  // corner cells fold into last bin
            bins[k].power += power[static_cast<size_t>(u) * N + v] / norm;
            bins[k].cells += 1;
        }
    }
    for (auto& b : bins) {
        if (b.cells > 0) b.power /= static_cast<double>(b.cells);
    }
    return bins;
}

double nps_total_power(const std::vector<NpsBin>& profile) {
    double total = 0.0;
    for (const auto& b : profile) total += b.power * static_cast<double>(b.cells);
    return total;
}

SubbandMse subband_difference(const Image& a, const Image& b) {
    check_same_shape(a, b);
    const wavelet::SubbandSet sa = wavelet::dwt2(a);
    const wavelet::SubbandSet sb = wavelet::dwt2(b);
    const double denom = static_cast<double>(a.data.size());
    auto plane_mse = [denom](const std::vector<double>& p, const std::vector<double>& q) {
        double acc = 0.0;
        for (size_t i = 0; i < p.size(); ++i) {
            const double d = p[i] - q[i];
            acc += d * d;
        }
        return acc / denom;
    };
    SubbandMse out;
    out.ll = plane_mse(sa.ll, sb.ll);
    out.lh = plane_mse(sa.lh, sb.lh);
    out.hl = plane_mse(sa.hl, sb.hl);
    out.hh = plane_mse(sa.hh, sb.hh);
    return out;
}

}  // namespace wia::metrics
