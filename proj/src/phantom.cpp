#include "wia/phantom.hpp"

#include <algorithm>
#include <cmath>

#include "wia/rng.hpp"

namespace wia {

namespace {

constexpr double kPhantomMax = 4096.0;

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

// 3x3 box blur with replicated borders.
std::vector<double> box3(const std::vector<double>& src, int h, int w) {
    std::vector<double> out(src.size());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                const int rr = std::clamp(r + dr, 0, h - 1);
                for (int dc = -1; dc <= 1; ++dc) {
                    const int cc = std::clamp(c + dc, 0, w - 1);
                    acc += src[static_cast<size_t>(rr) * w + cc];
                }
            }
            out[static_cast<size_t>(r) * w + c] = acc / 9.0;
        }
    }
    return out;
}

}  // namespace

void PhantomSpec::validate() const {
    if (size < 8 || size % 2 != 0) {
        throw Error(ErrorKind::ConfigError,
                    "phantom size " + std::to_string(size) + " must be even and >= 8");
    }
    if (min_ellipses < 1 || max_ellipses < min_ellipses) {
        throw Error(ErrorKind::ConfigError, "ellipse count range [" +
                                                std::to_string(min_ellipses) + ", " +
                                                std::to_string(max_ellipses) + "] is invalid");
    }
    if (!(intensity_min >= 0.0) || !(intensity_max > intensity_min) ||
        intensity_max > kPhantomMax) {
        throw Error(ErrorKind::ConfigError, "ellipse intensity range is invalid");
    }
}

Image generate_phantom(const PhantomSpec& spec, std::uint64_t index) {
    spec.validate();
    const int S = spec.size;
    CounterRng rng{spec.seed, index, 0x70686d74ULL /* stream tag */};
    Image img(S, S, 0.0, kPhantomMax, "phantom_" + std::to_string(index));

    const double cx = S / 2.0, cy = S / 2.0;
    const double body_r = 0.44 * S;
    const double body_val = 800.0 + 400.0 * rng.next_unit();

    // Body disk with a ~1px soft edge.
    for (int r = 0; r < S; ++r) {
        for (int c = 0; c < S; ++c) {
            const double d = std::hypot(r + 0.5 - cy, c + 0.5 - cx);
            const double a = smoothstep(body_r - d);  // 1 inside, 0 outside
            img.at(r, c) = a * body_val;
        }
    }

    const int n_ell =
        spec.min_ellipses +
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.max_ellipses - spec.min_ellipses + 1)));
    for (int e = 0; e < n_ell; ++e) {
        const double rad = rng.next_unit() * 0.62 * body_r;
        const double ang = rng.next_unit() * 6.283185307179586;
        const double ex = cx + rad * std::cos(ang);
        const double ey = cy + rad * std::sin(ang);
        const double sa = (0.06 + 0.16 * rng.next_unit()) * S;
        const double sb = (0.06 + 0.16 * rng.next_unit()) * S;
        const double rot = rng.next_unit() * 3.141592653589793;
        const double val =
            spec.intensity_min + (spec.intensity_max - spec.intensity_min) * rng.next_unit();
        const double cr = std::cos(rot), sr = std::sin(rot);
        for (int r = 0; r < S; ++r) {
            for (int c = 0; c < S; ++c) {
                const double dx = c + 0.5 - ex, dy = r + 0.5 - ey;
                const double u = (dx * cr + dy * sr) / sa;
                const double v = (-dx * sr + dy * cr) / sb;
                // approximate pixel distance to the ellipse boundary
                const double q = std::sqrt(u * u + v * v);
                const double edge = (1.0 - q) * std::min(sa, sb);
                const double a = smoothstep(edge);
                if (a > 0.0) img.at(r, c) = (1.0 - a) * img.at(r, c) + a * val;
            }
        }
    }

    // Thin lines: fine structure with guaranteed high-frequency energy.
    const int n_lines = 2 + static_cast<int>(rng.next_below(4));
    for (int l = 0; l < n_lines; ++l) {
        const double a0 = rng.next_unit() * 6.283185307179586;
        const double a1 = rng.next_unit() * 6.283185307179586;
        const double r0 = rng.next_unit() * 0.8 * body_r;
        const double r1 = rng.next_unit() * 0.8 * body_r;
        const double x0 = cx + r0 * std::cos(a0), y0 = cy + r0 * std::sin(a0);
        const double x1 = cx + r1 * std::cos(a1), y1 = cy + r1 * std::sin(a1);
        const double half_w = 0.5 + rng.next_unit();  // 0.5 .. 1.5 px
        const double delta = (rng.next_unit() < 0.5 ? -1.0 : 1.0) * (300.0 + 500.0 * rng.next_unit());
        const double vx = x1 - x0, vy = y1 - y0;
        const double len2 = vx * vx + vy * vy;
        for (int r = 0; r < S; ++r) {
            for (int c = 0; c < S; ++c) {
                const double px = c + 0.5 - x0, py = r + 0.5 - y0;
                double t = len2 > 0.0 ? (px * vx + py * vy) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                const double d = std::hypot(px - t * vx, py - t * vy);
                const double a = smoothstep(half_w + 0.5 - d);
                if (a <= 0.0) continue;
                const double body = smoothstep(body_r - std::hypot(r + 0.5 - cy, c + 0.5 - cx));
                img.at(r, c) += a * body * delta;
            }
        }
    }

    for (double& v : img.data) {
        v = std::clamp(v, 0.0, kPhantomMax);
        v = static_cast<double>(static_cast<float>(v));  // file round trips stay bit-exact
    }
    return img;
}

void LdctParams::validate() const {
    if (!(dose_factor > 0.0) || dose_factor > 1.0 || !std::isfinite(dose_factor)) {
        throw Error(ErrorKind::InvalidDose,
                    "dose_factor " + std::to_string(dose_factor) + " must be in (0, 1]");
    }
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale) || !(white_weight >= 0.0) ||
        !(floor >= 0.0)) {
        throw Error(ErrorKind::ConfigError, "ldct noise parameters must be finite and >= 0");
    }
}

Image simulate_ldct(const Image& img, const LdctParams& params) {
    params.validate();
    if (!all_finite(img)) {
        throw Error(ErrorKind::NonFinite, "input image '" + img.id + "' contains NaN/Inf");
    }
    Image out = img;
    if (params.noise_scale == 0.0) return out;

    const int h = img.height, w = img.width;
    const size_t n = img.size();
    std::vector<double> n1(n), n2(n);
    {
        CounterRng rng{params.seed, 11};
        for (double& v : n1) v = rng.next_gauss();
    }
    {
        CounterRng rng{params.seed, 12};
        for (double& v : n2) v = rng.next_gauss();
    }
    // High-pass shaped main component: quantum mottle in reconstructed CT is
    // concentrated at high spatial frequencies, which is what the subband
    // analysis is meant to pick up.
    const std::vector<double> low = box3(n1, h, w);
    const double inv_sqrt_dose = 1.0 / std::sqrt(params.dose_factor);
    for (size_t i = 0; i < n; ++i) {
        const double amp =
            params.noise_scale * std::sqrt(std::max(img.data[i], params.floor)) * inv_sqrt_dose;
        out.data[i] += amp * ((n1[i] - low[i]) + params.white_weight * n2[i]);
    }
    return out;
}

}  // namespace wia
