#pragma once

#include <cmath>
#include <vector>

#include "wia/error.hpp"
#include "wia/nn/tensor.hpp"

namespace wia::nn {

// Differentiable mean SSIM over (n, 1, h, w) pairs. Gaussian window, valid
// mode (no padding), stabilizers from the dynamic range. forward caches the
// moment maps; backward produces gradients with respect to both inputs.
template <typename T>
class SsimLoss {
  public:
    explicit SsimLoss(int window = 11, double sigma = 1.5, double k1 = 0.01, double k2 = 0.03,
                      double range = 2.0)
        : win_(window), c1_(k1 * range * k1 * range), c2_(k2 * range * k2 * range) {
        kernel_.resize(win_);
        const double mid = (win_ - 1) / 2.0;
        double sum = 0.0;
        for (int i = 0; i < win_; ++i) {
            kernel_[i] = std::exp(-(i - mid) * (i - mid) / (2.0 * sigma * sigma));
            sum += kernel_[i];
        }
        for (auto& k : kernel_) k = static_cast<T>(k / sum);
    }

    // Returns mean SSIM across all samples and window positions.
    T forward(const Tensor<T>& x, const Tensor<T>& y) {
        check_same_shape(x, y, "ssim");
        if (x.c != 1) throw Error(ErrorKind::ShapeMismatch, "ssim: expected single-channel input");
        if (x.h < win_ || x.w < win_) {
            throw Error(ErrorKind::TooSmall, "ssim: image smaller than window");
        }
        x_ = x;
        y_ = y;
        const int ho = x.h - win_ + 1, wo = x.w - win_ + 1;
        mu_x_ = Tensor<T>(x.n, 1, ho, wo);
        mu_y_ = Tensor<T>(x.n, 1, ho, wo);
        sxx_ = Tensor<T>(x.n, 1, ho, wo);
        syy_ = Tensor<T>(x.n, 1, ho, wo);
        sxy_ = Tensor<T>(x.n, 1, ho, wo);

        std::vector<T> xx(x.v.size()), yy(x.v.size()), xy(x.v.size());
        for (size_t i = 0; i < x.v.size(); ++i) {
            xx[i] = x.v[i] * x.v[i];
            yy[i] = y.v[i] * y.v[i];
            xy[i] = x.v[i] * y.v[i];
        }
        for (int in = 0; in < x.n; ++in) {
            const std::int64_t off = static_cast<std::int64_t>(in) * x.h * x.w;
            corr_valid(x.v.data() + off, x.h, x.w, mu_x_.plane(in, 0));
            corr_valid(y.v.data() + off, x.h, x.w, mu_y_.plane(in, 0));
            corr_valid(xx.data() + off, x.h, x.w, sxx_.plane(in, 0));
            corr_valid(yy.data() + off, x.h, x.w, syy_.plane(in, 0));
            corr_valid(xy.data() + off, x.h, x.w, sxy_.plane(in, 0));
        }

        double total = 0.0;
        for (size_t i = 0; i < mu_x_.v.size(); ++i) {
            const double mx = mu_x_.v[i], my = mu_y_.v[i];
            const double n1 = 2.0 * mx * my + c1_;
            const double n2 = 2.0 * (sxy_.v[i] - mx * my) + c2_;
            const double d1 = mx * mx + my * my + c1_;
            const double d2 = sxx_.v[i] - mx * mx + syy_.v[i] - my * my + c2_;
            total += (n1 * n2) / (d1 * d2);
        }
        return static_cast<T>(total / static_cast<double>(mu_x_.v.size()));
    }

    // Gradients of (upstream * mean SSIM) with respect to x and y.
    void backward(T upstream, Tensor<T>& gx, Tensor<T>& gy) {
        const int ho = mu_x_.h, wo = mu_x_.w;
        gx = Tensor<T>(x_.n, 1, x_.h, x_.w);
        gy = Tensor<T>(x_.n, 1, x_.h, x_.w);
        const double scale = static_cast<double>(upstream) / static_cast<double>(mu_x_.v.size());

        std::vector<T> d_mux(static_cast<size_t>(ho) * wo), d_muy(d_mux.size()),
            d_sxx(d_mux.size()), d_syy(d_mux.size()), d_sxy(d_mux.size());
        std::vector<T> g1(static_cast<size_t>(x_.h) * x_.w);

        for (int in = 0; in < x_.n; ++in) {
            const T* mx_p = mu_x_.plane(in, 0);
            const T* my_p = mu_y_.plane(in, 0);
            const T* sxx_p = sxx_.plane(in, 0);
            const T* syy_p = syy_.plane(in, 0);
            const T* sxy_p = sxy_.plane(in, 0);
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(ho) * wo; ++i) {
                const double mx = mx_p[i], my = my_p[i];
                const double n1 = 2.0 * mx * my + c1_;
                const double n2 = 2.0 * (sxy_p[i] - mx * my) + c2_;
                const double d1 = mx * mx + my * my + c1_;
                const double d2 = sxx_p[i] - mx * mx + syy_p[i] - my * my + c2_;
                const double inv = 1.0 / (d1 * d2);
                const double s = n1 * n2 * inv;
                d_mux[i] = static_cast<T>(scale * (2.0 * my * (n2 - n1) * inv -
                                                   2.0 * mx * s * (1.0 / d1 - 1.0 / d2)));
                d_muy[i] = static_cast<T>(scale * (2.0 * mx * (n2 - n1) * inv -
                                                   2.0 * my * s * (1.0 / d1 - 1.0 / d2)));
                d_sxx[i] = static_cast<T>(scale * (-s / d2));
                d_syy[i] = d_sxx[i];
                d_sxy[i] = static_cast<T>(scale * 2.0 * n1 * inv);
            }

            const std::int64_t off = static_cast<std::int64_t>(in) * x_.h * x_.w;
            T* gx_p = gx.v.data() + off;
            T* gy_p = gy.v.data() + off;
            const T* x_p = x_.v.data() + off;
            const T* y_p = y_.v.data() + off;

            scatter_full(d_mux.data(), ho, wo, g1.data(), x_.h, x_.w);
            for (size_t i = 0; i < g1.size(); ++i) gx_p[i] += g1[i];
            scatter_full(d_muy.data(), ho, wo, g1.data(), x_.h, x_.w);
            for (size_t i = 0; i < g1.size(); ++i) gy_p[i] += g1[i];
            scatter_full(d_sxx.data(), ho, wo, g1.data(), x_.h, x_.w);
            for (size_t i = 0; i < g1.size(); ++i) gx_p[i] += T(2) * x_p[i] * g1[i];
            scatter_full(d_syy.data(), ho, wo, g1.data(), x_.h, x_.w);
            for (size_t i = 0; i < g1.size(); ++i) gy_p[i] += T(2) * y_p[i] * g1[i];
            scatter_full(d_sxy.data(), ho, wo, g1.data(), x_.h, x_.w);
            for (size_t i = 0; i < g1.size(); ++i) {
                gx_p[i] += y_p[i] * g1[i];
                gy_p[i] += x_p[i] * g1[i];
            }
        }
    }

  private:
    // Valid-mode correlation with the separable window: out is (h-w+1, w-w+1).
    void corr_valid(const T* src, int h, int w, T* out) const {
        const int wo = w - win_ + 1;
        const int ho = h - win_ + 1;
        tmp_.assign(static_cast<size_t>(h) * wo, T(0));
        for (int y = 0; y < h; ++y) {
            const T* row = src + static_cast<std::int64_t>(y) * w;
            T* trow = tmp_.data() + static_cast<std::int64_t>(y) * wo;
            for (int x = 0; x < wo; ++x) {
                double acc = 0.0;
                for (int k = 0; k < win_; ++k) acc += static_cast<double>(kernel_[k]) * row[x + k];
                trow[x] = static_cast<T>(acc);
            }
        }
        for (int y = 0; y < ho; ++y) {
            T* orow = out + static_cast<std::int64_t>(y) * wo;
            for (int x = 0; x < wo; ++x) {
                double acc = 0.0;
                for (int k = 0; k < win_; ++k) {
                    acc += static_cast<double>(kernel_[k]) * tmp_[static_cast<size_t>(y + k) * wo + x];
                }
                orow[x] = static_cast<T>(acc);
            }
        }
    }

    // Adjoint of corr_valid: scatter a (ho, wo) map back onto the (h, w) grid.
    void scatter_full(const T* map, int ho, int wo, T* out, int h, int w) const {
        tmp_.assign(static_cast<size_t>(ho) * w, T(0));
        for (int y = 0; y < ho; ++y) {
            const T* mrow = map + static_cast<std::int64_t>(y) * wo;
            T* trow = tmp_.data() + static_cast<std::int64_t>(y) * w;
            for (int x = 0; x < wo; ++x) {
                for (int k = 0; k < win_; ++k) trow[x + k] += kernel_[k] * mrow[x];
            }
        }
        std::fill(out, out + static_cast<std::int64_t>(h) * w, T(0));
        for (int y = 0; y < ho; ++y) {
            const T* trow = tmp_.data() + static_cast<std::int64_t>(y) * w;
            for (int k = 0; k < win_; ++k) {
                T* orow = out + static_cast<std::int64_t>(y + k) * w;
                for (int x = 0; x < w; ++x) orow[x] += kernel_[k] * trow[x];
            }
        }
    }

    int win_;
    double c1_, c2_;
    std::vector<T> kernel_;
    Tensor<T> x_, y_, mu_x_, mu_y_, sxx_, syy_, sxy_;
    mutable std::vector<T> tmp_;
};

}  // namespace wia::nn
