#pragma once

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wia/error.hpp"
#include "wia/nn/tensor.hpp"
#include "wia/rng.hpp"

namespace wia::nn {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Named trainable parameter. Gradients accumulate across backward calls until
// the optimizer (or caller) clears them.
template <typename T>
struct Param {
    std::string name;
    std::vector<int> shape;
    std::vector<T> w;
    std::vector<T> g;

    Param() = default;
    Param(std::string name_, std::vector<int> shape_) : name(std::move(name_)), shape(std::move(shape_)) {
        std::int64_t n = 1;
        for (int d : shape) n *= d;
        w.assign(static_cast<size_t>(n), T(0));
        g.assign(static_cast<size_t>(n), T(0));
    }

    std::int64_t size() const { return static_cast<std::int64_t>(w.size()); }
    void zero_grad() { std::fill(g.begin(), g.end(), T(0)); }

    void init_normal(CounterRng& rng, double stddev) {
        for (auto& x : w) x = static_cast<T>(rng.next_gauss() * stddev);
    }
};

// Base class for differentiable layers. forward(x, keep_ctx=false) releases
// the context needed by backward; use it for inference-only passes.
template <typename T>
class Layer {
  public:
    virtual ~Layer() = default;
    virtual Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) = 0;
    virtual Tensor<T> backward(const Tensor<T>& gy) = 0;
    virtual void collect(std::vector<Param<T>*>& out) { (void)out; }
};

// ---------------------------------------------------------------------------
// Conv2d: im2col + GEMM. Weight layout OIHW, zero padding.
// ---------------------------------------------------------------------------
template <typename T>
class Conv2d : public Layer<T> {
  public:
    Conv2d(std::string name, int cin, int cout, int k, int stride, int pad, CounterRng& rng,
           bool bias = true)
        : cin_(cin), cout_(cout), k_(k), stride_(stride), pad_(pad), use_bias_(bias),
          weight_(name + ".weight", {cout, cin, k, k}) {
        weight_.init_normal(rng, 0.02);
        if (use_bias_) bias_ = Param<T>(name + ".bias", {cout});
    }

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        if (x.c != cin_) throw Error(ErrorKind::ShapeMismatch, "conv2d: channel count mismatch");
        xn_ = x.n; xh_ = x.h; xw_ = x.w;
        ho_ = (x.h + 2 * pad_ - k_) / stride_ + 1;
        wo_ = (x.w + 2 * pad_ - k_) / stride_ + 1;
        if (ho_ < 1 || wo_ < 1) throw Error(ErrorKind::TooSmall, "conv2d: input smaller than kernel");

        const int rows = cin_ * k_ * k_;
        const std::int64_t cols = static_cast<std::int64_t>(x.n) * ho_ * wo_;
        RowMat<T> col(rows, cols);
        build_col(x, col);

        Eigen::Map<const RowMat<T>> W(weight_.w.data(), cout_, rows);
        RowMat<T> Y(cout_, cols);
        Y.noalias() = W * col;

        Tensor<T> y(x.n, cout_, ho_, wo_);
        const std::int64_t plane = static_cast<std::int64_t>(ho_) * wo_;
        for (int in = 0; in < x.n; ++in) {
            for (int oc = 0; oc < cout_; ++oc) {
                const T b = use_bias_ ? bias_.w[oc] : T(0);
                const T* src = Y.data() + static_cast<std::int64_t>(oc) * cols + in * plane;
                T* dst = y.plane(in, oc);
                for (std::int64_t i = 0; i < plane; ++i) dst[i] = src[i] + b;
            }
        }
        if (keep_ctx) col_ = std::move(col);
        else col_.resize(0, 0);
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        const int rows = cin_ * k_ * k_;
        const std::int64_t cols = static_cast<std::int64_t>(xn_) * ho_ * wo_;
        const std::int64_t plane = static_cast<std::int64_t>(ho_) * wo_;

        RowMat<T> gY(cout_, cols);
        for (int in = 0; in < xn_; ++in) {
            for (int oc = 0; oc < cout_; ++oc) {
                const T* src = gy.plane(in, oc);
                T* dst = gY.data() + static_cast<std::int64_t>(oc) * cols + in * plane;
                for (std::int64_t i = 0; i < plane; ++i) dst[i] = src[i];
            }
        }

        Eigen::Map<RowMat<T>> Gw(weight_.g.data(), cout_, rows);
        Gw.noalias() += gY * col_.transpose();
        if (use_bias_) {
            for (int oc = 0; oc < cout_; ++oc) bias_.g[oc] += gY.row(oc).sum();
        }

        Eigen::Map<const RowMat<T>> W(weight_.w.data(), cout_, rows);
        RowMat<T> dcol(rows, cols);
        dcol.noalias() = W.transpose() * gY;

        Tensor<T> gx(xn_, cin_, xh_, xw_);
        scatter_col(dcol, gx);
        return gx;
    }

    void collect(std::vector<Param<T>*>& out) override {
        out.push_back(&weight_);
        if (use_bias_) out.push_back(&bias_);
    }

    Param<T>& weight() { return weight_; }
    Param<T>& bias() { return bias_; }

  private:
    void build_col(const Tensor<T>& x, RowMat<T>& col) const {
        const std::int64_t cols = col.cols();
        for (int ic = 0; ic < cin_; ++ic) {
            for (int ky = 0; ky < k_; ++ky) {
                for (int kx = 0; kx < k_; ++kx) {
                    T* row = col.data() + (static_cast<std::int64_t>(ic) * k_ * k_ + ky * k_ + kx) * cols;
                    std::int64_t j = 0;
                    for (int in = 0; in < x.n; ++in) {
                        const T* src = x.plane(in, ic);
                        for (int oy = 0; oy < ho_; ++oy) {
                            const int sy = oy * stride_ - pad_ + ky;
                            const bool row_ok = sy >= 0 && sy < xh_;
                            for (int ox = 0; ox < wo_; ++ox, ++j) {
                                const int sx = ox * stride_ - pad_ + kx;
                                row[j] = (row_ok && sx >= 0 && sx < xw_)
                                             ? src[static_cast<std::int64_t>(sy) * xw_ + sx]
                                             : T(0);
                            }
                        }
                    }
                }
            }
        }
    }

    void scatter_col(const RowMat<T>& dcol, Tensor<T>& gx) const {
        const std::int64_t cols = dcol.cols();
        for (int ic = 0; ic < cin_; ++ic) {
            for (int ky = 0; ky < k_; ++ky) {
                for (int kx = 0; kx < k_; ++kx) {
                    const T* row =
                        dcol.data() + (static_cast<std::int64_t>(ic) * k_ * k_ + ky * k_ + kx) * cols;
                    std::int64_t j = 0;
                    for (int in = 0; in < xn_; ++in) {
                        T* dst = gx.plane(in, ic);
                        for (int oy = 0; oy < ho_; ++oy) {
                            const int sy = oy * stride_ - pad_ + ky;
                            const bool row_ok = sy >= 0 && sy < xh_;
                            for (int ox = 0; ox < wo_; ++ox, ++j) {
                                const int sx = ox * stride_ - pad_ + kx;
                                if (row_ok && sx >= 0 && sx < xw_) {
                                    dst[static_cast<std::int64_t>(sy) * xw_ + sx] += row[j];
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    int cin_, cout_, k_, stride_, pad_;
    bool use_bias_;
    Param<T> weight_, bias_;
    RowMat<T> col_;
    int xn_ = 0, xh_ = 0, xw_ = 0, ho_ = 0, wo_ = 0;
};

// ---------------------------------------------------------------------------
// ReflectionPad2d: mirror padding without edge repetition (pad < dim).
// ---------------------------------------------------------------------------
template <typename T>
class ReflectionPad2d : public Layer<T> {
  public:
    explicit ReflectionPad2d(int pad) : pad_(pad) {}

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        (void)keep_ctx;
        if (x.h <= pad_ || x.w <= pad_) {
            throw Error(ErrorKind::TooSmall, "reflection pad: input smaller than pad width");
        }
        xh_ = x.h; xw_ = x.w;
        Tensor<T> y(x.n, x.c, x.h + 2 * pad_, x.w + 2 * pad_);
        for (int in = 0; in < x.n; ++in) {
            for (int ic = 0; ic < x.c; ++ic) {
                const T* src = x.plane(in, ic);
                T* dst = y.plane(in, ic);
                for (int oy = 0; oy < y.h; ++oy) {
                    const int sy = reflect(oy - pad_, x.h);
                    for (int ox = 0; ox < y.w; ++ox) {
                        const int sx = reflect(ox - pad_, x.w);
                        dst[static_cast<std::int64_t>(oy) * y.w + ox] =
                            src[static_cast<std::int64_t>(sy) * x.w + sx];
                    }
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx(gy.n, gy.c, xh_, xw_);
        for (int in = 0; in < gy.n; ++in) {
            for (int ic = 0; ic < gy.c; ++ic) {
                const T* src = gy.plane(in, ic);
                T* dst = gx.plane(in, ic);
                for (int oy = 0; oy < gy.h; ++oy) {
                    const int sy = reflect(oy - pad_, xh_);
                    for (int ox = 0; ox < gy.w; ++ox) {
                        const int sx = reflect(ox - pad_, xw_);
                        dst[static_cast<std::int64_t>(sy) * xw_ + sx] +=
                            src[static_cast<std::int64_t>(oy) * gy.w + ox];
                    }
                }
            }
        }
        return gx;
    }

  private:
    static int reflect(int i, int n) {
        if (i < 0) return -i;
        if (i >= n) return 2 * n - 2 - i;
        return i;
    }
    int pad_;
    int xh_ = 0, xw_ = 0;
};

// ---------------------------------------------------------------------------
// InstanceNorm2d without learned scale/shift: per-(sample, channel) whitening.
// ---------------------------------------------------------------------------
template <typename T>
class InstanceNorm2d : public Layer<T> {
  public:
    explicit InstanceNorm2d(double eps = 1e-5) : eps_(eps) {}

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        Tensor<T> y(x.n, x.c, x.h, x.w);
        const std::int64_t m = static_cast<std::int64_t>(x.h) * x.w;
        inv_std_.assign(static_cast<size_t>(x.n) * x.c, T(0));
        for (int in = 0; in < x.n; ++in) {
            for (int ic = 0; ic < x.c; ++ic) {
                const T* src = x.plane(in, ic);
                T* dst = y.plane(in, ic);
                double mu = 0.0;
                for (std::int64_t i = 0; i < m; ++i) mu += src[i];
                mu /= static_cast<double>(m);
                double var = 0.0;
                for (std::int64_t i = 0; i < m; ++i) {
                    const double d = src[i] - mu;
                    var += d * d;
                }
                var /= static_cast<double>(m);
                const double is = 1.0 / std::sqrt(var + eps_);
                inv_std_[static_cast<size_t>(in) * x.c + ic] = static_cast<T>(is);
                for (std::int64_t i = 0; i < m; ++i) {
                    dst[i] = static_cast<T>((src[i] - mu) * is);
                }
            }
        }
        if (keep_ctx) xhat_ = y;
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx(gy.n, gy.c, gy.h, gy.w);
        const std::int64_t m = static_cast<std::int64_t>(gy.h) * gy.w;
        for (int in = 0; in < gy.n; ++in) {
            for (int ic = 0; ic < gy.c; ++ic) {
                const T* g = gy.plane(in, ic);
                const T* xh = xhat_.plane(in, ic);
                T* dst = gx.plane(in, ic);
                double gmean = 0.0, gxmean = 0.0;
                for (std::int64_t i = 0; i < m; ++i) {
                    gmean += g[i];
                    gxmean += static_cast<double>(g[i]) * xh[i];
                }
                gmean /= static_cast<double>(m);
                gxmean /= static_cast<double>(m);
                const double is = inv_std_[static_cast<size_t>(in) * gy.c + ic];
                for (std::int64_t i = 0; i < m; ++i) {
                    dst[i] = static_cast<T>(is * (g[i] - gmean - xh[i] * gxmean));
                }
            }
        }
        return gx;
    }

  private:
    double eps_;
    Tensor<T> xhat_;
    std::vector<T> inv_std_;
};

// ---------------------------------------------------------------------------
// Pointwise activations.
// ---------------------------------------------------------------------------
template <typename T>
class ReLU : public Layer<T> {
  public:
    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        Tensor<T> y = x;
        if (keep_ctx) mask_.assign(x.v.size(), 0);
        for (size_t i = 0; i < y.v.size(); ++i) {
            if (y.v[i] > T(0)) {
                if (keep_ctx) mask_[i] = 1;
            } else {
                y.v[i] = T(0);
            }
        }
        return y;
    }
    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx = gy;
        for (size_t i = 0; i < gx.v.size(); ++i) {
            if (!mask_[i]) gx.v[i] = T(0);
        }
        return gx;
    }

  private:
    std::vector<unsigned char> mask_;
};

template <typename T>
class Tanh : public Layer<T> {
  public:
    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        Tensor<T> y = x;
        for (auto& v : y.v) v = std::tanh(v);
        if (keep_ctx) y_ = y;
        return y;
    }
    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx = gy;
        for (size_t i = 0; i < gx.v.size(); ++i) gx.v[i] *= T(1) - y_.v[i] * y_.v[i];
        return gx;
    }

  private:
    Tensor<T> y_;
};

template <typename T>
class Sigmoid : public Layer<T> {
  public:
    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        Tensor<T> y = x;
        for (auto& v : y.v) v = T(1) / (T(1) + std::exp(-v));
        if (keep_ctx) y_ = y;
        return y;
    }
    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx = gy;
        for (size_t i = 0; i < gx.v.size(); ++i) gx.v[i] *= y_.v[i] * (T(1) - y_.v[i]);
        return gx;
    }

  private:
    Tensor<T> y_;
};

// ---------------------------------------------------------------------------
// Nearest-neighbor 2x upsampling.
// ---------------------------------------------------------------------------
template <typename T>
class UpsampleNearest2x : public Layer<T> {
  public:
    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        (void)keep_ctx;
        Tensor<T> y(x.n, x.c, x.h * 2, x.w * 2);
        for (int in = 0; in < x.n; ++in) {
            for (int ic = 0; ic < x.c; ++ic) {
                const T* src = x.plane(in, ic);
                T* dst = y.plane(in, ic);
                for (int oy = 0; oy < y.h; ++oy) {
                    const T* srow = src + static_cast<std::int64_t>(oy / 2) * x.w;
                    T* drow = dst + static_cast<std::int64_t>(oy) * y.w;
                    for (int ox = 0; ox < y.w; ++ox) drow[ox] = srow[ox / 2];
                }
            }
        }
        return y;
    }
    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx(gy.n, gy.c, gy.h / 2, gy.w / 2);
        for (int in = 0; in < gy.n; ++in) {
            for (int ic = 0; ic < gy.c; ++ic) {
                const T* src = gy.plane(in, ic);
                T* dst = gx.plane(in, ic);
                for (int oy = 0; oy < gy.h; ++oy) {
                    const T* srow = src + static_cast<std::int64_t>(oy) * gy.w;
                    T* drow = dst + static_cast<std::int64_t>(oy / 2) * gx.w;
                    for (int ox = 0; ox < gy.w; ++ox) drow[ox / 2] += srow[ox];
                }
            }
        }
        return gx;
    }
};

// ---------------------------------------------------------------------------
// Linear on (n, c, 1, 1) tensors.
// ---------------------------------------------------------------------------
template <typename T>
class Linear : public Layer<T> {
  public:
    Linear(std::string name, int cin, int cout, CounterRng& rng)
        : cin_(cin), cout_(cout), weight_(name + ".weight", {cout, cin}),
          bias_(name + ".bias", {cout}) {
        weight_.init_normal(rng, 0.02);
    }

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        if (x.c != cin_ || x.h != 1 || x.w != 1) {
            throw Error(ErrorKind::ShapeMismatch, "linear: expected (n, cin, 1, 1) input");
        }
        Tensor<T> y(x.n, cout_, 1, 1);
        Eigen::Map<const RowMat<T>> X(x.v.data(), x.n, cin_);
        Eigen::Map<const RowMat<T>> W(weight_.w.data(), cout_, cin_);
        Eigen::Map<RowMat<T>> Y(y.v.data(), x.n, cout_);
        Y.noalias() = X * W.transpose();
        for (int in = 0; in < x.n; ++in) {
            for (int oc = 0; oc < cout_; ++oc) y.v[static_cast<size_t>(in) * cout_ + oc] += bias_.w[oc];
        }
        if (keep_ctx) x_ = x;
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx(gy.n, cin_, 1, 1);
        Eigen::Map<const RowMat<T>> Gy(gy.v.data(), gy.n, cout_);
        Eigen::Map<const RowMat<T>> X(x_.v.data(), x_.n, cin_);
        Eigen::Map<const RowMat<T>> W(weight_.w.data(), cout_, cin_);
        Eigen::Map<RowMat<T>> Gw(weight_.g.data(), cout_, cin_);
        Eigen::Map<RowMat<T>> Gx(gx.v.data(), gx.n, cin_);
        Gw.noalias() += Gy.transpose() * X;
        for (int oc = 0; oc < cout_; ++oc) bias_.g[oc] += Gy.col(oc).sum();
        Gx.noalias() = Gy * W;
        return gx;
    }

    void collect(std::vector<Param<T>*>& out) override {
        out.push_back(&weight_);
        out.push_back(&bias_);
    }

  private:
    int cin_, cout_;
    Param<T> weight_, bias_;
    Tensor<T> x_;
};

// ---------------------------------------------------------------------------
// Channel max|mean descriptor: (n, c, h, w) -> (n, 2, h, w).
// Channel 0 is the per-pixel max over channels, channel 1 the mean.
// ---------------------------------------------------------------------------
template <typename T>
class ChannelMaxMean : public Layer<T> {
  public:
    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        xc_ = x.c;
        Tensor<T> y(x.n, 2, x.h, x.w);
        const std::int64_t m = static_cast<std::int64_t>(x.h) * x.w;
        if (keep_ctx) argmax_.assign(static_cast<size_t>(x.n) * m, 0);
        for (int in = 0; in < x.n; ++in) {
            T* ymax = y.plane(in, 0);
            T* ymean = y.plane(in, 1);
            for (std::int64_t i = 0; i < m; ++i) {
                T best = x.plane(in, 0)[i];
                int best_c = 0;
                double sum = best;
                for (int ic = 1; ic < x.c; ++ic) {
                    const T v = x.plane(in, ic)[i];
                    sum += v;
                    if (v > best) {
                        best = v;
                        best_c = ic;
                    }
                }
                ymax[i] = best;
                ymean[i] = static_cast<T>(sum / x.c);
                if (keep_ctx) argmax_[static_cast<size_t>(in) * m + i] = best_c;
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx(gy.n, xc_, gy.h, gy.w);
        const std::int64_t m = static_cast<std::int64_t>(gy.h) * gy.w;
        for (int in = 0; in < gy.n; ++in) {
            const T* gmax = gy.plane(in, 0);
            const T* gmean = gy.plane(in, 1);
            for (std::int64_t i = 0; i < m; ++i) {
                gx.plane(in, argmax_[static_cast<size_t>(in) * m + i])[i] += gmax[i];
                const T share = gmean[i] / static_cast<T>(xc_);
                for (int ic = 0; ic < xc_; ++ic) gx.plane(in, ic)[i] += share;
            }
        }
        return gx;
    }

  private:
    int xc_ = 0;
    std::vector<int> argmax_;
};

// ---------------------------------------------------------------------------
// Spatial attention: A = sigmoid(conv7x7(channel max|mean)), y = x * A.
// ---------------------------------------------------------------------------
template <typename T>
class SpatialAttention : public Layer<T> {
  public:
    SpatialAttention(std::string name, CounterRng& rng)
        : conv_(name + ".conv", 2, 1, 7, 1, 3, rng) {}

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        Tensor<T> pooled = pool_.forward(x, keep_ctx);
        Tensor<T> logits = conv_.forward(pooled, keep_ctx);
        Tensor<T> a = gate_.forward(logits, keep_ctx);
        Tensor<T> y(x.n, x.c, x.h, x.w);
        const std::int64_t m = static_cast<std::int64_t>(x.h) * x.w;
        for (int in = 0; in < x.n; ++in) {
            const T* amap = a.plane(in, 0);
            for (int ic = 0; ic < x.c; ++ic) {
                const T* src = x.plane(in, ic);
                T* dst = y.plane(in, ic);
                for (std::int64_t i = 0; i < m; ++i) dst[i] = src[i] * amap[i];
            }
        }
        if (keep_ctx) {
            x_ = x;
            a_ = std::move(a);
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        const std::int64_t m = static_cast<std::int64_t>(gy.h) * gy.w;
        Tensor<T> ga(gy.n, 1, gy.h, gy.w);
        Tensor<T> gx(gy.n, gy.c, gy.h, gy.w);
        for (int in = 0; in < gy.n; ++in) {
            const T* amap = a_.plane(in, 0);
            T* gmap = ga.plane(in, 0);
            for (int ic = 0; ic < gy.c; ++ic) {
                const T* g = gy.plane(in, ic);
                const T* src = x_.plane(in, ic);
                T* dst = gx.plane(in, ic);
                for (std::int64_t i = 0; i < m; ++i) {
                    dst[i] = g[i] * amap[i];
                    gmap[i] += g[i] * src[i];
                }
            }
        }
        Tensor<T> glogits = gate_.backward(ga);
        Tensor<T> gpooled = conv_.backward(glogits);
        Tensor<T> gx_pool = pool_.backward(gpooled);
        for (size_t i = 0; i < gx.v.size(); ++i) gx.v[i] += gx_pool.v[i];
        return gx;
    }

    void collect(std::vector<Param<T>*>& out) override { conv_.collect(out); }

  private:
    ChannelMaxMean<T> pool_;
    Conv2d<T> conv_;
    Sigmoid<T> gate_;
    Tensor<T> x_, a_;
};

// ---------------------------------------------------------------------------
// Sequential container.
// ---------------------------------------------------------------------------
template <typename T>
class Sequential : public Layer<T> {
  public:
    Sequential() = default;

    void add(std::unique_ptr<Layer<T>> layer) { layers_.push_back(std::move(layer)); }

    template <typename L, typename... Args>
    L* emplace(Args&&... args) {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L* raw = layer.get();
        layers_.push_back(std::move(layer));
        return raw;
    }

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        Tensor<T> cur = x;
        for (auto& l : layers_) cur = l->forward(cur, keep_ctx);
        return cur;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> cur = gy;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) cur = (*it)->backward(cur);
        return cur;
    }

    void collect(std::vector<Param<T>*>& out) override {
        for (auto& l : layers_) l->collect(out);
    }

    size_t size() const { return layers_.size(); }
    Layer<T>* at(size_t i) { return layers_[i].get(); }

  private:
    std::vector<std::unique_ptr<Layer<T>>> layers_;
};

// Total element count across a parameter set.
template <typename T>
std::int64_t param_count(const std::vector<Param<T>*>& params) {
    std::int64_t n = 0;
    for (const auto* p : params) n += p->size();
    return n;
}

}  // namespace wia::nn
