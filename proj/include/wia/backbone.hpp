#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wia/error.hpp"
#include "wia/nn/layers.hpp"
#include "wia/rng.hpp"

namespace wia {

struct BackboneConfig {
    int in_channels = 1;
    int out_channels = 1;
    int base_channels = 64;
    int n_res_blocks = 9;
    int n_downsample = 2;
    bool tanh_output = true;

    void validate() const {
        if (in_channels < 1 || out_channels < 1) {
            throw Error(ErrorKind::ConfigError, "backbone: channel counts must be positive");
        }
        if (base_channels < 1) {
            throw Error(ErrorKind::ConfigError, "backbone: base_channels must be positive");
        }
        if (n_res_blocks < 1) {
            throw Error(ErrorKind::ConfigError, "backbone: n_res_blocks must be positive");
        }
        if (n_downsample < 1 || n_downsample > 3) {
            throw Error(ErrorKind::ConfigError, "backbone: n_downsample must be in [1, 3]");
        }
    }

    int stride_total() const { return 1 << n_downsample; }
};

namespace nn {

// Residual block: reflect-padded 3x3 conv pair with instance norm, identity
// skip, and no activation after the addition.
template <typename T>
class ResBlock : public Layer<T> {
  public:
    ResBlock(const std::string& name, int channels, CounterRng& rng) {
        body_.template emplace<ReflectionPad2d<T>>(1);
        body_.template emplace<Conv2d<T>>(name + ".conv1", channels, channels, 3, 1, 0, rng);
        body_.template emplace<InstanceNorm2d<T>>();
        body_.template emplace<ReLU<T>>();
        body_.template emplace<ReflectionPad2d<T>>(1);
        body_.template emplace<Conv2d<T>>(name + ".conv2", channels, channels, 3, 1, 0, rng);
        body_.template emplace<InstanceNorm2d<T>>();
    }

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) override {
        Tensor<T> y = body_.forward(x, keep_ctx);
        for (size_t i = 0; i < y.v.size(); ++i) y.v[i] += x.v[i];
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> gx = body_.backward(gy);
        for (size_t i = 0; i < gx.v.size(); ++i) gx.v[i] += gy.v[i];
        return gx;
    }

    void collect(std::vector<Param<T>*>& out) override { body_.collect(out); }

  private:
    Sequential<T> body_;
};

}  // namespace nn

// Residual-block encoder/decoder generator. Layout: 7x7 entry conv (reflect
// pad), stride-2 downsampling convs, residual trunk, nearest-upsample + conv
// decoder, 7x7 exit conv, optional tanh. Instance norms carry no learned
// scale/shift; every conv keeps its bias, weights start from N(0, 0.02).
template <typename T>
class ResnetGenerator {
  public:
    ResnetGenerator(const BackboneConfig& cfg, std::uint64_t init_seed) : cfg_(cfg) {
        cfg_.validate();
        CounterRng rng({init_seed, 0x6261636b6e657400ull});
        net_.template emplace<nn::ReflectionPad2d<T>>(3);
        net_.template emplace<nn::Conv2d<T>>("g.entry.conv", cfg_.in_channels, cfg_.base_channels,
                                             7, 1, 0, rng);
        net_.template emplace<nn::InstanceNorm2d<T>>();
        net_.template emplace<nn::ReLU<T>>();

        int c = cfg_.base_channels;
        for (int i = 0; i < cfg_.n_downsample; ++i) {
            net_.template emplace<nn::Conv2d<T>>("g.down" + std::to_string(i + 1) + ".conv", c,
                                                 c * 2, 3, 2, 1, rng);
            net_.template emplace<nn::InstanceNorm2d<T>>();
            net_.template emplace<nn::ReLU<T>>();
            c *= 2;
        }

        for (int i = 0; i < cfg_.n_res_blocks; ++i) {
            net_.template emplace<nn::ResBlock<T>>("g.res" + std::to_string(i + 1), c, rng);
        }

        for (int i = 0; i < cfg_.n_downsample; ++i) {
            net_.template emplace<nn::UpsampleNearest2x<T>>();
            net_.template emplace<nn::Conv2d<T>>("g.up" + std::to_string(i + 1) + ".conv", c, c / 2,
                                                 3, 1, 1, rng);
            net_.template emplace<nn::InstanceNorm2d<T>>();
            net_.template emplace<nn::ReLU<T>>();
            c /= 2;
        }

        net_.template emplace<nn::ReflectionPad2d<T>>(3);
        net_.template emplace<nn::Conv2d<T>>("g.exit.conv", c, cfg_.out_channels, 7, 1, 0, rng);
        if (cfg_.tanh_output) net_.template emplace<nn::Tanh<T>>();

        net_.collect(params_);
    }

    nn::Tensor<T> forward(const nn::Tensor<T>& x, bool keep_ctx = true) {
        const int s = cfg_.stride_total();
        if (x.h % s != 0 || x.w % s != 0) {
            throw Error(ErrorKind::ShapeError,
                        "backbone: input dims must be multiples of " + std::to_string(s));
        }
        if (x.c != cfg_.in_channels) {
            throw Error(ErrorKind::ShapeMismatch, "backbone: input channel mismatch");
        }
        return net_.forward(x, keep_ctx);
    }

    nn::Tensor<T> backward(const nn::Tensor<T>& gy) { return net_.backward(gy); }

    std::vector<nn::Param<T>*>& params() { return params_; }

    std::int64_t param_count() const {
        std::int64_t n = 0;
        for (const auto* p : params_) n += p->size();
        return n;
    }

    const BackboneConfig& config() const { return cfg_; }

  private:
    BackboneConfig cfg_;
    nn::Sequential<T> net_;
    std::vector<nn::Param<T>*> params_;
};

}  // namespace wia
