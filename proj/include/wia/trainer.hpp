#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wia/backbone.hpp"
#include "wia/checkpoint.hpp"
#include "wia/config.hpp"
#include "wia/fam.hpp"
#include "wia/image.hpp"
#include "wia/nn/adam.hpp"
#include "wia/nn/ssim.hpp"
#include "wia/nn/tensor.hpp"
#include "wia/rng.hpp"

namespace wia {

// L_pixel = MSE(x, y) + (1 - SSIM(x, y)) on normalized batches.
template <typename T>
class PixelLoss {
  public:
    struct Parts {
        double mse = 0.0;
        double ssim = 0.0;
        double total() const { return mse + 1.0 - ssim; }
    };

    Parts forward(const nn::Tensor<T>& x, const nn::Tensor<T>& y) {
        nn::check_same_shape(x, y, "pixel_loss");
        x_ = x;
        y_ = y;
        Parts p;
        double acc = 0.0;
        for (size_t i = 0; i < x.v.size(); ++i) {
            const double d = static_cast<double>(y.v[i]) - x.v[i];
            acc += d * d;
        }
        p.mse = acc / static_cast<double>(x.v.size());
        p.ssim = ssim_.forward(x, y);
        return p;
    }

    // Gradient of mse + (1 - ssim) with respect to y.
    nn::Tensor<T> backward_wrt_y() {
        nn::Tensor<T> gx, gy;
        ssim_.backward(T(-1), gx, gy);
        const T k = T(2) / static_cast<T>(x_.v.size());
        for (size_t i = 0; i < gy.v.size(); ++i) gy.v[i] += k * (y_.v[i] - x_.v[i]);
        return gy;
    }

  private:
    nn::SsimLoss<T> ssim_;
    nn::Tensor<T> x_, y_;
};

// Random horizontal/vertical flips and quarter turns, then a random
// even-aligned crop to (crop, crop). Draw order is fixed: flip-h, flip-v,
// quarter turns, row offset, column offset.
Image augment(const Image& img, int crop, CounterRng& rng);

// Mirror padding (no edge repetition) up to the next multiple along each
// axis; opt-in companion to the strict shape check in denoise.
Image pad_reflect_to_multiple(const Image& img, int multiple);

struct StepLosses {
    double mse = 0.0;
    double ssim = 0.0;
    double fam = 0.0;

    double pixel() const { return mse + 1.0 - ssim; }
};

class Trainer {
  public:
    explicit Trainer(const TrainConfig& cfg);

    // One alternating step: Phase A updates the backbone on
    // L_pixel + lambda * L_FAM (encoders frozen, gradient reaching the
    // network through the target encoder); Phase B refreshes the forward
    // pass and updates the online encoder on the frequency loss, then EMA.
    StepLosses train_step(const std::vector<Image>& batch);

    // Full loop: deterministic shuffling, per-step JSONL loss log,
    // resolved-config snapshot, periodic + final checkpoints.
    void fit(const std::vector<Image>& data, const std::string& out_dir);

    // normalize -> forward -> denormalize; no corruption at inference.
    Image denoise(const Image& img);
    // Reflect-pads to the backbone stride, denoises, crops back.
    Image denoise_padded(const Image& img);

    void save_checkpoint(const std::string& path);
    static std::unique_ptr<Trainer> from_checkpoint(const std::string& path);

    const TrainConfig& config() const { return cfg_; }
    std::int64_t global_step() const { return global_step_; }
    ResnetGenerator<float>& backbone() { return backbone_; }
    EncoderPair<float>& encoders() { return *pair_; }

  private:
    void load_state(const ckpt::Checkpoint& c);
    void zero_all_grads();

    TrainConfig cfg_;
    ResnetGenerator<float> backbone_;
    std::unique_ptr<EncoderPair<float>> pair_;
    PixelLoss<float> pixel_;
    FamLoss<float> fam_;
    FamStar<float> famstar_;
    std::unique_ptr<nn::Adam<float>> opt_g_;
    std::unique_ptr<nn::Adam<float>> opt_e_;
    std::int64_t global_step_ = 0;
};

}  // namespace wia
