#include "wia/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "wia/nn/dwt.hpp"
#include "wia/wia.hpp"

namespace wia {

namespace {

namespace fs = std::filesystem;

// Stream tags for counter-based randomness; stable across versions.
constexpr std::uint64_t kStreamAugment = 0xa46u;
constexpr std::uint64_t kStreamShuffle = 0x5f1eu;

Image flip_h(const Image& img) {
    Image out = img;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) out.at(r, c) = img.at(r, img.width - 1 - c);
    }
    return out;
}

Image flip_v(const Image& img) {
    Image out = img;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) out.at(r, c) = img.at(img.height - 1 - r, c);
    }
    return out;
}

Image rot90(const Image& img) {  // clockwise quarter turn
    Image out(img.width, img.height, img.range_min, img.range_max, img.id);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) out.at(c, img.height - 1 - r) = img.at(r, c);
    }
    return out;
}

nn::Tensor<float> stack_images(const std::vector<Image>& imgs) {
    nn::Tensor<float> t(static_cast<int>(imgs.size()), 1, imgs[0].height, imgs[0].width);
    for (size_t s = 0; s < imgs.size(); ++s) {
        float* dst = t.plane(static_cast<int>(s), 0);
        for (size_t i = 0; i < imgs[s].data.size(); ++i) dst[i] = static_cast<float>(imgs[s].data[i]);
    }
    return t;
}

Image image_from_plane(const nn::Tensor<float>& t, int sample, double rmin, double rmax,
                       const std::string& id) {
    Image out(t.h, t.w, rmin, rmax, id);
    const float* src = t.plane(sample, 0);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = src[i];
    return out;
}

}  // namespace

Image augment(const Image& img, int crop, CounterRng& rng) {
    const bool fh = rng.next_below(2) == 1;
    const bool fv = rng.next_below(2) == 1;
    const int quarter = static_cast<int>(rng.next_below(4));

    Image cur = img;
    if (fh) cur = flip_h(cur);
    if (fv) cur = flip_v(cur);
    for (int k = 0; k < quarter; ++k) cur = rot90(cur);

    if (crop > cur.height || crop > cur.width) {
        throw Error(ErrorKind::CropTooLarge, "crop " + std::to_string(crop) +
                                                 " exceeds image dims " + std::to_string(cur.height) +
                                                 "x" + std::to_string(cur.width));
    }
    const int oy = 2 * static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cur.height - crop) / 2 + 1));
    const int ox = 2 * static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cur.width - crop) / 2 + 1));
    Image out(crop, crop, cur.range_min, cur.range_max, cur.id);
    for (int r = 0; r < crop; ++r) {
        for (int c = 0; c < crop; ++c) out.at(r, c) = cur.at(oy + r, ox + c);
    }
    return out;
}

Image pad_reflect_to_multiple(const Image& img, int multiple) {
    if (multiple < 1) throw Error(ErrorKind::InvalidArgument, "pad multiple must be >= 1");
    const int ph = (multiple - img.height % multiple) % multiple;
    const int pw = (multiple - img.width % multiple) % multiple;
    if (ph == 0 && pw == 0) return img;
    if (ph >= img.height || pw >= img.width) {
        throw Error(ErrorKind::TooSmall, "image too small to reflect-pad to multiple");
    }
    Image out(img.height + ph, img.width + pw, img.range_min, img.range_max, img.id);
    for (int r = 0; r < out.height; ++r) {
        const int sr = r < img.height ? r : 2 * img.height - 2 - r;
        for (int c = 0; c < out.width; ++c) {
            const int sc = c < img.width ? c : 2 * img.width - 2 - c;
            out.at(r, c) = img.at(sr, sc);
        }
    }
    return out;
}

Trainer::Trainer(const TrainConfig& cfg)
    : cfg_(cfg), backbone_(cfg.backbone, cfg.seed), fam_(cfg.encoder) {
    cfg_.validate();
    pair_ = std::make_unique<EncoderPair<float>>(cfg_.encoder, cfg_.seed, cfg_.ema_momentum);
    opt_g_ = std::make_unique<nn::Adam<float>>(backbone_.params(), cfg_.lr, cfg_.adam_beta1,
                                               cfg_.adam_beta2);
    opt_e_ = std::make_unique<nn::Adam<float>>(pair_->online.params(), cfg_.lr, cfg_.adam_beta1,
                                               cfg_.adam_beta2);
}

void Trainer::zero_all_grads() {
    for (auto* p : backbone_.params()) p->zero_grad();
    pair_->online.zero_grad();
    pair_->target.zero_grad();
}

StepLosses Trainer::train_step(const std::vector<Image>& batch) {
    if (batch.empty()) throw Error(ErrorKind::FormatError, "empty training batch");
    const int S = static_cast<int>(batch.size());

    NoiseConfig noise = cfg_.noise;
    noise.seed = cfg_.noise_seed();

    std::vector<Image> clean, inputs;
    clean.reserve(S);
    inputs.reserve(S);
    for (int s = 0; s < S; ++s) {
        CounterRng arng({cfg_.seed, kStreamAugment, static_cast<std::uint64_t>(global_step_),
                         static_cast<std::uint64_t>(s)});
        Image aug = augment(batch[s], cfg_.crop, arng);
        const std::uint64_t draw =
            static_cast<std::uint64_t>(global_step_) * static_cast<std::uint64_t>(S) +
            static_cast<std::uint64_t>(s);

        Image corrupted;
        if (mode_uses_wia(cfg_.mode)) {
            corrupted = corrupt(aug, noise, draw);
        } else if (mode_uses_direct_noise(cfg_.mode)) {
            corrupted = corrupt_direct(aug, noise.pixel_residual_std(), noise.seed, draw);
        } else {
            corrupted = aug;
        }
        clean.push_back(normalize(aug));
        inputs.push_back(normalize(corrupted, aug.range_min, aug.range_max));
    }

    nn::Tensor<float> x = stack_images(clean);
    nn::Tensor<float> xp = stack_images(inputs);

    // ---- Phase A: backbone update, encoders frozen ----
    nn::Tensor<float> y = backbone_.forward(xp, true);
    const PixelLoss<float>::Parts parts = pixel_.forward(x, y);
    nn::Tensor<float> gy = pixel_.backward_wrt_y();

    double famv = 0.0;
    nn::Tensor<float> hfx;
    const bool apply_fam = cfg_.lambda_fam > 0.0;
    if (mode_uses_fam(cfg_.mode)) {
        hfx = nn::dwt_highfreq(x);
        nn::Tensor<float> hfy = nn::dwt_highfreq(y);
        famv = fam_.forward(pair_->online, pair_->target, hfx, hfy,
                            apply_fam ? FamLoss<float>::Grad::kTargetInput
                                      : FamLoss<float>::Grad::kNone);
        if (apply_fam) {
            nn::Tensor<float> ghf = fam_.backward_to_target_input(pair_->target);
            nn::Tensor<float> gyf = nn::dwt_highfreq_adjoint(ghf);
            const float lam = static_cast<float>(cfg_.lambda_fam);
            for (size_t i = 0; i < gy.v.size(); ++i) gy.v[i] += lam * gyf.v[i];
        }
    } else if (mode_uses_fam_star(cfg_.mode)) {
        hfx = nn::dwt_highfreq(x);
        nn::Tensor<float> hfy = nn::dwt_highfreq(y);
        famv = famstar_.forward(pair_->online, hfx, hfy,
                                apply_fam ? FamStar<float>::Grad::kYInput
                                          : FamStar<float>::Grad::kNone);
        if (apply_fam) {
            nn::Tensor<float> ghf = famstar_.backward_to_y_input(pair_->online);
            nn::Tensor<float> gyf = nn::dwt_highfreq_adjoint(ghf);
            const float lam = static_cast<float>(cfg_.lambda_fam);
            for (size_t i = 0; i < gy.v.size(); ++i) gy.v[i] += lam * gyf.v[i];
        }
    }

    if (!std::isfinite(parts.mse) || !std::isfinite(parts.ssim) || !std::isfinite(famv)) {
        throw Error(ErrorKind::NonFiniteLoss,
                    "non-finite loss at step " + std::to_string(global_step_) + " (mse=" +
                        std::to_string(parts.mse) + ", ssim=" + std::to_string(parts.ssim) +
                        ", fam=" + std::to_string(famv) + ")");
    }

    backbone_.backward(gy);
    opt_g_->step();
    zero_all_grads();

    // ---- Phase B: online-encoder update on a fresh forward pass ----
    if (mode_has_phase_b(cfg_.mode)) {
        nn::Tensor<float> y2 = backbone_.forward(xp, false);
        nn::Tensor<float> hfy2 = nn::dwt_highfreq(y2);
        if (mode_uses_fam(cfg_.mode)) {
            fam_.forward(pair_->online, pair_->target, hfx, hfy2,
                         FamLoss<float>::Grad::kOnlineParams);
            fam_.backward_to_online_params(pair_->online);
        } else {
            famstar_.forward(pair_->online, hfx, hfy2, FamStar<float>::Grad::kParams);
            famstar_.backward_to_params(pair_->online);
        }
        opt_e_->step();
        zero_all_grads();
        pair_->ema_update();
    }

    ++global_step_;
    StepLosses out;
    out.mse = parts.mse;
    out.ssim = parts.ssim;
    out.fam = famv;
    return out;
}

void Trainer::fit(const std::vector<Image>& data, const std::string& out_dir) {
    if (data.empty()) throw Error(ErrorKind::FormatError, "training dataset is empty");
    fs::create_directories(out_dir);

    {
        std::ofstream cf(fs::path(out_dir) / "resolved_config.json");
        if (!cf) throw Error(ErrorKind::IoError, "cannot write resolved config in " + out_dir);
        cf << cfg_.to_json().dump(2) << "\n";
    }

    std::ofstream log(fs::path(out_dir) / "loss.log");
    if (!log) throw Error(ErrorKind::IoError, "cannot write loss log in " + out_dir);

    const int n = static_cast<int>(data.size());
    const int steps_per_epoch = (n + cfg_.batch_size - 1) / cfg_.batch_size;

    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        CounterRng srng({cfg_.seed, kStreamShuffle, static_cast<std::uint64_t>(epoch)});
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(srng.next_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(perm[i], perm[j]);
        }

        for (int step = 0; step < steps_per_epoch; ++step) {
            std::vector<Image> batch;
            batch.reserve(cfg_.batch_size);
            for (int slot = 0; slot < cfg_.batch_size; ++slot) {
                batch.push_back(data[perm[(step * cfg_.batch_size + slot) % n]]);
            }
            const std::int64_t step_id = global_step_;
            StepLosses losses;
            try {
                losses = train_step(batch);
            } catch (const Error&) {
                log.flush();
                throw;  // fit aborts; the last written checkpoint stays on disk
            }
            nlohmann::json line = {{"step", step_id},
                                   {"epoch", epoch},
                                   {"l_pixel", losses.pixel()},
                                   {"l_mse", losses.mse},
                                   {"l_ssim", losses.ssim},
                                   {"l_fam", losses.fam},
                                   {"lr", cfg_.lr}};
            log << line.dump() << "\n";
        }

        if (cfg_.checkpoint_every > 0 && (epoch + 1) % cfg_.checkpoint_every == 0) {
            save_checkpoint((fs::path(out_dir) / ("epoch_" + std::to_string(epoch + 1) + ".ckpt"))
                                .string());
        }
    }
    save_checkpoint((fs::path(out_dir) / "final.ckpt").string());
}

Image Trainer::denoise(const Image& img) {
    const int s = cfg_.backbone.stride_total();
    if (img.height % s != 0 || img.width % s != 0) {
        throw Error(ErrorKind::ShapeError,
                    "image dims must be multiples of " + std::to_string(s) +
                        " for inference (reflect-pad helper available via pad option)");
    }
    Image norm = normalize(img);
    nn::Tensor<float> t = stack_images({norm});
    nn::Tensor<float> y = backbone_.forward(t, false);
    Image out = image_from_plane(y, 0, -1.0, 1.0, img.id);
    out = denormalize(out, img.range_min, img.range_max);
    out.id = img.id;
    return out;
}

Image Trainer::denoise_padded(const Image& img) {
    const int s = cfg_.backbone.stride_total();
    Image padded = pad_reflect_to_multiple(img, s);
    Image den = denoise(padded);
    if (padded.height == img.height && padded.width == img.width) return den;
    Image out(img.height, img.width, img.range_min, img.range_max, img.id);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) out.at(r, c) = den.at(r, c);
    }
    return out;
}

void Trainer::save_checkpoint(const std::string& path) {
    ckpt::Checkpoint c;
    c.meta["format"] = "1";
    c.meta["global_step"] = std::to_string(global_step_);
    c.meta["adam_t_backbone"] = std::to_string(opt_g_->step_count());
    c.meta["adam_t_online"] = std::to_string(opt_e_->step_count());
    c.meta["config"] = cfg_.to_json().dump();

    for (const auto* p : backbone_.params()) c.add(p->name, p->shape, p->w.data());
    for (const auto* p : pair_->online.params()) c.add("online." + p->name, p->shape, p->w.data());
    for (const auto* p : pair_->target.params()) c.add("target." + p->name, p->shape, p->w.data());
    for (size_t i = 0; i < opt_g_->slots(); ++i) {
        const auto& p = opt_g_->param(i);
        c.add("opt.g." + p.name + ".m", p.shape, opt_g_->moment_m(i).data());
        c.add("opt.g." + p.name + ".v", p.shape, opt_g_->moment_v(i).data());
    }
    for (size_t i = 0; i < opt_e_->slots(); ++i) {
        const auto& p = opt_e_->param(i);
        c.add("opt.e." + p.name + ".m", p.shape, opt_e_->moment_m(i).data());
        c.add("opt.e." + p.name + ".v", p.shape, opt_e_->moment_v(i).data());
    }
    c.save(path);
}

namespace {

void restore_params(const ckpt::Checkpoint& c, const std::string& prefix,
                    std::vector<nn::Param<float>*>& params) {
    for (auto* p : params) {
        const ckpt::TensorRecord* rec = c.find(prefix + p->name);
        if (!rec) {
            throw Error(ErrorKind::FormatError, "checkpoint missing tensor: " + prefix + p->name);
        }
        if (rec->data.size() != p->w.size()) {
            throw Error(ErrorKind::FormatError, "checkpoint tensor size mismatch: " + rec->name);
        }
        p->w = rec->data;
    }
}

void restore_moments(const ckpt::Checkpoint& c, const std::string& prefix, nn::Adam<float>& opt) {
    for (size_t i = 0; i < opt.slots(); ++i) {
        const auto& p = opt.param(i);
        const ckpt::TensorRecord* m = c.find(prefix + p.name + ".m");
        const ckpt::TensorRecord* v = c.find(prefix + p.name + ".v");
        if (!m || !v || m->data.size() != p.w.size() || v->data.size() != p.w.size()) {
            throw Error(ErrorKind::FormatError, "checkpoint optimizer state mismatch: " + p.name);
        }
        opt.moment_m(i) = m->data;
        opt.moment_v(i) = v->data;
    }
}

}  // namespace

void Trainer::load_state(const ckpt::Checkpoint& c) {
    restore_params(c, "", backbone_.params());
    restore_params(c, "online.", pair_->online.params());
    restore_params(c, "target.", pair_->target.params());
    restore_moments(c, "opt.g.", *opt_g_);
    restore_moments(c, "opt.e.", *opt_e_);
    try {
        global_step_ = std::stoll(c.meta.at("global_step"));
        opt_g_->set_step_count(std::stoll(c.meta.at("adam_t_backbone")));
        opt_e_->set_step_count(std::stoll(c.meta.at("adam_t_online")));
    } catch (const std::exception&) {
        throw Error(ErrorKind::FormatError, "checkpoint meta incomplete or malformed");
    }
}

std::unique_ptr<Trainer> Trainer::from_checkpoint(const std::string& path) {
    ckpt::Checkpoint c = ckpt::Checkpoint::load(path);
    auto it = c.meta.find("config");
    if (it == c.meta.end()) {
        throw Error(ErrorKind::FormatError, "checkpoint has no embedded config");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(it->second);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::FormatError, std::string("checkpoint config unparsable: ") + e.what());
    }
    auto trainer = std::make_unique<Trainer>(TrainConfig::from_json(j));
    trainer->load_state(c);
    return trainer;
}

}  // namespace wia
