#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wia/error.hpp"
#include "wia/nn/adam.hpp"
#include "wia/nn/layers.hpp"
#include "wia/nn/tensor.hpp"
#include "wia/rng.hpp"

namespace wia {

struct EncoderConfig {
    std::vector<int> stage_channels = {32, 64, 128};
    int patch_grid = 8;
    int top_k = 4;
    int mlp_hidden = 0;  // 0 -> use the stage's channel count

    void validate() const {
        if (stage_channels.size() != 3) {
            throw Error(ErrorKind::ConfigError, "encoder: stage_channels must list 3 values");
        }
        for (int c : stage_channels) {
            if (c < 1) throw Error(ErrorKind::ConfigError, "encoder: stage channels must be positive");
        }
        if (patch_grid < 1) throw Error(ErrorKind::ConfigError, "encoder: patch_grid must be positive");
        if (top_k < 1 || top_k > 8) {
            throw Error(ErrorKind::ConfigError, "encoder: top_k must be in [1, 8]");
        }
        if (mlp_hidden < 0) throw Error(ErrorKind::ConfigError, "encoder: mlp_hidden must be >= 0");
    }

    int hidden_for(int stage) const { return mlp_hidden > 0 ? mlp_hidden : stage_channels[stage]; }
};

namespace nn {

// Two-layer MLP head (C -> hidden -> C) with ReLU between layers, applied to
// (n, C, 1, 1) pooled vectors.
template <typename T>
class Mlp {
  public:
    Mlp(const std::string& name, int c, int hidden, CounterRng& rng)
        : fc1_(name + ".fc1", c, hidden, rng), fc2_(name + ".fc2", hidden, c, rng) {}

    Tensor<T> forward(const Tensor<T>& x, bool keep_ctx = true) {
        return fc2_.forward(relu_.forward(fc1_.forward(x, keep_ctx), keep_ctx), keep_ctx);
    }
    Tensor<T> backward(const Tensor<T>& gy) {
        return fc1_.backward(relu_.backward(fc2_.backward(gy)));
    }
    void collect(std::vector<Param<T>*>& out) {
        fc1_.collect(out);
        fc2_.collect(out);
    }
    Linear<T>& fc1() { return fc1_; }
    Linear<T>& fc2() { return fc2_; }

  private:
    Linear<T> fc1_;
    ReLU<T> relu_;
    Linear<T> fc2_;
};

}  // namespace nn

// ---------------------------------------------------------------------------
// Patch utilities (grid split, cosine similarity, neighbor selection, GAP).
// ---------------------------------------------------------------------------

// Splits a (1, C, H, W) feature map into G*G non-overlapping patches in
// row-major grid order.
template <typename T>
std::vector<nn::Tensor<T>> split_patches(const nn::Tensor<T>& f, int grid) {
    if (f.n != 1) throw Error(ErrorKind::ShapeError, "split_patches: expected a single sample");
    if (grid < 1 || f.h % grid != 0 || f.w % grid != 0) {
        throw Error(ErrorKind::IndivisibleGrid, "split_patches: dims not divisible by grid");
    }
    const int ph = f.h / grid, pw = f.w / grid;
    std::vector<nn::Tensor<T>> out;
    out.reserve(static_cast<size_t>(grid) * grid);
    for (int r = 0; r < grid; ++r) {
        for (int c = 0; c < grid; ++c) {
            nn::Tensor<T> p(1, f.c, ph, pw);
            for (int ic = 0; ic < f.c; ++ic) {
                for (int y = 0; y < ph; ++y) {
                    for (int x = 0; x < pw; ++x) {
                        p.at(0, ic, y, x) = f.at(0, ic, r * ph + y, c * pw + x);
                    }
                }
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

// Cosine similarity with a degenerate-vector rule: any norm below 1e-12 maps
// to similarity 0.
template <typename T>
double cosine_sim(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "cosine_sim: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    if (na < 1e-12 || nb < 1e-12) return 0.0;
    return dot / (na * nb);
}

// 8-connected grid neighbors of a patch, ascending row-major index.
inline std::vector<int> grid_neighbors(int grid, int anchor) {
    const int r = anchor / grid, c = anchor % grid;
    std::vector<int> out;
    for (int nr = r - 1; nr <= r + 1; ++nr) {
        for (int nc = c - 1; nc <= c + 1; ++nc) {
            if (nr < 0 || nr >= grid || nc < 0 || nc >= grid) continue;
            if (nr == r && nc == c) continue;
            out.push_back(nr * grid + nc);
        }
    }
    return out;
}

// Top-k most similar 8-connected neighbors of the anchor; ties resolved in
// favor of the lower row-major index, anchor itself never included.
template <typename T>
std::vector<int> select_positive_set(const std::vector<std::vector<T>>& patch_vecs, int grid,
                                     int anchor, int top_k) {
    const std::vector<int> pool = grid_neighbors(grid, anchor);
    std::vector<std::pair<double, int>> scored;
    scored.reserve(pool.size());
    for (int j : pool) scored.emplace_back(cosine_sim(patch_vecs[anchor], patch_vecs[j]), j);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    const size_t take = std::min<size_t>(static_cast<size_t>(top_k), scored.size());
    std::vector<int> out(take);
    for (size_t i = 0; i < take; ++i) out[i] = scored[i].second;
    return out;
}

// Global average pool of a (1, C, ph, pw) patch -> C-vector.
template <typename T>
std::vector<T> patch_gap(const nn::Tensor<T>& patch) {
    std::vector<T> out(static_cast<size_t>(patch.c));
    const std::int64_t m = static_cast<std::int64_t>(patch.h) * patch.w;
    for (int c = 0; c < patch.c; ++c) {
        double acc = 0.0;
        const T* p = patch.plane(0, c);
        for (std::int64_t i = 0; i < m; ++i) acc += p[i];
        out[c] = static_cast<T>(acc / static_cast<double>(m));
    }
    return out;
}

// Mean of the selected per-patch GAP vectors pushed through the MLP head.
template <typename T>
std::vector<T> aggregate(const std::vector<std::vector<T>>& gaps, const std::vector<int>& positive,
                         nn::Mlp<T>& mlp) {
    if (positive.empty()) throw Error(ErrorKind::EmptyPositiveSet, "aggregate: empty positive set");
    const int c = static_cast<int>(gaps[0].size());
    nn::Tensor<T> u(1, c, 1, 1);
    for (int j : positive) {
        for (int i = 0; i < c; ++i) u.v[i] += gaps[j][i];
    }
    for (int i = 0; i < c; ++i) u.v[i] /= static_cast<T>(positive.size());
    nn::Tensor<T> g = mlp.forward(u, false);
    return g.v;
}

// ---------------------------------------------------------------------------
// Frequency encoder: three conv stages at strides 1/2/4 over the [LH, HL, HH]
// stack, spatial attention closing each stage, plus per-scale MLP heads.
// ---------------------------------------------------------------------------
template <typename T>
class FreqEncoder {
  public:
    FreqEncoder(const EncoderConfig& cfg, std::uint64_t seed, const std::string& prefix = "enc")
        : cfg_(cfg) {
        cfg_.validate();
        CounterRng rng({seed, 0x66616d656e630000ull});
        int cin = 3;
        for (int s = 0; s < 3; ++s) {
            const int cout = cfg_.stage_channels[s];
            const int stride = s == 0 ? 1 : 2;
            const std::string name = prefix + ".s" + std::to_string(s + 1);
            stages_[s].template emplace<nn::Conv2d<T>>(name + ".conv1", cin, cout, 3, stride, 1, rng);
            stages_[s].template emplace<nn::InstanceNorm2d<T>>();
            stages_[s].template emplace<nn::ReLU<T>>();
            stages_[s].template emplace<nn::Conv2d<T>>(name + ".conv2", cout, cout, 3, 1, 1, rng);
            stages_[s].template emplace<nn::InstanceNorm2d<T>>();
            stages_[s].template emplace<nn::ReLU<T>>();
            stages_[s].template emplace<nn::SpatialAttention<T>>(name + ".attn", rng);
            mlps_[s] = std::make_unique<nn::Mlp<T>>(prefix + ".mlp" + std::to_string(s + 1), cout,
                                                    cfg_.hidden_for(s), rng);
            cin = cout;
        }
        for (auto& st : stages_) st.collect(params_);
        for (auto& m : mlps_) m->collect(params_);
    }

    // Three post-attention feature maps at strides 1, 2, 4 relative to hf.
    std::array<nn::Tensor<T>, 3> encode(const nn::Tensor<T>& hf, bool keep_ctx = true) {
        if (hf.c != 3) throw Error(ErrorKind::ShapeError, "encoder: expected 3-channel input");
        if (hf.h % 4 != 0 || hf.w % 4 != 0) {
            throw Error(ErrorKind::ShapeError, "encoder: dims must be multiples of 4");
        }
        std::array<nn::Tensor<T>, 3> out;
        nn::Tensor<T> cur = hf;
        for (int s = 0; s < 3; ++s) {
            cur = stages_[s].forward(cur, keep_ctx);
            out[s] = cur;
        }
        return out;
    }

    // Accumulates parameter gradients; returns the gradient w.r.t. hf.
    nn::Tensor<T> encode_backward(const std::array<nn::Tensor<T>, 3>& gf) {
        nn::Tensor<T> g = stages_[2].backward(gf[2]);
        for (size_t i = 0; i < g.v.size(); ++i) g.v[i] += gf[1].v[i];
        g = stages_[1].backward(g);
        for (size_t i = 0; i < g.v.size(); ++i) g.v[i] += gf[0].v[i];
        return stages_[0].backward(g);
    }

    nn::Tensor<T> mlp_forward(int scale, const nn::Tensor<T>& v, bool keep_ctx = true) {
        return mlps_[scale]->forward(v, keep_ctx);
    }
    nn::Tensor<T> mlp_backward(int scale, const nn::Tensor<T>& gv) {
        return mlps_[scale]->backward(gv);
    }
    nn::Mlp<T>& mlp(int scale) { return *mlps_[scale]; }

    std::vector<nn::Param<T>*>& params() { return params_; }
    const EncoderConfig& config() const { return cfg_; }

    void zero_grad() {
        for (auto* p : params_) p->zero_grad();
    }

  private:
    EncoderConfig cfg_;
    std::array<nn::Sequential<T>, 3> stages_;
    std::array<std::unique_ptr<nn::Mlp<T>>, 3> mlps_;
    std::vector<nn::Param<T>*> params_;
};

// Online/target encoder pair. The target starts as an exact copy and follows
// the online parameters by exponential moving average only.
template <typename T>
class EncoderPair {
  public:
    EncoderPair(const EncoderConfig& cfg, std::uint64_t seed, double momentum)
        : online(cfg, seed, "enc"), target(cfg, seed, "enc"), momentum_(momentum) {
        if (momentum < 0.0 || momentum > 1.0) {
            throw Error(ErrorKind::ConfigError, "encoder pair: momentum must be in [0, 1]");
        }
        for (size_t i = 0; i < online.params().size(); ++i) {
            target.params()[i]->w = online.params()[i]->w;
        }
    }

    // target <- m * target + (1 - m) * online, every parameter element.
    void ema_update() {
        for (size_t i = 0; i < online.params().size(); ++i) {
            auto& tw = target.params()[i]->w;
            const auto& ow = online.params()[i]->w;
            for (size_t j = 0; j < tw.size(); ++j) {
                tw[j] = static_cast<T>(momentum_ * tw[j] + (1.0 - momentum_) * ow[j]);
            }
        }
    }

    double momentum() const { return momentum_; }

    FreqEncoder<T> online;
    FreqEncoder<T> target;

  private:
    double momentum_;
};

// ---------------------------------------------------------------------------
// L_FAM: anchors over a G x G patch grid at each scale; positive sets chosen
// on the online features of hf_x and re-used for the target features of hf_y;
// per-anchor squared distance between the MLP-aggregated descriptors,
// averaged over (sample, scale, anchor).
// ---------------------------------------------------------------------------
template <typename T>
class FamLoss {
  public:
    enum class Grad { kNone, kTargetInput, kOnlineParams };

    explicit FamLoss(const EncoderConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

    T forward(FreqEncoder<T>& online, FreqEncoder<T>& target, const nn::Tensor<T>& hf_x,
              const nn::Tensor<T>& hf_y, Grad side = Grad::kNone) {
        nn::check_same_shape(hf_x, hf_y, "fam_loss");
        side_ = side;
        S_ = hf_x.n;
        G_ = cfg_.patch_grid;
        A_ = G_ * G_;

        auto fx = online.encode(hf_x, side == Grad::kOnlineParams);
        auto fy = target.encode(hf_y, side == Grad::kTargetInput);

        double total = 0.0;
        for (int n = 0; n < 3; ++n) {
            ScaleCtx& sc = scales_[n];
            const nn::Tensor<T>& F = fx[n];
            const nn::Tensor<T>& Fp = fy[n];
            if (F.h % G_ != 0 || F.w % G_ != 0) {
                throw Error(ErrorKind::IndivisibleGrid,
                            "fam_loss: feature dims not divisible by patch grid");
            }
            sc.C = F.c;
            sc.H = F.h;
            sc.W = F.w;
            sc.ph = F.h / G_;
            sc.pw = F.w / G_;

            // Per-patch GAP for both streams and flattened online patches for
            // the similarity selection.
            std::vector<T> gap_on(static_cast<size_t>(S_) * A_ * sc.C);
            std::vector<T> gap_tg(gap_on.size());
            compute_gap(F, sc, gap_on.data());
            compute_gap(Fp, sc, gap_tg.data());

            sc.psel.assign(static_cast<size_t>(S_) * A_, {});
            const std::int64_t flat = static_cast<std::int64_t>(sc.C) * sc.ph * sc.pw;
            std::vector<std::vector<T>> vecs(static_cast<size_t>(A_),
                                             std::vector<T>(static_cast<size_t>(flat)));
            for (int s = 0; s < S_; ++s) {
                extract_patch_vectors(F, sc, s, vecs);
                for (int j = 0; j < A_; ++j) {
                    sc.psel[static_cast<size_t>(s) * A_ + j] =
                        select_positive_set(vecs, G_, j, cfg_.top_k);
                }
            }

            // Mean GAP over each anchor's positive set, both streams.
            nn::Tensor<T> ubar(S_ * A_, sc.C, 1, 1);
            nn::Tensor<T> vbar(S_ * A_, sc.C, 1, 1);
            for (int s = 0; s < S_; ++s) {
                for (int j = 0; j < A_; ++j) {
                    const auto& pos = sc.psel[static_cast<size_t>(s) * A_ + j];
                    T* u = ubar.v.data() + static_cast<size_t>(s * A_ + j) * sc.C;
                    T* v = vbar.v.data() + static_cast<size_t>(s * A_ + j) * sc.C;
                    for (int p : pos) {
                        const T* go = gap_on.data() + (static_cast<size_t>(s) * A_ + p) * sc.C;
                        const T* gt = gap_tg.data() + (static_cast<size_t>(s) * A_ + p) * sc.C;
                        for (int c = 0; c < sc.C; ++c) {
                            u[c] += go[c];
                            v[c] += gt[c];
                        }
                    }
                    for (int c = 0; c < sc.C; ++c) {
                        u[c] /= static_cast<T>(pos.size());
                        v[c] /= static_cast<T>(pos.size());
                    }
                }
            }

            sc.g_on = online.mlp_forward(n, ubar, side == Grad::kOnlineParams);
            sc.g_tg = target.mlp_forward(n, vbar, side == Grad::kTargetInput);
            for (size_t i = 0; i < sc.g_on.v.size(); ++i) {
                const double d = static_cast<double>(sc.g_on.v[i]) - sc.g_tg.v[i];
                total += d * d;
            }
        }
        norm_ = static_cast<double>(S_) * 3.0 * A_;
        loss_ = total / norm_;
        return static_cast<T>(loss_);
    }

    // Gradient w.r.t. hf_y through the target encoder (its parameters pick up
    // gradient accumulation as a side effect; callers zero what they own).
    nn::Tensor<T> backward_to_target_input(FreqEncoder<T>& target) {
        if (side_ != Grad::kTargetInput) {
            throw Error(ErrorKind::InvalidArgument, "fam_loss: forward did not keep target context");
        }
        std::array<nn::Tensor<T>, 3> gf;
        for (int n = 0; n < 3; ++n) {
            ScaleCtx& sc = scales_[n];
            nn::Tensor<T> gg(S_ * A_, sc.C, 1, 1);
            for (size_t i = 0; i < gg.v.size(); ++i) {
                gg.v[i] = static_cast<T>(2.0 * (sc.g_tg.v[i] - sc.g_on.v[i]) / norm_);
            }
            nn::Tensor<T> gvbar = target.mlp_backward(n, gg);
            gf[n] = distribute_and_unpool(sc, gvbar);
        }
        return target.encode_backward(gf);
    }

    // Accumulates gradients into the online encoder's parameters.
    void backward_to_online_params(FreqEncoder<T>& online) {
        if (side_ != Grad::kOnlineParams) {
            throw Error(ErrorKind::InvalidArgument, "fam_loss: forward did not keep online context");
        }
        std::array<nn::Tensor<T>, 3> gf;
        for (int n = 0; n < 3; ++n) {
            ScaleCtx& sc = scales_[n];
            nn::Tensor<T> gg(S_ * A_, sc.C, 1, 1);
            for (size_t i = 0; i < gg.v.size(); ++i) {
                gg.v[i] = static_cast<T>(2.0 * (sc.g_on.v[i] - sc.g_tg.v[i]) / norm_);
            }
            nn::Tensor<T> gubar = online.mlp_backward(n, gg);
            gf[n] = distribute_and_unpool(sc, gubar);
        }
        online.encode_backward(gf);
    }

    double value() const { return loss_; }

  private:
    struct ScaleCtx {
        int C = 0, H = 0, W = 0, ph = 0, pw = 0;
        std::vector<std::vector<int>> psel;
        nn::Tensor<T> g_on, g_tg;
    };

    void compute_gap(const nn::Tensor<T>& F, const ScaleCtx& sc, T* out) const {
        const double inv = 1.0 / (static_cast<double>(sc.ph) * sc.pw);
        for (int s = 0; s < S_; ++s) {
            for (int j = 0; j < A_; ++j) {
                const int r0 = (j / G_) * sc.ph, c0 = (j % G_) * sc.pw;
                T* dst = out + (static_cast<size_t>(s) * A_ + j) * sc.C;
                for (int c = 0; c < sc.C; ++c) {
                    double acc = 0.0;
                    const T* plane = F.plane(s, c);
                    for (int y = 0; y < sc.ph; ++y) {
                        for (int x = 0; x < sc.pw; ++x) {
                            acc += plane[static_cast<std::int64_t>(r0 + y) * sc.W + c0 + x];
                        }
                    }
                    dst[c] = static_cast<T>(acc * inv);
                }
            }
        }
    }

    void extract_patch_vectors(const nn::Tensor<T>& F, const ScaleCtx& sc, int s,
                               std::vector<std::vector<T>>& vecs) const {
        for (int j = 0; j < A_; ++j) {
            const int r0 = (j / G_) * sc.ph, c0 = (j % G_) * sc.pw;
            T* dst = vecs[j].data();
            std::int64_t k = 0;
            for (int c = 0; c < sc.C; ++c) {
                const T* plane = F.plane(s, c);
                for (int y = 0; y < sc.ph; ++y) {
                    for (int x = 0; x < sc.pw; ++x) {
                        dst[k++] = plane[static_cast<std::int64_t>(r0 + y) * sc.W + c0 + x];
                    }
                }
            }
        }
    }

    // Spread per-anchor mean-GAP gradients back over the positive patches and
    // un-pool them onto the feature grid.
    nn::Tensor<T> distribute_and_unpool(const ScaleCtx& sc, const nn::Tensor<T>& gbar) const {
        std::vector<T> dgap(static_cast<size_t>(S_) * A_ * sc.C, T(0));
        for (int s = 0; s < S_; ++s) {
            for (int j = 0; j < A_; ++j) {
                const auto& pos = sc.psel[static_cast<size_t>(s) * A_ + j];
                const T* src = gbar.v.data() + static_cast<size_t>(s * A_ + j) * sc.C;
                const T inv = T(1) / static_cast<T>(pos.size());
                for (int p : pos) {
                    T* dst = dgap.data() + (static_cast<size_t>(s) * A_ + p) * sc.C;
                    for (int c = 0; c < sc.C; ++c) dst[c] += src[c] * inv;
                }
            }
        }
        nn::Tensor<T> gf(S_, sc.C, sc.H, sc.W);
        const T inv_area = T(1) / static_cast<T>(sc.ph * sc.pw);
        for (int s = 0; s < S_; ++s) {
            for (int c = 0; c < sc.C; ++c) {
                T* plane = gf.plane(s, c);
                for (int y = 0; y < sc.H; ++y) {
                    const int pr = y / sc.ph;
                    for (int x = 0; x < sc.W; ++x) {
                        const int j = pr * G_ + x / sc.pw;
                        plane[static_cast<std::int64_t>(y) * sc.W + x] =
                            dgap[(static_cast<size_t>(s) * A_ + j) * sc.C + c] * inv_area;
                    }
                }
            }
        }
        return gf;
    }

    EncoderConfig cfg_;
    Grad side_ = Grad::kNone;
    int S_ = 0, G_ = 0, A_ = 0;
    double norm_ = 1.0, loss_ = 0.0;
    std::array<ScaleCtx, 3> scales_;
};

// Convenience wrapper matching the pair-level signature.
template <typename T>
T fam_loss(EncoderPair<T>& pair, const nn::Tensor<T>& hf_x, const nn::Tensor<T>& hf_y) {
    FamLoss<T> fl(pair.online.config());
    return fl.forward(pair.online, pair.target, hf_x, hf_y, FamLoss<T>::Grad::kNone);
}

// ---------------------------------------------------------------------------
// Ablation variant: plain MSE between one encoder's features of hf_x and
// hf_y, scales weighted equally; no attention-patch machinery on top.
// ---------------------------------------------------------------------------
template <typename T>
class FamStar {
  public:
    enum class Grad { kNone, kYInput, kParams };

    T forward(FreqEncoder<T>& enc, const nn::Tensor<T>& hf_x, const nn::Tensor<T>& hf_y,
              Grad side = Grad::kNone) {
        nn::check_same_shape(hf_x, hf_y, "fam_star_loss");
        side_ = side;
        fx_ = enc.encode(hf_x, false);
        fy_ = enc.encode(hf_y, side == Grad::kYInput);
        if (side == Grad::kParams) {
            hfx_ = hf_x;
            hfy_ = hf_y;
        }
        double total = 0.0;
        for (int n = 0; n < 3; ++n) {
            double acc = 0.0;
            for (size_t i = 0; i < fx_[n].v.size(); ++i) {
                const double d = static_cast<double>(fy_[n].v[i]) - fx_[n].v[i];
                acc += d * d;
            }
            total += acc / static_cast<double>(fx_[n].v.size());
        }
        loss_ = total / 3.0;
        return static_cast<T>(loss_);
    }

    nn::Tensor<T> backward_to_y_input(FreqEncoder<T>& enc) {
        if (side_ != Grad::kYInput) {
            throw Error(ErrorKind::InvalidArgument, "fam_star: forward did not keep y context");
        }
        return enc.encode_backward(scale_grads(+1.0));
    }

    // Both passes contribute parameter gradients; each is re-run with context
    // since the encoder holds only one backward context at a time.
    void backward_to_params(FreqEncoder<T>& enc) {
        if (side_ != Grad::kParams) {
            throw Error(ErrorKind::InvalidArgument, "fam_star: forward did not keep param context");
        }
        enc.encode(hfy_, true);
        enc.encode_backward(scale_grads(+1.0));
        enc.encode(hfx_, true);
        enc.encode_backward(scale_grads(-1.0));
    }

    double value() const { return loss_; }

  private:
    std::array<nn::Tensor<T>, 3> scale_grads(double sign) const {
        std::array<nn::Tensor<T>, 3> g;
        for (int n = 0; n < 3; ++n) {
            g[n] = nn::Tensor<T>(fx_[n].n, fx_[n].c, fx_[n].h, fx_[n].w);
            const double k = sign * 2.0 / (3.0 * static_cast<double>(fx_[n].v.size()));
            for (size_t i = 0; i < g[n].v.size(); ++i) {
                g[n].v[i] = static_cast<T>(k * (static_cast<double>(fy_[n].v[i]) - fx_[n].v[i]));
            }
        }
        return g;
    }

    Grad side_ = Grad::kNone;
    std::array<nn::Tensor<T>, 3> fx_, fy_;
    nn::Tensor<T> hfx_, hfy_;
    double loss_ = 0.0;
};

template <typename T>
T fam_star_loss(const nn::Tensor<T>& hf_x, const nn::Tensor<T>& hf_y, FreqEncoder<T>& enc) {
    FamStar<T> fs;
    return fs.forward(enc, hf_x, hf_y, FamStar<T>::Grad::kNone);
}

}  // namespace wia
