#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "wia/error.hpp"
#include "wia/nn/layers.hpp"

namespace wia::nn {

// Adam with bias correction. Moment buffers are exposed so checkpoints can
// persist optimizer state alongside the weights.
template <typename T>
class Adam {
  public:
    Adam(std::vector<Param<T>*> params, double lr, double beta1 = 0.9, double beta2 = 0.99,
         double eps = 1e-8)
        : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
        m_.resize(params_.size());
        v_.resize(params_.size());
        for (size_t i = 0; i < params_.size(); ++i) {
            m_[i].assign(params_[i]->w.size(), T(0));
            v_[i].assign(params_[i]->w.size(), T(0));
        }
    }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
        for (size_t i = 0; i < params_.size(); ++i) {
            Param<T>& p = *params_[i];
            for (size_t j = 0; j < p.w.size(); ++j) {
                const double g = p.g[j];
                const double m = beta1_ * m_[i][j] + (1.0 - beta1_) * g;
                const double v = beta2_ * v_[i][j] + (1.0 - beta2_) * g * g;
                m_[i][j] = static_cast<T>(m);
                v_[i][j] = static_cast<T>(v);
                p.w[j] -= static_cast<T>(lr_ * (m / bc1) / (std::sqrt(v / bc2) + eps_));
            }
        }
    }

    void zero_grad() {
        for (auto* p : params_) p->zero_grad();
    }

    std::int64_t step_count() const { return t_; }
    void set_step_count(std::int64_t t) { t_ = t; }
    double learning_rate() const { return lr_; }

    size_t slots() const { return params_.size(); }
    std::vector<T>& moment_m(size_t i) { return m_[i]; }
    std::vector<T>& moment_v(size_t i) { return v_[i]; }
    const Param<T>& param(size_t i) const { return *params_[i]; }

  private:
    std::vector<Param<T>*> params_;
    double lr_, beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    std::vector<std::vector<T>> m_, v_;
};

}  // namespace wia::nn
