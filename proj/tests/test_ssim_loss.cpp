#include <doctest.h>

#include <cmath>

#include "wia/image.hpp"
#include "wia/metrics.hpp"
#include "wia/nn/ssim.hpp"
#include "wia/nn/tensor.hpp"
#include "wia/rng.hpp"

using namespace wia;
using nn::SsimLoss;
using nn::Tensor;

namespace {

Tensor<double> unit_batch(int n, int h, int w, std::uint64_t key) {
    CounterRng rng{key, 0x5531};
    Tensor<double> t(n, 1, h, w);
    // values in [-1, 1], the normalized training scale
    for (auto& v : t.v) v = 2.0 * rng.next_unit() - 1.0;
    return t;
}

Image to_image(const Tensor<double>& t, int sample) {
    Image img(t.h, t.w, -1.0, 1.0, "s");
    for (int r = 0; r < t.h; ++r)
        for (int c = 0; c < t.w; ++c) img.at(r, c) = t.at(sample, 0, r, c);
    return img;
}

}  // namespace

TEST_CASE("ssim loss equals the metric on single images and averages batches") {
    const auto x = unit_batch(2, 16, 20, 1);
    const auto y = unit_batch(2, 16, 20, 2);
    SsimLoss<double> loss;
    const double got = loss.forward(x, y);
    const double s0 = metrics::ssim(to_image(x, 0), to_image(y, 0), 2.0);
    const double s1 = metrics::ssim(to_image(x, 1), to_image(y, 1), 2.0);
    CHECK(got == doctest::Approx(0.5 * (s0 + s1)).epsilon(1e-12));

    const double self = loss.forward(x, x);
    CHECK(self == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim loss gradients match central differences") {
    auto x = unit_batch(1, 14, 13, 3);
    auto y = x;
    CounterRng rng{4};
    for (auto& v : y.v) v += 0.1 * rng.next_gauss();

    SsimLoss<double> loss;
    (void)loss.forward(x, y);
    Tensor<double> gx, gy;
    loss.backward(1.0, gx, gy);
    REQUIRE(gx.same_shape(x));
    REQUIRE(gy.same_shape(y));

    const double eps = 1e-5;
    double max_rel = 0.0;
    SsimLoss<double> probe;
    for (size_t i = 0; i < x.v.size(); i += 3) {
        const double keep_x = x.v[i];
        x.v[i] = keep_x + eps;
        const double upx = probe.forward(x, y);
        x.v[i] = keep_x - eps;
        const double dnx = probe.forward(x, y);
        x.v[i] = keep_x;
        const double fdx = (upx - dnx) / (2.0 * eps);
        const double denom_x = std::max({std::abs(fdx), std::abs(gx.v[i]), 1e-7});
        max_rel = std::max(max_rel, std::abs(fdx - gx.v[i]) / denom_x);

        const double keep_y = y.v[i];
        y.v[i] = keep_y + eps;
        const double upy = probe.forward(x, y);
        y.v[i] = keep_y - eps;
        const double dny = probe.forward(x, y);
        y.v[i] = keep_y;
        const double fdy = (upy - dny) / (2.0 * eps);
        const double denom_y = std::max({std::abs(fdy), std::abs(gy.v[i]), 1e-7});
        max_rel = std::max(max_rel, std::abs(fdy - gy.v[i]) / denom_y);
    }
    CHECK(max_rel <= 1e-4);
}

TEST_CASE("upstream scaling is linear") {
    const auto x = unit_batch(1, 12, 12, 5);
    auto y = x;
    CounterRng rng{6};
    for (auto& v : y.v) v += 0.05 * rng.next_gauss();

    SsimLoss<double> loss;
    (void)loss.forward(x, y);
    Tensor<double> gx1, gy1, gx2, gy2;
    loss.backward(1.0, gx1, gy1);
    loss.backward(-2.0, gx2, gy2);
    for (size_t i = 0; i < gx1.v.size(); ++i) {
        CHECK(gx2.v[i] == doctest::Approx(-2.0 * gx1.v[i]).epsilon(1e-10));
        CHECK(gy2.v[i] == doctest::Approx(-2.0 * gy1.v[i]).epsilon(1e-10));
    }
}
