// Shared finite-difference helpers for the differentiable-layer tests.
// All checks run in double: analytic backward vs central differences of a
// random linear probe  L(out) = sum_i probe_i * out_i.
//
// Coordinates that fail at the base step size are re-measured at eps/16:
// a ReLU-kink crossing (the central difference straddling a kink) vanishes
// as the window shrinks, while a genuinely wrong analytic gradient keeps
// its error. This keeps tolerances tight without flaking on kinks.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "wia/nn/layers.hpp"
#include "wia/nn/tensor.hpp"
#include "wia/rng.hpp"

namespace gc {

inline wia::nn::Tensor<double> random_tensor(int n, int c, int h, int w, wia::CounterRng& rng,
                                             double scale = 1.0) {
    wia::nn::Tensor<double> t(n, c, h, w);
    for (auto& v : t.v) v = scale * rng.next_gauss();
    return t;
}

inline double dot(const wia::nn::Tensor<double>& a, const wia::nn::Tensor<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s;
}

inline double rel_err(double got, double want) {
    // Coordinates with an exactly-zero true gradient (e.g. a conv bias
    // feeding an instance norm) read as roundoff on both sides; treat
    // agreement below absolute 1e-6 as a match.
    if (std::abs(got) < 1e-6 && std::abs(want) < 1e-6) return 0.0;
    const double denom = std::max({std::abs(got), std::abs(want), 1e-8});
    return std::abs(got - want) / denom;
}

// Central difference of `eval` around the current value of *slot, with the
// kink-shrinking retry described above. Returns the worst surviving error.
inline double fd_mismatch(double* slot, double analytic,
                          const std::function<double()>& eval, double eps, double tol) {
    const double keep = *slot;
    auto measure = [&](double e) {
        *slot = keep + e;
        const double up = eval();
        *slot = keep - e;
        const double dn = eval();
        *slot = keep;
        return (up - dn) / (2.0 * e);
    };
    double err = rel_err(analytic, measure(eps));
    if (err > tol) err = std::min(err, rel_err(analytic, measure(eps / 16.0)));
    return err;
}

// Analytic dL/dx against central differences; L = <probe, layer(x)>.
inline void check_input_grad(wia::nn::Layer<double>& layer, const wia::nn::Tensor<double>& x,
                             double eps = 1e-5, double tol = 1e-4) {
    wia::CounterRng prng{0xABCD, static_cast<std::uint64_t>(x.v.size())};
    wia::nn::Tensor<double> out = layer.forward(x, true);
    wia::nn::Tensor<double> probe(out.n, out.c, out.h, out.w);
    for (auto& v : probe.v) v = prng.next_gauss();
    const wia::nn::Tensor<double> gx = layer.backward(probe);
    REQUIRE(gx.same_shape(x));

    wia::nn::Tensor<double> xp = x;
    const auto eval = [&] { return dot(layer.forward(xp, false), probe); };
    double max_rel = 0.0;
    for (size_t i = 0; i < x.v.size(); ++i) {
        max_rel = std::max(max_rel, fd_mismatch(&xp.v[i], gx.v[i], eval, eps, tol));
    }
    CHECK(max_rel <= tol);
}

// Analytic dL/dw for every parameter against central differences.
inline void check_param_grad(wia::nn::Layer<double>& layer, const wia::nn::Tensor<double>& x,
                             double eps = 1e-5, double tol = 1e-4) {
    wia::CounterRng prng{0xDCBA, static_cast<std::uint64_t>(x.v.size())};
    std::vector<wia::nn::Param<double>*> params;
    layer.collect(params);
    REQUIRE(!params.empty());

    wia::nn::Tensor<double> out = layer.forward(x, true);
    wia::nn::Tensor<double> probe(out.n, out.c, out.h, out.w);
    for (auto& v : probe.v) v = prng.next_gauss();
    for (auto* p : params) p->zero_grad();
    (void)layer.backward(probe);

    const auto eval = [&] { return dot(layer.forward(x, false), probe); };
    double max_rel = 0.0;
    for (auto* p : params) {
        for (size_t i = 0; i < p->w.size(); ++i) {
            max_rel = std::max(max_rel, fd_mismatch(&p->w[i], p->g[i], eval, eps, tol));
        }
    }
    CHECK(max_rel <= tol);
}

}  // namespace gc
