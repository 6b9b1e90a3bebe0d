#pragma once

#include <vector>

#include "wia/error.hpp"
#include "wia/nn/tensor.hpp"
#include "wia/wavelet.hpp"

namespace wia::nn {

// Single-level high-frequency stack: (n, 1, h, w) -> (n, 3, h/2, w/2) with
// channels ordered LH, HL, HH. The low-pass band is dropped.
template <typename T>
Tensor<T> dwt_highfreq(const Tensor<T>& x) {
    if (x.c != 1) throw Error(ErrorKind::ShapeMismatch, "dwt_highfreq: expected single-channel input");
    if (x.h % 2 != 0 || x.w % 2 != 0) {
        throw Error(ErrorKind::OddDimension, "dwt_highfreq: dims must be even");
    }
    const int hh = x.h / 2, hw = x.w / 2;
    Tensor<T> out(x.n, 3, hh, hw);
    std::vector<T> ll(static_cast<size_t>(hh) * hw);
    for (int in = 0; in < x.n; ++in) {
        wavelet::dwt2_raw<T>(x.plane(in, 0), x.h, x.w, ll.data(), out.plane(in, 0),
                             out.plane(in, 1), out.plane(in, 2));
    }
    return out;
}

// Adjoint of dwt_highfreq. The transform is orthonormal, so the adjoint is the
// inverse transform with a zeroed low-pass band.
template <typename T>
Tensor<T> dwt_highfreq_adjoint(const Tensor<T>& g) {
    if (g.c != 3) throw Error(ErrorKind::ShapeMismatch, "dwt_highfreq_adjoint: expected 3 channels");
    Tensor<T> out(g.n, 1, g.h * 2, g.w * 2);
    std::vector<T> ll(static_cast<size_t>(g.h) * g.w, T(0));
    for (int in = 0; in < g.n; ++in) {
        wavelet::idwt2_raw<T>(ll.data(), g.plane(in, 0), g.plane(in, 1), g.plane(in, 2), out.h,
                              out.w, out.plane(in, 0));
    }
    return out;
}

}  // namespace wia::nn
