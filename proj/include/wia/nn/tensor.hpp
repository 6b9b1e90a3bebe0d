#pragma once

#include <cstdint>
#include <vector>

#include "wia/error.hpp"

namespace wia::nn {

// Dense NCHW tensor. Instantiated with float for training and double for
// finite-difference gradient checks.
template <typename T>
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> v;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          v(static_cast<size_t>(n_) * c_ * h_ * w_, T(0)) {}

    std::int64_t size() const { return static_cast<std::int64_t>(n) * c * h * w; }

    T& at(int in, int ic, int iy, int ix) {
        return v[((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix];
    }
    T at(int in, int ic, int iy, int ix) const {
        return v[((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix];
    }

    T* plane(int in, int ic) { return v.data() + (static_cast<size_t>(in) * c + ic) * h * w; }
    const T* plane(int in, int ic) const {
        return v.data() + (static_cast<size_t>(in) * c + ic) * h * w;
    }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    void fill(T value) { std::fill(v.begin(), v.end(), value); }
};

template <typename T>
void check_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* what) {
    if (!a.same_shape(b)) {
        throw Error(ErrorKind::ShapeMismatch, std::string(what) + ": tensor shapes disagree");
    }
}

}  // namespace wia::nn
