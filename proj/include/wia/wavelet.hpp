#pragma once

#include <vector>

#include "wia/image.hpp"

namespace wia::wavelet {

// Single-level 2D orthonormal Haar transform over non-overlapping 2x2
// blocks, low pass (1,1)/sqrt(2) and high pass (-1,1)/sqrt(2).
//
// Convention (fixed here, used consistently by the inverse): filters are
// applied along rows first, then along columns. The plane produced by the
// row high-pass / column low-pass is named HL and holds vertical detail;
// LH (row low / column high) holds horizontal detail.
//
// For the 2x2 block [[a,b],[c,d]] this gives
//   ll = ( a+b+c+d)/2     lh = (-a-b+c+d)/2
//   hl = (-a+b-c+d)/2     hh = ( a-b-c+d)/2

// Four coefficient planes of shape (H/2, W/2). Intensity metadata of the
// source image rides along so idwt2 can restore it.
struct SubbandSet {
    int height = 0;  // plane height = source H/2
    int width = 0;   // plane width  = source W/2
    std::vector<double> ll, lh, hl, hh;
    double range_min = 0.0;
    double range_max = 1.0;
    std::string id;

    size_t plane_size() const { return static_cast<size_t>(height) * width; }
};

SubbandSet dwt2(const Image& img);
Image idwt2(const SubbandSet& sb);

// [LH, HL, HH] packed as three channel planes of shape (H/2, W/2), in that
// channel order.
std::vector<double> highfreq_stack(const SubbandSet& sb);

// Raw kernels shared with the tensor path. `src` is (h, w) row-major with
// h, w even; each output plane is (h/2, w/2).
template <typename T>
void dwt2_raw(const T* src, int h, int w, T* ll, T* lh, T* hl, T* hh) {
    const int hh2 = h / 2, wh2 = w / 2;
    for (int r = 0; r < hh2; ++r) {
        const T* row0 = src + static_cast<size_t>(2 * r) * w;
        const T* row1 = row0 + w;
        for (int c = 0; c < wh2; ++c) {
            const T a = row0[2 * c], b = row0[2 * c + 1];
            const T cc = row1[2 * c], d = row1[2 * c + 1];
            const size_t o = static_cast<size_t>(r) * wh2 + c;
            ll[o] = (a + b + cc + d) * T(0.5);
            lh[o] = (cc + d - a - b) * T(0.5);
            hl[o] = (b - a + d - cc) * T(0.5);
            hh[o] = (a - b - cc + d) * T(0.5);
        }
    }
}

template <typename T>
void idwt2_raw(const T* ll, const T* lh, const T* hl, const T* hh, int h, int w, T* dst) {
    const int hh2 = h / 2, wh2 = w / 2;
    for (int r = 0; r < hh2; ++r) {
        T* row0 = dst + static_cast<size_t>(2 * r) * w;
        T* row1 = row0 + w;
        for (int c = 0; c < wh2; ++c) {
            const size_t o = static_cast<size_t>(r) * wh2 + c;
            const T s = ll[o], v = lh[o], u = hl[o], q = hh[o];
            row0[2 * c]     = (s - v - u + q) * T(0.5);
            row0[2 * c + 1] = (s - v + u - q) * T(0.5);
            row1[2 * c]     = (s + v - u - q) * T(0.5);
            row1[2 * c + 1] = (s + v + u + q) * T(0.5);
        }
    }
}

}  // namespace wia::wavelet
