#include "wia/wavelet.hpp"

#include <cstring>

namespace wia::wavelet {

static void check_even(const Image& img) {
    if (img.height < 2 || img.width < 2 || img.height % 2 != 0 || img.width % 2 != 0) {
        throw Error(ErrorKind::OddDimension,
                    "image is " + std::to_string(img.height) + "x" + std::to_string(img.width) +
                        "; single-level Haar needs even dimensions >= 2");
    }
}

SubbandSet dwt2(const Image& img) {
    check_even(img);
    if (!all_finite(img)) {
        throw Error(ErrorKind::NonFinite, "input image '" + img.id + "' contains NaN/Inf");
    }
    SubbandSet sb;
    sb.height = img.height / 2;
    sb.width = img.width / 2;
    sb.range_min = img.range_min;
    sb.range_max = img.range_max;
    sb.id = img.id;
    const size_t n = sb.plane_size();
    sb.ll.resize(n);
    sb.lh.resize(n);
    sb.hl.resize(n);
    sb.hh.resize(n);
    dwt2_raw(img.data.data(), img.height, img.width, sb.ll.data(), sb.lh.data(), sb.hl.data(),
             sb.hh.data());
    return sb;
}

Image idwt2(const SubbandSet& sb) {
    const size_t n = sb.plane_size();
    if (sb.ll.size() != n || sb.lh.size() != n || sb.hl.size() != n || sb.hh.size() != n) {
        throw Error(ErrorKind::ShapeMismatch, "subband planes disagree on shape");
    }
    Image out(sb.height * 2, sb.width * 2, sb.range_min, sb.range_max, sb.id);
    idwt2_raw(sb.ll.data(), sb.lh.data(), sb.hl.data(), sb.hh.data(), out.height, out.width,
              out.data.data());
    return out;
}

std::vector<double> highfreq_stack(const SubbandSet& sb) {
    const size_t n = sb.plane_size();
    std::vector<double> out(3 * n);
    std::memcpy(out.data(), sb.lh.data(), n * sizeof(double));
    std::memcpy(out.data() + n, sb.hl.data(), n * sizeof(double));
    std::memcpy(out.data() + 2 * n, sb.hh.data(), n * sizeof(double));
    return out;
}

}  // namespace wia::wavelet
