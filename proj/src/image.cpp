#include "wia/image.hpp"

#include <cmath>

namespace wia {

bool all_finite(const Image& img) {
    for (double v : img.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Image normalize(const Image& img, double range_min, double range_max) {
    if (!(range_max > range_min)) {
        throw Error(ErrorKind::DegenerateRange,
                    "intensity range [" + std::to_string(range_min) + ", " +
                        std::to_string(range_max) + "] has no extent");
    }
    Image out(img.height, img.width, -1.0, 1.0, img.id);
    const double scale = 2.0 / (range_max - range_min);
    for (size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = (img.data[i] - range_min) * scale - 1.0;
    }
    return out;
}

Image denormalize(const Image& img, double range_min, double range_max) {
    if (!(range_max > range_min)) {
        throw Error(ErrorKind::DegenerateRange,
                    "intensity range [" + std::to_string(range_min) + ", " +
                        std::to_string(range_max) + "] has no extent");
    }
    Image out(img.height, img.width, range_min, range_max, img.id);
    const double scale = (range_max - range_min) / 2.0;
    for (size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = (img.data[i] + 1.0) * scale + range_min;
    }
    return out;
}

}  // namespace wia
