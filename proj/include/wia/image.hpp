#pragma once

#include <string>
#include <vector>

#include "wia/error.hpp"

namespace wia {

// Single-channel 2D raster in native intensity units (HU-like for the CT
// phantoms). Pixels are stored row-major as doubles; files store them as
// 32-bit floats, see image_io.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data;
    double range_min = 0.0;
    double range_max = 1.0;
    std::string id;

    Image() = default;
    Image(int h, int w, double rmin, double rmax, std::string id_ = {})
        : height(h), width(w), data(static_cast<size_t>(h) * w, 0.0),
          range_min(rmin), range_max(rmax), id(std::move(id_)) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * width + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * width + c]; }
    size_t size() const { return data.size(); }
    double span() const { return range_max - range_min; }

    bool same_shape(const Image& other) const {
        return height == other.height && width == other.width;
    }
};

bool all_finite(const Image& img);

// Affine map of [range.min, range.max] onto [-1, 1] and its exact inverse.
// Throws DegenerateRange when the range collapses to a point.
Image normalize(const Image& img, double range_min, double range_max);
Image denormalize(const Image& img, double range_min, double range_max);

inline Image normalize(const Image& img) { return normalize(img, img.range_min, img.range_max); }

}  // namespace wia
