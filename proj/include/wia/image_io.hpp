#pragma once

#include <string>
#include <vector>

#include "wia/image.hpp"

namespace wia::io {

// On-disk image format: a flat little-endian float32 payload `<name>.wim`
// plus a JSON sidecar `<name>.wim.json` holding shape, dtype,
// intensity_range and id. PGM (P5, 8- or 16-bit) files are importable for
// convenience; 16-bit data is promoted to float with range (0, 65535).

void save_image(const Image& img, const std::string& path);

// Accepts a payload path (.wim), its sidecar path, or a .pgm file.
Image load_image(const std::string& path);

Image import_pgm(const std::string& path);

struct ManifestItem {
    std::string id;
    std::string file;   // payload path relative to the dataset directory
    std::string split;  // "train" or "test"
};

void write_manifest(const std::string& dir, const std::vector<ManifestItem>& items);
std::vector<ManifestItem> read_manifest(const std::string& dir);

struct Dataset {
    std::vector<Image> items;
    std::string split;
};

// Loads a dataset directory. When manifest.json is present its entries are
// used (filtered by split when non-empty); otherwise all *.wim files are
// loaded in sorted order.
Dataset load_dataset(const std::string& dir, const std::string& split = {});

}  // namespace wia::io
