#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wia::ckpt {

// Single-file model state: a plain-text manifest (name, shape, dtype, byte
// offset per tensor, plus free-form meta lines) followed by one flat
// little-endian float32 blob.
struct TensorRecord {
    std::string name;
    std::vector<int> shape;
    std::vector<float> data;

    std::int64_t size() const {
        std::int64_t n = 1;
        for (int d : shape) n *= d;
        return n;
    }
};

struct Checkpoint {
    std::map<std::string, std::string> meta;  // single-line values (JSON allowed)
    std::vector<TensorRecord> tensors;

    void add(const std::string& name, const std::vector<int>& shape, const float* data);
    const TensorRecord* find(const std::string& name) const;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

}  // namespace wia::ckpt
