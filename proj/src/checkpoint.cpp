#include "wia/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "wia/error.hpp"

namespace wia::ckpt {

namespace {
constexpr const char* kMagic = "WIACKPT 1";

static_assert(sizeof(float) == 4, "float32 storage assumed");
}  // namespace

void Checkpoint::add(const std::string& name, const std::vector<int>& shape, const float* data) {
    TensorRecord rec;
    rec.name = name;
    rec.shape = shape;
    rec.data.assign(data, data + rec.size());
    tensors.push_back(std::move(rec));
}

const TensorRecord* Checkpoint::find(const std::string& name) const {
    for (const auto& t : tensors) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

void Checkpoint::save(const std::string& path) const {
    std::ostringstream head;
    head << kMagic << "\n";
    for (const auto& [k, v] : meta) {
        if (k.find_first_of(" \n") != std::string::npos || v.find('\n') != std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, "checkpoint meta keys/values must be single-line");
        }
        head << "meta " << k << " " << v << "\n";
    }
    std::int64_t offset = 0;
    for (const auto& t : tensors) {
        head << "tensor " << t.name << " f32 " << offset << " " << t.shape.size();
        for (int d : t.shape) head << " " << d;
        head << "\n";
        offset += static_cast<std::int64_t>(t.data.size()) * 4;
    }
    head << "blob " << offset << "\n";

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::IoError, "cannot open checkpoint for writing: " + path);
    const std::string h = head.str();
    f.write(h.data(), static_cast<std::streamsize>(h.size()));
    for (const auto& t : tensors) {
        f.write(reinterpret_cast<const char*>(t.data.data()),
                static_cast<std::streamsize>(t.data.size() * 4));
    }
    if (!f) throw Error(ErrorKind::IoError, "failed writing checkpoint: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::IoError, "cannot open checkpoint: " + path);

    Checkpoint out;
    std::string line;
    if (!std::getline(f, line) || line != kMagic) {
        throw Error(ErrorKind::FormatError, "not a checkpoint file: " + path);
    }

    struct Pending {
        std::string name;
        std::vector<int> shape;
        std::int64_t offset = 0;
    };
    std::vector<Pending> pending;
    std::int64_t blob_bytes = -1;

    while (std::getline(f, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "meta") {
            std::string key;
            ls >> key;
            std::string value;
            std::getline(ls, value);
            if (!value.empty() && value.front() == ' ') value.erase(0, 1);
            out.meta[key] = value;
        } else if (tag == "tensor") {
            Pending p;
            std::string dtype;
            size_t ndim = 0;
            ls >> p.name >> dtype >> p.offset >> ndim;
            if (!ls || dtype != "f32") {
                throw Error(ErrorKind::FormatError, "bad tensor line in checkpoint: " + line);
            }
            p.shape.resize(ndim);
            for (size_t i = 0; i < ndim; ++i) ls >> p.shape[i];
            if (!ls) throw Error(ErrorKind::FormatError, "bad tensor shape in checkpoint: " + line);
            pending.push_back(std::move(p));
        } else if (tag == "blob") {
            ls >> blob_bytes;
            if (!ls || blob_bytes < 0) {
                throw Error(ErrorKind::FormatError, "bad blob size in checkpoint");
            }
            break;
        } else {
            throw Error(ErrorKind::FormatError, "unknown checkpoint line: " + line);
        }
    }
    if (blob_bytes < 0) throw Error(ErrorKind::FormatError, "checkpoint missing blob section");

    std::vector<char> blob(static_cast<size_t>(blob_bytes));
    f.read(blob.data(), blob_bytes);
    if (f.gcount() != blob_bytes) {
        throw Error(ErrorKind::FormatError, "checkpoint blob truncated");
    }

    for (const auto& p : pending) {
        TensorRecord rec;
        rec.name = p.name;
        rec.shape = p.shape;
        const std::int64_t bytes = rec.size() * 4;
        if (p.offset < 0 || p.offset + bytes > blob_bytes) {
            throw Error(ErrorKind::FormatError, "tensor offset outside blob: " + p.name);
        }
        rec.data.resize(static_cast<size_t>(rec.size()));
        std::memcpy(rec.data.data(), blob.data() + p.offset, static_cast<size_t>(bytes));
        out.tensors.push_back(std::move(rec));
    }
    return out;
}

}  // namespace wia::ckpt
