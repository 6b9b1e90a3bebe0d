#include "wia/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace wia::io {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "image payloads are little-endian; big-endian hosts are unsupported");

namespace {

std::string sidecar_path(const std::string& payload) { return payload + ".json"; }

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::FormatError, "'" + path + "': " + e.what());
    }
}

}  // namespace

void save_image(const Image& img, const std::string& path) {
    if (img.height <= 0 || img.width <= 0 ||
        img.data.size() != static_cast<size_t>(img.height) * img.width) {
        throw Error(ErrorKind::ShapeError, "image shape does not match its buffer");
    }
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    }
    std::vector<float> buf(img.data.size());
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<float>(img.data[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) {
        throw Error(ErrorKind::IoError, "short write to '" + path + "'");
    }
    out.close();

    json meta;
    meta["shape"] = {img.height, img.width};
    meta["dtype"] = "f32";
    meta["intensity_range"] = {img.range_min, img.range_max};
    meta["id"] = img.id;
    std::ofstream side(sidecar_path(path), std::ios::trunc);
    if (!side) {
        throw Error(ErrorKind::IoError, "cannot write '" + sidecar_path(path) + "'");
    }
    side << meta.dump(2) << "\n";
}

Image load_image(const std::string& path) {
    std::string payload = path;
    if (payload.size() > 5 && payload.substr(payload.size() - 5) == ".json") {
        payload = payload.substr(0, payload.size() - 5);
    }
    if (payload.size() > 4 && payload.substr(payload.size() - 4) == ".pgm") {
        return import_pgm(payload);
    }
    const json meta = load_json_file(sidecar_path(payload));
    Image img;
    try {
        if (meta.at("dtype").get<std::string>() != "f32") {
            throw Error(ErrorKind::FormatError,
                        "'" + payload + "': unsupported dtype " + meta.at("dtype").dump());
        }
        img.height = meta.at("shape").at(0).get<int>();
        img.width = meta.at("shape").at(1).get<int>();
        img.range_min = meta.at("intensity_range").at(0).get<double>();
        img.range_max = meta.at("intensity_range").at(1).get<double>();
        img.id = meta.value("id", std::string{});
    } catch (const json::exception& e) {
        throw Error(ErrorKind::FormatError, "'" + sidecar_path(payload) + "': " + e.what());
    }
    if (img.height <= 0 || img.width <= 0) {
        throw Error(ErrorKind::FormatError, "'" + payload + "': non-positive declared shape");
    }

    std::ifstream in(payload, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + payload + "'");
    }
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0);
    const std::uint64_t expected =
        static_cast<std::uint64_t>(img.height) * img.width * sizeof(float);
    if (bytes != expected) {
        throw Error(ErrorKind::FormatError, "'" + payload + "': payload is " +
                                                std::to_string(bytes) + " bytes, sidecar declares " +
                                                std::to_string(expected));
    }
    std::vector<float> buf(static_cast<size_t>(img.height) * img.width);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected));
    if (!in) {
        throw Error(ErrorKind::IoError, "short read from '" + payload + "'");
    }
    img.data.resize(buf.size());
    for (size_t i = 0; i < buf.size(); ++i) img.data[i] = static_cast<double>(buf[i]);
    return img;
}

Image import_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    }
    std::string magic;
    in >> magic;
    if (magic != "P5") {
        throw Error(ErrorKind::FormatError, "'" + path + "': not a binary PGM (P5)");
    }
    auto next_token = [&in, &path]() -> long {
        // skip whitespace and '#' comments
        while (true) {
            const int ch = in.peek();
            if (ch == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(ch)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        if (!in || v < 0) {
            throw Error(ErrorKind::FormatError, "'" + path + "': malformed PGM header");
        }
        return v;
    };
    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
        throw Error(ErrorKind::FormatError, "'" + path + "': bad PGM dimensions/maxval");
    }
    in.get();  // single whitespace after header

    Image img(static_cast<int>(h), static_cast<int>(w), 0.0,
              maxval > 255 ? 65535.0 : 255.0, fs::path(path).stem().string());
    const size_t n = img.size();
    if (maxval > 255) {
        std::vector<std::uint8_t> raw(n * 2);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!in) throw Error(ErrorKind::FormatError, "'" + path + "': truncated PGM payload");
        for (size_t i = 0; i < n; ++i) {
            img.data[i] = static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1]);  // big-endian
        }
    } else {
        std::vector<std::uint8_t> raw(n);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!in) throw Error(ErrorKind::FormatError, "'" + path + "': truncated PGM payload");
        for (size_t i = 0; i < n; ++i) img.data[i] = static_cast<double>(raw[i]);
    }
    return img;
}

void write_manifest(const std::string& dir, const std::vector<ManifestItem>& items) {
    json j;
    j["items"] = json::array();
    for (const auto& it : items) {
        j["items"].push_back({{"id", it.id}, {"file", it.file}, {"split", it.split}});
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string path = (fs::path(dir) / "manifest.json").string();
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

std::vector<ManifestItem> read_manifest(const std::string& dir) {
    const std::string path = (fs::path(dir) / "manifest.json").string();
    const json j = load_json_file(path);
    std::vector<ManifestItem> items;
    try {
        for (const auto& e : j.at("items")) {
            items.push_back({e.at("id").get<std::string>(), e.at("file").get<std::string>(),
                             e.value("split", std::string{})});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::FormatError, "'" + path + "': " + e.what());
    }
    return items;
}

Dataset load_dataset(const std::string& dir, const std::string& split) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorKind::IoError, "'" + dir + "' is not a directory");
    }
    Dataset ds;
    ds.split = split;
    if (fs::exists(fs::path(dir) / "manifest.json")) {
        for (const auto& it : read_manifest(dir)) {
            if (!split.empty() && !it.split.empty() && it.split != split) continue;
            Image img = load_image((fs::path(dir) / it.file).string());
            if (!it.id.empty()) img.id = it.id;
            ds.items.push_back(std::move(img));
        }
    } else {
        std::vector<std::string> paths;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().extension() == ".wim") paths.push_back(entry.path().string());
        }
        std::sort(paths.begin(), paths.end());
        for (const auto& p : paths) ds.items.push_back(load_image(p));
    }
    return ds;
}

}  // namespace wia::io
