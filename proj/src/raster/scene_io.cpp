#include "contam/raster/scene_io.hpp"

#include "contam/core/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace contam::raster {
namespace fs = std::filesystem;
namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

template <typename T, typename Fmt>
void write_plane(const fs::path& p, const std::vector<T>& plane, const RasterScene& s, Fmt fmt) {
    auto out = open_out(p);
    std::string line;
    for (std::size_t y = 0; y < s.height; ++y) {
        line.clear();
        for (std::size_t x = 0; x < s.width; ++x) {
            if (x) line += ',';
            const std::size_t i = s.index(x, y);
            line += fmt(s.valid[i] ? plane[i] : T{});
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("failed writing " + p.string());
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::vector<T> read_plane(const fs::path& p, std::size_t width, std::size_t height) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::vector<T> plane;
    plane.reserve(width * height);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++rows;
        std::size_t cols = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t end = line.find(',', start);
            if (end == std::string::npos) end = line.size();
            const std::string cell = line.substr(start, end - start);
            T v{};
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw ParseError(p.filename().string() + ": bad value at row " + std::to_string(rows) + ", column " +
                                 std::to_string(cols + 1));
            }
            plane.push_back(v);
            ++cols;
            start = end + 1;
        }
        if (cols != width) {
            throw SchemaError(p.filename().string() + ": row " + std::to_string(rows) + " has " +
                              std::to_string(cols) + " columns, expected " + std::to_string(width));
        }
    }
    if (rows != height) throw SchemaError(p.filename().string() + ": expected " + std::to_string(height) + " rows");
    return plane;
}

std::string band_file(std::size_t b) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "band_%02zu.csv", b);
    return buf;
}

}  // namespace

void write_scene(const RasterScene& scene, const fs::path& dir) {
    scene.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
    nlohmann::json files = nlohmann::json::array();
    for (std::size_t b = 0; b < scene.band_count(); ++b) {
        write_plane(dir / band_file(b), scene.bands[b], scene, fmt_double);
        files.push_back(band_file(b));
    }
    write_plane(dir / "labels.csv", scene.labels, scene, [](int v) { return std::to_string(v); });
    RasterScene all_valid_view;
    all_valid_view.width = scene.width;
    all_valid_view.height = scene.height;
    all_valid_view.valid.assign(scene.pixel_count(), 1);
    std::vector<int> mask(scene.valid.begin(), scene.valid.end());
    write_plane(dir / "mask.csv", mask, all_valid_view, [](int v) { return std::to_string(v); });

    const nlohmann::json manifest = {{"width", scene.width},         {"height", scene.height},
                                     {"bands", scene.band_count()},  {"class_count", scene.class_count},
                                     {"band_files", files},          {"labels", "labels.csv"},
                                     {"mask", "mask.csv"},           {"metadata", scene.metadata}};
    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) throw IoError("failed writing manifest");
}

RasterScene read_scene(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("cannot read " + (dir / "manifest.json").string());
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("manifest.json: ") + e.what());
    }
    RasterScene s;
    try {
        s.width = m.at("width").get<std::size_t>();
        s.height = m.at("height").get<std::size_t>();
        s.class_count = m.at("class_count").get<int>();
        for (const auto& f : m.at("band_files")) {
            s.bands.push_back(read_plane<double>(dir / f.get<std::string>(), s.width, s.height));
        }
        if (s.bands.size() != m.at("bands").get<std::size_t>()) throw SchemaError("manifest band count mismatch");
        s.labels = read_plane<int>(dir / m.value("labels", "labels.csv"), s.width, s.height);
        const auto mask = read_plane<int>(dir / m.value("mask", "mask.csv"), s.width, s.height);
        s.valid.resize(mask.size());
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask[i] != 0 && mask[i] != 1) throw SchemaError("mask values must be 0 or 1");
            s.valid[i] = static_cast<std::uint8_t>(mask[i]);
        }
        s.metadata = m.value("metadata", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("manifest.json: ") + e.what());
    }
    s.validate();
    return s;
}

}  // namespace contam::raster
