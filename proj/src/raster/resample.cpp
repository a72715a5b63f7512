#include "contam/raster/resample.hpp"

#include "contam/core/error.hpp"
#include "contam/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace contam::raster {
namespace {

constexpr double kSnap = 1e-9;

double snap(double v) {
    const double r = std::round(v);
    return std::abs(v - r) < kSnap ? r : v;
}

bool usable(std::size_t width, std::size_t height, std::span<const std::uint8_t> valid, long x, long y) {
    if (x < 0 || y < 0 || x >= static_cast<long>(width) || y >= static_cast<long>(height)) return false;
    return valid.empty() || valid[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)] != 0;
}

double interpolate(std::span<const double> plane, const std::array<Tap, 4>& taps, int count) {
    double v = 0.0;
    for (int t = 0; t < count; ++t) v += taps[t].weight * plane[taps[t].index];
    return v;
}

// Source coordinates of output (x, y) under clockwise rotation by theta about the centre.
struct Rotation {
    double c, s, cx, cy;
    Rotation(double degrees, std::size_t w, std::size_t h)
        : c(std::cos(degrees * std::numbers::pi / 180.0)),
          s(std::sin(degrees * std::numbers::pi / 180.0)),
          cx(0.5 * static_cast<double>(w - 1)),
          cy(0.5 * static_cast<double>(h - 1)) {}
    std::array<double, 2> source(std::size_t x, std::size_t y) const {
        const double dx = static_cast<double>(x) - cx;
        const double dy = static_cast<double>(y) - cy;
        return {cx + dx * c + dy * s, cy - dx * s + dy * c};
    }
};

void append_unique(std::vector<std::size_t>& dst, std::size_t first) {
    std::sort(dst.begin() + static_cast<long>(first), dst.end());
    dst.erase(std::unique(dst.begin() + static_cast<long>(first), dst.end()), dst.end());
}

}  // namespace

int bilinear_taps(std::size_t width, std::size_t height, std::span<const std::uint8_t> valid, double x, double y,
                  std::array<Tap, 4>& taps) {
    if (!std::isfinite(x) || !std::isfinite(y)) return 0;
    x = snap(x);
    y = snap(y);
    const double fx0 = std::floor(x), fy0 = std::floor(y);
    if (fx0 < -1.0 || fy0 < -1.0 || fx0 > static_cast<double>(width) || fy0 > static_cast<double>(height)) return 0;
    const long x0 = static_cast<long>(fx0), y0 = static_cast<long>(fy0);
    const double fx = x - fx0, fy = y - fy0;
    const double wx[2] = {1.0 - fx, fx};
    const double wy[2] = {1.0 - fy, fy};
    int count = 0;
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const double w = wx[i] * wy[j];
            if (w == 0.0) continue;
            if (!usable(width, height, valid, x0 + i, y0 + j)) return 0;
            taps[count++] = {static_cast<std::size_t>(y0 + j) * width + static_cast<std::size_t>(x0 + i), w};
        }
    }
    return count;
}

BilinearSample bilinear_sample(const PlaneView& plane, double x, double y) {
    std::array<Tap, 4> taps{};
    const int count = bilinear_taps(plane.width, plane.height, plane.valid, x, y, taps);
    if (count == 0) return {};
    return {interpolate(plane.values, taps, count), true};
}

std::optional<std::size_t> nearest_pixel(std::size_t width, std::size_t height, std::span<const std::uint8_t> valid,
                                         double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
    const double rx = std::round(x), ry = std::round(y);
    if (rx < 0 || ry < 0 || rx >= static_cast<double>(width) || ry >= static_cast<double>(height)) return std::nullopt;
    const long xi = static_cast<long>(rx), yi = static_cast<long>(ry);
    if (!usable(width, height, valid, xi, yi)) return std::nullopt;
    return static_cast<std::size_t>(yi) * width + static_cast<std::size_t>(xi);
}

namespace {

// Rotation stage; also returns the label source of each output pixel.
RasterScene rotate_impl(const RasterScene& scene, double degrees, std::vector<std::size_t>* label_source) {
    scene.validate();
    const std::size_t w = scene.width, h = scene.height, n = scene.pixel_count();
    const Rotation rot(degrees, w, h);
    RasterScene out = scene;
    out.valid.assign(n, 0);
    out.labels.assign(n, 0);
    for (auto& b : out.bands) b.assign(n, 0.0);
    if (label_source) label_source->assign(n, 0);
    std::array<Tap, 4> taps{};
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto [sx, sy] = rot.source(x, y);
            const std::size_t i = y * w + x;
            const auto near = nearest_pixel(w, h, scene.valid, sx, sy);
            const int count = bilinear_taps(w, h, scene.valid, sx, sy, taps);
            if (!near || count == 0) continue;
            out.valid[i] = 1;
            out.labels[i] = scene.labels[*near];
            if (label_source) (*label_source)[i] = *near;
            for (std::size_t b = 0; b < scene.band_count(); ++b) out.bands[b][i] = interpolate(scene.bands[b], taps, count);
        }
    }
    return out;
}

}  // namespace

RasterScene rotate(const RasterScene& scene, double degrees) { return rotate_impl(scene, degrees, nullptr); }

CropRect largest_valid_rectangle(std::span<const std::uint8_t> valid, std::size_t width, std::size_t height) {
    if (valid.size() != width * height) throw SchemaError("validity mask has wrong size");
    std::vector<std::size_t> heights(width, 0);
    std::vector<std::size_t> stack;
    CropRect best;
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) heights[x] = valid[y * width + x] ? heights[x] + 1 : 0;
        stack.clear();
        for (std::size_t x = 0; x <= width; ++x) {
            const std::size_t cur = x < width ? heights[x] : 0;
            while (!stack.empty() && heights[stack.back()] >= cur) {
                const std::size_t hgt = heights[stack.back()];
                stack.pop_back();
                const std::size_t left = stack.empty() ? 0 : stack.back() + 1;
                const std::size_t wid = x - left;
                if (hgt * wid > best.area()) best = {left, y + 1 - hgt, wid, hgt};
            }
            stack.push_back(x);
        }
    }
    return best;
}

PixelAlignment PixelAlignment::identity(const RasterScene& scene) {
    PixelAlignment a;
    a.width = scene.width;
    a.height = scene.height;
    a.offsets.reserve(scene.pixel_count() + 1);
    a.offsets.push_back(0);
    for (std::size_t i = 0; i < scene.pixel_count(); ++i) {
        if (scene.valid[i]) a.sources.push_back(i);
        a.offsets.push_back(a.sources.size());
    }
    return a;
}

MisregResult misregister(const RasterScene& scene, const MisregParams& params) {
    scene.validate();
    if (!std::isfinite(params.rotation_deg)) throw DomainError("rotation must be finite");
    if (!(params.offset_sigma >= 0) || !std::isfinite(params.offset_sigma)) {
        throw DomainError("offset_sigma must be finite and >= 0");
    }
    const std::size_t w = scene.width, h = scene.height, n = scene.pixel_count();
    const std::size_t bands = scene.band_count();
    const bool rotating = params.rotation_deg != 0.0;

    MisregResult result;
    result.offsets.assign(bands, {0.0, 0.0});
    if (params.offset_sigma > 0) {
        Rng rng(params.seed, 0x0FF5E7);
        std::normal_distribution<double> draw(0.0, params.offset_sigma);
        for (std::size_t b = 0; b < bands; ++b) {
            if (b > 0 && params.shared_offset) {
                result.offsets[b] = result.offsets[0];
                continue;
            }
            const double dx = draw(rng);
            const double dy = draw(rng);
            result.offsets[b] = {dx, dy};
        }
    }
    const bool shifting = std::any_of(result.offsets.begin(), result.offsets.end(),
                                      [](const auto& o) { return o[0] != 0.0 || o[1] != 0.0; });

    std::vector<std::size_t> rot_label_source;
    RasterScene rotated = rotating ? rotate_impl(scene, params.rotation_deg, &rot_label_source) : scene;
    if (!rotating) {
        rot_label_source.resize(n);
        for (std::size_t i = 0; i < n; ++i) rot_label_source[i] = i;
    }

    RasterScene shifted = rotated;
    std::array<Tap, 4> taps{};
    auto shift_source = [&](std::size_t x, std::size_t y, std::size_t b) {
        return bilinear_taps(w, h, rotated.valid, static_cast<double>(x) - result.offsets[b][0],
                             static_cast<double>(y) - result.offsets[b][1], taps);
    };
    if (shifting) {
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const std::size_t i = y * w + x;
                bool ok = rotated.valid[i] != 0;
                for (std::size_t b = 0; b < bands && ok; ++b) {
                    const int count = shift_source(x, y, b);
                    if (count == 0) ok = false;
                    else shifted.bands[b][i] = interpolate(rotated.bands[b], taps, count);
                }
                shifted.valid[i] = ok ? 1 : 0;
                if (!ok) {
                    for (std::size_t b = 0; b < bands; ++b) shifted.bands[b][i] = 0.0;
                }
            }
        }
    }

    const CropRect crop = largest_valid_rectangle(shifted.valid, w, h);
    if (crop.area() == 0) throw DomainError("crop rectangle is empty");
    result.crop = crop;

    RasterScene& out = result.scene;
    out.width = crop.width;
    out.height = crop.height;
    out.class_count = scene.class_count;
    out.metadata = scene.metadata;
    const std::size_t m = crop.area();
    out.labels.resize(m);
    out.valid.assign(m, 1);
    out.bands.assign(bands, std::vector<double>(m));
    result.label_source.resize(m);

    const Rotation rot(params.rotation_deg, w, h);
    PixelAlignment& align = result.alignment;
    align.width = crop.width;
    align.height = crop.height;
    align.offsets.reserve(m + 1);
    align.offsets.push_back(0);
    std::array<Tap, 4> rot_taps{};

    // Original pixels behind rotated pixel j: its bilinear footprint plus its label source.
    auto add_rotated = [&](std::size_t j) {
        if (!rotating) {
            align.sources.push_back(j);
            return;
        }
        const auto [sx, sy] = rot.source(j % w, j / w);
        const int count = bilinear_taps(w, h, scene.valid, sx, sy, rot_taps);
        for (int t = 0; t < count; ++t) align.sources.push_back(rot_taps[t].index);
        align.sources.push_back(rot_label_source[j]);
    };

    for (std::size_t yy = 0; yy < crop.height; ++yy) {
        for (std::size_t xx = 0; xx < crop.width; ++xx) {
            const std::size_t src = (crop.y + yy) * w + crop.x + xx;
            const std::size_t dst = yy * crop.width + xx;
            out.labels[dst] = shifted.labels[src];
            for (std::size_t b = 0; b < bands; ++b) out.bands[b][dst] = shifted.bands[b][src];
            result.label_source[dst] = rot_label_source[src];

            const std::size_t first = align.sources.size();
            if (shifting) {
                align.sources.push_back(rot_label_source[src]);
                for (std::size_t b = 0; b < bands; ++b) {
                    const int count = shift_source(crop.x + xx, crop.y + yy, b);
                    const std::array<Tap, 4> hops = taps;
                    for (int t = 0; t < count; ++t) add_rotated(hops[t].index);
                }
            } else {
                add_rotated(src);
            }
            append_unique(align.sources, first);
            align.offsets.push_back(align.sources.size());
        }
    }
    return result;
}

double misreg_epsilon(const RasterScene& original, const RasterScene& distorted, const PixelAlignment& alignment) {
    if (alignment.width != distorted.width || alignment.height != distorted.height ||
        alignment.offsets.size() != distorted.pixel_count() + 1) {
        throw SchemaError("alignment does not match the distorted scene");
    }
    std::size_t aligned = 0, contaminated = 0;
    for (std::size_t i = 0; i < distorted.pixel_count(); ++i) {
        if (!distorted.valid[i]) continue;
        const auto sources = alignment.sources_of(i);
        bool any = false, differs = false;
        for (std::size_t s : sources) {
            if (s >= original.pixel_count()) throw SchemaError("alignment points outside the original scene");
            if (!original.valid[s]) continue;
            any = true;
            if (original.labels[s] != distorted.labels[i]) differs = true;
        }
        if (!any) continue;
        ++aligned;
        if (differs) ++contaminated;
    }
    if (aligned == 0) throw DomainError("no overlapping valid region");
    return static_cast<double>(contaminated) / static_cast<double>(aligned);
}

}  // namespace contam::raster
