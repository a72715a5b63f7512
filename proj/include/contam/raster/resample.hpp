#pragma once

#include "contam/raster/scene.hpp"

#include <array>
#include <optional>
#include <cstdint>
#include <span>
#include <vector>

namespace contam::raster {

/// Read-only plane with its validity mask.
struct PlaneView {
    std::span<const double> values;
    std::span<const std::uint8_t> valid;
    std::size_t width = 0;
    std::size_t height = 0;
};

struct BilinearSample {
    double value = 0.0;
    bool valid = false;
};

/// One grid neighbour of a sample point and its interpolation weight.
struct Tap {
    std::size_t index = 0;
    double weight = 0.0;
};

/**
 * Non-zero-weight neighbours of (x, y). Coordinates within 1e-9 of an
 * integer snap to it, so grid points use a single tap. Returns the tap
 * count, or 0 when a neighbour carrying weight is out of bounds or invalid.
 */
int bilinear_taps(std::size_t width, std::size_t height, std::span<const std::uint8_t> valid, double x, double y,
                  std::array<Tap, 4>& taps);

BilinearSample bilinear_sample(const PlaneView& plane, double x, double y);

/// Index of the nearest grid pixel, or nullopt when it is out of bounds or invalid.
std::optional<std::size_t> nearest_pixel(std::size_t width, std::size_t height, std::span<const std::uint8_t> valid,
                                         double x, double y);

/**
 * Clockwise rotation by `degrees` about the image centre, same canvas size.
 * Output pixels whose source falls off the valid region become invalid.
 */
RasterScene rotate(const RasterScene& scene, double degrees);

struct CropRect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t width = 0;
    std::size_t height = 0;

    std::size_t area() const { return width * height; }
};

/// Largest axis-aligned rectangle of valid pixels; the first found wins ties.
CropRect largest_valid_rectangle(std::span<const std::uint8_t> valid, std::size_t width, std::size_t height);

/**
 * Maps each distorted pixel to the original pixels it drew from: every
 * bilinear neighbour with non-zero weight in any band, through every
 * resampling stage, plus the pixel its label came from.
 */
struct PixelAlignment {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::size_t> offsets;  // width·height + 1 entries
    std::vector<std::size_t> sources;

    std::span<const std::size_t> sources_of(std::size_t pixel) const {
        return {sources.data() + offsets[pixel], offsets[pixel + 1] - offsets[pixel]};
    }

    static PixelAlignment identity(const RasterScene& scene);
};

struct MisregParams {
    double rotation_deg = 10.0;
    double offset_sigma = 0.1;
    bool shared_offset = false;  // one offset for every band instead of one per band
    std::uint64_t seed = 0;
};

struct MisregResult {
    RasterScene scene;
    PixelAlignment alignment;
    std::vector<std::size_t> label_source;  // original pixel supplying each distorted label
    CropRect crop;
    std::vector<std::array<double, 2>> offsets;  // (dx, dy) per band
};

/**
 * Rotate, shift every band by its N(0, offset_sigma²) offset, then crop
 * to the largest all-valid rectangle. Zero rotation or zero sigma skips
 * the corresponding stage, so the trivial pipeline copies the scene.
 */
MisregResult misregister(const RasterScene& scene, const MisregParams& params);

/// Fraction of aligned valid distorted pixels with a source whose original label differs.
double misreg_epsilon(const RasterScene& original, const RasterScene& distorted, const PixelAlignment& alignment);

}  // namespace contam::raster
