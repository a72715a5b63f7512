#pragma once

#include "contam/data/dataset.hpp"

#include "json.hpp"

#include <cstdint>
#include <vector>

namespace contam::raster {

/**
 * Multi-band image with a land-class label per pixel. All planes are
 * row-major width × height; pixel (x, y) lives at index y·width + x.
 * Invalid pixels (blank edges) are excluded from every statistic.
 */
struct RasterScene {
    std::size_t width = 0;
    std::size_t height = 0;
    int class_count = 2;
    std::vector<std::vector<double>> bands;
    std::vector<int> labels;
    std::vector<std::uint8_t> valid;
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t pixel_count() const { return width * height; }
    std::size_t index(std::size_t x, std::size_t y) const { return y * width + x; }
    std::size_t valid_count() const;
    std::size_t band_count() const { return bands.size(); }

    /// Shape agreement, label range and band finiteness on valid pixels.
    void validate() const;
};

/// Per-class temporal profiles of a vegetation index plus pixel noise.
struct VegetationProfileSet {
    std::vector<std::vector<double>> profiles;  // class × time point
    double noise_sigma = 0.1;

    std::size_t band_count() const { return profiles.empty() ? 0 : profiles.front().size(); }

    /// Smooth unimodal curves over `bands` time points with distinct peaks, values in [0.1, 0.9].
    /// Peaks spread over the middle of the season so neighbouring classes overlap under noise.
    static VegetationProfileSet defaults(int class_count, std::size_t bands = 10, double noise_sigma = 0.1);
};

/**
 * Synthetic cropland: a seeded Voronoi partition with
 * max(1, round(patchiness · width · height / 10⁴)) cells. The first
 * class_count cells take classes 0..J-1, later cells a uniform class.
 * Band b at a pixel of class c is profiles[c][b] + N(0, noise_sigma²).
 */
RasterScene gen_cropland(std::size_t width, std::size_t height, int class_count, const VegetationProfileSet& profiles,
                         double patchiness, std::uint64_t seed);

/// Voronoi cell count used by gen_cropland.
std::size_t cropland_cell_count(std::size_t width, std::size_t height, double patchiness);

/// One row per valid pixel in row-major order; features are the band values.
data::LabeledDataset scene_to_dataset(const RasterScene& scene);

/// Rows for the given pixel indices (all must be valid).
data::LabeledDataset scene_pixels_to_dataset(const RasterScene& scene, std::span<const std::size_t> pixels);

}  // namespace contam::raster
