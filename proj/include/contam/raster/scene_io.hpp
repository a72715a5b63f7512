#pragma once

#include "contam/raster/scene.hpp"

#include <filesystem>

namespace contam::raster {

/**
 * Directory layout: band_NN.csv per band, labels.csv, mask.csv (0/1),
 * each `height` lines of `width` comma-separated values, plus
 * manifest.json with dimensions, band files and scene metadata.
 * Invalid pixels are written as 0.
 */
void write_scene(const RasterScene& scene, const std::filesystem::path& dir);

RasterScene read_scene(const std::filesystem::path& dir);

}  // namespace contam::raster
