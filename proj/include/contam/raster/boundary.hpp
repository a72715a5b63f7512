#pragma once

#include <cstdint>
#include <span>
#include <variant>

namespace contam::raster {

/// Every valid pixel is tested.
struct PatchMode {};

/// n_sample valid pixels drawn without replacement (all of them if fewer exist).
struct SamplingMode {
    std::size_t n_sample = 150;
    std::uint64_t seed = 0;
};

using BoundaryMode = std::variant<PatchMode, SamplingMode>;

/**
 * A pixel is a boundary pixel when at least two pixels of its 3×3
 * neighbourhood (in-bounds, valid, centre included) differ from the
 * neighbourhood's majority label.
 */
bool is_boundary_pixel(std::span<const int> labels, std::size_t width, std::size_t height, std::size_t x,
                       std::size_t y, std::span<const std::uint8_t> valid = {});

/// Share of tested valid pixels that are boundary pixels. An empty mask means all valid.
double boundary_fraction(std::span<const int> labels, std::size_t width, std::size_t height, const BoundaryMode& mode,
                         std::span<const std::uint8_t> valid = {});

}  // namespace contam::raster
