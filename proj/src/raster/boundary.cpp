#include "contam/raster/boundary.hpp"

#include "contam/core/error.hpp"
#include "contam/core/rng.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

namespace contam::raster {

bool is_boundary_pixel(std::span<const int> labels, std::size_t width, std::size_t height, std::size_t x,
                       std::size_t y, std::span<const std::uint8_t> valid) {
    std::array<int, 9> seen{};
    int count = 0;
    for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
            const long nx = static_cast<long>(x) + dx, ny = static_cast<long>(y) + dy;
            if (nx < 0 || ny < 0 || nx >= static_cast<long>(width) || ny >= static_cast<long>(height)) continue;
            const std::size_t i = static_cast<std::size_t>(ny) * width + static_cast<std::size_t>(nx);
            if (!valid.empty() && !valid[i]) continue;
            seen[count++] = labels[i];
        }
    }
    int majority = 0;
    for (int a = 0; a < count; ++a) {
        majority = std::max(majority, static_cast<int>(std::count(seen.begin(), seen.begin() + count, seen[a])));
    }
    return count - majority >= 2;
}

double boundary_fraction(std::span<const int> labels, std::size_t width, std::size_t height, const BoundaryMode& mode,
                         std::span<const std::uint8_t> valid) {
    if (labels.size() != width * height) throw SchemaError("label plane has wrong size");
    if (!valid.empty() && valid.size() != labels.size()) throw SchemaError("validity mask has wrong size");
    std::vector<std::size_t> pixels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (valid.empty() || valid[i]) pixels.push_back(i);
    }
    if (pixels.empty()) throw DomainError("no valid pixels");

    if (const auto* s = std::get_if<SamplingMode>(&mode)) {
        if (s->n_sample == 0) throw DomainError("n_sample must be >= 1");
        Rng rng(s->seed, 0xB0);
        const std::size_t m = std::min(s->n_sample, pixels.size());
        for (std::size_t i = 0; i < m; ++i) std::swap(pixels[i], pixels[i + rng.below(pixels.size() - i)]);
        pixels.resize(m);
    } else if (width < 3 || height < 3) {
        throw DomainError("patch mode needs a plane of at least 3x3");
    }
    std::size_t hits = 0;
    for (std::size_t i : pixels) hits += is_boundary_pixel(labels, width, height, i % width, i / width, valid) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(pixels.size());
}

}  // namespace contam::raster
