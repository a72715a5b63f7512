#include "contam/raster/scene.hpp"

#include "contam/core/error.hpp"
#include "contam/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace contam::raster {

std::size_t RasterScene::valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

void RasterScene::validate() const {
    const std::size_t n = pixel_count();
    if (width == 0 || height == 0) throw SchemaError("scene needs positive dimensions");
    if (labels.size() != n || valid.size() != n) throw SchemaError("scene planes disagree in size");
    if (bands.empty()) throw SchemaError("scene needs at least one band");
    if (class_count < 2) throw SchemaError("scene class_count must be >= 2");
    for (const auto& b : bands) {
        if (b.size() != n) throw SchemaError("band plane has wrong size");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!valid[i]) continue;
        if (labels[i] < 0 || labels[i] >= class_count) throw SchemaError("scene label out of range");
        for (const auto& b : bands) {
            if (!std::isfinite(b[i])) throw DomainError("non-finite band value on a valid pixel");
        }
    }
}

VegetationProfileSet VegetationProfileSet::defaults(int class_count, std::size_t bands, double noise_sigma) {
    if (class_count < 1 || bands < 1) throw DomainError("profiles need classes and bands");
    VegetationProfileSet set;
    set.noise_sigma = noise_sigma;
    const double span = static_cast<double>(bands - 1);
    for (int c = 0; c < class_count; ++c) {
        const double peak = class_count == 1 ? 0.5 * span
                                             : span * (0.3 + 0.4 * c / static_cast<double>(class_count - 1));
        const double width = std::max(1.0, 0.25 * span);
        std::vector<double> curve(bands);
        for (std::size_t t = 0; t < bands; ++t) {
            const double d = (static_cast<double>(t) - peak) / width;
            curve[t] = 0.1 + 0.8 * std::exp(-0.5 * d * d);
        }
        set.profiles.push_back(std::move(curve));
    }
    return set;
}

std::size_t cropland_cell_count(std::size_t width, std::size_t height, double patchiness) {
    const double cells = std::round(patchiness * static_cast<double>(width * height) / 1e4);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(cells, 1.0)), 1, width * height);
}

RasterScene gen_cropland(std::size_t width, std::size_t height, int class_count, const VegetationProfileSet& profiles,
                         double patchiness, std::uint64_t seed) {
    if (class_count < 2) throw DomainError("cropland needs class_count >= 2");
    if (width < 8 || height < 8) throw DomainError("cropland needs width, height >= 8");
    if (!(patchiness >= 0)) throw DomainError("patchiness must be >= 0");
    if (profiles.profiles.size() < static_cast<std::size_t>(class_count) || profiles.band_count() == 0) {
        throw SchemaError("profile set must cover every class");
    }

    const std::size_t n = width * height;
    const std::size_t cells = cropland_cell_count(width, height, patchiness);
    Rng site_rng(seed, 0x51);
    std::vector<std::size_t> pixels(n);
    std::iota(pixels.begin(), pixels.end(), std::size_t{0});
    for (std::size_t i = 0; i < cells; ++i) std::swap(pixels[i], pixels[i + site_rng.below(n - i)]);
    std::vector<double> sx(cells), sy(cells);
    std::vector<int> cell_class(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        sx[c] = static_cast<double>(pixels[c] % width);
        sy[c] = static_cast<double>(pixels[c] / width);
        cell_class[c] = c < static_cast<std::size_t>(class_count)
                            ? static_cast<int>(c)
                            : static_cast<int>(site_rng.below(static_cast<std::uint64_t>(class_count)));
    }

    RasterScene scene;
    scene.width = width;
    scene.height = height;
    scene.class_count = class_count;
    scene.labels.resize(n);
    scene.valid.assign(n, 1);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t owner = 0;
            for (std::size_t c = 0; c < cells; ++c) {
                const double dx = static_cast<double>(x) - sx[c];
                const double dy = static_cast<double>(y) - sy[c];
                const double d = dx * dx + dy * dy;
                if (d < best) {
                    best = d;
                    owner = c;
                }
            }
            scene.labels[y * width + x] = cell_class[owner];
        }
    }

    const std::size_t bands = profiles.band_count();
    scene.bands.assign(bands, std::vector<double>(n));
    for (std::size_t b = 0; b < bands; ++b) {
        Rng rng(seed, 0x100 + b);
        std::normal_distribution<double> noise(0.0, profiles.noise_sigma);
        for (std::size_t i = 0; i < n; ++i) {
            const double base = profiles.profiles[static_cast<std::size_t>(scene.labels[i])][b];
            scene.bands[b][i] = profiles.noise_sigma > 0 ? base + noise(rng) : base;
        }
    }
    scene.metadata = {{"generator", "cropland"},
                      {"patchiness", patchiness},
                      {"cells", cells},
                      {"seed", seed},
                      {"noise_sigma", profiles.noise_sigma},
                      {"profiles", profiles.profiles}};
    return scene;
}

data::LabeledDataset scene_pixels_to_dataset(const RasterScene& scene, std::span<const std::size_t> pixels) {
    if (pixels.empty()) throw DomainError("scene has no valid pixels");
    Matrix f(static_cast<Eigen::Index>(pixels.size()), static_cast<Eigen::Index>(scene.band_count()));
    std::vector<int> labels(pixels.size());
    for (std::size_t r = 0; r < pixels.size(); ++r) {
        const std::size_t i = pixels[r];
        if (!scene.valid[i]) throw DomainError("pixel " + std::to_string(i) + " is not valid");
        for (std::size_t b = 0; b < scene.band_count(); ++b) {
            f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b)) = scene.bands[b][i];
        }
        labels[r] = scene.labels[i];
    }
    std::vector<std::string> names;
    for (std::size_t b = 0; b < scene.band_count(); ++b) names.push_back("band" + std::to_string(b));
    return data::LabeledDataset(std::move(f), std::move(labels), scene.class_count, std::move(names));
}

data::LabeledDataset scene_to_dataset(const RasterScene& scene) {
    std::vector<std::size_t> pixels;
    for (std::size_t i = 0; i < scene.pixel_count(); ++i) {
        if (scene.valid[i]) pixels.push_back(i);
    }
    return scene_pixels_to_dataset(scene, pixels);
}

}  // namespace contam::raster
