#include "contam/synthgen/pattern.hpp"

#include "contam/core/error.hpp"
#include "contam/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace contam::synth {

int pattern_class_count(PatternKind kind) { return kind == PatternKind::four_class ? 4 : 2; }

int pattern_label(PatternKind kind, double x, double y, const PatternGeometry& geometry) {
    const double dx = x - 0.5;
    const double dy = y - 0.5;
    if (kind == PatternKind::nested_square) {
        const double d = std::max(std::abs(dx), std::abs(dy));
        const auto ring = static_cast<long>(std::floor(d / geometry.ring_width));
        return static_cast<int>(ring % 2);
    }
    // Two interleaved spiral arms, each cut into an inner and an outer piece.
    constexpr double two_pi = 2 * std::numbers::pi;
    const double r = std::hypot(dx, dy);
    double phase = std::atan2(dy, dx) - two_pi * r / geometry.spiral_pitch;
    phase = std::fmod(phase, two_pi);
    if (phase < 0) phase += two_pi;
    const int arm = phase < std::numbers::pi ? 0 : 1;
    const int outer = r >= geometry.split_radius ? 1 : 0;
    return arm + 2 * outer;
}

data::LabeledDataset gen_pattern(PatternKind kind, std::size_t n, std::uint64_t seed,
                                 const PatternGeometry& geometry) {
    if (n == 0) throw DomainError("sample size must satisfy n >= 1");
    Rng rng(seed, 0x7A7);
    Matrix features(static_cast<Eigen::Index>(n), 2);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        features(static_cast<Eigen::Index>(i), 0) = x;
        features(static_cast<Eigen::Index>(i), 1) = y;
        labels[i] = pattern_label(kind, x, y, geometry);
    }
    return data::LabeledDataset(std::move(features), std::move(labels), pattern_class_count(kind), {"x", "y"});
}

PatternKind parse_pattern_kind(const std::string& name) {
    if (name == "four_class") return PatternKind::four_class;
    if (name == "nested_square") return PatternKind::nested_square;
    throw SchemaError("unknown pattern kind '" + name + "'");
}

std::string to_string(PatternKind kind) {
    return kind == PatternKind::four_class ? "four_class" : "nested_square";
}

}  // namespace contam::synth
