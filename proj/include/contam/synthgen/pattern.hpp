#pragma once

#include "contam/data/dataset.hpp"

#include <cstdint>
#include <string>

namespace contam::synth {

enum class PatternKind { four_class, nested_square };

// Deterministic labeling of the unit square. Stand-ins for the classic
// four-class and nested-square benchmarks; they are not point-for-point copies.
struct PatternGeometry {
    double ring_width = 0.125;    // nested_square: Chebyshev ring width around (0.5, 0.5)
    double spiral_pitch = 0.25;   // four_class: radial distance per full spiral turn
    double split_radius = 0.25;   // four_class: inner/outer split
};

int pattern_class_count(PatternKind kind);

/// Class of point (x, y) in [0,1]².
int pattern_label(PatternKind kind, double x, double y, const PatternGeometry& geometry = {});

/// n points uniform on [0,1]², labeled by pattern_label.
data::LabeledDataset gen_pattern(PatternKind kind, std::size_t n, std::uint64_t seed,
                                 const PatternGeometry& geometry = {});

PatternKind parse_pattern_kind(const std::string& name);
std::string to_string(PatternKind kind);

}  // namespace contam::synth
