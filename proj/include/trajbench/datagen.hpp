#pragma once

#include "trajbench/dataset.hpp"
#include "trajbench/random.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace trajbench {

enum class GenKind { Random, Even, Skewed, SkewedOverlap };

const char* to_string(GenKind kind);
std::optional<GenKind> parse_gen_kind(std::string_view text);

/// Synthetic dataset recipe. Lengths given as fractions are relative to the
/// bounding-box width.
struct GenSpec {
    GenKind kind = GenKind::Random;
    std::size_t m = 1000;          ///< trajectory count
    std::size_t k = 10;            ///< segments per trajectory
    Rect bbox{0.0, 0.0, 1.0, 1.0};
    double step = 0.002;           ///< mean segment length
    std::uint64_t seed = 1;
    std::size_t hotspots = 10;
    double sigma = 0.02;           ///< hotspot standard deviation
    double hotspot_fraction = 0.9; ///< share of trajectories starting in a hotspot
    double travel_fraction = 0.3;  ///< share of hotspot trajectories heading to another hotspot
};

/// Throws InvalidParams when the spec violates its invariants.
void validate(const GenSpec& spec);

/// k segments with uniform heading and length uniform in [0.5*step, 1.5*step],
/// reflected at the bbox boundary. `step` here is an absolute length.
Trajectory random_walk(TrajId id, Point start, std::size_t k, double step, const Rect& bbox,
                       Rng& rng);

/// Start point of trajectory `index` in an Even layout: centre of its cell in
/// a ceil(sqrt(m)) x ceil(m / ceil(sqrt(m))) raster filled row by row.
Point raster_center(std::size_t index, std::size_t m, const Rect& bbox);

/// Trajectory i gets id i and draws from its own RNG stream, so the output
/// is a pure function of the spec.
Dataset generate(const GenSpec& spec);

} // namespace trajbench
