#pragma once

#include "trajbench/geom.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace trajbench {

struct Dataset {
    std::string name;
    std::string source;
    std::vector<Trajectory> trajectories;
    /// Source identifiers for files whose traj_id column is not numeric;
    /// parallel to `trajectories` when non-empty.
    std::vector<std::string> labels;

    std::size_t size() const { return trajectories.size(); }
    std::size_t point_count() const;
    std::size_t segment_count() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Throws InvalidParams on a trajectory with fewer than two points, a
/// non-finite coordinate, or a duplicate id.
void validate(const Dataset& ds);

/// MBR of every point in the dataset; Rect::empty() for an empty dataset.
Rect extent_of(const Dataset& ds);

/// Largest trajectory id plus one (0 for an empty dataset).
TrajId next_free_id(const Dataset& ds);

} // namespace trajbench
