#include "trajbench/dataset.hpp"

#include "trajbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace trajbench {

std::size_t Dataset::point_count() const {
    std::size_t n = 0;
    for (const auto& t : trajectories) n += t.points.size();
    return n;
}

std::size_t Dataset::segment_count() const {
    std::size_t n = 0;
    for (const auto& t : trajectories) n += t.segment_count();
    return n;
}

void validate(const Dataset& ds) {
    std::unordered_set<TrajId> seen;
    seen.reserve(ds.size());
    for (const auto& t : ds.trajectories) {
        if (t.points.size() < 2) {
            throw Error(ErrorCode::InvalidParams,
                        "trajectory " + std::to_string(t.id) + " has fewer than 2 points");
        }
        for (const Point& p : t.points) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw Error(ErrorCode::InvalidParams,
                            "trajectory " + std::to_string(t.id) + " has a non-finite coordinate");
            }
        }
        if (!seen.insert(t.id).second) {
            throw Error(ErrorCode::DuplicateTrajectory, "trajectory id " + std::to_string(t.id));
        }
    }
}

Rect extent_of(const Dataset& ds) {
    Rect r = Rect::empty();
    for (const auto& t : ds.trajectories) r.expand(mbr_of(t));
    return r;
}

TrajId next_free_id(const Dataset& ds) {
    TrajId next = 0;
    for (const auto& t : ds.trajectories) next = std::max(next, t.id + 1);
    return next;
}

} // namespace trajbench
