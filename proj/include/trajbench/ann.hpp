#pragma once

#include "trajbench/dataset.hpp"
#include "trajbench/goc.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace trajbench {

/// Every trajectory vertex as a standalone point, tagged with the index of
/// its owning trajectory.
struct PointCloud {
    std::vector<Point> points;
    std::vector<std::uint32_t> owners;
    Rect extent = Rect::empty();
    double area = 0.0;

    std::size_t size() const { return points.size(); }
};

PointCloud flatten(const Dataset& ds);

/// Builds a cloud from raw points; `owners[i]` groups points into trajectories.
PointCloud make_cloud(std::vector<Point> points, std::vector<std::uint32_t> owners);

struct AnnResult {
    double d_o = 0.0;  ///< observed mean nearest-neighbour distance
    double d_e = 0.0;  ///< expected distance under a uniform distribution
    double ann = 0.0;  ///< d_o / d_e
    std::size_t n_points = 0;
};

struct AnnEstimate {
    AnnResult result;                 ///< result.ann is the lower median of round_values
    std::vector<double> round_values; ///< per-round ANN
    ApproxParams params;
};

/// Distance from point `idx` to the closest point owned by a different
/// trajectory, by exhaustive scan. Throws NoValidNeighbor if none exists.
double nn_distance_excl(std::size_t idx, const PointCloud& cloud);

/// Uniform-grid spatial hash over a cloud with ring-expansion search.
/// Returns the same distances as nn_distance_excl. Read-only after
/// construction and safe to share between threads.
class NeighborGrid {
public:
    explicit NeighborGrid(const PointCloud& cloud);

    double nearest_foreign(std::size_t idx) const;

private:
    const PointCloud& cloud_;
    double cell_ = 1.0;
    std::size_t nx_ = 1;
    std::size_t ny_ = 1;
    std::vector<std::uint32_t> cell_start_;
    std::vector<std::uint32_t> members_;

    std::size_t cell_x(double x) const;
    std::size_t cell_y(double y) const;
};

/// 0.5 / sqrt(n / area)
double expected_nn_distance(std::size_t n_points, double area);

AnnResult exact_ann(const PointCloud& cloud, unsigned threads = 1);
AnnResult exact_ann(const Dataset& ds, unsigned threads = 1);

/// Each round draws `n` points without replacement from the whole cloud and
/// averages their nearest foreign-neighbour distances against the whole
/// cloud. The expected distance always uses the full point count and extent.
/// With `literal_scaling` the round mean is additionally multiplied by
/// n_total / n.
AnnEstimate approx_ann(const PointCloud& cloud, const ApproxParams& params,
                       bool literal_scaling = false);
AnnEstimate approx_ann(const Dataset& ds, const ApproxParams& params,
                       bool literal_scaling = false);

} // namespace trajbench
