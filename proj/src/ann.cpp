#include "trajbench/ann.hpp"

#include "trajbench/error.hpp"
#include "trajbench/parallel.hpp"
#include "trajbench/random.hpp"
#include "trajbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trajbench {

PointCloud make_cloud(std::vector<Point> points, std::vector<std::uint32_t> owners) {
    if (points.size() != owners.size()) {
        throw Error(ErrorCode::InvalidParams, "point/owner count mismatch");
    }
    PointCloud cloud;
    cloud.points = std::move(points);
    cloud.owners = std::move(owners);
    cloud.extent = mbr_of(std::span<const Point>(cloud.points));
    cloud.area = cloud.points.empty() ? 0.0 : cloud.extent.area();
    return cloud;
}

PointCloud flatten(const Dataset& ds) {
    std::vector<Point> points;
    std::vector<std::uint32_t> owners;
    points.reserve(ds.point_count());
    owners.reserve(ds.point_count());
    for (std::size_t t = 0; t < ds.size(); ++t) {
        for (const Point& p : ds.trajectories[t].points) {
            points.push_back(p);
            owners.push_back(static_cast<std::uint32_t>(t));
        }
    }
    return make_cloud(std::move(points), std::move(owners));
}

double nn_distance_excl(std::size_t idx, const PointCloud& cloud) {
    const Point q = cloud.points[idx];
    const std::uint32_t owner = cloud.owners[idx];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        if (cloud.owners[j] == owner) continue;
        const double dx = cloud.points[j].x - q.x;
        const double dy = cloud.points[j].y - q.y;
        best = std::min(best, dx * dx + dy * dy);
    }
    if (std::isinf(best)) {
        throw Error(ErrorCode::NoValidNeighbor, "point " + std::to_string(idx) +
                                                    " has no point from another trajectory");
    }
    return std::sqrt(best);
}

namespace {

constexpr std::size_t max_cells_per_axis = 4096;

}

NeighborGrid::NeighborGrid(const PointCloud& cloud) : cloud_(cloud) {
    const std::size_t n = std::max<std::size_t>(cloud.size(), 1);
    const Rect& e = cloud.extent;
    const double w = cloud.size() ? e.width() : 0.0;
    const double h = cloud.size() ? e.height() : 0.0;
    // About two points per cell on average.
    double side = std::sqrt(std::max(w * h, 0.0) * 2.0 / static_cast<double>(n));
    if (!(side > 0.0)) side = std::max(w, h) * 2.0 / static_cast<double>(n);
    if (!(side > 0.0)) side = 1.0;
    side = std::max({side, w / max_cells_per_axis, h / max_cells_per_axis});
    cell_ = side;
    nx_ = std::min(max_cells_per_axis, static_cast<std::size_t>(w / side) + 1);
    ny_ = std::min(max_cells_per_axis, static_cast<std::size_t>(h / side) + 1);

    cell_start_.assign(nx_ * ny_ + 1, 0);
    std::vector<std::size_t> cell_of(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        cell_of[i] = cell_y(cloud.points[i].y) * nx_ + cell_x(cloud.points[i].x);
        ++cell_start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < nx_ * ny_; ++c) cell_start_[c + 1] += cell_start_[c];
    members_.resize(cloud.size());
    std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        members_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
    }
}

std::size_t NeighborGrid::cell_x(double x) const {
    const double c = std::floor((x - cloud_.extent.min_x) / cell_);
    return std::min(nx_ - 1, static_cast<std::size_t>(std::max(c, 0.0)));
}

std::size_t NeighborGrid::cell_y(double y) const {
    const double c = std::floor((y - cloud_.extent.min_y) / cell_);
    return std::min(ny_ - 1, static_cast<std::size_t>(std::max(c, 0.0)));
}

double NeighborGrid::nearest_foreign(std::size_t idx) const {
    const Point q = cloud_.points[idx];
    const std::uint32_t owner = cloud_.owners[idx];
    const auto cx = static_cast<std::ptrdiff_t>(cell_x(q.x));
    const auto cy = static_cast<std::ptrdiff_t>(cell_y(q.y));
    const auto nx = static_cast<std::ptrdiff_t>(nx_);
    const auto ny = static_cast<std::ptrdiff_t>(ny_);
    const std::ptrdiff_t max_ring = std::max(nx, ny);
    double best = std::numeric_limits<double>::infinity();

    auto scan_cell = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
        if (x < 0 || y < 0 || x >= nx || y >= ny) return;
        const std::size_t c = static_cast<std::size_t>(y * nx + x);
        for (std::uint32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
            const std::uint32_t j = members_[k];
            if (cloud_.owners[j] == owner) continue;
            const double dx = cloud_.points[j].x - q.x;
            const double dy = cloud_.points[j].y - q.y;
            best = std::min(best, dx * dx + dy * dy);
        }
    };

    for (std::ptrdiff_t ring = 0; ring <= max_ring; ++ring) {
        if (ring == 0) {
            scan_cell(cx, cy);
        } else {
            for (std::ptrdiff_t x = cx - ring; x <= cx + ring; ++x) {
                scan_cell(x, cy - ring);
                scan_cell(x, cy + ring);
            }
            for (std::ptrdiff_t y = cy - ring + 1; y <= cy + ring - 1; ++y) {
                scan_cell(cx - ring, y);
                scan_cell(cx + ring, y);
            }
        }
        // Anything not yet scanned lies outside the (2*ring+1)^2 block of
        // cells around q; its distance is at least q's distance to the block edge.
        const double x0 = cloud_.extent.min_x + static_cast<double>(cx - ring) * cell_;
        const double y0 = cloud_.extent.min_y + static_cast<double>(cy - ring) * cell_;
        const double span = static_cast<double>(2 * ring + 1) * cell_;
        double margin = std::min({q.x - x0, x0 + span - q.x, q.y - y0, y0 + span - q.y});
        // Sides of the block beyond the grid have nothing behind them.
        if (cx - ring <= 0 && cy - ring <= 0 && cx + ring >= nx - 1 && cy + ring >= ny - 1) {
            margin = std::numeric_limits<double>::infinity();
        }
        if (!std::isinf(best) && best <= margin * margin) break;
        if (std::isinf(margin)) break;
    }
    if (std::isinf(best)) {
        throw Error(ErrorCode::NoValidNeighbor, "point " + std::to_string(idx) +
                                                    " has no point from another trajectory");
    }
    return std::sqrt(best);
}

double expected_nn_distance(std::size_t n_points, double area) {
    return 0.5 / std::sqrt(static_cast<double>(n_points) / area);
}

namespace {

void check_cloud(const PointCloud& cloud) {
    if (cloud.size() == 0) {
        throw Error(ErrorCode::DegenerateDataset, "empty point cloud");
    }
    if (!(cloud.area > 0.0)) {
        throw Error(ErrorCode::DegenerateExtent, "dataset bounding box has zero area");
    }
    const bool single_owner = std::all_of(cloud.owners.begin(), cloud.owners.end(),
                                          [&](std::uint32_t o) { return o == cloud.owners[0]; });
    if (single_owner) {
        throw Error(ErrorCode::NoValidNeighbor, "all points belong to one trajectory");
    }
}

} // namespace

AnnResult exact_ann(const PointCloud& cloud, unsigned threads) {
    check_cloud(cloud);
    const NeighborGrid grid(cloud);
    std::vector<double> dist(cloud.size());
    constexpr std::size_t chunk = 4096;
    const std::size_t chunks = (cloud.size() + chunk - 1) / chunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(cloud.size(), (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) dist[i] = grid.nearest_foreign(i);
    });
    double sum = 0.0;
    for (double d : dist) sum += d;
    AnnResult r;
    r.n_points = cloud.size();
    r.d_o = sum / static_cast<double>(cloud.size());
    r.d_e = expected_nn_distance(cloud.size(), cloud.area);
    r.ann = r.d_o / r.d_e;
    return r;
}

AnnResult exact_ann(const Dataset& ds, unsigned threads) { return exact_ann(flatten(ds), threads); }

AnnEstimate approx_ann(const PointCloud& cloud, const ApproxParams& params, bool literal_scaling) {
    if (params.n < 1 || params.p < 1) {
        throw Error(ErrorCode::InvalidParams, "approx_ann needs n >= 1 and p >= 1");
    }
    check_cloud(cloud);
    if (params.n > cloud.size()) {
        throw Error(ErrorCode::SampleTooLarge, "sample size " + std::to_string(params.n) +
                                                   " exceeds " + std::to_string(cloud.size()) +
                                                   " points");
    }
    const NeighborGrid grid(cloud);
    const double d_e = expected_nn_distance(cloud.size(), cloud.area);
    const double scale =
        literal_scaling ? static_cast<double>(cloud.size()) / static_cast<double>(params.n) : 1.0;

    AnnEstimate est;
    est.params = params;
    est.round_values.assign(params.p, 0.0);
    parallel_for(params.p, params.threads, [&](std::size_t round) {
        Rng rng = stream_rng(params.seed, round);
        auto picks = sample_without_replacement(rng, cloud.size(), params.n);
        // Fixed summation order so a full-cloud sample reproduces exact_ann bit for bit.
        std::sort(picks.begin(), picks.end());
        double sum = 0.0;
        for (auto i : picks) sum += grid.nearest_foreign(i);
        const double d_o = sum / static_cast<double>(params.n) * scale;
        est.round_values[round] = d_o / d_e;
    });
    est.result.ann = lower_median(est.round_values);
    est.result.d_e = d_e;
    est.result.d_o = est.result.ann * d_e;
    est.result.n_points = cloud.size();
    return est;
}

AnnEstimate approx_ann(const Dataset& ds, const ApproxParams& params, bool literal_scaling) {
    return approx_ann(flatten(ds), params, literal_scaling);
}

} // namespace trajbench
