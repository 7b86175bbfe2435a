#include "trajbench/datagen.hpp"

#include "trajbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace trajbench {

const char* to_string(GenKind kind) {
    switch (kind) {
    case GenKind::Random: return "random";
    case GenKind::Even: return "even";
    case GenKind::Skewed: return "skewed";
    case GenKind::SkewedOverlap: return "skewed-overlap";
    }
    return "?";
}

std::optional<GenKind> parse_gen_kind(std::string_view text) {
    if (text == "random") return GenKind::Random;
    if (text == "even") return GenKind::Even;
    if (text == "skewed") return GenKind::Skewed;
    if (text == "skewed-overlap" || text == "skewed_overlap" || text == "skewedoverlap") {
        return GenKind::SkewedOverlap;
    }
    return std::nullopt;
}

void validate(const GenSpec& spec) {
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidParams, what); };
    if (spec.m < 1) fail("m must be >= 1");
    if (spec.k < 1) fail("k must be >= 1");
    if (!(spec.bbox.width() > 0.0) || !(spec.bbox.height() > 0.0)) fail("bbox must have positive area");
    if (!(spec.step >= 0.0) || !std::isfinite(spec.step)) fail("step must be >= 0");
    if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) fail("sigma must be >= 0");
    if (!(spec.hotspot_fraction >= 0.0 && spec.hotspot_fraction <= 1.0)) {
        fail("hotspot fraction must lie in [0,1]");
    }
    if (!(spec.travel_fraction >= 0.0 && spec.travel_fraction <= 1.0)) {
        fail("travel fraction must lie in [0,1]");
    }
    const bool skewed = spec.kind == GenKind::Skewed || spec.kind == GenKind::SkewedOverlap;
    if (skewed && spec.hotspots < 1) fail("skewed kinds need at least one hotspot");
}

namespace {

double reflect(double v, double lo, double hi) {
    const double span = hi - lo;
    if (span <= 0.0) return lo;
    // Fold into [lo, hi] as if bouncing off both walls.
    double t = std::fmod(v - lo, 2.0 * span);
    if (t < 0.0) t += 2.0 * span;
    return lo + (t <= span ? t : 2.0 * span - t);
}

Point clamp_to(Point p, const Rect& r) {
    return {std::clamp(p.x, r.min_x, r.max_x), std::clamp(p.y, r.min_y, r.max_y)};
}

Point uniform_point(Rng& rng, const Rect& r) {
    const double x = uniform(rng, r.min_x, r.max_x);
    const double y = uniform(rng, r.min_y, r.max_y);
    return {x, y};
}

Point gaussian_around(Rng& rng, Point center, double sd, const Rect& r) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const double dx = nd(rng) * sd;
    const double dy = nd(rng) * sd;
    return clamp_to({center.x + dx, center.y + dy}, r);
}

// Straight line from `from` towards the centre of hotspot `to`, k segments,
// each interior vertex jittered.
Trajectory travel_path(TrajId id, Point from, Point to, std::size_t k, double jitter,
                       const Rect& bbox, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Trajectory t{id, {}};
    t.points.reserve(k + 1);
    t.points.push_back(from);
    for (std::size_t i = 1; i <= k; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(k);
        const Point base{from.x + f * (to.x - from.x), from.y + f * (to.y - from.y)};
        const double dx = nd(rng) * jitter;
        const double dy = nd(rng) * jitter;
        t.points.push_back(clamp_to({base.x + dx, base.y + dy}, bbox));
    }
    return t;
}

constexpr std::uint64_t hotspot_stream = ~std::uint64_t{0};

} // namespace

Trajectory random_walk(TrajId id, Point start, std::size_t k, double step, const Rect& bbox,
                       Rng& rng) {
    Trajectory t{id, {}};
    t.points.reserve(k + 1);
    t.points.push_back(start);
    Point cur = start;
    for (std::size_t i = 0; i < k; ++i) {
        const double heading = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const double len = uniform(rng, 0.5 * step, 1.5 * step);
        if (len > 0.0) {
            cur = {reflect(cur.x + len * std::cos(heading), bbox.min_x, bbox.max_x),
                   reflect(cur.y + len * std::sin(heading), bbox.min_y, bbox.max_y)};
        }
        t.points.push_back(cur);
    }
    return t;
}

Point raster_center(std::size_t index, std::size_t m, const Rect& bbox) {
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    const std::size_t rows = (m + cols - 1) / cols;
    const double cw = bbox.width() / static_cast<double>(cols);
    const double ch = bbox.height() / static_cast<double>(rows);
    const std::size_t col = index % cols;
    const std::size_t row = index / cols;
    return {bbox.min_x + (static_cast<double>(col) + 0.5) * cw,
            bbox.min_y + (static_cast<double>(row) + 0.5) * ch};
}

Dataset generate(const GenSpec& spec) {
    validate(spec);
    const double scale = spec.bbox.width();
    const double step = spec.step * scale;
    const double sigma = spec.sigma * scale;

    std::vector<Point> hotspots;
    if (spec.kind == GenKind::Skewed || spec.kind == GenKind::SkewedOverlap) {
        Rng rng = stream_rng(spec.seed, hotspot_stream);
        for (std::size_t h = 0; h < spec.hotspots; ++h) hotspots.push_back(uniform_point(rng, spec.bbox));
    }

    Dataset ds;
    ds.name = to_string(spec.kind);
    ds.source = "synthetic";
    ds.trajectories.reserve(spec.m);
    for (std::size_t i = 0; i < spec.m; ++i) {
        Rng rng = stream_rng(spec.seed, i);
        const auto id = static_cast<TrajId>(i);
        switch (spec.kind) {
        case GenKind::Random:
            ds.trajectories.push_back(
                random_walk(id, uniform_point(rng, spec.bbox), spec.k, step, spec.bbox, rng));
            break;
        case GenKind::Even:
            ds.trajectories.push_back(
                random_walk(id, raster_center(i, spec.m, spec.bbox), spec.k, step, spec.bbox, rng));
            break;
        case GenKind::Skewed:
        case GenKind::SkewedOverlap: {
            const bool in_hotspot = uniform(rng, 0.0, 1.0) < spec.hotspot_fraction;
            if (!in_hotspot) {
                ds.trajectories.push_back(
                    random_walk(id, uniform_point(rng, spec.bbox), spec.k, step, spec.bbox, rng));
                break;
            }
            const std::size_t home = uniform_index(rng, hotspots.size());
            const Point start = gaussian_around(rng, hotspots[home], sigma, spec.bbox);
            const bool travels = spec.kind == GenKind::SkewedOverlap && hotspots.size() > 1 &&
                                 uniform(rng, 0.0, 1.0) < spec.travel_fraction;
            if (travels) {
                std::size_t dest = uniform_index(rng, hotspots.size() - 1);
                if (dest >= home) ++dest;
                ds.trajectories.push_back(
                    travel_path(id, start, hotspots[dest], spec.k, sigma / 2, spec.bbox, rng));
            } else {
                ds.trajectories.push_back(random_walk(id, start, spec.k, step, spec.bbox, rng));
            }
            break;
        }
        }
    }
    return ds;
}

} // namespace trajbench
