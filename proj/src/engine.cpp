#include "trajbench/engine.hpp"

#include "trajbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace trajbench {

const char* to_string(QueryKind k) {
    switch (k) {
    case QueryKind::Intersection: return "intersection";
    case QueryKind::Contains: return "contains";
    case QueryKind::Knn: return "knn";
    case QueryKind::Proximity: return "proximity";
    }
    return "?";
}

const char* to_string(ContainsMode m) { return m == ContainsMode::Partial ? "partial" : "complete"; }

std::optional<QueryKind> parse_query_kind(std::string_view text) {
    for (auto k : {QueryKind::Intersection, QueryKind::Contains, QueryKind::Knn, QueryKind::Proximity}) {
        if (text == to_string(k)) return k;
    }
    return std::nullopt;
}

QuerySpec QuerySpec::intersection(Trajectory target) {
    QuerySpec q;
    q.kind = QueryKind::Intersection;
    q.target = std::move(target);
    return q;
}

QuerySpec QuerySpec::contains(Rect rect, ContainsMode mode) {
    QuerySpec q;
    q.kind = QueryKind::Contains;
    q.rect = rect;
    q.mode = mode;
    return q;
}

QuerySpec QuerySpec::knn(Trajectory target, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidParams, "K must be >= 1");
    QuerySpec q;
    q.kind = QueryKind::Knn;
    q.target = std::move(target);
    q.k = k;
    return q;
}

QuerySpec QuerySpec::proximity(Trajectory target, double dist) {
    if (!(dist >= 0.0)) throw Error(ErrorCode::InvalidParams, "distance must be >= 0");
    QuerySpec q;
    q.kind = QueryKind::Proximity;
    q.target = std::move(target);
    q.dist = dist;
    return q;
}

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
public:
    Timer() : start_(Clock::now()) {}
    std::chrono::nanoseconds elapsed() const { return Clock::now() - start_; }

private:
    Clock::time_point start_;
};

// Filter by `window`, then keep candidates other than the target for which
// `keep(geometry)` holds.
template <typename Keep>
QueryResult filter_refine(const Backend& h, const Rect& window, std::optional<TrajId> exclude,
                          Keep&& keep) {
    QueryResult res;
    Candidates c = h.candidates_by_rect(window);
    res.stats = c.stats;
    std::vector<Point> geometry;
    for (TrajId id : c.ids) {
        if (exclude && id == *exclude) continue;
        h.fetch_geometry(id, geometry, res.stats);
        if (keep(std::span<const Point>(geometry), res.stats)) res.ids.push_back(id);
    }
    return res;
}

} // namespace

QueryResult q_intersection(const Backend& h, const Trajectory& target) {
    Timer timer;
    QueryResult res = filter_refine(h, mbr_of(target), target.id,
                                    [&](std::span<const Point> g, QueryStats& s) {
                                        return polylines_intersect(target.points, g, &s.exact_tests);
                                    });
    res.elapsed = timer.elapsed();
    return res;
}

QueryResult q_contains(const Backend& h, const Rect& rect, ContainsMode mode) {
    Timer timer;
    QueryResult res = filter_refine(h, rect, std::nullopt, [&](std::span<const Point> g, QueryStats& s) {
        const RectRelation rel = polyline_rect_relation(g, rect, &s.exact_tests);
        return mode == ContainsMode::Complete ? rel == RectRelation::Inside
                                              : rel != RectRelation::Outside;
    });
    res.elapsed = timer.elapsed();
    return res;
}

QueryResult q_proximity(const Backend& h, const Trajectory& target, double dist) {
    Timer timer;
    QueryResult res = filter_refine(h, mbr_of(target).inflated(dist), target.id,
                                    [&](std::span<const Point> g, QueryStats& s) {
                                        return polyline_distance(target.points, g, &s.exact_tests) <= dist;
                                    });
    res.elapsed = timer.elapsed();
    return res;
}

QueryResult q_knn(const Backend& h, const Trajectory& target, std::size_t k, double fallback_radius) {
    Timer timer;
    if (k < 1) throw Error(ErrorCode::InvalidParams, "K must be >= 1");
    const std::size_t others = h.trajectory_count() - (h.contains(target.id) ? 1 : 0);
    if (others < k) {
        throw Error(ErrorCode::InsufficientData, "only " + std::to_string(others) +
                                                     " other trajectories for K=" + std::to_string(k));
    }
    const Rect box = mbr_of(target);
    double radius = std::hypot(box.width(), box.height()) / 2;
    if (!(radius > 0.0)) radius = fallback_radius;
    if (!(radius > 0.0)) {
        const Rect e = h.extent();
        radius = std::max(e.width(), e.height()) * 0.005;
    }
    if (!(radius > 0.0)) radius = 1.0;

    QueryResult res;
    std::unordered_map<TrajId, double> known;
    std::vector<Point> geometry;
    std::vector<std::pair<double, TrajId>> ranked;
    while (true) {
        Candidates c = h.candidates_by_rect(box.inflated(radius));
        res.stats += c.stats;
        for (TrajId id : c.ids) {
            if (id == target.id || known.count(id)) continue;
            h.fetch_geometry(id, geometry, res.stats);
            known.emplace(id, polyline_distance(target.points, geometry, &res.stats.exact_tests));
        }
        // Every trajectory within `radius` of the target is among the candidates,
        // so the K best are final once the K-th is no farther than the radius.
        if (known.size() >= k) {
            ranked.assign(known.size(), {});
            std::size_t i = 0;
            for (const auto& [id, d] : known) ranked[i++] = {d, id};
            std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
            if (ranked[k - 1].first <= radius || known.size() == others) break;
        }
        radius *= 2;
    }
    for (std::size_t i = 0; i < k; ++i) {
        res.distances.push_back(ranked[i].first);
        res.ids.push_back(ranked[i].second);
    }
    res.elapsed = timer.elapsed();
    return res;
}

QueryResult run_query(const Backend& h, const QuerySpec& q) {
    switch (q.kind) {
    case QueryKind::Intersection: return q_intersection(h, q.target);
    case QueryKind::Contains: return q_contains(h, q.rect, q.mode);
    case QueryKind::Knn: return q_knn(h, q.target, q.k);
    case QueryKind::Proximity: return q_proximity(h, q.target, q.dist);
    }
    throw Error(ErrorCode::InvalidParams, "unknown query kind");
}

WriteResult w_insert(Backend& h, std::span<const Trajectory> trajs) {
    WriteResult res;
    Timer timer;
    for (const auto& t : trajs) res.rows += h.insert(t, &res.stats);
    res.elapsed = timer.elapsed();
    return res;
}

WriteResult w_update(Backend& h, std::span<const Replacement> replacements) {
    WriteResult res;
    Timer timer;
    for (const auto& r : replacements) res.rows += h.update(r.id, r.geometry, &res.stats);
    res.elapsed = timer.elapsed();
    return res;
}

WriteResult w_delete(Backend& h, std::span<const TrajId> ids) {
    WriteResult res;
    Timer timer;
    for (TrajId id : ids) res.rows += h.erase(id, &res.stats);
    res.elapsed = timer.elapsed();
    return res;
}

} // namespace trajbench
