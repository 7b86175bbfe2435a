#pragma once

#include "trajbench/backend.hpp"

#include <chrono>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace trajbench {

enum class QueryKind { Intersection, Contains, Knn, Proximity };
enum class ContainsMode { Partial, Complete };

const char* to_string(QueryKind k);
const char* to_string(ContainsMode m);
std::optional<QueryKind> parse_query_kind(std::string_view text);

/// One read query. Only the fields relevant to `kind` are meaningful; build
/// through the factory functions.
struct QuerySpec {
    QueryKind kind = QueryKind::Intersection;
    Trajectory target;    ///< Intersection, Knn, Proximity
    Rect rect;            ///< Contains
    ContainsMode mode = ContainsMode::Partial;
    std::size_t k = 1;    ///< Knn
    double dist = 0.0;    ///< Proximity

    static QuerySpec intersection(Trajectory target);
    static QuerySpec contains(Rect rect, ContainsMode mode);
    static QuerySpec knn(Trajectory target, std::size_t k);
    static QuerySpec proximity(Trajectory target, double dist);

    friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

struct QueryResult {
    std::vector<TrajId> ids;        ///< ascending; for Knn ordered by (distance, id)
    std::vector<double> distances;  ///< Knn only, parallel to ids
    QueryStats stats;
    std::chrono::nanoseconds elapsed{0};
};

/// Trajectories (other than the target itself) whose geometry intersects the target.
QueryResult q_intersection(const Backend& h, const Trajectory& target);

/// Partial: any part of the trajectory touches the rect. Complete: every
/// vertex lies in the rect.
QueryResult q_contains(const Backend& h, const Rect& rect, ContainsMode mode);

/// K nearest other trajectories by exact polyline distance, ties by id.
/// Expanding-window search: the filter rect is the target MBR inflated by r,
/// starting at half the MBR diagonal (or `fallback_radius` for a degenerate
/// MBR) and doubling until the K-th best exact distance is within r.
/// Throws InsufficientData when fewer than K other trajectories are stored.
QueryResult q_knn(const Backend& h, const Trajectory& target, std::size_t k,
                  double fallback_radius = 0.0);

/// Other trajectories within `dist` of the target.
QueryResult q_proximity(const Backend& h, const Trajectory& target, double dist);

QueryResult run_query(const Backend& h, const QuerySpec& q);

struct Replacement {
    TrajId id = 0;
    Trajectory geometry;

    friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct WriteResult {
    std::size_t rows = 0;
    QueryStats stats;
    std::chrono::nanoseconds elapsed{0};
};

// Batch writes: applied in order, timed as a whole.
WriteResult w_insert(Backend& h, std::span<const Trajectory> trajs);
WriteResult w_update(Backend& h, std::span<const Replacement> replacements);
WriteResult w_delete(Backend& h, std::span<const TrajId> ids);

} // namespace trajbench
