#pragma once

#include "trajbench/geom.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace trajbench {

using RowId = std::uint64_t;

/// Hardware-independent work counters for one operation.
///
/// - nodes_visited: index nodes (tree nodes, block-range summaries) examined
/// - ranges_scanned: block ranges whose summary matched and whose rows were read
/// - candidates_returned: distinct trajectories that survive the MBR filter
/// - exact_tests: exact geometric predicate evaluations during refinement
/// - rows_touched: stored rows read by a query; for writes, stored rows
///   written plus index entries written
struct QueryStats {
    std::uint64_t nodes_visited = 0;
    std::uint64_t ranges_scanned = 0;
    std::uint64_t candidates_returned = 0;
    std::uint64_t exact_tests = 0;
    std::uint64_t rows_touched = 0;

    QueryStats& operator+=(const QueryStats& o) {
        nodes_visited += o.nodes_visited;
        ranges_scanned += o.ranges_scanned;
        candidates_returned += o.candidates_returned;
        exact_tests += o.exact_tests;
        rows_touched += o.rows_touched;
        return *this;
    }

    friend bool operator==(const QueryStats&, const QueryStats&) = default;
};

/// Access method over (row id, MBR) entries. `search` may be lossy (return
/// rows whose MBR does not overlap the query) but never misses a row whose
/// MBR overlaps it. Maintenance operations add the index entries they write
/// to stats.rows_touched.
class SpatialIndex {
public:
    virtual ~SpatialIndex() = default;

    virtual std::string_view name() const = 0;
    virtual void insert(RowId row, const Rect& box, QueryStats& stats) = 0;
    /// Throws NotFound when the row is not indexed.
    virtual void remove(RowId row, const Rect& box, QueryStats& stats) = 0;
    virtual void search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const = 0;
    virtual std::size_t size() const = 0;
    /// Throws std::logic_error describing the first violated structural invariant.
    virtual void check_invariants() const = 0;
};

} // namespace trajbench
