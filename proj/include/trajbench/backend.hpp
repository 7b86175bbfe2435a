#pragma once

#include "trajbench/dataset.hpp"
#include "trajbench/index/spatial_index.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trajbench {

enum class StorageFormat { Segmented, Whole };
enum class IndexKind { RTree, QuadTree, BlockRange, SeqScan };

const char* to_string(StorageFormat f);
const char* to_string(IndexKind k);
std::optional<StorageFormat> parse_format(std::string_view text);
std::optional<IndexKind> parse_index(std::string_view text);

struct BackendConfig {
    StorageFormat format = StorageFormat::Whole;
    IndexKind index = IndexKind::RTree;
    std::size_t rtree_max = 16;
    std::size_t rtree_min = 6;
    std::size_t quad_capacity = 16;
    std::size_t quad_max_depth = 16;
    std::size_t brin_range_size = 128;
};

/// One stored row: a whole trajectory or a single segment of one.
struct StoredRow {
    RowId row_id = 0;
    TrajId traj_id = 0;
    std::size_t seq = 0;       ///< segment position (0 for whole rows)
    std::vector<Point> points; ///< the full polyline, or the two segment endpoints
    Rect mbr;
    bool live = true;
};

struct Candidates {
    std::vector<TrajId> ids; ///< ascending, unique
    QueryStats stats;
};

/// A loaded table: dataset rows in one storage format plus one access method.
/// Row ids are assigned in append order and never reused. Not thread-safe
/// for mutation; concurrent const access is fine between mutations.
class Backend {
public:
    static Backend bulk_load(const Dataset& ds, const BackendConfig& cfg);

    Backend(Backend&&) noexcept;
    Backend& operator=(Backend&&) noexcept;
    ~Backend();

    const BackendConfig& config() const { return cfg_; }

    /// Ids of trajectories with at least one live row whose MBR overlaps `rect`.
    Candidates candidates_by_rect(const Rect& rect) const;

    /// Returns rows added. Throws DuplicateTrajectory if the id is stored.
    std::size_t insert(const Trajectory& traj, QueryStats* stats = nullptr);
    /// Returns rows removed. Throws NotFound for an unknown id.
    std::size_t erase(TrajId id, QueryStats* stats = nullptr);
    /// Replaces the geometry, keeping the id. Returns rows rewritten.
    std::size_t update(TrajId id, const Trajectory& geometry, QueryStats* stats = nullptr);

    /// Rebuilds block-range summaries; no-op for other indexes.
    void summarize();

    /// Reassembles the stored polyline of `id` into `out`, counting rows read.
    void fetch_geometry(TrajId id, std::vector<Point>& out, QueryStats& stats) const;
    Trajectory trajectory(TrajId id) const;

    bool contains(TrajId id) const { return rows_of_.count(id) > 0; }
    std::size_t trajectory_count() const { return rows_of_.size(); }
    std::size_t row_count() const { return live_rows_; }
    std::vector<TrajId> ids() const;
    /// Union of live row MBRs.
    Rect extent() const;

    const SpatialIndex& index() const { return *index_; }
    void check_invariants() const { index_->check_invariants(); }

private:
    Backend(BackendConfig cfg, std::unique_ptr<SpatialIndex> index);
    RowId append_row(TrajId id, std::size_t seq, std::vector<Point> points, QueryStats& stats);

    BackendConfig cfg_;
    std::unique_ptr<SpatialIndex> index_;
    std::vector<StoredRow> rows_;
    std::unordered_map<TrajId, std::vector<RowId>> rows_of_;
    std::size_t live_rows_ = 0;
};

} // namespace trajbench
