#include "trajbench/backend.hpp"

#include "trajbench/error.hpp"
#include "trajbench/index/block_range.hpp"
#include "trajbench/index/quadtree.hpp"
#include "trajbench/index/rtree.hpp"

#include <algorithm>

namespace trajbench {

const char* to_string(StorageFormat f) {
    return f == StorageFormat::Segmented ? "segmented" : "whole";
}

const char* to_string(IndexKind k) {
    switch (k) {
    case IndexKind::RTree: return "rtree";
    case IndexKind::QuadTree: return "quadtree";
    case IndexKind::BlockRange: return "blockrange";
    case IndexKind::SeqScan: return "seqscan";
    }
    return "?";
}

std::optional<StorageFormat> parse_format(std::string_view text) {
    if (text == "segmented") return StorageFormat::Segmented;
    if (text == "whole") return StorageFormat::Whole;
    return std::nullopt;
}

std::optional<IndexKind> parse_index(std::string_view text) {
    if (text == "rtree" || text == "gist") return IndexKind::RTree;
    if (text == "quadtree" || text == "spgist") return IndexKind::QuadTree;
    if (text == "blockrange" || text == "brin") return IndexKind::BlockRange;
    if (text == "seqscan") return IndexKind::SeqScan;
    return std::nullopt;
}

Backend::Backend(BackendConfig cfg, std::unique_ptr<SpatialIndex> index)
    : cfg_(cfg), index_(std::move(index)) {}
Backend::Backend(Backend&&) noexcept = default;
Backend& Backend::operator=(Backend&&) noexcept = default;
Backend::~Backend() = default;

Backend Backend::bulk_load(const Dataset& ds, const BackendConfig& cfg) {
    std::unique_ptr<SpatialIndex> index;
    switch (cfg.index) {
    case IndexKind::RTree: index = std::make_unique<RTree>(cfg.rtree_max, cfg.rtree_min); break;
    case IndexKind::QuadTree:
        index = std::make_unique<QuadTree>(extent_of(ds), cfg.quad_capacity, cfg.quad_max_depth);
        break;
    case IndexKind::BlockRange: index = std::make_unique<BlockRangeIndex>(cfg.brin_range_size); break;
    case IndexKind::SeqScan: index = std::make_unique<SeqScanIndex>(); break;
    }
    Backend b(cfg, std::move(index));
    b.rows_.reserve(cfg.format == StorageFormat::Whole ? ds.size() : ds.segment_count());
    QueryStats ignored;
    for (const auto& t : ds.trajectories) b.insert(t, &ignored);
    return b;
}

RowId Backend::append_row(TrajId id, std::size_t seq, std::vector<Point> points, QueryStats& stats) {
    StoredRow row;
    row.row_id = rows_.size();
    row.traj_id = id;
    row.seq = seq;
    row.mbr = mbr_of(std::span<const Point>(points));
    row.points = std::move(points);
    index_->insert(row.row_id, row.mbr, stats);
    ++stats.rows_touched;
    ++live_rows_;
    rows_.push_back(std::move(row));
    return rows_.back().row_id;
}

std::size_t Backend::insert(const Trajectory& traj, QueryStats* stats) {
    if (traj.points.size() < 2) {
        throw Error(ErrorCode::InvalidParams, "trajectory needs at least 2 points");
    }
    if (contains(traj.id)) {
        throw Error(ErrorCode::DuplicateTrajectory, "trajectory " + std::to_string(traj.id));
    }
    QueryStats local;
    QueryStats& s = stats ? *stats : local;
    std::vector<RowId>& owned = rows_of_[traj.id];
    if (cfg_.format == StorageFormat::Whole) {
        owned.push_back(append_row(traj.id, 0, traj.points, s));
    } else {
        for (std::size_t i = 0; i < traj.segment_count(); ++i) {
            owned.push_back(append_row(traj.id, i, {traj.points[i], traj.points[i + 1]}, s));
        }
    }
    return owned.size();
}

std::size_t Backend::erase(TrajId id, QueryStats* stats) {
    auto it = rows_of_.find(id);
    if (it == rows_of_.end()) throw Error(ErrorCode::NotFound, "trajectory " + std::to_string(id));
    QueryStats local;
    QueryStats& s = stats ? *stats : local;
    for (RowId r : it->second) {
        StoredRow& row = rows_[r];
        index_->remove(r, row.mbr, s);
        row.live = false;
        row.points.clear();
        row.points.shrink_to_fit();
        ++s.rows_touched;
        --live_rows_;
    }
    const std::size_t removed = it->second.size();
    rows_of_.erase(it);
    return removed;
}

std::size_t Backend::update(TrajId id, const Trajectory& geometry, QueryStats* stats) {
    if (!contains(id)) throw Error(ErrorCode::NotFound, "trajectory " + std::to_string(id));
    if (geometry.points.size() < 2) {
        throw Error(ErrorCode::InvalidParams, "trajectory needs at least 2 points");
    }
    Trajectory replacement{id, geometry.points};
    erase(id, stats);
    return insert(replacement, stats);
}

void Backend::summarize() {
    if (auto* brin = dynamic_cast<BlockRangeIndex*>(index_.get())) brin->summarize();
}

Candidates Backend::candidates_by_rect(const Rect& rect) const {
    Candidates c;
    std::vector<RowId> rows;
    index_->search(rect, rows, c.stats);
    c.ids.reserve(rows.size());
    for (RowId r : rows) {
        const StoredRow& row = rows_[r];
        if (!row.live) continue;
        ++c.stats.rows_touched;
        if (rects_overlap(row.mbr, rect)) c.ids.push_back(row.traj_id);
    }
    std::sort(c.ids.begin(), c.ids.end());
    c.ids.erase(std::unique(c.ids.begin(), c.ids.end()), c.ids.end());
    c.stats.candidates_returned = c.ids.size();
    return c;
}

void Backend::fetch_geometry(TrajId id, std::vector<Point>& out, QueryStats& stats) const {
    auto it = rows_of_.find(id);
    if (it == rows_of_.end()) throw Error(ErrorCode::NotFound, "trajectory " + std::to_string(id));
    out.clear();
    for (RowId r : it->second) {
        const StoredRow& row = rows_[r];
        ++stats.rows_touched;
        if (out.empty()) {
            out = row.points;
        } else {
            // Consecutive segments share their joint vertex.
            out.push_back(row.points.back());
        }
    }
}

Trajectory Backend::trajectory(TrajId id) const {
    QueryStats ignored;
    Trajectory t{id, {}};
    fetch_geometry(id, t.points, ignored);
    return t;
}

std::vector<TrajId> Backend::ids() const {
    std::vector<TrajId> out;
    out.reserve(rows_of_.size());
    for (const auto& [id, rows] : rows_of_) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

Rect Backend::extent() const {
    Rect r = Rect::empty();
    for (const auto& [id, owned] : rows_of_) {
        for (RowId row : owned) r.expand(rows_[row].mbr);
    }
    return r;
}

} // namespace trajbench
