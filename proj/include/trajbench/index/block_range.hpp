#pragma once

#include "trajbench/index/spatial_index.hpp"

#include <unordered_map>
#include <vector>

namespace trajbench {

/// Block-range summaries over rows in insertion order: every `range_size`
/// consecutive rows share one summary MBR. Inserts only ever extend the last
/// summary or open a new range. Deletes leave a tombstone and do not shrink
/// summaries until `summarize` is called.
class BlockRangeIndex final : public SpatialIndex {
public:
    explicit BlockRangeIndex(std::size_t range_size = 128);

    std::string_view name() const override { return "blockrange"; }
    void insert(RowId row, const Rect& box, QueryStats& stats) override;
    void remove(RowId row, const Rect& box, QueryStats& stats) override;
    void search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const override;
    std::size_t size() const override { return live_; }
    void check_invariants() const override;

    /// Recomputes every summary as the tight union of its live rows.
    void summarize();
    std::size_t range_count() const { return ranges_.size(); }
    Rect summary(std::size_t range) const { return ranges_[range].summary; }

private:
    struct Slot {
        RowId row;
        Rect box;
        bool live;
    };
    struct Range {
        Rect summary = Rect::empty();
        std::vector<Slot> slots;
    };

    std::size_t range_size_;
    std::vector<Range> ranges_;
    std::unordered_map<RowId, std::pair<std::size_t, std::size_t>> where_;
    std::size_t live_ = 0;
};

/// No index at all: every live row is a candidate.
class SeqScanIndex final : public SpatialIndex {
public:
    std::string_view name() const override { return "seqscan"; }
    void insert(RowId row, const Rect& box, QueryStats& stats) override;
    void remove(RowId row, const Rect& box, QueryStats& stats) override;
    void search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const override;
    std::size_t size() const override { return rows_.size(); }
    void check_invariants() const override;

private:
    std::vector<RowId> rows_;
    std::unordered_map<RowId, std::size_t> where_;
};

} // namespace trajbench
