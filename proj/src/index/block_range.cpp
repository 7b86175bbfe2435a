#include "trajbench/index/block_range.hpp"

#include "trajbench/error.hpp"

#include <stdexcept>
#include <string>

namespace trajbench {

BlockRangeIndex::BlockRangeIndex(std::size_t range_size) : range_size_(range_size) {
    if (range_size_ < 1) throw Error(ErrorCode::InvalidParams, "block range size must be >= 1");
}

void BlockRangeIndex::insert(RowId row, const Rect& box, QueryStats& stats) {
    if (ranges_.empty() || ranges_.back().slots.size() >= range_size_) ranges_.emplace_back();
    Range& r = ranges_.back();
    r.summary.expand(box);
    ++stats.rows_touched;
    where_[row] = {ranges_.size() - 1, r.slots.size()};
    r.slots.push_back({row, box, true});
    ++live_;
}

void BlockRangeIndex::remove(RowId row, const Rect&, QueryStats& stats) {
    auto it = where_.find(row);
    if (it == where_.end()) {
        throw Error(ErrorCode::NotFound, "row " + std::to_string(row) + " not in block ranges");
    }
    ++stats.nodes_visited;
    ranges_[it->second.first].slots[it->second.second].live = false;
    where_.erase(it);
    --live_;
}

void BlockRangeIndex::search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const {
    for (const auto& r : ranges_) {
        ++stats.nodes_visited;
        if (!rects_overlap(r.summary, query)) continue;
        ++stats.ranges_scanned;
        for (const auto& s : r.slots) {
            if (s.live) out.push_back(s.row);
        }
    }
}

void BlockRangeIndex::summarize() {
    for (auto& r : ranges_) {
        r.summary = Rect::empty();
        for (const auto& s : r.slots) {
            if (s.live) r.summary.expand(s.box);
        }
    }
}

void BlockRangeIndex::check_invariants() const {
    std::size_t live = 0;
    for (std::size_t i = 0; i < ranges_.size(); ++i) {
        const auto& r = ranges_[i];
        if (r.slots.size() > range_size_) throw std::logic_error("block range overfull");
        if (i + 1 < ranges_.size() && r.slots.size() != range_size_) {
            throw std::logic_error("non-final block range is not full");
        }
        for (const auto& s : r.slots) {
            if (!s.live) continue;
            ++live;
            if (!r.summary.contains(s.box)) throw std::logic_error("live row outside its range summary");
        }
    }
    if (live != live_) throw std::logic_error("block range live count mismatch");
}

} // namespace trajbench
