#include "trajbench/index/block_range.hpp"

#include "trajbench/error.hpp"

#include <stdexcept>
#include <string>

namespace trajbench {

void SeqScanIndex::insert(RowId row, const Rect&, QueryStats&) {
    where_[row] = rows_.size();
    rows_.push_back(row);
}

void SeqScanIndex::remove(RowId row, const Rect&, QueryStats&) {
    auto it = where_.find(row);
    if (it == where_.end()) throw Error(ErrorCode::NotFound, "row " + std::to_string(row));
    const std::size_t pos = it->second;
    where_.erase(it);
    if (pos + 1 != rows_.size()) {
        rows_[pos] = rows_.back();
        where_[rows_[pos]] = pos;
    }
    rows_.pop_back();
}

void SeqScanIndex::search(const Rect&, std::vector<RowId>& out, QueryStats&) const {
    out.insert(out.end(), rows_.begin(), rows_.end());
}

void SeqScanIndex::check_invariants() const {
    if (where_.size() != rows_.size()) throw std::logic_error("seqscan bookkeeping mismatch");
}

} // namespace trajbench
