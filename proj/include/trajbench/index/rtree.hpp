#pragma once

#include "trajbench/index/spatial_index.hpp"

#include <memory>
#include <vector>

namespace trajbench {

/// Guttman R-tree with quadratic split. Deletion condenses underflowing
/// nodes and reinserts their entries at their original level.
class RTree final : public SpatialIndex {
public:
    RTree(std::size_t max_entries = 16, std::size_t min_entries = 6);
    ~RTree() override;

    std::string_view name() const override { return "rtree"; }
    void insert(RowId row, const Rect& box, QueryStats& stats) override;
    void remove(RowId row, const Rect& box, QueryStats& stats) override;
    void search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const override;
    std::size_t size() const override { return size_; }
    void check_invariants() const override;

    /// Number of levels (1 for a lone root leaf).
    std::size_t height() const;
    /// Row ids of each leaf, leaves in depth-first order.
    std::vector<std::vector<RowId>> leaves() const;

private:
    struct Node;
    struct Entry {
        Rect box;
        std::unique_ptr<Node> child; // null in leaves
        RowId row = 0;
    };
    struct Node {
        int level = 0; // 0 for leaves
        Node* parent = nullptr;
        std::vector<Entry> entries;
    };

    std::size_t max_;
    std::size_t min_;
    std::unique_ptr<Node> root_;
    std::size_t size_ = 0;

    void insert_entry(Entry entry, int level, QueryStats& stats);
    Node* choose_node(const Rect& box, int level, QueryStats& stats);
    std::unique_ptr<Node> split(Node& node, QueryStats& stats);
    void adjust_tree(Node* node, std::unique_ptr<Node> sibling, QueryStats& stats);
    Node* find_leaf(Node* node, RowId row, const Rect& box, std::size_t& slot, QueryStats& stats);
    void condense(Node* leaf, QueryStats& stats);
    Entry& entry_for(Node* child);
};

} // namespace trajbench
