#pragma once

#include "trajbench/index/spatial_index.hpp"

#include <array>
#include <memory>
#include <vector>

namespace trajbench {

/// MX-CIF style region quadtree over MBRs: every entry lives in the deepest
/// cell that fully contains it. Leaves split into quadrants when they exceed
/// `capacity` entries, down to `max_depth`. Entries straddling a quadrant
/// boundary stay in the parent, which is what makes large MBRs expensive
/// here. The root cell grows by doubling when an MBR falls outside it.
class QuadTree final : public SpatialIndex {
public:
    QuadTree(const Rect& domain, std::size_t capacity = 16, std::size_t max_depth = 16);
    ~QuadTree() override;

    std::string_view name() const override { return "quadtree"; }
    void insert(RowId row, const Rect& box, QueryStats& stats) override;
    void remove(RowId row, const Rect& box, QueryStats& stats) override;
    void search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const override;
    std::size_t size() const override { return size_; }
    void check_invariants() const override;

    Rect domain() const { return root_->cell; }
    std::size_t node_count() const;

private:
    struct Entry {
        RowId row;
        Rect box;
    };
    struct Node {
        Rect cell;
        Point split; // dividing point of internal nodes
        std::vector<Entry> entries;
        std::array<std::unique_ptr<Node>, 4> children; // SW, SE, NW, NE; all null in leaves

        bool is_leaf() const { return !children[0]; }
    };

    std::size_t capacity_;
    std::size_t max_depth_;
    std::unique_ptr<Node> root_;
    std::size_t size_ = 0;

    static std::array<Rect, 4> quadrants(const Rect& cell, Point split);
    static int child_containing(const Node& node, const Rect& box);
    void grow_to(const Rect& box, QueryStats& stats);
    void split(Node& node, std::size_t depth, QueryStats& stats);
};

} // namespace trajbench
